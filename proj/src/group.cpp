#include "grouplab/group.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_set>

namespace grouplab::groups {

std::uint64_t sl_order(std::uint32_t n, std::uint64_t q) {
    // q^{n(n-1)/2} * prod_{k=2..n} (q^k - 1)
    unsigned __int128 acc = 1;
    const auto guard = [](unsigned __int128 v) {
        if (v > (unsigned __int128)1 << 63)
            throw std::overflow_error("|SL(n,q)| exceeds 2^63");
    };
    for (std::uint32_t e = 0; e < n * (n - 1) / 2; ++e) {
        acc *= q;
        guard(acc);
    }
    unsigned __int128 qk = q;
    for (std::uint32_t k = 2; k <= n; ++k) {
        qk *= q;
        acc *= (qk - 1);
        guard(acc);
    }
    return static_cast<std::uint64_t>(acc);
}

ElementCodec::ElementCodec(std::uint32_t n, std::uint32_t p) : n_(n), p_(p) {
    const std::uint32_t nn = n * n;
    key_bits_ = nn * std::log2(static_cast<double>(p));
    unsigned __int128 acc = 1;
    fits64_ = true;
    pow_.reserve(nn);
    for (std::uint32_t k = 0; k < nn; ++k) {
        if (acc > ~std::uint64_t{0}) {
            fits64_ = false;
            break;
        }
        pow_.push_back(static_cast<std::uint64_t>(acc));
        acc *= p;
    }
    if (acc > (unsigned __int128)(~std::uint64_t{0}) + 1) fits64_ = false;
    if (!fits64_) pow_.clear();
}

namespace {

template <typename EntryT>
std::uint64_t encode64_buf(const EntryT* e, std::uint32_t nn, const std::uint64_t* pow) {
    std::uint64_t key = 0;
    for (std::uint32_t k = 0; k < nn; ++k) key += static_cast<std::uint64_t>(e[k]) * pow[k];
    return key;
}

}  // namespace

std::uint64_t ElementCodec::encode64(const std::uint32_t* entries) const {
    return encode64_buf(entries, n_ * n_, pow_.data());
}

std::uint64_t ElementCodec::encode64(const MatrixOverFp& m) const {
    return encode64(m.entries().data());
}

MatrixOverFp ElementCodec::decode64(std::uint64_t key) const {
    MatrixOverFp m(n_, n_, p_);
    for (std::uint32_t k = 0; k < n_ * n_; ++k) {
        m.set(k / n_, k % n_, static_cast<std::int64_t>(key % p_));
        key /= p_;
    }
    return m;
}

std::string ElementCodec::encode_wide(const MatrixOverFp& m) const {
    const auto& e = m.entries();
    std::string s;
    if (p_ <= 256) {
        s.resize(e.size());
        for (std::size_t k = 0; k < e.size(); ++k) s[k] = static_cast<char>(e[k]);
    } else {
        s.resize(2 * e.size());
        for (std::size_t k = 0; k < e.size(); ++k) {
            s[2 * k] = static_cast<char>(e[k] & 0xff);
            s[2 * k + 1] = static_cast<char>(e[k] >> 8);
        }
    }
    return s;
}

MatrixOverFp ElementCodec::decode_wide(const std::string& key) const {
    MatrixOverFp m(n_, n_, p_);
    for (std::uint32_t k = 0; k < n_ * n_; ++k) {
        std::uint32_t v;
        if (p_ <= 256) {
            v = static_cast<std::uint8_t>(key[k]);
        } else {
            v = static_cast<std::uint8_t>(key[2 * k]) |
                (static_cast<std::uint32_t>(static_cast<std::uint8_t>(key[2 * k + 1])) << 8);
        }
        m.set(k / n_, k % n_, v);
    }
    return m;
}

ElementSet::ElementSet(ElementCodec codec, std::vector<std::uint64_t> keys64)
    : codec_(codec), keys64_(std::move(keys64)) {
    std::sort(keys64_.begin(), keys64_.end());
}

ElementSet::ElementSet(ElementCodec codec, std::vector<std::string> keys_wide)
    : codec_(codec), keys_wide_(std::move(keys_wide)) {
    std::sort(keys_wide_.begin(), keys_wide_.end());
}

std::uint64_t ElementSet::size() const {
    return codec_.fits64() ? keys64_.size() : keys_wide_.size();
}

bool ElementSet::contains(const MatrixOverFp& g) const { return index_of(g).has_value(); }

std::optional<std::uint64_t> ElementSet::index_of(const MatrixOverFp& g) const {
    if (g.rows() != codec_.dim() || g.cols() != codec_.dim() || g.modulus() != codec_.modulus())
        return std::nullopt;
    if (codec_.fits64()) {
        const std::uint64_t key = codec_.encode64(g);
        const auto it = std::lower_bound(keys64_.begin(), keys64_.end(), key);
        if (it == keys64_.end() || *it != key) return std::nullopt;
        return static_cast<std::uint64_t>(it - keys64_.begin());
    }
    const std::string key = codec_.encode_wide(g);
    const auto it = std::lower_bound(keys_wide_.begin(), keys_wide_.end(), key);
    if (it == keys_wide_.end() || *it != key) return std::nullopt;
    return static_cast<std::uint64_t>(it - keys_wide_.begin());
}

MatrixOverFp ElementSet::element(std::uint64_t idx) const {
    return codec_.fits64() ? codec_.decode64(keys64_[idx]) : codec_.decode_wide(keys_wide_[idx]);
}

namespace {

// Lemire's fast remainder; valid for 32-bit operands, divisor >= 1.
struct FastMod {
    std::uint64_t magic;
    std::uint32_t d;
    explicit FastMod(std::uint32_t d_) : magic(~std::uint64_t{0} / d_ + 1), d(d_) {}
    std::uint32_t mod(std::uint32_t x) const {
        const std::uint64_t low = magic * x;
        return static_cast<std::uint32_t>(((unsigned __int128)low * d) >> 64);
    }
};

struct Term {
    std::uint32_t k;
    std::uint32_t coeff;
};

// Right multiplication by g only rewrites the columns where g differs from
// the identity; each such column is a short linear combination of the
// source columns.
struct SparseMultiplier {
    struct Col {
        std::uint32_t j;
        std::vector<Term> terms;
    };
    std::vector<Col> cols;
    std::uint32_t max_terms = 0;
};

SparseMultiplier sparsify(const MatrixOverFp& g) {
    SparseMultiplier sm;
    const std::uint32_t n = g.rows();
    for (std::uint32_t j = 0; j < n; ++j) {
        std::vector<Term> terms;
        for (std::uint32_t k = 0; k < n; ++k)
            if (g.at(k, j) != 0) terms.push_back({k, g.at(k, j)});
        const bool is_identity_col = terms.size() == 1 && terms[0].k == j && terms[0].coeff == 1;
        if (!is_identity_col) {
            sm.max_terms = std::max<std::uint32_t>(sm.max_terms, terms.size());
            sm.cols.push_back({j, std::move(terms)});
        }
    }
    return sm;
}

// Deduplicated generators plus inverses, identity dropped.
std::vector<MatrixOverFp> multiplier_list(const std::vector<MatrixOverFp>& gens,
                                          const ElementCodec& codec) {
    std::vector<MatrixOverFp> mults;
    std::unordered_set<std::string> seen;
    const auto add = [&](const MatrixOverFp& m) {
        if (m.is_identity()) return;
        const std::string key = codec.encode_wide(m);
        if (seen.insert(key).second) mults.push_back(m);
    };
    for (const auto& g : gens) {
        add(g);
        add(g.inverse());
    }
    return mults;
}

class SeenSet64 {
public:
    SeenSet64(double key_bits, std::uint64_t space, std::uint64_t cap) {
        use_bitmap_ = key_bits <= 31.0;
        if (use_bitmap_) {
            words_.assign((space + 63) / 64, 0);
        } else {
            set_.reserve(std::min<std::uint64_t>(cap + 1, std::uint64_t{1} << 22));
        }
    }
    bool test_and_set(std::uint64_t key) {
        if (use_bitmap_) {
            std::uint64_t& w = words_[key >> 6];
            const std::uint64_t bit = std::uint64_t{1} << (key & 63);
            if (w & bit) return false;
            w |= bit;
            return true;
        }
        return set_.insert(key).second;
    }

private:
    bool use_bitmap_;
    std::vector<std::uint64_t> words_;
    std::unordered_set<std::uint64_t> set_;
};

template <typename EntryT>
ClosureResult closure_fits64(const ElementCodec& codec, const std::vector<MatrixOverFp>& mults,
                             std::uint64_t cap) {
    const std::uint32_t n = codec.dim();
    const std::uint32_t p = codec.modulus();
    const std::uint32_t nn = n * n;

    std::vector<SparseMultiplier> sparse;
    sparse.reserve(mults.size());
    std::uint32_t max_terms = 1;
    for (const auto& m : mults) {
        sparse.push_back(sparsify(m));
        max_terms = std::max(max_terms, sparse.back().max_terms);
    }

    std::vector<std::uint64_t> pow(nn);
    pow[0] = 1;
    for (std::uint32_t k = 1; k < nn; ++k) pow[k] = pow[k - 1] * p;

    double space_exact = std::pow(static_cast<double>(p), static_cast<double>(nn));
    const std::uint64_t space =
        codec.key_bits() <= 31.0 ? static_cast<std::uint64_t>(space_exact + 0.5) : 0;
    SeenSet64 seen(codec.key_bits(), space, cap);

    const bool small_acc =
        static_cast<std::uint64_t>(p - 1) * (p - 1) * max_terms < (std::uint64_t{1} << 32);
    const FastMod fm(p);

    std::vector<EntryT> mats;
    std::vector<std::uint64_t> keys;
    mats.reserve(nn * std::min<std::uint64_t>(cap + 1, 1 << 20));
    keys.reserve(std::min<std::uint64_t>(cap + 1, 1 << 20));

    // identity
    std::vector<EntryT> abuf(nn), colbuf(nn);
    for (std::uint32_t k = 0; k < nn; ++k) abuf[k] = (k % (n + 1) == 0) ? EntryT(1 % p) : EntryT(0);
    seen.test_and_set(encode64_buf(abuf.data(), nn, pow.data()));
    mats.insert(mats.end(), abuf.begin(), abuf.end());
    keys.push_back(encode64_buf(abuf.data(), nn, pow.data()));

    for (std::uint64_t idx = 0; idx < keys.size(); ++idx) {
        std::memcpy(abuf.data(), mats.data() + idx * nn, nn * sizeof(EntryT));
        const std::uint64_t akey = keys[idx];
        for (const auto& sm : sparse) {
            // rewrite only the columns the multiplier touches; the key is
            // updated incrementally from the changed entries
            std::uint64_t key = akey;
            std::size_t ci = 0;
            for (const auto& col : sm.cols) {
                for (std::uint32_t r = 0; r < n; ++r) {
                    std::uint32_t v;
                    if (small_acc) {
                        std::uint32_t acc = 0;
                        for (const auto& t : col.terms)
                            acc += static_cast<std::uint32_t>(abuf[r * n + t.k]) * t.coeff;
                        v = fm.mod(acc);
                    } else {
                        std::uint64_t acc = 0;
                        for (const auto& t : col.terms)
                            acc += static_cast<std::uint64_t>(abuf[r * n + t.k]) * t.coeff;
                        v = static_cast<std::uint32_t>(acc % p);
                    }
                    colbuf[ci * n + r] = static_cast<EntryT>(v);
                    const std::uint64_t pw = pow[r * n + col.j];
                    key += static_cast<std::uint64_t>(v) * pw -
                           static_cast<std::uint64_t>(abuf[r * n + col.j]) * pw;
                }
                ++ci;
            }
            if (seen.test_and_set(key)) {
                if (keys.size() + 1 > cap)
                    return {ClosureStatus::CapExceeded, nullptr, keys.size() + 1};
                const std::size_t off = mats.size();
                mats.insert(mats.end(), abuf.begin(), abuf.end());
                ci = 0;
                for (const auto& col : sm.cols) {
                    for (std::uint32_t r = 0; r < n; ++r)
                        mats[off + r * n + col.j] = colbuf[ci * n + r];
                    ++ci;
                }
                keys.push_back(key);
            }
        }
    }
    return {ClosureStatus::Complete,
            std::make_shared<ElementSet>(codec, std::move(keys)), keys.size()};
}

ClosureResult closure_wide(const ElementCodec& codec, const std::vector<MatrixOverFp>& mults,
                           std::uint64_t cap) {
    const std::uint32_t n = codec.dim();
    std::vector<std::string> order;
    std::unordered_set<std::string> seen;
    order.push_back(codec.encode_wide(MatrixOverFp::identity(n, codec.modulus())));
    seen.insert(order[0]);
    for (std::uint64_t idx = 0; idx < order.size(); ++idx) {
        const MatrixOverFp a = codec.decode_wide(order[idx]);
        for (const auto& m : mults) {
            const std::string key = codec.encode_wide(a * m);
            if (seen.insert(key).second) {
                if (order.size() + 1 > cap)
                    return {ClosureStatus::CapExceeded, nullptr, order.size() + 1};
                order.push_back(key);
            }
        }
    }
    return {ClosureStatus::Complete,
            std::make_shared<ElementSet>(codec, std::move(order)), order.size()};
}

}  // namespace

ClosureResult closure(const std::vector<MatrixOverFp>& gens, std::uint64_t cap) {
    if (cap < 1) throw std::invalid_argument("closure cap must be at least 1");
    if (gens.empty()) throw std::invalid_argument("closure needs at least one generator");
    const std::uint32_t n = gens.front().rows();
    const std::uint32_t p = gens.front().modulus();
    for (const auto& g : gens)
        if (!g.is_square() || g.rows() != n || g.modulus() != p)
            throw std::invalid_argument("generators must be square with shared dimension and modulus");
    const ElementCodec codec(n, p);
    const auto mults = multiplier_list(gens, codec);  // throws on singular generator
    if (codec.fits64()) {
        return p <= 256 ? closure_fits64<std::uint8_t>(codec, mults, cap)
                        : closure_fits64<std::uint16_t>(codec, mults, cap);
    }
    return closure_wide(codec, mults, cap);
}

FiniteMatrixGroup::FiniteMatrixGroup(std::uint32_t n, std::uint32_t p,
                                     std::vector<MatrixOverFp> gens, std::uint64_t cap)
    : n_(n), p_(p), gens_(std::move(gens)), cap_(cap) {
    if (gens_.empty()) gens_.push_back(MatrixOverFp::identity(n, p));
    for (const auto& g : gens_) {
        if (!g.is_square() || g.rows() != n_ || g.modulus() != p_)
            throw std::invalid_argument("group generators must be n x n over F_p");
        if (g.determinant().value() == 0)
            throw std::invalid_argument("group generators must be invertible");
    }
}

ClosureStatus FiniteMatrixGroup::enumerate() const {
    if (!status_) {
        auto res = closure(gens_, cap_);
        status_ = res.status;
        elements_ = res.elements;
    }
    return *status_;
}

std::shared_ptr<const ElementSet> FiniteMatrixGroup::elements() const {
    enumerate();
    return elements_;
}

std::optional<std::uint64_t> FiniteMatrixGroup::order() const {
    if (enumerate() == ClosureStatus::CapExceeded) return std::nullopt;
    return elements_->size();
}

Tri FiniteMatrixGroup::contains(const MatrixOverFp& g) const {
    if (enumerate() == ClosureStatus::CapExceeded) return Tri::Indeterminate;
    return elements_->contains(g) ? Tri::True : Tri::False;
}

SubgroupHandle::SubgroupHandle(GroupPtr ambient, std::vector<MatrixOverFp> gens)
    : ambient_(std::move(ambient)), gens_(std::move(gens)) {
    if (!ambient_) throw std::invalid_argument("subgroup needs an ambient group");
    if (gens_.empty())
        gens_.push_back(MatrixOverFp::identity(ambient_->dim(), ambient_->modulus()));
    for (const auto& g : gens_)
        if (g.rows() != ambient_->dim() || g.cols() != ambient_->dim() ||
            g.modulus() != ambient_->modulus())
            throw std::invalid_argument("subgroup generator has wrong ambient dimensions");
}

ClosureStatus SubgroupHandle::seal(std::uint64_t cap) const {
    const bool retry = status_ && *status_ == ClosureStatus::CapExceeded && cap > sealed_cap_;
    if (!status_ || retry) {
        auto res = closure(gens_, cap);
        status_ = res.status;
        closure_ = res.elements;
        sealed_cap_ = cap;
    }
    return *status_;
}

std::shared_ptr<const ElementSet> SubgroupHandle::closure_set() const { return closure_; }

std::optional<std::uint64_t> SubgroupHandle::order(std::uint64_t cap) const {
    if (seal(cap) == ClosureStatus::CapExceeded) return std::nullopt;
    return closure_->size();
}

Tri SubgroupHandle::contains(const MatrixOverFp& g, std::uint64_t cap) const {
    if (seal(cap) == ClosureStatus::CapExceeded) return Tri::Indeterminate;
    return closure_->contains(g) ? Tri::True : Tri::False;
}

Tri SubgroupHandle::contains_conjugated(const MatrixOverFp& h, const MatrixOverFp& g,
                                        std::uint64_t cap) const {
    return contains(h.inverse() * g * h, cap);
}

SubgroupHandle SubgroupHandle::extended(const std::vector<MatrixOverFp>& extra) const {
    std::vector<MatrixOverFp> gens = gens_;
    gens.insert(gens.end(), extra.begin(), extra.end());
    return SubgroupHandle(ambient_, std::move(gens));
}

Tri subgroup_leq(const SubgroupHandle& A, const SubgroupHandle& B, std::uint64_t cap) {
    if (A.ambient() != B.ambient())
        throw std::invalid_argument("subgroup comparison needs a shared ambient group");
    for (const auto& g : A.generators()) {
        const Tri r = B.contains(g, cap);
        if (r != Tri::True) return r;
    }
    return Tri::True;
}

SubgroupHandle conjugate(const MatrixOverFp& h, const SubgroupHandle& H) {
    const MatrixOverFp hinv = h.inverse();
    std::vector<MatrixOverFp> gens;
    gens.reserve(H.generators().size());
    for (const auto& g : H.generators()) gens.push_back(h * g * hinv);
    return SubgroupHandle(H.ambient(), std::move(gens));
}

GroupAutomorphism::GroupAutomorphism(MatrixOverFp conjugator, std::string label)
    : c_(std::move(conjugator)), c_inv_(c_.inverse()), label_(std::move(label)) {}

MatrixOverFp GroupAutomorphism::apply(const MatrixOverFp& g) const { return c_ * g * c_inv_; }

GroupAutomorphism GroupAutomorphism::compose(const GroupAutomorphism& o) const {
    return GroupAutomorphism(c_ * o.c_, label_.empty() ? o.label_ : label_ + "*" + o.label_);
}

GroupAutomorphism GroupAutomorphism::inverse() const {
    return GroupAutomorphism(c_inv_, label_.empty() ? "" : label_ + "^-1");
}

GroupAutomorphism GroupAutomorphism::identity(std::uint32_t n, std::uint32_t p) {
    return GroupAutomorphism(MatrixOverFp::identity(n, p), "id");
}

bool GroupAutomorphism::is_identity_on(const FiniteMatrixGroup& g) const {
    for (const auto& gen : g.generators())
        if (!(apply(gen) == gen)) return false;
    return true;
}

void validate_automorphism(const GroupAutomorphism& phi, const FiniteMatrixGroup& g) {
    for (std::size_t i = 0; i < g.generators().size(); ++i) {
        const Tri r = g.contains(phi.apply(g.generators()[i]));
        if (r == Tri::False)
            throw std::invalid_argument("automorphism image of generator " + std::to_string(i) +
                                        " is not a member of the ambient group");
        if (r == Tri::Indeterminate)
            throw std::runtime_error("ambient group closure exceeded cap; automorphism undecided");
    }
}

SubgroupHandle apply_automorphism(const GroupAutomorphism& phi, const SubgroupHandle& H) {
    validate_automorphism(phi, *H.ambient());
    std::vector<MatrixOverFp> gens;
    gens.reserve(H.generators().size());
    for (const auto& g : H.generators()) gens.push_back(phi.apply(g));
    return SubgroupHandle(H.ambient(), std::move(gens));
}

std::optional<std::vector<GroupAutomorphism>> automorphism_closure(
    const std::vector<GroupAutomorphism>& gens, const FiniteMatrixGroup& g, std::uint64_t cap) {
    const ElementCodec codec(g.dim(), g.modulus());
    const auto footprint = [&](const GroupAutomorphism& phi) {
        std::string f;
        for (const auto& gen : g.generators()) f += codec.encode_wide(phi.apply(gen));
        return f;
    };
    std::vector<GroupAutomorphism> out;
    std::unordered_set<std::string> seen;
    const auto push = [&](const GroupAutomorphism& phi) {
        if (seen.insert(footprint(phi)).second) {
            out.push_back(phi);
            return true;
        }
        return false;
    };
    push(GroupAutomorphism::identity(g.dim(), g.modulus()));
    for (const auto& phi : gens) push(phi);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out.size() > cap) return std::nullopt;
        // composing with the generating maps and inverses until stable
        for (const auto& phi : gens) {
            push(out[i].compose(phi));
            push(out[i].compose(phi.inverse()));
        }
    }
    if (out.size() > cap) return std::nullopt;
    return out;
}

TorsionCertificate abelianization_is_torsion(const SubgroupHandle& Q, std::uint64_t cap) {
    const auto ord = Q.order(cap);
    if (!ord)
        return {Tri::Indeterminate, 0,
                "closure cap exceeded; torsion property undecided at cap " + std::to_string(cap)};
    return {Tri::True, *ord,
            "finite, order " + std::to_string(*ord) +
                "; every element of a finite abelian quotient has finite order "
                "(finite-quotient certificate)"};
}

std::vector<CommutatorWitness> perfectness_certificate(
    std::uint32_t n, const std::vector<std::uint32_t>& index_set, std::uint32_t p) {
    if (index_set.size() < 3)
        throw std::invalid_argument(
            "no commutator certificate: index set needs at least 3 indices");
    for (const auto i : index_set)
        if (i < 1 || i > n) throw std::invalid_argument("index set entry out of [1, n]");
    std::vector<CommutatorWitness> out;
    for (const auto i : index_set) {
        for (const auto j : index_set) {
            if (i == j) continue;
            std::uint32_t k = 0;
            for (const auto cand : index_set)
                if (cand != i && cand != j) {
                    k = cand;
                    break;
                }
            for (std::uint32_t r = 1; r < p; ++r) {
                const auto target = MatrixOverFp::elementary(n, i, j, r, p);
                const auto lhs = commutator(MatrixOverFp::elementary(n, i, k, r, p),
                                            MatrixOverFp::elementary(n, k, j, 1, p));
                out.push_back({i, j, k, r, lhs == target});
            }
        }
    }
    return out;
}

nlohmann::json subgroup_to_json(const SubgroupHandle& h) {
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : h.generators()) gens.push_back(g.to_json());
    return {{"generators", gens}};
}

nlohmann::json closure_to_json(const ElementSet& set) {
    nlohmann::json elems = nlohmann::json::array();
    for (std::uint64_t k = 0; k < set.size(); ++k)
        elems.push_back(set.element(k).entries());
    return {{"n", set.codec().dim()},
            {"p", set.codec().modulus()},
            {"order", set.size()},
            {"elements", elems}};
}

}  // namespace grouplab::groups
