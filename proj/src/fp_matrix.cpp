#include "grouplab/fp_matrix.hpp"

#include <sstream>

namespace grouplab::algebra {

bool is_prime(std::uint32_t p) {
    if (p < 2) return false;
    if (p % 2 == 0) return p == 2;
    for (std::uint32_t d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

namespace {

std::uint32_t checked_modulus(std::uint32_t p) {
    if (p >= kMaxModulus || !is_prime(p))
        throw std::invalid_argument("modulus must be a prime below 2^16, got " +
                                    std::to_string(p));
    return p;
}

std::uint32_t reduce(std::int64_t v, std::uint32_t p) {
    std::int64_t r = v % static_cast<std::int64_t>(p);
    if (r < 0) r += p;
    return static_cast<std::uint32_t>(r);
}

std::uint32_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint32_t p) {
    std::uint64_t acc = 1;
    base %= p;
    while (exp > 0) {
        if (exp & 1) acc = acc * base % p;
        base = base * base % p;
        exp >>= 1;
    }
    return static_cast<std::uint32_t>(acc);
}

}  // namespace

FpScalar::FpScalar(std::int64_t value, std::uint32_t p)
    : value_(reduce(value, checked_modulus(p))), p_(p) {}

FpScalar FpScalar::operator+(const FpScalar& o) const {
    if (p_ != o.p_) throw std::invalid_argument("modulus mismatch");
    return FpScalar(static_cast<std::int64_t>(value_) + o.value_, p_);
}

FpScalar FpScalar::operator-(const FpScalar& o) const {
    if (p_ != o.p_) throw std::invalid_argument("modulus mismatch");
    return FpScalar(static_cast<std::int64_t>(value_) - o.value_, p_);
}

FpScalar FpScalar::operator*(const FpScalar& o) const {
    if (p_ != o.p_) throw std::invalid_argument("modulus mismatch");
    return FpScalar(static_cast<std::int64_t>(value_) * o.value_, p_);
}

FpScalar FpScalar::operator-() const { return FpScalar(-static_cast<std::int64_t>(value_), p_); }

FpScalar FpScalar::inverse() const {
    if (value_ == 0) throw std::domain_error("zero has no inverse in F_p");
    return FpScalar(pow_mod(value_, p_ - 2, p_), p_);
}

MatrixOverFp::MatrixOverFp(std::uint32_t rows, std::uint32_t cols, std::uint32_t p)
    : rows_(rows), cols_(cols), p_(checked_modulus(p)), entries_(rows * cols, 0) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("matrix dimensions must be positive");
}

MatrixOverFp MatrixOverFp::identity(std::uint32_t n, std::uint32_t p) {
    MatrixOverFp m(n, n, p);
    for (std::uint32_t i = 0; i < n; ++i) m.entries_[i * n + i] = 1 % p;
    return m;
}

MatrixOverFp MatrixOverFp::elementary(std::uint32_t n, std::uint32_t i, std::uint32_t j,
                                      const FpScalar& r) {
    if (i == j || i < 1 || j < 1 || i > n || j > n)
        throw std::invalid_argument("elementary matrix needs 1 <= i != j <= n");
    MatrixOverFp m = identity(n, r.modulus());
    m.entries_[(i - 1) * n + (j - 1)] = r.value();
    return m;
}

MatrixOverFp MatrixOverFp::elementary(std::uint32_t n, std::uint32_t i, std::uint32_t j,
                                      std::int64_t r, std::uint32_t p) {
    return elementary(n, i, j, FpScalar(r, p));
}

MatrixOverFp MatrixOverFp::permutation(const std::vector<std::uint32_t>& perm, std::uint32_t p) {
    const auto n = static_cast<std::uint32_t>(perm.size());
    MatrixOverFp m(n, n, p);
    std::vector<bool> hit(n, false);
    for (std::uint32_t k = 0; k < n; ++k) {
        if (perm[k] >= n || hit[perm[k]])
            throw std::invalid_argument("not a permutation of 0..n-1");
        hit[perm[k]] = true;
        m.entries_[perm[k] * n + k] = 1 % p;
    }
    return m;
}

MatrixOverFp MatrixOverFp::cyclic_shift(std::uint32_t m, std::uint32_t p) {
    std::vector<std::uint32_t> perm(m);
    for (std::uint32_t k = 0; k < m; ++k) perm[k] = (k + 1) % m;
    return permutation(perm, p);
}

void MatrixOverFp::set(std::uint32_t r, std::uint32_t c, std::int64_t v) {
    entries_[r * cols_ + c] = reduce(v, p_);
}

bool MatrixOverFp::is_identity() const {
    if (rows_ != cols_) return false;
    for (std::uint32_t i = 0; i < rows_; ++i)
        for (std::uint32_t j = 0; j < cols_; ++j)
            if (entries_[i * cols_ + j] != (i == j ? 1u % p_ : 0u)) return false;
    return true;
}

MatrixOverFp MatrixOverFp::operator*(const MatrixOverFp& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product dimension mismatch");
    if (p_ != o.p_) throw std::invalid_argument("matrix product modulus mismatch");
    MatrixOverFp out(rows_, o.cols_, p_);
    for (std::uint32_t i = 0; i < rows_; ++i) {
        for (std::uint32_t j = 0; j < o.cols_; ++j) {
            std::uint64_t acc = 0;
            for (std::uint32_t k = 0; k < cols_; ++k)
                acc += static_cast<std::uint64_t>(entries_[i * cols_ + k]) * o.entries_[k * o.cols_ + j];
            out.entries_[i * o.cols_ + j] = static_cast<std::uint32_t>(acc % p_);
        }
    }
    return out;
}

MatrixOverFp MatrixOverFp::operator+(const MatrixOverFp& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || p_ != o.p_)
        throw std::invalid_argument("matrix sum shape or modulus mismatch");
    MatrixOverFp out(rows_, cols_, p_);
    for (std::size_t k = 0; k < entries_.size(); ++k)
        out.entries_[k] = (entries_[k] + o.entries_[k]) % p_;
    return out;
}

MatrixOverFp MatrixOverFp::inverse() const {
    if (rows_ != cols_) throw std::invalid_argument("only square matrices invert");
    const std::uint32_t n = rows_;
    std::vector<std::uint64_t> a(entries_.begin(), entries_.end());
    MatrixOverFp inv = identity(n, p_);
    auto& b = inv.entries_;
    for (std::uint32_t col = 0; col < n; ++col) {
        std::uint32_t pivot = col;
        while (pivot < n && a[pivot * n + col] % p_ == 0) ++pivot;
        if (pivot == n) throw std::domain_error("matrix is singular over F_p");
        if (pivot != col) {
            for (std::uint32_t j = 0; j < n; ++j) {
                std::swap(a[pivot * n + j], a[col * n + j]);
                std::swap(b[pivot * n + j], b[col * n + j]);
            }
        }
        const std::uint64_t pinv = pow_mod(a[col * n + col] % p_, p_ - 2, p_);
        for (std::uint32_t j = 0; j < n; ++j) {
            a[col * n + j] = a[col * n + j] % p_ * pinv % p_;
            b[col * n + j] = static_cast<std::uint64_t>(b[col * n + j]) * pinv % p_;
        }
        for (std::uint32_t row = 0; row < n; ++row) {
            if (row == col) continue;
            const std::uint64_t f = a[row * n + col] % p_;
            if (f == 0) continue;
            for (std::uint32_t j = 0; j < n; ++j) {
                a[row * n + j] = (a[row * n + j] + (p_ - f) * a[col * n + j]) % p_;
                b[row * n + j] = static_cast<std::uint32_t>(
                    (b[row * n + j] + (p_ - f) * b[col * n + j]) % p_);
            }
        }
    }
    return inv;
}

FpScalar MatrixOverFp::determinant() const {
    if (rows_ != cols_) throw std::invalid_argument("determinant needs a square matrix");
    const std::uint32_t n = rows_;
    std::vector<std::uint64_t> a(entries_.begin(), entries_.end());
    std::uint64_t det = 1;
    for (std::uint32_t col = 0; col < n; ++col) {
        std::uint32_t pivot = col;
        while (pivot < n && a[pivot * n + col] % p_ == 0) ++pivot;
        if (pivot == n) return FpScalar(0, p_);
        if (pivot != col) {
            for (std::uint32_t j = col; j < n; ++j) std::swap(a[pivot * n + j], a[col * n + j]);
            det = det * (p_ - 1) % p_;
        }
        const std::uint64_t pv = a[col * n + col] % p_;
        det = det * pv % p_;
        const std::uint64_t pinv = pow_mod(pv, p_ - 2, p_);
        for (std::uint32_t row = col + 1; row < n; ++row) {
            const std::uint64_t f = a[row * n + col] % p_ * pinv % p_;
            if (f == 0) continue;
            for (std::uint32_t j = col; j < n; ++j)
                a[row * n + j] = (a[row * n + j] + (p_ - f) * a[col * n + j]) % p_;
        }
    }
    return FpScalar(static_cast<std::int64_t>(det), p_);
}

void MatrixOverFp::set_block(std::uint32_t bi, std::uint32_t bj, const MatrixOverFp& block) {
    if (block.rows_ != block.cols_) throw std::invalid_argument("block must be square");
    const std::uint32_t m = block.rows_;
    if (bi < 1 || bj < 1 || bi * m > rows_ || bj * m > cols_ || block.p_ != p_)
        throw std::invalid_argument("block position out of range or modulus mismatch");
    for (std::uint32_t r = 0; r < m; ++r)
        for (std::uint32_t c = 0; c < m; ++c)
            entries_[((bi - 1) * m + r) * cols_ + (bj - 1) * m + c] = block.entries_[r * m + c];
}

MatrixOverFp MatrixOverFp::block_at(std::uint32_t bi, std::uint32_t bj, std::uint32_t m) const {
    MatrixOverFp out(m, m, p_);
    for (std::uint32_t r = 0; r < m; ++r)
        for (std::uint32_t c = 0; c < m; ++c)
            out.entries_[r * m + c] = entries_[((bi - 1) * m + r) * cols_ + (bj - 1) * m + c];
    return out;
}

nlohmann::json MatrixOverFp::to_json() const {
    return {{"p", p_}, {"rows", rows_}, {"cols", cols_}, {"entries", entries_}};
}

MatrixOverFp MatrixOverFp::from_json(const nlohmann::json& j) {
    MatrixOverFp m(j.at("rows").get<std::uint32_t>(), j.at("cols").get<std::uint32_t>(),
                   j.at("p").get<std::uint32_t>());
    const auto& e = j.at("entries");
    if (e.size() != m.entries_.size())
        throw std::invalid_argument("entry count does not match rows*cols");
    for (std::size_t k = 0; k < m.entries_.size(); ++k)
        m.entries_[k] = reduce(e[k].get<std::int64_t>(), m.p_);
    return m;
}

std::string MatrixOverFp::to_string() const {
    std::ostringstream os;
    for (std::uint32_t i = 0; i < rows_; ++i) {
        os << (i == 0 ? "[" : " ") << "[";
        for (std::uint32_t j = 0; j < cols_; ++j)
            os << at(i, j) << (j + 1 < cols_ ? " " : "");
        os << "]" << (i + 1 < rows_ ? "\n" : "]");
    }
    os << " mod " << p_;
    return os.str();
}

MatrixOverFp commutator(const MatrixOverFp& a, const MatrixOverFp& b) {
    return a * b * a.inverse() * b.inverse();
}

MatrixOverFp symbol_matrix(RingSymbol sym, std::uint32_t m, std::uint32_t p) {
    switch (sym) {
        case RingSymbol::One: return MatrixOverFp::identity(m, p);
        case RingSymbol::S:
            return m == 1 ? MatrixOverFp::identity(1, p)
                          : MatrixOverFp::elementary(m, 1, 2, 1, p);
        case RingSymbol::T: return MatrixOverFp::cyclic_shift(m, p);
    }
    throw std::invalid_argument("unknown ring symbol");
}

MatrixOverFp block_elementary(std::uint32_t outer, std::uint32_t i, std::uint32_t j,
                              const MatrixOverFp& B) {
    if (i == j || i < 1 || j < 1 || i > outer || j > outer)
        throw std::invalid_argument("block elementary needs 1 <= i != j <= outer");
    const std::uint32_t m = B.rows();
    MatrixOverFp out = MatrixOverFp::identity(outer * m, B.modulus());
    out.set_block(i, j, B);
    return out;
}

MatrixOverFp block_embed(std::uint32_t outer, std::uint32_t m, std::uint32_t p,
                         std::uint32_t i, std::uint32_t j, RingSymbol sym, bool negate) {
    if (m < 1) throw std::invalid_argument("block size must be positive");
    MatrixOverFp B = symbol_matrix(sym, m, p);
    if (negate) {
        MatrixOverFp neg(m, m, p);
        for (std::uint32_t r = 0; r < m; ++r)
            for (std::uint32_t c = 0; c < m; ++c)
                neg.set(r, c, -static_cast<std::int64_t>(B.at(r, c)));
        B = neg;
    }
    return block_elementary(outer, i, j, B);
}

}  // namespace grouplab::algebra
