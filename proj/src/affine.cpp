#include "grouplab/affine.hpp"

#include "grouplab/game.hpp"
#include "grouplab/predicates.hpp"
#include "grouplab/rng.hpp"

#include <deque>

namespace grouplab::realizer {

namespace {

constexpr double kRankTol = 1e-12;

Mat kernel_basis(const Mat& A) {
    if (A.rows() == 0) return Mat::Identity(A.cols(), A.cols());
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = std::max(1.0, sv.size() ? sv(0) : 0.0) * kRankTol;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return svd.matrixV().rightCols(A.cols() - rank);
}

}  // namespace

AffineAction::AffineAction(GroupPtr group, std::uint32_t dim, std::vector<GeneratorAction> gens,
                           double orth_tol, double consistency_tol)
    : group_(std::move(group)), dim_(dim), gens_(std::move(gens)) {
    if (!group_) throw std::invalid_argument("affine action needs a group");
    if (gens_.size() != group_->generators().size())
        throw std::invalid_argument("need one affine generator per group generator");
    for (const auto& g : gens_) {
        if (g.linear.rows() != dim_ || g.linear.cols() != dim_ ||
            g.cocycle.size() != static_cast<Eigen::Index>(dim_))
            throw std::invalid_argument("affine generator has wrong dimensions");
        const double orth_defect =
            (g.linear.transpose() * g.linear - Mat::Identity(dim_, dim_)).cwiseAbs().maxCoeff();
        if (orth_defect > orth_tol)
            throw std::invalid_argument("linear part is not orthogonal (defect " +
                                        std::to_string(orth_defect) + ")");
    }
    if (group_->enumerate() == groups::ClosureStatus::CapExceeded)
        throw std::runtime_error("group closure exceeded cap; affine action table unavailable");
    const auto elements = group_->elements();
    const std::uint64_t order = elements->size();
    if (order > 250000)
        throw std::invalid_argument("group too large for an affine action table: order " +
                                    std::to_string(order));

    table_linear_.assign(order, Mat());
    table_cocycle_.assign(order, Vec());
    std::vector<char> known(order, 0);

    const MatrixOverFp id = algebra::MatrixOverFp::identity(group_->dim(), group_->modulus());
    const auto id_idx = elements->index_of(id);
    if (!id_idx) throw std::logic_error("identity missing from the element set");
    table_linear_[*id_idx] = Mat::Identity(dim_, dim_);
    table_cocycle_[*id_idx] = Vec::Zero(dim_);
    known[*id_idx] = 1;

    std::deque<std::uint64_t> queue{*id_idx};
    std::vector<MatrixOverFp> mats;  // decoded group elements by index, built on demand
    while (!queue.empty()) {
        const std::uint64_t gi = queue.front();
        queue.pop_front();
        const MatrixOverFp g = elements->element(gi);
        for (std::size_t k = 0; k < gens_.size(); ++k) {
            const MatrixOverFp h = g * group_->generators()[k];
            const auto hi = elements->index_of(h);
            if (!hi) throw std::logic_error("product escaped the element set");
            // cocycle identity along the Cayley edge
            Mat lin = table_linear_[gi] * gens_[k].linear;
            Vec coc = table_cocycle_[gi] + table_linear_[gi] * gens_[k].cocycle;
            if (!known[*hi]) {
                table_linear_[*hi] = std::move(lin);
                table_cocycle_[*hi] = std::move(coc);
                known[*hi] = 1;
                queue.push_back(*hi);
            } else {
                const double resid =
                    std::max((table_linear_[*hi] - lin).cwiseAbs().maxCoeff(),
                             (table_cocycle_[*hi] - coc).cwiseAbs().maxCoeff());
                consistency_residual_ = std::max(consistency_residual_, resid);
            }
        }
    }
    if (consistency_residual_ > consistency_tol)
        throw std::invalid_argument(
            "cocycle data inconsistent with the group relations (residual " +
            std::to_string(consistency_residual_) + ")");
}

std::pair<Mat, Vec> AffineAction::at(const MatrixOverFp& g) const {
    const auto gi = group_->elements()->index_of(g);
    if (!gi) throw std::invalid_argument("element is not a member of the acting group");
    return {table_linear_[*gi], table_cocycle_[*gi]};
}

Vec AffineAction::apply(const MatrixOverFp& g, const Vec& x) const {
    const auto [lin, coc] = at(g);
    return lin * x + coc;
}

std::pair<Mat, Vec> AffineAction::evaluate_word(const std::vector<int>& word) const {
    Mat lin = Mat::Identity(dim_, dim_);
    Vec coc = Vec::Zero(dim_);
    for (const int w : word) {
        if (w == 0 || static_cast<std::size_t>(std::abs(w)) > gens_.size())
            throw std::invalid_argument("word letter out of range");
        const auto& g = gens_[static_cast<std::size_t>(std::abs(w)) - 1];
        Mat glin = g.linear;
        Vec gcoc = g.cocycle;
        if (w < 0) {
            glin = g.linear.transpose();           // orthogonal inverse
            gcoc = -(glin * g.cocycle);            // b(g^-1) = -pi(g)^-1 b(g)
        }
        coc = coc + lin * gcoc;
        lin = lin * glin;
    }
    return {lin, coc};
}

Vec AffineFixedSet::project(const Vec& x) const {
    if (empty) throw std::logic_error("projection onto the empty set");
    if (directions.cols() == 0) return base;
    return base + directions * (directions.transpose() * (x - base));
}

bool AffineFixedSet::contains(const Vec& x, double tol) const {
    if (empty) return false;
    return (x - project(x)).cwiseAbs().maxCoeff() <= tol;
}

AffineFixedSet make_affine_set(Vec base, Mat spanning) {
    AffineFixedSet set;
    set.base = std::move(base);
    if (spanning.cols() == 0) {
        set.directions = Mat(set.base.size(), 0);
        return set;
    }
    Eigen::JacobiSVD<Mat> svd(spanning, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cutoff = std::max(1.0, sv(0)) * kRankTol;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    set.directions = svd.matrixU().leftCols(rank);
    return set;
}

AffineFixedSet fixed_set(const AffineAction& action, const SubgroupHandle& H) {
    const auto& gens = H.generators();
    const std::uint32_t d = action.dim();
    Mat A(gens.size() * d, d);
    Vec rhs(gens.size() * d);
    for (std::size_t k = 0; k < gens.size(); ++k) {
        const auto [lin, coc] = action.at(gens[k]);
        A.middleRows(k * d, d) = lin - Mat::Identity(d, d);
        rhs.segment(k * d, d) = -coc;
    }
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeFullV);
    svd.setThreshold(kRankTol);
    const Vec x = svd.solve(rhs);
    if ((A * x - rhs).cwiseAbs().maxCoeff() > 1e-8) {
        // a finite group always fixes the orbit barycenter
        throw std::logic_error(
            "fixed set came out empty for a finite group action; data inconsistent");
    }
    AffineFixedSet set;
    set.base = x;
    set.directions = kernel_basis(A);
    return set;
}

RealizerPair realize_distance(const AffineFixedSet& F1, const AffineFixedSet& F2) {
    if (F1.empty || F2.empty)
        throw std::invalid_argument("distance realizer needs nonempty sets");
    const Eigen::Index k1 = F1.directions.cols(), k2 = F2.directions.cols();
    Mat M(F1.base.size(), k1 + k2);
    M.leftCols(k1) = F1.directions;
    M.rightCols(k2) = -F2.directions;
    const Vec rhs = F2.base - F1.base;
    RealizerPair rp;
    if (k1 + k2 == 0) {
        rp.xi = F1.base;
        rp.eta = F2.base;
        rp.unique = true;
    } else {
        Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(kRankTol);
        const Vec st = svd.solve(rhs);  // minimum-norm least squares
        rp.xi = F1.base + F1.directions * st.head(k1);
        rp.eta = F2.base + F2.directions * st.tail(k2);
        const auto& sv = svd.singularValues();
        const double cutoff = std::max(1.0, sv(0)) * kRankTol;
        Eigen::Index rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > cutoff) ++rank;
        rp.unique = rank == k1 + k2;
    }
    rp.distance = (rp.xi - rp.eta).norm();
    return rp;
}

PseudoUniquenessReport check_pseudo_uniqueness(const AffineAction& action,
                                               const SubgroupHandle& M, const SubgroupHandle& L,
                                               const PointPair& pair1, const PointPair& pair2,
                                               double tol) {
    PseudoUniquenessReport rep;
    const AffineFixedSet FM = fixed_set(action, M);
    const AffineFixedSet FL = fixed_set(action, L);
    const double D = realize_distance(FM, FL).distance;

    for (const auto* pp : {&pair1, &pair2}) {
        if (!FM.contains(pp->xi, tol)) {
            rep.reason = "xi does not lie in the fixed set of M";
            return rep;
        }
        if (!FL.contains(pp->eta, tol)) {
            rep.reason = "eta does not lie in the fixed set of L";
            return rep;
        }
        rep.realizer_residual =
            std::max(rep.realizer_residual, std::abs((pp->xi - pp->eta).norm() - D));
    }
    if (rep.realizer_residual > tol) {
        rep.reason = "pairs do not realize the infimal distance";
        return rep;
    }
    rep.precondition_ok = true;

    const Vec v1 = pair1.xi - pair2.xi;
    const Vec v2 = pair1.eta - pair2.eta;
    rep.diff_residual = (v1 - v2).cwiseAbs().maxCoeff();

    // fixed subspace of the linear part over the whole group
    const auto& gens = action.group()->generators();
    const std::uint32_t d = action.dim();
    Mat A(gens.size() * d, d);
    for (std::size_t k = 0; k < gens.size(); ++k)
        A.middleRows(k * d, d) = action.at(gens[k]).first - Mat::Identity(d, d);
    const Mat U = kernel_basis(A);
    const Vec proj = U.cols() ? Vec(U * (U.transpose() * v1)) : Vec(Vec::Zero(d));
    rep.fixed_space_residual = (v1 - proj).cwiseAbs().maxCoeff();

    rep.pass = rep.diff_residual <= tol && rep.fixed_space_residual <= tol;
    return rep;
}

double theta_energy(const std::vector<Vec>& points) {
    double e = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            e += (points[i] - points[j]).squaredNorm();
    return e;
}

RealizerTuple minimize_theta_energy(const std::vector<AffineFixedSet>& sets) {
    if (sets.empty()) throw std::invalid_argument("energy needs at least one set");
    for (const auto& s : sets)
        if (s.empty) throw std::invalid_argument("energy needs nonempty sets");
    const std::size_t l = sets.size();
    RealizerTuple tuple;
    tuple.points.reserve(l);
    for (const auto& s : sets) tuple.points.push_back(s.base);
    if (l == 1) {
        tuple.energy = 0.0;
        return tuple;
    }

    constexpr double kGradTol = 1e-10;
    constexpr std::uint32_t kMaxIters = 100000;
    tuple.converged = false;
    for (std::uint32_t it = 0; it < kMaxIters; ++it) {
        for (std::size_t i = 0; i < l; ++i) {
            Vec mean = Vec::Zero(sets[i].base.size());
            for (std::size_t j = 0; j < l; ++j)
                if (j != i) mean += tuple.points[j];
            mean /= static_cast<double>(l - 1);
            tuple.points[i] = sets[i].project(mean);
        }
        // stationarity: gradient projected onto each feasible direction space
        double worst = 0.0;
        for (std::size_t i = 0; i < l; ++i) {
            if (sets[i].directions.cols() == 0) continue;
            Vec g = Vec::Zero(sets[i].base.size());
            for (std::size_t j = 0; j < l; ++j)
                if (j != i) g += 2.0 * (tuple.points[i] - tuple.points[j]);
            worst = std::max(worst,
                             (sets[i].directions.transpose() * g).cwiseAbs().maxCoeff());
        }
        if (worst <= kGradTol) {
            tuple.converged = true;
            break;
        }
    }
    tuple.energy = theta_energy(tuple.points);
    return tuple;
}

namespace {

geometry::SpacePoint euclid_point(const Vec& v) {
    return geometry::lq_point(2.0, std::vector<double>(v.data(), v.data() + v.size()));
}

bool euclid_parallel(const Vec& a1, const Vec& a2, const Vec& b1, const Vec& b2, double tol) {
    return geometry::is_parallel(
        geometry::make_segment(euclid_point(a1), euclid_point(a2)),
        geometry::make_segment(euclid_point(b1), euclid_point(b2)), tol);
}

}  // namespace

TupleParallelismReport check_realizer_parallelism(const RealizerTuple& t1,
                                                  const RealizerTuple& t2, double tol) {
    TupleParallelismReport rep;
    if (t1.points.size() != t2.points.size()) {
        rep.reason = "tuples have different lengths";
        return rep;
    }
    if (std::abs(t1.energy - t2.energy) > tol * std::max(1.0, std::abs(t1.energy))) {
        rep.reason = "tuples do not minimize the same energy (values differ)";
        return rep;
    }
    rep.precondition_ok = true;
    rep.pass = true;
    for (std::size_t i = 0; i < t1.points.size(); ++i)
        for (std::size_t j = i + 1; j < t1.points.size(); ++j)
            if (!euclid_parallel(t1.points[i], t2.points[i], t1.points[j], t2.points[j], tol)) {
                rep.pass = false;
                rep.failures.emplace_back(i, j);
            }
    return rep;
}

SelfImprovementReport self_improvement_check(const AffineAction& action,
                                             const SubgroupHandle& M, const SubgroupHandle& L,
                                             const SubgroupHandle& H1, const SubgroupHandle& H2,
                                             const std::vector<MatrixOverFp>& P,
                                             const PointPair& pair, std::uint64_t seed,
                                             std::uint32_t samples, double tol) {
    SelfImprovementReport rep;
    const std::uint64_t cap = H1.ambient()->cap();

    // containment hypotheses: h H1 h^-1 >= M and h H2 h^-1 >= L
    for (std::size_t hk = 0; hk < P.size(); ++hk) {
        const auto& h = P[hk];
        for (const auto& m : M.generators()) {
            const groups::Tri r = H1.contains_conjugated(h, m, cap);
            if (r != groups::Tri::True) {
                rep.reason = "unmet precondition: h[" + std::to_string(hk) +
                             "]·H1·h^-1 >= M " +
                             (r == groups::Tri::False ? "fails" : "undecided at cap");
                return rep;
            }
        }
        for (const auto& m : L.generators()) {
            const groups::Tri r = H2.contains_conjugated(h, m, cap);
            if (r != groups::Tri::True) {
                rep.reason = "unmet precondition: h[" + std::to_string(hk) +
                             "]·H2·h^-1 >= L " +
                             (r == groups::Tri::False ? "fails" : "undecided at cap");
                return rep;
            }
        }
    }

    const AffineFixedSet FM = fixed_set(action, M);
    const AffineFixedSet FL = fixed_set(action, L);
    const double D = realize_distance(FM, FL).distance;
    if (!FM.contains(pair.xi, tol) || !FL.contains(pair.eta, tol) ||
        std::abs((pair.xi - pair.eta).norm() - D) > tol) {
        rep.reason = "unmet precondition: the pair does not realize dist(fix M, fix L)";
        return rep;
    }
    rep.precondition_ok = true;

    const auto elements = action.group()->elements();
    SplitMix64 rng(seed);
    const auto random_P_product = [&]() {
        MatrixOverFp g = algebra::MatrixOverFp::identity(action.group()->dim(),
                                                         action.group()->modulus());
        if (P.empty()) return g;
        const std::uint32_t len = 1 + static_cast<std::uint32_t>(rng.next_below(6));
        for (std::uint32_t k = 0; k < len; ++k) {
            const auto& h = P[rng.next_below(P.size())];
            g = rng.next_below(2) ? g * h : g * h.inverse();
        }
        return g;
    };

    // (a) orbit parallelism for sampled (g, c), for both realizer points
    for (std::uint32_t s = 0; s < samples; ++s) {
        const MatrixOverFp g = random_P_product();
        const MatrixOverFp c = elements->element(rng.next_below(elements->size()));
        for (const Vec* x : {&pair.xi, &pair.eta}) {
            const Vec gx = action.apply(g, *x);
            const Vec cx = action.apply(c, *x);
            const Vec cgx = action.apply(c * g, *x);
            const auto b = geometry::parallel_breakdown(
                geometry::make_segment(euclid_point(*x), euclid_point(gx)),
                geometry::make_segment(euclid_point(cx), euclid_point(cgx)), tol);
            const double defect = std::max(std::abs(b.d_start - b.d_end),
                                           std::abs(b.d_start - b.d_mid));
            rep.orbit_parallelism_residual = std::max(rep.orbit_parallelism_residual, defect);
        }
    }

    // (b) every h in P fixes both realizer points
    for (const auto& h : P) {
        rep.fixed_by_P_residual = std::max(
            rep.fixed_by_P_residual,
            (action.apply(h, pair.xi) - pair.xi).cwiseAbs().maxCoeff());
        rep.fixed_by_P_residual = std::max(
            rep.fixed_by_P_residual,
            (action.apply(h, pair.eta) - pair.eta).cwiseAbs().maxCoeff());
    }

    // (c) the orbit map factors through commutation on sampled pairs
    for (std::uint32_t s = 0; s < samples; ++s) {
        const MatrixOverFp g1 = random_P_product();
        const MatrixOverFp g2 = random_P_product();
        const Vec a = action.apply(g1 * g2, pair.xi);
        const Vec b = action.apply(g2 * g1, pair.xi);
        rep.commutation_residual =
            std::max(rep.commutation_residual, (a - b).cwiseAbs().maxCoeff());
    }

    rep.pass = rep.orbit_parallelism_residual <= tol && rep.fixed_by_P_residual <= tol &&
               rep.commutation_residual <= tol;
    return rep;
}

DisplacementReport displacement(const AffineAction& action, const std::vector<MatrixOverFp>& S,
                                const Vec& z, double tol) {
    DisplacementReport rep;
    for (const auto& s : S)
        rep.value = std::max(rep.value, (action.apply(s, z) - z).norm());
    rep.fixed_at_z = rep.value <= tol;
    rep.one_uniform_at_z = rep.value >= 1.0;
    return rep;
}

DisplacementReport displacement_maps(const std::vector<std::pair<Mat, Vec>>& maps, const Vec& z,
                                     double tol) {
    DisplacementReport rep;
    for (const auto& [lin, coc] : maps)
        rep.value = std::max(rep.value, (lin * z + coc - z).norm());
    rep.fixed_at_z = rep.value <= tol;
    rep.one_uniform_at_z = rep.value >= 1.0;
    return rep;
}

// ---- corpus files --------------------------------------------------------

namespace {

Vec vec_from_json(const nlohmann::json& j) {
    Vec v(j.size());
    for (std::size_t k = 0; k < j.size(); ++k) v(k) = j[k].get<double>();
    return v;
}

Mat mat_from_json(const nlohmann::json& j) {  // rows of numbers
    if (j.empty()) return Mat(0, 0);
    Mat m(j.size(), j[0].size());
    for (std::size_t r = 0; r < j.size(); ++r)
        for (std::size_t c = 0; c < j[r].size(); ++c) m(r, c) = j[r][c].get<double>();
    return m;
}

AffineFixedSet set_from_json(const nlohmann::json& j) {
    const Vec base = vec_from_json(j.at("base"));
    Mat dirs(base.size(), 0);
    if (j.contains("dirs")) {
        const auto& jd = j.at("dirs");  // list of direction vectors
        dirs.resize(base.size(), jd.size());
        for (std::size_t c = 0; c < jd.size(); ++c) dirs.col(c) = vec_from_json(jd[c]);
    }
    return make_affine_set(base, dirs);
}

GroupPtr group_from_json(const nlohmann::json& j) {
    const auto n = j.at("n").get<std::uint32_t>();
    const auto p = j.at("p").get<std::uint32_t>();
    std::vector<MatrixOverFp> gens;
    for (const auto& g : j.at("generators"))
        gens.push_back(game::matrix_from_spec(g, n, p));
    return std::make_shared<const groups::FiniteMatrixGroup>(n, p, std::move(gens));
}

}  // namespace

RealizerCorpusResult run_realizer_corpus(const nlohmann::json& corpus, std::uint64_t seed) {
    RealizerCorpusResult res;
    res.report = nlohmann::json::array();
    for (const auto& c : corpus) {
        const auto id = c.at("id").get<std::string>();
        const auto kind = c.at("kind").get<std::string>();
        ++res.total;
        bool match = false;
        nlohmann::json entry{{"id", id}, {"kind", kind}};
        try {
            if (kind == "theta_energy") {
                std::vector<AffineFixedSet> sets;
                for (const auto& s : c.at("sets")) sets.push_back(set_from_json(s));
                const auto tuple = minimize_theta_energy(sets);
                const double expected = c.at("expected_energy").get<double>();
                match = tuple.converged &&
                        std::abs(tuple.energy - expected) <= c.value("tol", 1e-8);
                entry["energy"] = tuple.energy;
            } else if (kind == "realize_distance") {
                const auto sets = c.at("sets");
                const auto rp = realize_distance(set_from_json(sets.at(0)),
                                                 set_from_json(sets.at(1)));
                match = std::abs(rp.distance - c.at("expected_distance").get<double>()) <=
                        c.value("tol", 1e-8);
                if (c.contains("expect_unique"))
                    match = match && rp.unique == c.at("expect_unique").get<bool>();
                entry["distance"] = rp.distance;
                entry["unique"] = rp.unique;
            } else if (kind == "action") {
                const GroupPtr group = group_from_json(c.at("group"));
                const auto dim = c.at("dim").get<std::uint32_t>();
                std::vector<GeneratorAction> gens;
                for (const auto& g : c.at("generators"))
                    gens.push_back({mat_from_json(g.at("linear")),
                                    vec_from_json(g.at("cocycle"))});
                const AffineAction action(group, dim, std::move(gens));
                const auto subgroup = [&](const nlohmann::json& js) {
                    std::vector<MatrixOverFp> sg;
                    for (const auto& g : js)
                        sg.push_back(game::matrix_from_spec(g, group->dim(), group->modulus()));
                    return SubgroupHandle(group, std::move(sg));
                };
                match = true;
                nlohmann::json checks = nlohmann::json::array();
                for (const auto& chk : c.at("checks")) {
                    const auto what = chk.at("check").get<std::string>();
                    bool ok = false;
                    nlohmann::json ce{{"check", what}};
                    if (what == "fixed_set") {
                        const auto fs = fixed_set(action, subgroup(chk.at("subgroup")));
                        ok = true;
                        if (chk.contains("expect_dim"))
                            ok = ok && fs.dim() == chk.at("expect_dim").get<std::uint32_t>();
                        if (chk.contains("expect_contains"))
                            ok = ok && fs.contains(vec_from_json(chk.at("expect_contains")),
                                                   chk.value("tol", 1e-8));
                        ce["dim"] = fs.dim();
                    } else if (what == "displacement") {
                        std::vector<MatrixOverFp> S;
                        for (const auto& s : chk.at("S"))
                            S.push_back(game::matrix_from_spec(s, group->dim(),
                                                               group->modulus()));
                        const auto rep =
                            displacement(action, S, vec_from_json(chk.at("z")));
                        ok = std::abs(rep.value - chk.at("expected").get<double>()) <=
                             chk.value("tol", 1e-9);
                        ce["value"] = rep.value;
                    } else if (what == "pseudo_uniqueness") {
                        const PointPair p1{vec_from_json(chk.at("pair1").at(0)),
                                           vec_from_json(chk.at("pair1").at(1))};
                        const PointPair p2{vec_from_json(chk.at("pair2").at(0)),
                                           vec_from_json(chk.at("pair2").at(1))};
                        const auto rep = check_pseudo_uniqueness(
                            action, subgroup(chk.at("M")), subgroup(chk.at("L")), p1, p2);
                        const bool expect_precondition =
                            chk.value("expect_precondition", true);
                        ok = rep.precondition_ok == expect_precondition &&
                             (!expect_precondition || rep.pass);
                        ce["precondition"] = rep.precondition_ok;
                        ce["pass"] = rep.pass;
                    } else if (what == "self_improvement") {
                        std::vector<MatrixOverFp> P;
                        for (const auto& h : chk.at("P"))
                            P.push_back(game::matrix_from_spec(h, group->dim(),
                                                               group->modulus()));
                        const PointPair pp{vec_from_json(chk.at("pair").at(0)),
                                           vec_from_json(chk.at("pair").at(1))};
                        const auto rep = self_improvement_check(
                            action, subgroup(chk.at("M")), subgroup(chk.at("L")),
                            subgroup(chk.at("H1")), subgroup(chk.at("H2")), P, pp, seed);
                        const bool expect_precondition =
                            chk.value("expect_precondition", true);
                        ok = rep.precondition_ok == expect_precondition &&
                             (!expect_precondition || rep.pass);
                        ce["precondition"] = rep.precondition_ok;
                        ce["pass"] = rep.pass;
                        if (!rep.reason.empty()) ce["reason"] = rep.reason;
                    } else {
                        ce["error"] = "unknown check";
                    }
                    ce["ok"] = ok;
                    match = match && ok;
                    checks.push_back(std::move(ce));
                }
                entry["checks"] = checks;
            } else {
                entry["error"] = "unknown case kind";
            }
        } catch (const std::exception& ex) {
            entry["error"] = ex.what();
            match = false;
        }
        entry["match"] = match;
        if (!match) res.failing_ids.push_back(id);
        res.report.push_back(std::move(entry));
    }
    return res;
}

}  // namespace grouplab::realizer
