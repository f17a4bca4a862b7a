#pragma once

/**
 * @file affine.hpp
 * @brief Affine isometric actions of finite matrix groups on R^d:
 *        cocycles, fixed-point subspaces, distance and energy realizers,
 *        and displacement functions.
 *
 * An action is given on generators by orthogonal linear parts and cocycle
 * vectors, alpha(g) x = pi(g) x + b(g). Construction extends the data to
 * the whole (finite) group along Cayley edges via the cocycle identity
 * b(g1 g2) = b(g1) + pi(g1) b(g2) and rejects inconsistent data, so every
 * later lookup is exact table access. Fixed sets are affine subspaces and
 * every optimization below is linear-algebraic.
 */

#include <Eigen/Dense>

#include "grouplab/group.hpp"

namespace grouplab::realizer {

using algebra::MatrixOverFp;
using groups::GroupPtr;
using groups::SubgroupHandle;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct GeneratorAction {
    Mat linear;
    Vec cocycle;
};

class AffineAction {
public:
    /// `gens` is parallel to group->generators(). Throws when a linear
    /// part is not orthogonal to `orth_tol` or when extending along the
    /// group's multiplication table is inconsistent beyond
    /// `consistency_tol`.
    AffineAction(GroupPtr group, std::uint32_t dim, std::vector<GeneratorAction> gens,
                 double orth_tol = 1e-10, double consistency_tol = 1e-8);

    const GroupPtr& group() const { return group_; }
    std::uint32_t dim() const { return dim_; }
    double consistency_residual() const { return consistency_residual_; }

    /// Linear part and cocycle of an arbitrary group element (table).
    std::pair<Mat, Vec> at(const MatrixOverFp& g) const;
    Vec apply(const MatrixOverFp& g, const Vec& x) const;

    /// Folds the cocycle identity over a word; entries are +-(k+1)
    /// referring to generator k, negative for its inverse. The empty word
    /// gives (I, 0).
    std::pair<Mat, Vec> evaluate_word(const std::vector<int>& word) const;

private:
    GroupPtr group_;
    std::uint32_t dim_;
    std::vector<GeneratorAction> gens_;
    std::vector<Mat> table_linear_;
    std::vector<Vec> table_cocycle_;
    double consistency_residual_ = 0.0;
};

/// An affine subspace base + span(directions), or the empty set.
struct AffineFixedSet {
    Vec base;
    Mat directions;  // d x k, orthonormal columns (k may be 0)
    bool empty = false;

    Vec project(const Vec& x) const;
    bool contains(const Vec& x, double tol) const;
    std::uint32_t dim() const { return empty ? 0 : static_cast<std::uint32_t>(directions.cols()); }
};

/// Orthonormalizes the spanning directions.
AffineFixedSet make_affine_set(Vec base, Mat spanning);

/// Solves (pi(s) - I) x = -b(s) over the generators of H. For a finite
/// group the set cannot be empty; emptiness throws std::logic_error
/// (inconsistent action data).
AffineFixedSet fixed_set(const AffineAction& action, const SubgroupHandle& H);

struct RealizerPair {
    Vec xi, eta;
    double distance = 0.0;
    bool unique = true;  // false when the minimizing pair is a family
};

/// Closest pair of two affine subspaces by least squares; the minimum-norm
/// representative is returned and non-uniqueness flagged.
RealizerPair realize_distance(const AffineFixedSet& F1, const AffineFixedSet& F2);

struct PointPair {
    Vec xi, eta;
};

struct PseudoUniquenessReport {
    bool precondition_ok = false;
    std::string reason;
    double realizer_residual = 0.0;    // how far the pairs are from realizing D
    double diff_residual = 0.0;        // |(xi - xi') - (eta - eta')|
    double fixed_space_residual = 0.0; // projection residual onto the pi(G)-fixed space
    bool pass = false;
};

/// Both pairs must realize D = dist(fix(M), fix(L)); then xi - xi' equals
/// eta - eta' and the common difference lies in the fixed subspace of the
/// linear part over the whole group.
PseudoUniquenessReport check_pseudo_uniqueness(const AffineAction& action,
                                               const SubgroupHandle& M, const SubgroupHandle& L,
                                               const PointPair& pair1, const PointPair& pair2,
                                               double tol = 1e-8);

struct RealizerTuple {
    std::vector<Vec> points;
    double energy = 0.0;
    bool converged = true;
};

/// Minimizes sum_{i<j} |z_i - z_j|^2 over the product of the affine
/// subspaces (block coordinate descent, projected gradient norm <= 1e-10).
RealizerTuple minimize_theta_energy(const std::vector<AffineFixedSet>& sets);

double theta_energy(const std::vector<Vec>& points);

struct TupleParallelismReport {
    bool precondition_ok = false;
    std::string reason;
    bool pass = false;
    std::vector<std::pair<std::size_t, std::size_t>> failures;
};

/// For two minimizing tuples, [x_i, y_i] must be parallel to [x_j, y_j]
/// for every i < j (Euclidean parallelism through the geometry module).
TupleParallelismReport check_realizer_parallelism(const RealizerTuple& t1,
                                                  const RealizerTuple& t2, double tol = 1e-8);

struct SelfImprovementReport {
    bool precondition_ok = false;
    std::string reason;
    double orbit_parallelism_residual = 0.0;  // worst parallelism defect over samples
    double fixed_by_P_residual = 0.0;         // max |alpha(h) xi - xi| over h in P
    double commutation_residual = 0.0;        // max |alpha(g1 g2) xi - alpha(g2 g1) xi|
    bool pass = false;
};

/// Verifies, on a validated realizer pair of dist(fix(M), fix(L)):
/// (a) orbit-segment parallelism [x, a(g) x] || [a(c) x, a(c g) x] for
///     sampled g in <P> and c in G;
/// (b) alpha(h) fixes xi and eta for every h in P;
/// (c) the orbit map of <P> is commutation-invariant on sampled pairs.
/// Preconditions: h H1 h^-1 >= M and h H2 h^-1 >= L for all h in P.
SelfImprovementReport self_improvement_check(const AffineAction& action,
                                             const SubgroupHandle& M, const SubgroupHandle& L,
                                             const SubgroupHandle& H1, const SubgroupHandle& H2,
                                             const std::vector<MatrixOverFp>& P,
                                             const PointPair& pair, std::uint64_t seed,
                                             std::uint32_t samples = 64, double tol = 1e-8);

struct DisplacementReport {
    double value = 0.0;
    bool fixed_at_z = false;       // value within tolerance of zero
    bool one_uniform_at_z = false; // value >= 1 at this point only
};

DisplacementReport displacement(const AffineAction& action, const std::vector<MatrixOverFp>& S,
                                const Vec& z, double tol = 1e-10);

/// Displacement of explicit affine isometries (linear part, translation);
/// lets the formula be exercised on maps that no finite group realizes,
/// e.g. a pure translation.
DisplacementReport displacement_maps(const std::vector<std::pair<Mat, Vec>>& maps, const Vec& z,
                                     double tol = 1e-10);

// ---- corpus files --------------------------------------------------------

struct RealizerCorpusResult {
    std::size_t total = 0;
    std::vector<std::string> failing_ids;
    nlohmann::json report;
    bool all_match() const { return failing_ids.empty(); }
};

/// Runs bundled action scenarios: fixed-set membership and dimension
/// checks, displacement values, pseudo-uniqueness and self-improvement
/// cases, plus standalone energy/distance cases on explicit affine sets.
RealizerCorpusResult run_realizer_corpus(const nlohmann::json& corpus, std::uint64_t seed);

}  // namespace grouplab::realizer
