#pragma once

/**
 * @file poincare.hpp
 * @brief Poincare constants lambda(Gamma, X) of finite graphs.
 *
 * For the scalar target the constant reduces to a Laplacian eigenvalue:
 * writing E for the oriented edge set and mu_2 for the second-smallest
 * eigenvalue of the unnormalized Laplacian, the pair-sum identity
 * sum_{(v,w) in V^2} (f(v)-f(w))^2 = 2|V| sum_v f(v)^2 for mean-zero f
 * gives lambda = |V| mu_2 / (2|E|). For l_q^d targets with q != 2 only
 * optimizer upper bounds are reported.
 */

#include <optional>

#include "grouplab/cayley.hpp"
#include "grouplab/rng.hpp"

namespace grouplab::expander {

struct PoincareEstimate {
    double value = 0.0;
    bool scalar_target = true;  // target R; otherwise l_q^d
    double q = 2.0;
    std::uint32_t d = 1;
    enum class Kind { ExactEigen, OptimizerUpperBound } kind = Kind::ExactEigen;
    std::vector<double> witness;  // |V| x d row-major, optimizer only
    bool budget_exhausted = false;
    std::uint32_t restarts = 0;
    std::uint64_t seed = 0;
    std::string note;
};

/// Exact lambda(Gamma, R) = |V| mu_2 / (2|E|). Dense eigensolve up to
/// `dense_limit` vertices, deflated Lanczos iteration beyond that up to
/// `iterative_limit`; larger graphs are refused.
PoincareEstimate poincare_exact_scalar(const CayleyGraph& g, std::uint64_t dense_limit = 2048,
                                       std::uint64_t iterative_limit = 200000);

/// The raw ratio (1/2) |V|^2 N(f) / (|E| D(f)) with N over oriented edges
/// and D over all ordered vertex pairs, distances in l_q. `f` is |V| x d
/// row-major. Throws on a constant map.
double lambda_ratio(const CayleyGraph& g, const std::vector<double>& f, double q,
                    std::uint32_t d);

struct OptimOptions {
    std::uint32_t max_iters = 4000;
    double grad_tol = 1e-11;      // on the projected relative gradient
    double smoothing_eps = 1e-12; // regularizer inside |.|^q gradients
};

/// Multi-start projected gradient descent on the lambda-ratio over maps
/// f: V -> R^d with the l_q metric. Translation gauge is fixed by
/// centering, scale gauge by renormalizing the denominator. The result is
/// a rigorous upper bound; the witness attains the reported value.
PoincareEstimate poincare_upper_lq(const CayleyGraph& g, double q, std::uint32_t d,
                                   std::uint32_t restarts, std::uint64_t seed,
                                   const OptimOptions& opts = {});

struct FamilyRow {
    std::uint32_t m = 1;
    std::uint32_t p = 2;
    std::optional<std::uint64_t> vertex_count;
    double q = 2.0;
    std::uint32_t d = 1;
    std::optional<double> lambda;
    std::string kind;  // "exact-eigen", "optimizer-upper-bound", "budget-exceeded"
    std::uint32_t restarts = 0;
    std::uint64_t seed = 0;
    std::string note;
};

/// One row per (m, q): the Cayley graph of SL(4m, F_p) on the standard
/// generating images, with lambda estimates. Rows whose group exceeds the
/// enumeration budget are marked and the computation continues. The table
/// is desk-scale empirical evidence, not a proof of uniform positivity.
std::vector<FamilyRow> family_gap_report(const std::vector<std::uint32_t>& m_range,
                                         std::uint32_t p, const std::vector<double>& q_list,
                                         std::uint32_t d, std::uint32_t restarts,
                                         std::uint64_t seed,
                                         std::uint64_t budget = groups::kDefaultClosureCap);

/// CSV with columns m,p,V,q,d,lambda,kind,restarts,seed. Newline-terminated.
std::string family_report_csv(const std::vector<FamilyRow>& rows);

}  // namespace grouplab::expander
