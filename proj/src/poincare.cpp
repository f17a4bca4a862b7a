#include "grouplab/poincare.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace grouplab::expander {

namespace {

// (Lx)[u] = sum over oriented edges (u,v) of x[u] - x[v]; the quadratic
// form is half the oriented edge sum.
void laplacian_apply(const CayleyGraph& g, const double* x, double* y) {
    for (std::uint64_t u = 0; u < g.vertex_count; ++u) y[u] = 0.0;
    for (const auto& e : g.oriented_edges) y[e.u] += x[e.u] - x[e.v];
}

double mu2_dense(const CayleyGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.vertex_count);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : g.oriented_edges) {
        L(e.u, e.u) += 1.0;
        L(e.u, e.v) -= 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolve failed");
    return es.eigenvalues()(1);
}

double mu2_lanczos(const CayleyGraph& g, std::string& note) {
    const std::uint64_t n = g.vertex_count;
    const std::uint32_t max_iters = static_cast<std::uint32_t>(std::min<std::uint64_t>(n - 1, 400));
    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta;

    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    const auto deflate = [&](std::vector<double>& v) {
        double dot = 0.0;
        for (const double x : v) dot += x * inv_sqrt_n;
        for (double& x : v) x -= dot * inv_sqrt_n;
    };

    SplitMix64 rng(0x9e3779b97f4a7c15ULL);  // fixed internal stream
    std::vector<double> v(n), w(n);
    for (auto& x : v) x = rng.next_gaussian();
    deflate(v);
    double nrm = 0.0;
    for (const double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (auto& x : v) x /= nrm;

    double theta = 0.0;
    for (std::uint32_t k = 0; k < max_iters; ++k) {
        basis.push_back(v);
        laplacian_apply(g, v.data(), w.data());
        double a = 0.0;
        for (std::uint64_t i = 0; i < n; ++i) a += v[i] * w[i];
        alpha.push_back(a);
        // full reorthogonalization, plus deflation of constants
        for (const auto& b : basis) {
            double dot = 0.0;
            for (std::uint64_t i = 0; i < n; ++i) dot += w[i] * b[i];
            for (std::uint64_t i = 0; i < n; ++i) w[i] -= dot * b[i];
        }
        deflate(w);
        double b2 = 0.0;
        for (const double x : w) b2 += x * x;
        const double b = std::sqrt(b2);

        const auto m = static_cast<Eigen::Index>(alpha.size());
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            T(i, i) = alpha[i];
            if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        theta = es.eigenvalues()(0);
        const double resid = b * std::abs(es.eigenvectors()(m - 1, 0));
        if (resid <= 1e-12 * std::max(1.0, std::abs(theta)) && m >= 10) {
            note = "iterative (Lanczos, " + std::to_string(alpha.size()) + " steps)";
            return theta;
        }
        if (b <= 1e-14) break;  // Krylov space exhausted
        beta.push_back(b);
        for (std::uint64_t i = 0; i < n; ++i) v[i] = w[i] / b;
    }
    note = "iterative (Lanczos, " + std::to_string(alpha.size()) + " steps, residual floor)";
    return theta;
}

}  // namespace

PoincareEstimate poincare_exact_scalar(const CayleyGraph& g, std::uint64_t dense_limit,
                                       std::uint64_t iterative_limit) {
    if (g.vertex_count < 2)
        throw std::invalid_argument("Poincare constant needs at least two vertices");
    if (g.vertex_count > iterative_limit)
        throw std::invalid_argument("graph too large for the eigensolver; " +
                                    std::to_string(g.vertex_count) + " vertices exceeds " +
                                    std::to_string(iterative_limit));
    PoincareEstimate est;
    est.kind = PoincareEstimate::Kind::ExactEigen;
    double mu2;
    if (g.vertex_count <= dense_limit) {
        mu2 = mu2_dense(g);
        est.note = "dense";
    } else {
        mu2 = mu2_lanczos(g, est.note);
    }
    est.value = static_cast<double>(g.vertex_count) * mu2 /
                (2.0 * static_cast<double>(g.oriented_edge_count()));
    return est;
}

namespace {

double lq_dist_sq(const double* x, const double* y, std::uint32_t d, double q) {
    double s = 0.0;
    for (std::uint32_t k = 0; k < d; ++k) s += std::pow(std::abs(x[k] - y[k]), q);
    return std::pow(s, 2.0 / q);
}

// gradient of the eps-regularized squared l_q distance with respect to
// delta = x - y, written into gbuf
void lq_dist_sq_grad(const double* x, const double* y, std::uint32_t d, double q, double eps,
                     double* gbuf) {
    double s = 0.0;
    for (std::uint32_t k = 0; k < d; ++k) {
        const double dk = x[k] - y[k];
        s += std::pow(dk * dk + eps, q / 2.0);
    }
    if (s <= 0.0) {
        for (std::uint32_t k = 0; k < d; ++k) gbuf[k] = 0.0;
        return;
    }
    const double outer = 2.0 * std::pow(s, (2.0 - q) / q);
    for (std::uint32_t k = 0; k < d; ++k) {
        const double dk = x[k] - y[k];
        gbuf[k] = outer * std::pow(dk * dk + eps, (q - 2.0) / 2.0) * dk;
    }
}

struct RatioParts {
    double num = 0.0;    // sum over oriented edges of d(f_u, f_v)^2
    double denom = 0.0;  // sum over ordered vertex pairs
};

RatioParts ratio_parts(const CayleyGraph& g, const std::vector<double>& f, double q,
                       std::uint32_t d) {
    RatioParts rp;
    for (const auto& e : g.oriented_edges)
        rp.num += lq_dist_sq(&f[std::size_t(e.u) * d], &f[std::size_t(e.v) * d], d, q);
    const std::uint64_t n = g.vertex_count;
    for (std::uint64_t u = 0; u < n; ++u)
        for (std::uint64_t w = u + 1; w < n; ++w)
            rp.denom += 2.0 * lq_dist_sq(&f[u * d], &f[w * d], d, q);
    return rp;
}

void center_columns(std::vector<double>& f, std::uint64_t n, std::uint32_t d) {
    for (std::uint32_t k = 0; k < d; ++k) {
        double mean = 0.0;
        for (std::uint64_t u = 0; u < n; ++u) mean += f[u * d + k];
        mean /= static_cast<double>(n);
        for (std::uint64_t u = 0; u < n; ++u) f[u * d + k] -= mean;
    }
}

}  // namespace

double lambda_ratio(const CayleyGraph& g, const std::vector<double>& f, double q,
                    std::uint32_t d) {
    if (q <= 1.0 || !std::isfinite(q)) throw std::invalid_argument("q must lie in (1, infinity)");
    if (f.size() != g.vertex_count * d) throw std::invalid_argument("witness has wrong size");
    const RatioParts rp = ratio_parts(g, f, q, d);
    if (rp.denom <= 0.0)
        throw std::invalid_argument("ratio undefined at a constant map (denominator zero)");
    const double n = static_cast<double>(g.vertex_count);
    return 0.5 * n * n * rp.num / (static_cast<double>(g.oriented_edge_count()) * rp.denom);
}

PoincareEstimate poincare_upper_lq(const CayleyGraph& g, double q, std::uint32_t d,
                                   std::uint32_t restarts, std::uint64_t seed,
                                   const OptimOptions& opts) {
    if (q <= 1.0 || !std::isfinite(q)) throw std::invalid_argument("q must lie in (1, infinity)");
    if (d < 1) throw std::invalid_argument("target dimension must be positive");
    if (restarts < 1) throw std::invalid_argument("need at least one restart");
    const std::uint64_t n = g.vertex_count;
    const std::size_t len = n * d;

    std::vector<double> best_f;
    double best_ratio = std::numeric_limits<double>::infinity();
    bool any_budget_exhausted = false;

    std::vector<double> f(len), trial(len), grad(len), gN(len), gD(len), gbuf(d);

    for (std::uint32_t rs = 0; rs < restarts; ++rs) {
        SplitMix64 rng(SplitMix64::derive(seed, rs));
        // gaussian start; gauge projection rejects near-constant maps
        for (;;) {
            for (auto& x : f) x = rng.next_gaussian();
            center_columns(f, n, d);
            double nrm = 0.0;
            for (const double x : f) nrm += x * x;
            if (nrm > 1e-12) break;
        }

        RatioParts rp = ratio_parts(g, f, q, d);
        {  // scale gauge: denominator = n^2
            const double s = std::sqrt(static_cast<double>(n) * n / rp.denom);
            for (auto& x : f) x *= s;
            rp.num *= s * s;
            rp.denom = static_cast<double>(n) * n;
        }
        double ratio = rp.num / rp.denom;
        double step = 1.0;
        bool converged = false;

        for (std::uint32_t it = 0; it < opts.max_iters; ++it) {
            std::fill(gN.begin(), gN.end(), 0.0);
            std::fill(gD.begin(), gD.end(), 0.0);
            for (const auto& e : g.oriented_edges) {
                lq_dist_sq_grad(&f[std::size_t(e.u) * d], &f[std::size_t(e.v) * d], d, q,
                                opts.smoothing_eps, gbuf.data());
                for (std::uint32_t k = 0; k < d; ++k) {
                    gN[std::size_t(e.u) * d + k] += gbuf[k];
                    gN[std::size_t(e.v) * d + k] -= gbuf[k];
                }
            }
            for (std::uint64_t u = 0; u < n; ++u)
                for (std::uint64_t w = u + 1; w < n; ++w) {
                    lq_dist_sq_grad(&f[u * d], &f[w * d], d, q, opts.smoothing_eps, gbuf.data());
                    for (std::uint32_t k = 0; k < d; ++k) {
                        gD[u * d + k] += 2.0 * gbuf[k];
                        gD[w * d + k] -= 2.0 * gbuf[k];
                    }
                }
            double gnorm2 = 0.0, fnorm2 = 0.0;
            for (std::size_t i = 0; i < len; ++i) {
                grad[i] = (gN[i] - ratio * gD[i]) / rp.denom;
                gnorm2 += grad[i] * grad[i];
                fnorm2 += f[i] * f[i];
            }
            if (std::sqrt(gnorm2 * fnorm2) <= opts.grad_tol * std::max(ratio, 1e-300)) {
                converged = true;
                break;
            }
            // backtracking line search on the exact ratio
            bool moved = false;
            for (double t = step; t >= step * 1e-16; t *= 0.5) {
                for (std::size_t i = 0; i < len; ++i) trial[i] = f[i] - t * grad[i];
                center_columns(trial, n, d);
                const RatioParts rp2 = ratio_parts(g, trial, q, d);
                if (rp2.denom <= 0.0) continue;
                const double r2 = rp2.num / rp2.denom;
                if (r2 <= ratio - 1e-4 * t * gnorm2) {
                    f.swap(trial);
                    rp = rp2;
                    const double s = std::sqrt(static_cast<double>(n) * n / rp.denom);
                    for (auto& x : f) x *= s;
                    rp.num *= s * s;
                    rp.denom = static_cast<double>(n) * n;
                    ratio = rp.num / rp.denom;
                    step = t * 2.0;
                    moved = true;
                    break;
                }
            }
            if (!moved) {
                converged = true;  // no descent direction at line-search resolution
                break;
            }
            if (it + 1 == opts.max_iters) any_budget_exhausted = true;
        }
        if (!converged && restarts > 0) any_budget_exhausted = true;
        if (ratio < best_ratio) {
            best_ratio = ratio;
            best_f = f;
        }
    }

    PoincareEstimate est;
    est.scalar_target = false;
    est.q = q;
    est.d = d;
    est.kind = PoincareEstimate::Kind::OptimizerUpperBound;
    est.witness = std::move(best_f);
    est.restarts = restarts;
    est.seed = seed;
    est.budget_exhausted = any_budget_exhausted;
    est.value = lambda_ratio(g, est.witness, q, d);  // value always matches the witness
    if (any_budget_exhausted) est.note = "budget-exhausted; best-so-far reported";
    return est;
}

std::vector<FamilyRow> family_gap_report(const std::vector<std::uint32_t>& m_range,
                                         std::uint32_t p, const std::vector<double>& q_list,
                                         std::uint32_t d, std::uint32_t restarts,
                                         std::uint64_t seed, std::uint64_t budget) {
    std::vector<FamilyRow> rows;
    constexpr std::uint64_t kOptimizerVertexLimit = 4096;
    for (const auto m : m_range) {
        std::optional<CayleyGraph> graph;
        std::string fail_note;
        try {
            const MotherQuotient mq = standard_generating_images(m, p, budget);
            groups::FiniteMatrixGroup group(4 * m, p,
                                            [&] {
                                                std::vector<MatrixOverFp> gs;
                                                for (const auto& im : mq.images)
                                                    gs.push_back(im.matrix);
                                                return gs;
                                            }(),
                                            budget);
            graph = build_cayley(group, mq.images);
        } catch (const std::exception& ex) {
            fail_note = ex.what();
        }
        std::uint32_t qi = 0;
        for (const auto q : q_list) {
            FamilyRow row;
            row.m = m;
            row.p = p;
            row.q = q;
            row.d = d;
            row.seed = SplitMix64::derive(seed, std::uint64_t(m) * 1000003 + qi * 101 + d);
            ++qi;
            if (!graph) {
                row.kind = "budget-exceeded";
                row.note = fail_note;
                rows.push_back(std::move(row));
                continue;
            }
            row.vertex_count = graph->vertex_count;
            try {
                if (q == 2.0) {
                    const auto est = poincare_exact_scalar(*graph);
                    row.lambda = est.value;
                    row.kind = "exact-eigen";
                    row.note = "l_2^d target reduces to the scalar constant";
                } else if (graph->vertex_count > kOptimizerVertexLimit) {
                    row.kind = "budget-exceeded";
                    row.note = "optimizer skipped: vertex count above limit";
                } else {
                    row.restarts = restarts;
                    const auto est = poincare_upper_lq(*graph, q, d, restarts, row.seed);
                    row.lambda = est.value;
                    row.kind = "optimizer-upper-bound";
                    if (est.budget_exhausted) row.note = est.note;
                }
            } catch (const std::exception& ex) {
                row.kind = "budget-exceeded";
                row.note = ex.what();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string family_report_csv(const std::vector<FamilyRow>& rows) {
    std::ostringstream os;
    os << "m,p,V,q,d,lambda,kind,restarts,seed\n";
    char buf[64];
    for (const auto& r : rows) {
        os << r.m << "," << r.p << ",";
        if (r.vertex_count) os << *r.vertex_count;
        os << ",";
        std::snprintf(buf, sizeof buf, "%.12g", r.q);
        os << buf << "," << r.d << ",";
        if (r.lambda) {
            std::snprintf(buf, sizeof buf, "%.12g", *r.lambda);
            os << buf;
        }
        os << "," << r.kind << "," << r.restarts << "," << r.seed << "\n";
    }
    return os.str();
}

}  // namespace grouplab::expander
