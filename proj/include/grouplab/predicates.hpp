#pragma once

/**
 * @file predicates.hpp
 * @brief Numerical predicates on oriented geodesic segments: parallelism
 *        and its transitivity, the non-positive-curvature inequalities,
 *        and the distance-realizing parallelism variant.
 *
 * Two segments are parallel when the two endpoint distances and the
 * midpoint distance all agree. Each check reports the measured distances
 * so corpus files and traces can record why a verdict was reached.
 */

#include <functional>

#include "grouplab/spaces.hpp"
#include "json.hpp"

namespace grouplab::geometry {

struct ParallelBreakdown {
    double d_start = 0.0, d_end = 0.0, d_mid = 0.0;
    bool parallel = false;
};

ParallelBreakdown parallel_breakdown(const Segment& s1, const Segment& s2, double tol);
bool is_parallel(const Segment& s1, const Segment& s2, double tol);

struct TPReport {
    bool premise = false;   // s1 || s2 and s2 || s3
    bool conclusion = false;  // s1 || s3
    bool violated = false;  // premise holds, conclusion fails
    ParallelBreakdown p12, p23, p13;
};

/// Transitivity of parallelism on one triple; the glued-square triple
/// ([A,B],[D,C],[E,B]) must report a violation.
TPReport check_tp(const Segment& s1, const Segment& s2, const Segment& s3, double tol);

struct ConvexityReport {
    bool applicable = false;   // precondition held
    double max_violation = 0.0;
    bool pass = false;
    std::string note;
};

/// d(m_t, m_t') <= d(start, start') at sampled t, under the precondition
/// d(start, start') = d(end, end').
ConvexityReport check_npc1(const Segment& s1, const Segment& s2, std::uint32_t t_samples,
                           double tol);

/// Theta(d(m_t, m_t')) <= (1-t) Theta(d(x,x')) + t Theta(d(y,y')) at the
/// sampled t; Theta defaults to the identity and must be strictly
/// increasing and continuous. No precondition.
ConvexityReport check_theta_npc1(const Segment& s1, const Segment& s2, std::uint32_t t_samples,
                                 double tol,
                                 const std::function<double(double)>& theta = nullptr);

/// Same inequalities evaluated on explicitly sampled curves (equal length
/// point lists over uniform t); used for planted non-geodesic controls.
ConvexityReport check_npc1_curves(const std::vector<SpacePoint>& c1,
                                  const std::vector<SpacePoint>& c2, double tol);

struct ImplicationReport {
    bool applicable = false;  // the premise (a parallelism) held
    bool pass = false;
    double residual = 0.0;
    std::string note;
};

/// If s1 || s2 then [start1, start2] || [end1, end2].
ImplicationReport check_npc2(const Segment& s1, const Segment& s2, double tol);

/// If s1 || s2 and s1.end = s2.start then the concatenation is geodesic:
/// d(x, z) = d(x, y) + d(y, z).
ImplicationReport check_npc3(const Segment& s1, const Segment& s2, double tol);

/// Minimum of d(m_s(s1), m_t(s2)) over the parameter square, by 64-point
/// grid sampling and alternating golden-section refinement.
double min_segment_distance(const Segment& s1, const Segment& s2);

/// Parallel and the start-to-start distance realizes the distance between
/// the segments.
bool is_parallel_perp(const Segment& s1, const Segment& s2, double tol);

// ---- corpus files --------------------------------------------------------

struct CorpusResult {
    std::size_t total = 0;
    std::vector<std::string> failing_ids;
    nlohmann::json report;
    bool all_match() const { return failing_ids.empty(); }
};

/// Runs a JSON array of cases of the form
///   {id, space: {kind: "lq", q, d} | {kind: "glued-square"},
///    check: "distance"|"parallel"|"tp"|"npc1"|"npc2"|"npc3"|"parallel-perp",
///    points/segments, tol, expected}
/// and reports mismatched case ids. Expected violations count as matches
/// when they occur. `default_tol` applies to cases without their own tol.
CorpusResult run_geometry_corpus(const nlohmann::json& corpus, double default_tol = 1e-9);

}  // namespace grouplab::geometry
