#include "grouplab/predicates.hpp"

#include <cmath>

namespace grouplab::geometry {

ParallelBreakdown parallel_breakdown(const Segment& s1, const Segment& s2, double tol) {
    ParallelBreakdown b;
    b.d_start = distance(s1.start, s2.start);
    b.d_end = distance(s1.end, s2.end);
    b.d_mid = distance(midpoint(s1), midpoint(s2));
    b.parallel = std::abs(b.d_start - b.d_end) <= tol && std::abs(b.d_start - b.d_mid) <= tol;
    return b;
}

bool is_parallel(const Segment& s1, const Segment& s2, double tol) {
    return parallel_breakdown(s1, s2, tol).parallel;
}

TPReport check_tp(const Segment& s1, const Segment& s2, const Segment& s3, double tol) {
    TPReport r;
    r.p12 = parallel_breakdown(s1, s2, tol);
    r.p23 = parallel_breakdown(s2, s3, tol);
    r.p13 = parallel_breakdown(s1, s3, tol);
    r.premise = r.p12.parallel && r.p23.parallel;
    r.conclusion = r.p13.parallel;
    r.violated = r.premise && !r.conclusion;
    return r;
}

ConvexityReport check_npc1(const Segment& s1, const Segment& s2, std::uint32_t t_samples,
                           double tol) {
    ConvexityReport r;
    const double d_start = distance(s1.start, s2.start);
    const double d_end = distance(s1.end, s2.end);
    if (std::abs(d_start - d_end) > tol) {
        r.applicable = false;
        r.note = "precondition unmet: d(start,start') != d(end,end')";
        return r;
    }
    r.applicable = true;
    for (std::uint32_t k = 0; k < t_samples; ++k) {
        const double t = t_samples == 1 ? 0.5 : static_cast<double>(k) / (t_samples - 1);
        const double dm = distance(midpoint(s1, t), midpoint(s2, t));
        r.max_violation = std::max(r.max_violation, dm - d_start);
    }
    r.pass = r.max_violation <= tol;
    return r;
}

ConvexityReport check_theta_npc1(const Segment& s1, const Segment& s2, std::uint32_t t_samples,
                                 double tol, const std::function<double(double)>& theta) {
    const auto th = theta ? theta : [](double v) { return v; };
    ConvexityReport r;
    r.applicable = true;
    const double tx = th(distance(s1.start, s2.start));
    const double ty = th(distance(s1.end, s2.end));
    for (std::uint32_t k = 0; k < t_samples; ++k) {
        const double t = t_samples == 1 ? 0.5 : static_cast<double>(k) / (t_samples - 1);
        const double lhs = th(distance(midpoint(s1, t), midpoint(s2, t)));
        r.max_violation = std::max(r.max_violation, lhs - ((1 - t) * tx + t * ty));
    }
    r.pass = r.max_violation <= tol;
    return r;
}

ConvexityReport check_npc1_curves(const std::vector<SpacePoint>& c1,
                                  const std::vector<SpacePoint>& c2, double tol) {
    ConvexityReport r;
    if (c1.size() != c2.size() || c1.size() < 2) {
        r.note = "curves need equal length >= 2";
        return r;
    }
    const double d_start = distance(c1.front(), c2.front());
    const double d_end = distance(c1.back(), c2.back());
    if (std::abs(d_start - d_end) > tol) {
        r.note = "precondition unmet: d(start,start') != d(end,end')";
        return r;
    }
    r.applicable = true;
    for (std::size_t k = 0; k < c1.size(); ++k)
        r.max_violation = std::max(r.max_violation, distance(c1[k], c2[k]) - d_start);
    r.pass = r.max_violation <= tol;
    return r;
}

ImplicationReport check_npc2(const Segment& s1, const Segment& s2, double tol) {
    ImplicationReport r;
    if (!is_parallel(s1, s2, tol)) {
        r.note = "precondition unmet: segments not parallel";
        return r;
    }
    r.applicable = true;
    const auto b = parallel_breakdown(make_segment(s1.start, s2.start),
                                      make_segment(s1.end, s2.end), tol);
    r.pass = b.parallel;
    r.residual = std::max(std::abs(b.d_start - b.d_end), std::abs(b.d_start - b.d_mid));
    return r;
}

ImplicationReport check_npc3(const Segment& s1, const Segment& s2, double tol) {
    ImplicationReport r;
    if (distance(s1.end, s2.start) > tol) {
        r.note = "precondition unmet: segments do not concatenate";
        return r;
    }
    if (!is_parallel(s1, s2, tol)) {
        r.note = "precondition unmet: segments not parallel";
        return r;
    }
    r.applicable = true;
    const double direct = distance(s1.start, s2.end);
    const double total = distance(s1.start, s1.end) + distance(s2.start, s2.end);
    r.residual = std::abs(direct - total);
    r.pass = r.residual <= tol;
    return r;
}

namespace {

double dist_at(const Segment& s1, const Segment& s2, double s, double t) {
    return distance(midpoint(s1, s), midpoint(s2, t));
}

// golden-section over one parameter with the other fixed
double golden_min(const std::function<double(double)>& f, double a, double b, std::uint32_t iters) {
    constexpr double inv_phi = 0.6180339887498948482;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (std::uint32_t k = 0; k < iters; ++k) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double min_segment_distance(const Segment& s1, const Segment& s2) {
    constexpr std::uint32_t kGrid = 64;
    double best = std::numeric_limits<double>::infinity();
    double bs = 0.0, bt = 0.0;
    for (std::uint32_t i = 0; i <= kGrid; ++i) {
        for (std::uint32_t j = 0; j <= kGrid; ++j) {
            const double s = static_cast<double>(i) / kGrid;
            const double t = static_cast<double>(j) / kGrid;
            const double v = dist_at(s1, s2, s, t);
            if (v < best) {
                best = v;
                bs = s;
                bt = t;
            }
        }
    }
    // alternating golden-section refinement around the best grid cell
    double lo_s = std::max(0.0, bs - 1.5 / kGrid), hi_s = std::min(1.0, bs + 1.5 / kGrid);
    double lo_t = std::max(0.0, bt - 1.5 / kGrid), hi_t = std::min(1.0, bt + 1.5 / kGrid);
    for (std::uint32_t round = 0; round < 4; ++round) {
        bs = golden_min([&](double s) { return dist_at(s1, s2, s, bt); }, lo_s, hi_s, 40);
        bt = golden_min([&](double t) { return dist_at(s1, s2, bs, t); }, lo_t, hi_t, 40);
    }
    return std::min(best, dist_at(s1, s2, bs, bt));
}

bool is_parallel_perp(const Segment& s1, const Segment& s2, double tol) {
    if (!is_parallel(s1, s2, tol)) return false;
    const double d_start = distance(s1.start, s2.start);
    return std::abs(d_start - min_segment_distance(s1, s2)) <= tol;
}

// ---- corpus files --------------------------------------------------------

namespace {

SpacePoint point_from_json(const nlohmann::json& jspace, const nlohmann::json& jpt) {
    const auto kind = jspace.at("kind").get<std::string>();
    if (kind == "lq")
        return lq_point(jspace.at("q").get<double>(), jpt.get<std::vector<double>>());
    if (kind == "glued-square") {
        const auto chart = jpt.at("chart").get<std::string>() == "flap" ? Chart::Flap
                                                                        : Chart::Square;
        const auto xy = jpt.at("xy").get<std::vector<double>>();
        return glued_point(chart, xy.at(0), xy.at(1));
    }
    throw std::invalid_argument("unknown space kind: " + kind);
}

Segment segment_from_json(const nlohmann::json& jspace, const nlohmann::json& jseg) {
    return make_segment(point_from_json(jspace, jseg.at(0)), point_from_json(jspace, jseg.at(1)));
}

}  // namespace

CorpusResult run_geometry_corpus(const nlohmann::json& corpus, double default_tol) {
    CorpusResult res;
    res.report = nlohmann::json::array();
    for (const auto& c : corpus) {
        const auto id = c.at("id").get<std::string>();
        const auto& space = c.at("space");
        const auto check = c.at("check").get<std::string>();
        const double tol = c.value("tol", default_tol);
        ++res.total;
        bool match = false;
        nlohmann::json entry{{"id", id}, {"check", check}};
        try {
            if (check == "distance") {
                const auto pts = c.at("points");
                const double got =
                    distance(point_from_json(space, pts.at(0)), point_from_json(space, pts.at(1)));
                const double expected = c.at("expected").get<double>();
                match = std::abs(got - expected) <= tol;
                entry["got"] = got;
                entry["expected"] = expected;
            } else if (check == "parallel") {
                const auto segs = c.at("segments");
                const bool got = is_parallel(segment_from_json(space, segs.at(0)),
                                             segment_from_json(space, segs.at(1)), tol);
                match = got == c.at("expected").get<bool>();
                entry["got"] = got;
            } else if (check == "tp") {
                const auto segs = c.at("segments");
                const auto rep = check_tp(segment_from_json(space, segs.at(0)),
                                          segment_from_json(space, segs.at(1)),
                                          segment_from_json(space, segs.at(2)), tol);
                const auto expected = c.at("expected").get<std::string>();  // "holds"/"violated"
                const bool got_violated = rep.violated;
                match = expected == "violated" ? got_violated : (rep.premise && rep.conclusion);
                entry["premise"] = rep.premise;
                entry["conclusion"] = rep.conclusion;
            } else if (check == "npc1") {
                const auto segs = c.at("segments");
                const auto rep = check_npc1(segment_from_json(space, segs.at(0)),
                                            segment_from_json(space, segs.at(1)),
                                            c.value("t_samples", 11u), tol);
                match = rep.applicable && rep.pass == c.at("expected").get<bool>();
                entry["max_violation"] = rep.max_violation;
            } else if (check == "npc2" || check == "npc3") {
                const auto segs = c.at("segments");
                const auto s1 = segment_from_json(space, segs.at(0));
                const auto s2 = segment_from_json(space, segs.at(1));
                const auto rep = check == "npc2" ? check_npc2(s1, s2, tol) : check_npc3(s1, s2, tol);
                if (c.at("expected").is_string()) {  // "precondition-unmet"
                    match = !rep.applicable;
                } else {
                    match = rep.applicable && rep.pass == c.at("expected").get<bool>();
                }
                entry["applicable"] = rep.applicable;
                entry["residual"] = rep.residual;
            } else if (check == "parallel-perp") {
                const auto segs = c.at("segments");
                const bool got = is_parallel_perp(segment_from_json(space, segs.at(0)),
                                                  segment_from_json(space, segs.at(1)), tol);
                match = got == c.at("expected").get<bool>();
                entry["got"] = got;
            } else {
                entry["error"] = "unknown check kind";
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

}  // namespace grouplab::geometry
