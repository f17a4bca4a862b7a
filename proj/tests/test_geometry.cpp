#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "grouplab/predicates.hpp"
#include "grouplab/rng.hpp"
#include "mesh_oracle.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

using namespace grouplab;
using namespace grouplab::geometry;

namespace {

SpacePoint random_lq_point(double q, std::uint32_t d, SplitMix64& rng, double scale = 3.0) {
    std::vector<double> c(d);
    for (auto& x : c) x = scale * rng.next_gaussian();
    return lq_point(q, std::move(c));
}

SpacePoint random_glued_point(SplitMix64& rng) {
    for (;;) {
        const double x = rng.next_double(), y = rng.next_double();
        if (rng.next_below(2) == 0) return glued_point(Chart::Square, x, y);
        if (x + y >= 1.0 + 1e-6) return glued_point(Chart::Flap, x, y);
    }
}

SpacePoint translate(const SpacePoint& p, const std::vector<double>& v) {
    std::vector<double> c = p.coords;
    for (std::size_t k = 0; k < c.size(); ++k) c[k] += v[k];
    SpacePoint out = p;
    out.coords = std::move(c);
    return out;
}

}  // namespace

TEST_CASE("lq distances and validation") {
    const auto x = lq_point(3.0, {0, 0, 0});
    const auto y = lq_point(3.0, {1, 1, 1});
    CHECK(distance(x, x) == 0.0);
    CHECK(distance(x, y) == doctest::Approx(std::pow(3.0, 1.0 / 3.0)).epsilon(1e-14));

    CHECK(distance(lq_point(1.5, {0, 0}), lq_point(1.5, {3, 4})) ==
          doctest::Approx(std::pow(std::pow(3, 1.5) + std::pow(4, 1.5), 1 / 1.5)));

    CHECK_THROWS_AS(lq_space(1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(lq_space(0.5, 2), std::invalid_argument);
    CHECK_THROWS_AS(lq_space(std::numeric_limits<double>::infinity(), 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(distance(x, lq_point(2.0, {0, 0, 0})), std::invalid_argument);
}

TEST_CASE("lq midpoints divide at the stated ratio") {
    for (const double q : {1.5, 2.0, 3.0}) {
        const auto seg = make_segment(lq_point(q, {0, 0}), lq_point(q, {2, 0}));
        CHECK(midpoint(seg, 0.0).coords == seg.start.coords);
        CHECK(midpoint(seg, 1.0).coords == seg.end.coords);
        CHECK(midpoint(seg, 0.5).coords == std::vector<double>{1, 0});
        CHECK_THROWS_AS(midpoint(seg, 1.5), std::invalid_argument);
    }
    SplitMix64 rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const double q = 1.2 + 2.5 * rng.next_double();
        const auto a = random_lq_point(q, 3, rng);
        const auto b = random_lq_point(q, 3, rng);
        const auto seg = make_segment(a, b);
        const double t = rng.next_double();
        CHECK(distance(a, midpoint(seg, t)) ==
              doctest::Approx(t * distance(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("glued-square vertex distances") {
    const auto A = glued_vertex('A'), B = glued_vertex('B'), C = glued_vertex('C'),
               D = glued_vertex('D'), E = glued_vertex('E');
    CHECK(distance(A, E) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(distance(D, E) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(distance(C, B) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(distance(B, D) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(distance(C, E) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(distance(E, E) == 0.0);

    // chart rules
    CHECK(glued_point(Chart::Flap, 0.5, 0.5).chart == Chart::Square);  // canonicalized
    CHECK_THROWS_AS(glued_point(Chart::Flap, 0.2, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(glued_point(Chart::Square, 1.5, 0.0), std::invalid_argument);
}

TEST_CASE("glued-square distances agree with the mesh oracle") {
    const char names[] = {'A', 'B', 'C', 'D', 'E'};
    for (const char a : names)
        for (const char b : names) {
            const double closed = distance(glued_vertex(a), glued_vertex(b));
            const double mesh = oracle::mesh_distance(glued_vertex(a), glued_vertex(b));
            CHECK(std::abs(closed - mesh) <= 1e-2);
            CHECK(closed <= mesh + 1e-12);  // the mesh path is admissible
        }
    SplitMix64 rng(9);
    for (int trial = 0; trial < 300; ++trial) {
        const auto x = random_glued_point(rng);
        const auto y = random_glued_point(rng);
        const double closed = distance(x, y);
        CHECK(std::abs(closed - oracle::mesh_distance(x, y)) <= 1e-2);
        CHECK(closed <= oracle::mesh_distance(x, y) + 1e-12);
    }
    // triangle inequality across all vertex triples
    for (const char a : names)
        for (const char b : names)
            for (const char c : names)
                CHECK(distance(glued_vertex(a), glued_vertex(c)) <=
                      distance(glued_vertex(a), glued_vertex(b)) +
                          distance(glued_vertex(b), glued_vertex(c)) + 1e-12);
}

TEST_CASE("glued-square midpoints follow arc length") {
    const auto A = glued_vertex('A'), E = glued_vertex('E');
    const auto mid = midpoint(make_segment(A, E));
    CHECK(mid.chart == Chart::Square);
    CHECK(mid.coords[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mid.coords[1] == doctest::Approx(0.5).epsilon(1e-12));

    SplitMix64 rng(10);
    for (int trial = 0; trial < 200; ++trial) {
        const auto x = random_glued_point(rng);
        const auto y = random_glued_point(rng);
        const auto seg = make_segment(x, y);
        for (const double t : {0.25, 0.5, 0.75}) {
            const auto m = midpoint(seg, t);
            CHECK(distance(x, m) == doctest::Approx(t * distance(x, y)).epsilon(1e-9));
            CHECK(distance(m, y) ==
                  doctest::Approx((1 - t) * distance(x, y)).epsilon(1e-9));
        }
    }
}

TEST_CASE("parallelism on the remark triple") {
    const auto A = glued_vertex('A'), B = glued_vertex('B'), C = glued_vertex('C'),
               D = glued_vertex('D'), E = glued_vertex('E');
    const auto AB = make_segment(A, B), DC = make_segment(D, C), EB = make_segment(E, B);

    const auto b1 = parallel_breakdown(AB, DC, 1e-6);
    CHECK(b1.parallel);
    CHECK(b1.d_start == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(b1.d_end == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(b1.d_mid == doctest::Approx(1.0).epsilon(1e-9));

    const auto b2 = parallel_breakdown(DC, EB, 1e-6);
    CHECK(b2.parallel);
    CHECK(b2.d_start == doctest::Approx(1.0).epsilon(1e-9));   // d(D, E)
    CHECK(b2.d_end == doctest::Approx(1.0).epsilon(1e-9));     // d(C, B)
    CHECK(b2.d_mid == doctest::Approx(1.0).epsilon(1e-9));     // crosses at (1/2, 1/2)

    CHECK_FALSE(is_parallel(AB, EB, 1e-6));  // d(A, E) = sqrt(2), d(B, B) = 0

    // the violation is stable across the tolerance range
    for (const double tol : {1e-9, 1e-6, 1e-3}) {
        const auto tp = check_tp(AB, DC, EB, tol);
        CHECK(tp.premise);
        CHECK_FALSE(tp.conclusion);
        CHECK(tp.violated);
    }

    // reflexivity: every segment is parallel to itself
    CHECK(is_parallel(AB, AB, 1e-12));
    CHECK(is_parallel(EB, EB, 1e-12));
    CHECK(check_tp(AB, AB, AB, 1e-9).conclusion);
}

TEST_CASE("parallelism is reflexive, symmetric, and transitive on lq translates") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const double q = (trial % 2) ? 2.0 : 1.5 + rng.next_double() * 2;
        const auto a = random_lq_point(q, 3, rng);
        const auto b = random_lq_point(q, 3, rng);
        const auto s1 = make_segment(a, b);
        std::vector<double> v1(3), v2(3);
        for (auto& x : v1) x = rng.next_gaussian();
        for (auto& x : v2) x = rng.next_gaussian();
        const auto s2 = make_segment(translate(a, v1), translate(b, v1));
        const auto s3 = make_segment(translate(s2.start, v2), translate(s2.end, v2));

        CHECK(is_parallel(s1, s1, 1e-12));
        CHECK(is_parallel(s1, s2, 1e-9));
        CHECK(is_parallel(s2, s1, 1e-9));
        const auto tp = check_tp(s1, s2, s3, 1e-9);
        CHECK(tp.premise);
        CHECK(tp.conclusion);
        CHECK_FALSE(tp.violated);
    }
}

TEST_CASE("a parallel segment out of a shared start point pins the endpoint") {
    SplitMix64 rng(12);
    for (const double q : {1.5, 2.0, 3.0}) {
        for (int trial = 0; trial < 50; ++trial) {
            const auto x = random_lq_point(q, 3, rng);
            const auto y = random_lq_point(q, 3, rng);
            const auto s1 = make_segment(x, y);
            CHECK(is_parallel(s1, make_segment(x, y), 1e-12));
            std::vector<double> delta(3);
            for (auto& v : delta) v = rng.next_gaussian();
            const double norm = std::abs(delta[0]) + std::abs(delta[1]) + std::abs(delta[2]);
            if (norm < 1e-3) continue;
            CHECK_FALSE(is_parallel(s1, make_segment(x, translate(y, delta)), 1e-9));
        }
    }
}

TEST_CASE("parallelism is preserved by isometries") {
    SplitMix64 rng(13);
    // rotations and translations of the Euclidean plane
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = random_lq_point(2.0, 2, rng);
        const auto b = random_lq_point(2.0, 2, rng);
        std::vector<double> v{rng.next_gaussian(), rng.next_gaussian()};
        const auto s1 = make_segment(a, b);
        const auto s2 = make_segment(translate(a, v), translate(b, v));
        REQUIRE(is_parallel(s1, s2, 1e-9));

        const double ang = rng.next_range(0, 6.28318);
        const double refl = rng.next_below(2) ? -1.0 : 1.0;
        std::vector<double> shift{rng.next_gaussian(), rng.next_gaussian()};
        const auto iso = [&](const SpacePoint& p) {
            const double x = p.coords[0], y = refl * p.coords[1];
            return lq_point(2.0, {std::cos(ang) * x - std::sin(ang) * y + shift[0],
                                  std::sin(ang) * x + std::cos(ang) * y + shift[1]});
        };
        CHECK(is_parallel(make_segment(iso(s1.start), iso(s1.end)),
                          make_segment(iso(s2.start), iso(s2.end)), 1e-9));
    }
    // coordinate permutations and sign flips are isometries of every lq
    for (const double q : {1.5, 3.0}) {
        for (int trial = 0; trial < 100; ++trial) {
            const auto a = random_lq_point(q, 3, rng);
            const auto b = random_lq_point(q, 3, rng);
            std::vector<double> v{rng.next_gaussian(), rng.next_gaussian(),
                                  rng.next_gaussian()};
            const auto s1 = make_segment(a, b);
            const auto s2 = make_segment(translate(a, v), translate(b, v));
            const std::uint32_t perm[3] = {1, 2, 0};
            const double signs[3] = {1.0, -1.0, 1.0};
            const auto iso = [&](const SpacePoint& p) {
                std::vector<double> c(3);
                for (int k = 0; k < 3; ++k) c[k] = signs[k] * p.coords[perm[k]];
                return lq_point(q, std::move(c));
            };
            CHECK(is_parallel(make_segment(iso(s1.start), iso(s1.end)),
                              make_segment(iso(s2.start), iso(s2.end)), 1e-9));
        }
    }
}

TEST_CASE("midpoint convexity inequalities on random segment pairs") {
    SplitMix64 rng(14);
    for (const double q : {1.5, 2.0, 3.0}) {
        for (const std::uint32_t d : {2u, 3u}) {
            for (int trial = 0; trial < 200; ++trial) {
                const auto x = random_lq_point(q, d, rng);
                const auto y = random_lq_point(q, d, rng);
                const auto x2 = random_lq_point(q, d, rng);
                // construct y2 so that d(y, y2) = d(x, x2)
                std::vector<double> u(d);
                for (auto& v : u) v = rng.next_gaussian();
                const double target = distance(x, x2);
                const double unorm = distance(lq_point(q, std::vector<double>(d, 0.0)),
                                              lq_point(q, u));
                std::vector<double> scaled(d);
                for (std::uint32_t k = 0; k < d; ++k) scaled[k] = u[k] * target / unorm;
                const auto y2 = translate(y, scaled);

                const auto s1 = make_segment(x, y), s2 = make_segment(x2, y2);
                const auto r1 = check_npc1(s1, s2, 11, 1e-9);
                CHECK(r1.applicable);
                CHECK(r1.pass);
                const auto r2 = check_theta_npc1(s1, s2, 11, 1e-9);
                CHECK(r2.pass);
                // the default theta is the identity hook
                const auto r3 =
                    check_theta_npc1(s1, s2, 11, 1e-9, [](double v) { return v; });
                CHECK(r3.max_violation == r2.max_violation);
            }
        }
    }

    // precondition unmet is reported, not silently passed
    const auto bad = check_npc1(
        make_segment(lq_point(2, {0, 0}), lq_point(2, {1, 0})),
        make_segment(lq_point(2, {0, 5}), lq_point(2, {9, 9})), 11, 1e-9);
    CHECK_FALSE(bad.applicable);
    CHECK(bad.note.find("precondition") != std::string::npos);
}

TEST_CASE("a bent polyline is caught as a negative control") {
    // curve2 traces a tent over the straight translate: equal endpoints,
    // bulging middle
    const std::uint32_t samples = 11;
    std::vector<SpacePoint> c1, c2;
    for (std::uint32_t k = 0; k < samples; ++k) {
        const double t = static_cast<double>(k) / (samples - 1);
        c1.push_back(lq_point(2, {2 * t, 0.0}));
        const double bulge = 1.0 + (t < 0.5 ? 2 * t : 2 * (1 - t));
        c2.push_back(lq_point(2, {2 * t, bulge}));
    }
    const auto rep = check_npc1_curves(c1, c2, 1e-9);
    CHECK(rep.applicable);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_violation == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("parallelism implications NPC2 and NPC3") {
    SplitMix64 rng(15);
    for (const double q : {1.5, 2.0, 3.0}) {
        for (int trial = 0; trial < 100; ++trial) {
            const auto a = random_lq_point(q, 2, rng);
            const auto b = random_lq_point(q, 2, rng);
            std::vector<double> v{rng.next_gaussian(), rng.next_gaussian()};
            const auto s1 = make_segment(a, b);
            const auto s2 = make_segment(translate(a, v), translate(b, v));
            const auto r2 = check_npc2(s1, s2, 1e-9);
            CHECK(r2.applicable);
            CHECK(r2.pass);

            // concatenation: [x, y] followed by [y, 2y - x]
            std::vector<double> cont(2);
            for (int k = 0; k < 2; ++k) cont[k] = 2 * b.coords[k] - a.coords[k];
            const auto s3 = make_segment(b, lq_point(q, cont));
            const auto r3 = check_npc3(s1, s3, 1e-9);
            CHECK(r3.applicable);
            CHECK(r3.pass);
        }
    }

    const auto straight1 = make_segment(lq_point(2, {0, 0}), lq_point(2, {1, 0}));
    const auto straight2 = make_segment(lq_point(2, {1, 0}), lq_point(2, {2, 0}));
    const auto r = check_npc3(straight1, straight2, 1e-9);
    CHECK(r.applicable);
    CHECK(r.pass);

    const auto bent = make_segment(lq_point(2, {1, 0}), lq_point(2, {1, 1}));
    const auto r_unmet = check_npc3(straight1, bent, 1e-9);
    CHECK_FALSE(r_unmet.applicable);
    CHECK(r_unmet.note.find("precondition") != std::string::npos);
}

TEST_CASE("distance-realizing parallelism") {
    const auto s1 = make_segment(lq_point(2, {0, 0}), lq_point(2, {2, 0}));
    const auto s2 = make_segment(lq_point(2, {0, 1}), lq_point(2, {2, 1}));
    CHECK(is_parallel_perp(s1, s2, 1e-9));

    // translate with a component along the segment: the interior minimum
    // beats the start-to-start distance
    const auto s3 = make_segment(lq_point(2, {1, 1}), lq_point(2, {3, 1}));
    CHECK(is_parallel(s1, s3, 1e-9));
    CHECK_FALSE(is_parallel_perp(s1, s3, 1e-9));
    CHECK(min_segment_distance(s1, s3) == doctest::Approx(1.0).epsilon(1e-8));

    CHECK(is_parallel_perp(s1, s1, 1e-9));

    const auto crossing = make_segment(lq_point(2, {1, -1}), lq_point(2, {1, 1}));
    CHECK(min_segment_distance(s1, crossing) == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("bundled corpus runs clean and mismatches are reported") {
    const char* dir = std::getenv("GROUPLAB_SCENARIOS");
    REQUIRE_MESSAGE(dir != nullptr, "GROUPLAB_SCENARIOS must point at the scenarios directory");
    std::ifstream in(std::string(dir) + "/glued-square-corpus.json");
    REQUIRE(in.good());
    nlohmann::json corpus;
    in >> corpus;

    const auto res = run_geometry_corpus(corpus);
    CHECK(res.total == corpus.size());
    CHECK(res.all_match());

    // flip one expectation: the corresponding id must be listed
    nlohmann::json broken = corpus;
    broken[0]["expected"] = broken[0]["expected"].get<double>() + 0.5;
    const auto res2 = run_geometry_corpus(broken);
    REQUIRE(res2.failing_ids.size() == 1);
    CHECK(res2.failing_ids[0] == broken[0]["id"].get<std::string>());

    CHECK(run_geometry_corpus(nlohmann::json::array()).total == 0);
    CHECK(run_geometry_corpus(nlohmann::json::array()).all_match());
}
