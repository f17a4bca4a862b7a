#pragma once

/**
 * @file spaces.hpp
 * @brief Points, geodesic segments, distances and midpoints in l_q^d and
 *        in the glued-square complex.
 *
 * The glued-square space is the unit square A(0,0) B(1,0) C(1,1) D(0,1)
 * with a right-isosceles flap of leg 1 glued along the diagonal from B to
 * D. Flap points are stored in planar chart coordinates with the apex at
 * (1,1); the chart shares the diagonal pointwise with the square. Cross-
 * chart distances unfold the flap across the diagonal line to the side
 * opposite the square point, which turns every geodesic into a straight
 * planar segment; both charts are convex, so same-chart distances are
 * Euclidean.
 */

#include <cstdint>
#include <string>
#include <vector>

namespace grouplab::geometry {

enum class SpaceKind { Lq, GluedSquare };
enum class Chart { Square, Flap };

struct SpaceRef {
    SpaceKind kind = SpaceKind::Lq;
    double q = 2.0;       // lq only; must lie in (1, infinity)
    std::uint32_t d = 2;  // lq only

    bool operator==(const SpaceRef& o) const;
};

SpaceRef lq_space(double q, std::uint32_t d);
SpaceRef glued_square_space();

struct SpacePoint {
    SpaceRef space;
    std::vector<double> coords;       // length d for lq, length 2 for glued
    Chart chart = Chart::Square;      // glued only
};

SpacePoint lq_point(double q, std::vector<double> coords);
/// Validates chart membership; points on the shared diagonal are
/// canonicalized to the square chart.
SpacePoint glued_point(Chart chart, double x, double y);

struct Segment {
    SpacePoint start, end;
};

Segment make_segment(SpacePoint start, SpacePoint end);

double distance(const SpacePoint& x, const SpacePoint& y);

/// The point dividing [start, end] internally at ratio t : (1-t).
SpacePoint midpoint(const Segment& seg, double t);
inline SpacePoint midpoint(const Segment& seg) { return midpoint(seg, 0.5); }

/// Named vertices of the glued complex: A, B, C, D on the square and the
/// flap apex E.
SpacePoint glued_vertex(char name);

}  // namespace grouplab::geometry
