#include "grouplab/spaces.hpp"

#include <cmath>
#include <stdexcept>

namespace grouplab::geometry {

namespace {

constexpr double kChartEps = 1e-9;

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

// signed side of the gluing line x + y = 1; positive on the C side
double side(const std::vector<double>& c) { return c[0] + c[1] - 1.0; }

std::vector<double> reflect_diag(const std::vector<double>& c) {
    return {1.0 - c[1], 1.0 - c[0]};
}

}  // namespace

bool SpaceRef::operator==(const SpaceRef& o) const {
    if (kind != o.kind) return false;
    if (kind == SpaceKind::GluedSquare) return true;
    return q == o.q && d == o.d;
}

SpaceRef lq_space(double q, std::uint32_t d) {
    if (!(q > 1.0) || !std::isfinite(q))
        throw std::invalid_argument(
            "q must lie in (1, infinity): geodesics are not unique at q = 1 or q = infinity");
    if (d < 1) throw std::invalid_argument("dimension must be positive");
    return SpaceRef{SpaceKind::Lq, q, d};
}

SpaceRef glued_square_space() { return SpaceRef{SpaceKind::GluedSquare, 0.0, 2}; }

SpacePoint lq_point(double q, std::vector<double> coords) {
    SpacePoint pt;
    pt.space = lq_space(q, static_cast<std::uint32_t>(coords.size()));
    for (const double c : coords)
        if (!std::isfinite(c)) throw std::invalid_argument("point coordinates must be finite");
    pt.coords = std::move(coords);
    return pt;
}

SpacePoint glued_point(Chart chart, double x, double y) {
    SpacePoint pt;
    pt.space = glued_square_space();
    pt.coords = {x, y};
    pt.chart = chart;
    if (chart == Chart::Square) {
        if (x < -kChartEps || x > 1 + kChartEps || y < -kChartEps || y > 1 + kChartEps)
            throw std::invalid_argument("square chart point outside [0,1]^2");
    } else {
        // flap chart: triangle with hypotenuse from (1,0) to (0,1), apex (1,1)
        if (side(pt.coords) < -kChartEps || x > 1 + kChartEps || y > 1 + kChartEps)
            throw std::invalid_argument("flap chart point outside the glued triangle");
        if (std::abs(side(pt.coords)) <= kChartEps) pt.chart = Chart::Square;  // canonical
    }
    return pt;
}

SpacePoint glued_vertex(char name) {
    switch (name) {
        case 'A': return glued_point(Chart::Square, 0.0, 0.0);
        case 'B': return glued_point(Chart::Square, 1.0, 0.0);
        case 'C': return glued_point(Chart::Square, 1.0, 1.0);
        case 'D': return glued_point(Chart::Square, 0.0, 1.0);
        case 'E': return glued_point(Chart::Flap, 1.0, 1.0);
        default: throw std::invalid_argument("glued vertex must be one of A, B, C, D, E");
    }
}

Segment make_segment(SpacePoint start, SpacePoint end) {
    if (!(start.space == end.space))
        throw std::invalid_argument("segment endpoints must live in the same space");
    return Segment{std::move(start), std::move(end)};
}

namespace {

double lq_distance(const SpacePoint& x, const SpacePoint& y) {
    double s = 0.0;
    for (std::uint32_t k = 0; k < x.space.d; ++k)
        s += std::pow(std::abs(x.coords[k] - y.coords[k]), x.space.q);
    return std::pow(s, 1.0 / x.space.q);
}

// Development of the flap point for a geodesic from a square point `from`:
// the flap chart already lies on the C side, so reflect when `from` is on
// that side too. Points on the diagonal may use either development.
std::vector<double> develop_flap(const std::vector<double>& from,
                                 const std::vector<double>& flap) {
    return side(from) > 0.0 ? reflect_diag(flap) : flap;
}

double glued_distance(const SpacePoint& x, const SpacePoint& y) {
    if (x.chart == y.chart) return euclid(x.coords, y.coords);
    const SpacePoint& sq = x.chart == Chart::Square ? x : y;
    const SpacePoint& fl = x.chart == Chart::Square ? y : x;
    return euclid(sq.coords, develop_flap(sq.coords, fl.coords));
}

SpacePoint glued_midpoint(const Segment& seg, double t) {
    const SpacePoint& a = seg.start;
    const SpacePoint& b = seg.end;
    const auto interp = [&](const std::vector<double>& u, const std::vector<double>& v,
                            double s) -> std::vector<double> {
        return {(1 - s) * u[0] + s * v[0], (1 - s) * u[1] + s * v[1]};
    };
    if (a.chart == b.chart) {
        const auto c = interp(a.coords, b.coords, t);
        return glued_point(a.chart, c[0], c[1]);
    }
    const bool a_is_square = a.chart == Chart::Square;
    const SpacePoint& sq = a_is_square ? a : b;
    const SpacePoint& fl = a_is_square ? b : a;
    const double s = a_is_square ? t : 1.0 - t;  // parameter from the square end
    const auto dev = develop_flap(sq.coords, fl.coords);
    const auto w = interp(sq.coords, dev, s);
    // crossing parameter of the segment with the gluing line
    const double sa = side(sq.coords), sb = side(dev);
    double cross = 1.0;
    if (sa != sb) cross = sa / (sa - sb);
    if (s <= cross || std::abs(side(w)) <= kChartEps)
        return glued_point(Chart::Square, w[0], w[1]);
    // fold the flap part back into chart coordinates
    const auto folded = side(sq.coords) > 0.0 ? reflect_diag(w) : w;
    return glued_point(Chart::Flap, folded[0], folded[1]);
}

}  // namespace

double distance(const SpacePoint& x, const SpacePoint& y) {
    if (!(x.space == y.space))
        throw std::invalid_argument("distance needs points of the same space");
    return x.space.kind == SpaceKind::Lq ? lq_distance(x, y) : glued_distance(x, y);
}

SpacePoint midpoint(const Segment& seg, double t) {
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("segment parameter must lie in [0, 1]");
    if (seg.start.space.kind == SpaceKind::Lq) {
        std::vector<double> c(seg.start.coords.size());
        for (std::size_t k = 0; k < c.size(); ++k)
            c[k] = (1 - t) * seg.start.coords[k] + t * seg.end.coords[k];
        SpacePoint pt;
        pt.space = seg.start.space;
        pt.coords = std::move(c);
        return pt;
    }
    return glued_midpoint(seg, t);
}

}  // namespace grouplab::geometry
