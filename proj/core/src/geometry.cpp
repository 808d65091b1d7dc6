#include "hypmono/geometry.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace hypmono {

PolarPoint normalized(PolarPoint p) {
    const double two_pi = 2.0 * std::numbers::pi;
    p.chi = std::fmod(p.chi, two_pi);
    if (p.chi < 0) p.chi += two_pi;
    return p;
}

void CenterSet::validate() const {
    if (s.empty()) throw std::invalid_argument("CenterSet: need at least one center");
    if (R < 1.0) throw std::invalid_argument("CenterSet: R must be >= 1");
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (std::abs(s[i] - s[j]) <= 6.0 * R)
                throw std::invalid_argument("CenterSet: centers " + std::to_string(i) + " and " +
                                            std::to_string(j) + " closer than 6R");
}

CenterSet axial_centers(int k, double R, double spacing) {
    CenterSet c;
    c.R = R;
    for (int i = 0; i < k; ++i) c.s.push_back((i - 0.5 * (k - 1)) * spacing);
    return c;
}

double hyperbolic_distance(const PolarPoint& p, const PolarPoint& q) {
    const auto x = to_hyperboloid(p);
    const auto y = to_hyperboloid(q);
    // Minkowski length of the chord, stable for nearby points.
    double s2 = -(x[0] - y[0]) * (x[0] - y[0]);
    for (int i = 1; i < 4; ++i) s2 += (x[i] - y[i]) * (x[i] - y[i]);
    if (s2 <= 0) return 0.0;
    return 2.0 * std::asinh(0.5 * std::sqrt(s2));
}

PolarPoint chart_coordinates(const CenterSet& c, int i, const PolarPoint& p) {
    if (i < 0 || i >= c.k()) throw std::out_of_range("chart_coordinates: bad center index");
    PolarPoint q = shift_axial(p, c.s[i]);
    if (q.r == 0.0) return {0.0, 0.0, 0.0};
    return normalized(q);
}

CoframeNorms coframe_norms(const PolarPoint& p) {
    const double inf = std::numeric_limits<double>::infinity();
    const double g = std::sinh(p.r);
    const double st = std::sin(p.theta);
    CoframeNorms n;
    n.dtheta_norm = g > 0 ? 1.0 / g : inf;
    n.dchi_norm = (g > 0 && st != 0.0) ? 1.0 / (g * std::abs(st)) : inf;
    return n;
}

double volume_density(const PolarPoint& p) {
    const double g = std::sinh(p.r);
    return g * g * std::sin(p.theta);
}

std::vector<double> hodge_star(const std::vector<double>& comps, int q, const PolarPoint& p) {
    switch (q) {
        case 0:
            if (comps.size() != 1) break;
            return {star0(comps[0], p)};
        case 1: case 2: {
            if (comps.size() != 3) break;
            std::array<double, 3> a{comps[0], comps[1], comps[2]};
            auto b = q == 1 ? star1(a, p) : star2(a, p);
            return {b[0], b[1], b[2]};
        }
        case 3:
            if (comps.size() != 1) break;
            return {star3(comps[0], p)};
        default:
            break;
    }
    throw std::invalid_argument("hodge_star: degree/component mismatch");
}

}  // namespace hypmono
