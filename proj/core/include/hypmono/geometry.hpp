#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace hypmono {

// Geodesic polar coordinates on H^3: ds^2 = dr^2 + sinh^2 r (dtheta^2 + sin^2 theta dchi^2).
template <class T>
struct Polar {
    T r{}, theta{}, chi{};
};
using PolarPoint = Polar<double>;

PolarPoint normalized(PolarPoint p);

// Centers sit on the common z-axis geodesic at signed arclength positions s.
struct CenterSet {
    std::vector<double> s;
    double R = 1.0;

    int k() const { return static_cast<int>(s.size()); }
    // Throws std::invalid_argument if k < 1, R < 1 or some pair is closer than 6R.
    void validate() const;
};

// k centers spaced by `spacing` and centered about the origin.
CenterSet axial_centers(int k, double R, double spacing);

struct CoframeNorms {
    double dr_norm = 1.0;
    double dtheta_norm = 0.0;
    double dchi_norm = 0.0;
};

template <class T>
std::array<T, 4> to_hyperboloid(const Polar<T>& p) {
    using std::cos;
    using std::cosh;
    using std::sin;
    using std::sinh;
    const T sr = sinh(p.r);
    const T st = sin(p.theta);
    return {cosh(p.r), sr * st * cos(p.chi), sr * st * sin(p.chi), sr * cos(p.theta)};
}

// Coordinates of p (given in the chart centered at axial position 0) in the
// chart centered at axial position s. The azimuth is shared by all axial charts.
template <class T>
Polar<T> shift_axial(const Polar<T>& p, double s) {
    using std::asinh;
    using std::atan2;
    using std::cos;
    using std::cosh;
    using std::sin;
    using std::sinh;
    using std::sqrt;
    const T sr = sinh(p.r);
    const T rho = sr * sin(p.theta);
    const T x3 = sr * cos(p.theta);
    const T x0 = cosh(p.r);
    const T z = std::cosh(s) * x3 - std::sinh(s) * x0;
    Polar<T> q;
    q.r = asinh(sqrt(rho * rho + z * z));
    q.theta = atan2(rho, z);
    q.chi = p.chi;
    return q;
}

// Same as shift_axial but between the charts of two centers.
template <class T>
Polar<T> transfer_chart(const CenterSet& c, int from, int to, const Polar<T>& p) {
    if (from == to) return p;
    return shift_axial(p, c.s[to] - c.s[from]);
}

double hyperbolic_distance(const PolarPoint& p, const PolarPoint& q);

// Chart coordinates of a reference-chart point about center i; (0,0,0) at the center.
PolarPoint chart_coordinates(const CenterSet& c, int i, const PolarPoint& p);

// Infinite entries flag the pole (r = 0) or the axis (sin theta = 0).
CoframeNorms coframe_norms(const PolarPoint& p);

double volume_density(const PolarPoint& p);

// Hodge star on coordinate components. 1-forms: (dr, dtheta, dchi);
// 2-forms: (dtheta^dchi, dchi^dr, dr^dtheta); 3-forms: dr^dtheta^dchi.
// V may be a scalar or an algebra element; T is the coordinate scalar.
template <class V, class T>
V star0(const V& f, const Polar<T>& p) {
    using std::sin;
    using std::sinh;
    const T g = sinh(p.r);
    return f * (g * g * sin(p.theta));
}

template <class V, class T>
std::array<V, 3> star1(const std::array<V, 3>& a, const Polar<T>& p) {
    using std::sin;
    using std::sinh;
    const T g = sinh(p.r);
    const T st = sin(p.theta);
    return {a[0] * (g * g * st), a[1] * st, a[2] * (1.0 / st)};
}

template <class V, class T>
std::array<V, 3> star2(const std::array<V, 3>& w, const Polar<T>& p) {
    using std::sin;
    using std::sinh;
    const T g = sinh(p.r);
    const T st = sin(p.theta);
    return {w[0] * (1.0 / (g * g * st)), w[1] * (1.0 / st), w[2] * st};
}

template <class V, class T>
V star3(const V& f, const Polar<T>& p) {
    using std::sin;
    using std::sinh;
    const T g = sinh(p.r);
    return f * (1.0 / (g * g * sin(p.theta)));
}

// Degree-generic form: q = 0, 3 use one component, q = 1, 2 use three.
std::vector<double> hodge_star(const std::vector<double>& comps, int q, const PolarPoint& p);

}  // namespace hypmono
