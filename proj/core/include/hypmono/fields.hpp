#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "hypmono/algebra.hpp"
#include "hypmono/dual.hpp"
#include "hypmono/geometry.hpp"

namespace hypmono {

struct MonopoleParams {
    double m = 1.0;
    double alpha() const { return m + 1.0; }
};

// north: regular on theta = 0 (string along theta = pi); south: the reverse.
// base: the rotated frame in which the hedgehog profiles are written; singular on the whole axis.
enum class GaugePatch { north, south, base };

template <class T>
struct Config {
    Alg<T> phi;
    std::array<Alg<T>, 3> A;  // components on dr, dtheta, dchi
};
using ConfigValue = Config<double>;

// Closed-form configurations are evaluated with dual-number coordinates so that
// jets carry exact derivatives.
using ConfigFn = std::function<Config<Dual3>(const Polar<Dual3>&)>;

template <class T>
T chakrabarti_h(const T& r, double alpha) {
    using std::expm1;
    const double x = alpha * value(r);
    if (x < 1e-2) {
        const T r2 = r * r;
        const double a2 = alpha * alpha, a4 = a2 * a2, a6 = a4 * a2;
        return r * ((a2 - 1.0) / 3.0 - r2 * ((a4 - 1.0) / 45.0 - r2 * (2.0 * (a6 - 1.0) / 945.0)));
    }
    return (alpha - 1.0) + 2.0 * alpha / expm1(2.0 * alpha * r) - 2.0 / expm1(2.0 * r);
}

template <class T>
T chakrabarti_w(const T& r, double alpha) {
    using std::exp;
    using std::expm1;
    if (value(r) == 0.0) return T(1.0);
    return alpha * exp((1.0 - alpha) * r) * (-expm1(-2.0 * r)) / (-expm1(-2.0 * alpha * r));
}

template <class T>
Config<T> chakrabarti(const MonopoleParams& mp, const Polar<T>& p, GaugePatch patch) {
    using std::cos;
    using std::sin;
    const double a = mp.alpha();
    const T h = chakrabarti_h(p.r, a);
    const T w = chakrabarti_w(p.r, a);
    const T ct = cos(p.theta), st = sin(p.theta);
    const T zero(0.0);
    Config<T> c;
    c.phi = Alg<T>(h, zero, zero);
    c.A[0] = Alg<T>(zero, zero, zero);
    if (patch == GaugePatch::base) {
        c.A[1] = Alg<T>(zero, zero, w);
        c.A[2] = Alg<T>(-ct, w * st, zero);
        return c;
    }
    const T cc = cos(p.chi), sc = sin(p.chi);
    if (patch == GaugePatch::north) {
        c.A[1] = Alg<T>(zero, w * sc, w * cc);
        c.A[2] = Alg<T>(1.0 - ct, w * st * cc, -(w * st * sc));
    } else {
        c.A[1] = Alg<T>(zero, -(w * sc), w * cc);
        c.A[2] = Alg<T>(-1.0 - ct, w * st * cc, w * st * sc);
    }
    return c;
}

// Gauge action of g = exp(s e1): Phi -> Ad_g Phi, A -> Ad_g A - ds e1, with s = n chi.
template <class T>
Config<T> rotate_gauge(const Config<T>& c, const T& chi, double n) {
    using std::cos;
    using std::sin;
    const T s = n * chi;
    const T cs = cos(s), sn = sin(s);
    auto ad = [&](const Alg<T>& v) { return Alg<T>(v[0], cs * v[1] - sn * v[2], sn * v[1] + cs * v[2]); };
    Config<T> out;
    out.phi = ad(c.phi);
    for (int mu = 0; mu < 3; ++mu) out.A[mu] = ad(c.A[mu]);
    out.A[2][0] = out.A[2][0] - n;
    return out;
}

// Throws std::domain_error outside the overlap band theta in (pi/4, 3pi/4).
template <class T>
Config<T> string_inversion(const Config<T>& c, const Polar<T>& p, GaugePatch from, GaugePatch to) {
    const double th = value(p.theta);
    if (!(th > 0.25 * std::numbers::pi && th < 0.75 * std::numbers::pi))
        throw std::domain_error("string_inversion: point outside the patch overlap");
    if (from == to) return c;
    if (from == GaugePatch::base || to == GaugePatch::base)
        throw std::invalid_argument("string_inversion: only north/south patches");
    return rotate_gauge(c, p.chi, from == GaugePatch::north ? 2.0 : -2.0);
}

// Abelian coefficient of dchi for a Dirac term with the given string side.
template <class T>
T dirac_dchi(const T& theta, GaugePatch patch) {
    using std::cos;
    return (patch == GaugePatch::north ? 1.0 : -1.0) - cos(theta);
}

// Multi-center Dirac configuration evaluated in the chart of center i.
// Term i uses `patch`; other terms put their strings on the far side from x_i.
// Throws std::domain_error at a center.
template <class T>
Config<T> dirac_infinity(const MonopoleParams& mp, const CenterSet& cs, int i, const Polar<T>& p,
                         GaugePatch patch) {
    using std::expm1;
    T higgs(mp.m);
    T adchi(0.0);
    for (int j = 0; j < cs.k(); ++j) {
        const Polar<T> q = transfer_chart(cs, i, j, p);
        if (value(q.r) <= 0.0) throw std::domain_error("dirac_infinity: evaluation at a center");
        higgs = higgs - 2.0 / expm1(2.0 * q.r);  // 1 - coth r
        GaugePatch side = patch;
        if (j != i) side = cs.s[j] < cs.s[i] ? GaugePatch::north : GaugePatch::south;
        adchi = adchi + dirac_dchi(q.theta, side);
    }
    const T zero(0.0);
    Config<T> c;
    c.phi = Alg<T>(higgs, zero, zero);
    c.A[0] = Alg<T>(zero, zero, zero);
    c.A[1] = Alg<T>(zero, zero, zero);
    c.A[2] = Alg<T>(adchi, zero, zero);
    return c;
}

// First jet of a configuration in chart coordinates: d[mu] = d/dx^mu, dA[mu][nu] = d_mu A_nu.
struct FieldJet {
    AlgebraElement phi;
    std::array<AlgebraElement, 3> dphi;
    std::array<AlgebraElement, 3> A;
    std::array<std::array<AlgebraElement, 3>, 3> dA;
};

FieldJet jet_from_dual(const Config<Dual3>& c);
FieldJet analytic_jet(const ConfigFn& f, const PolarPoint& p);
// Second-order central differences of the values only.
FieldJet grid_jet(const ConfigFn& f, const PolarPoint& p, double h);

using OneForm = std::array<AlgebraElement, 3>;
using TwoForm = std::array<AlgebraElement, 3>;  // (theta chi, chi r, r theta)

OneForm covariant_dphi(const FieldJet& j);
TwoForm field_strength(const FieldJet& j);
OneForm bogomolny_residual(const FieldJet& j, const PolarPoint& p);

double norm_one_form(const OneForm& a, const PolarPoint& p);
double norm_two_form(const TwoForm& w, const PolarPoint& p);
// Metric pairing <a, b> of two algebra-valued 1-forms.
double pair_one_forms(const OneForm& a, const OneForm& b, const PolarPoint& p);

struct FieldSample {
    PolarPoint p;
    double phi_norm, F_norm, dphi_norm, residual_norm;
};
FieldSample sample_field(const FieldJet& j, const PolarPoint& p);

ConfigFn chakrabarti_fn(const MonopoleParams& mp, GaugePatch patch);

}  // namespace hypmono
