#include "hypmono/fields.hpp"

namespace hypmono {

FieldJet jet_from_dual(const Config<Dual3>& c) {
    FieldJet j;
    for (int a = 0; a < 3; ++a) {
        j.phi[a] = c.phi[a].v;
        for (int mu = 0; mu < 3; ++mu) {
            j.dphi[mu][a] = c.phi[a].d[mu];
            j.A[mu][a] = c.A[mu][a].v;
            for (int nu = 0; nu < 3; ++nu) j.dA[nu][mu][a] = c.A[mu][a].d[nu];
        }
    }
    return j;
}

FieldJet analytic_jet(const ConfigFn& f, const PolarPoint& p) {
    Polar<Dual3> q{Dual3::variable(p.r, 0), Dual3::variable(p.theta, 1), Dual3::variable(p.chi, 2)};
    return jet_from_dual(f(q));
}

namespace {
ConfigValue eval_value(const ConfigFn& f, const PolarPoint& p) {
    Config<Dual3> c = f(Polar<Dual3>{Dual3(p.r), Dual3(p.theta), Dual3(p.chi)});
    ConfigValue v;
    v.phi = value_of(c.phi);
    for (int mu = 0; mu < 3; ++mu) v.A[mu] = value_of(c.A[mu]);
    return v;
}
}  // namespace

FieldJet grid_jet(const ConfigFn& f, const PolarPoint& p, double h) {
    FieldJet j;
    ConfigValue c = eval_value(f, p);
    j.phi = c.phi;
    j.A = c.A;
    for (int nu = 0; nu < 3; ++nu) {
        PolarPoint pp = p, pm = p;
        (nu == 0 ? pp.r : nu == 1 ? pp.theta : pp.chi) += h;
        (nu == 0 ? pm.r : nu == 1 ? pm.theta : pm.chi) -= h;
        ConfigValue cp = eval_value(f, pp), cm = eval_value(f, pm);
        j.dphi[nu] = (cp.phi - cm.phi) * (0.5 / h);
        for (int mu = 0; mu < 3; ++mu) j.dA[nu][mu] = (cp.A[mu] - cm.A[mu]) * (0.5 / h);
    }
    return j;
}

OneForm covariant_dphi(const FieldJet& j) {
    OneForm d;
    for (int mu = 0; mu < 3; ++mu) d[mu] = j.dphi[mu] + bracket(j.A[mu], j.phi);
    return d;
}

TwoForm field_strength(const FieldJet& j) {
    auto F = [&](int a, int b) { return j.dA[a][b] - j.dA[b][a] + bracket(j.A[a], j.A[b]); };
    return {F(1, 2), F(2, 0), F(0, 1)};
}

OneForm bogomolny_residual(const FieldJet& j, const PolarPoint& p) {
    OneForm d = covariant_dphi(j);
    OneForm sf = star2(field_strength(j), p);
    for (int mu = 0; mu < 3; ++mu) d[mu] -= sf[mu];
    return d;
}

double pair_one_forms(const OneForm& a, const OneForm& b, const PolarPoint& p) {
    const double g = std::sinh(p.r), st = std::sin(p.theta);
    return inner(a[0], b[0]) + inner(a[1], b[1]) / (g * g) + inner(a[2], b[2]) / (g * g * st * st);
}

double norm_one_form(const OneForm& a, const PolarPoint& p) { return std::sqrt(pair_one_forms(a, a, p)); }

double norm_two_form(const TwoForm& w, const PolarPoint& p) {
    return norm_one_form(star2(w, p), p);
}

FieldSample sample_field(const FieldJet& j, const PolarPoint& p) {
    return {p, norm(j.phi), norm_two_form(field_strength(j), p), norm_one_form(covariant_dphi(j), p),
            norm_one_form(bogomolny_residual(j, p), p)};
}

ConfigFn chakrabarti_fn(const MonopoleParams& mp, GaugePatch patch) {
    return [mp, patch](const Polar<Dual3>& q) { return chakrabarti(mp, q, patch); };
}

}  // namespace hypmono
