// One PASS/FAIL line per acceptance criterion. Arguments select criteria by number.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hypmono/gluing.hpp"
#include "hypmono/radial.hpp"
#include "hypmono/spectral.hpp"
#include "hypmono/weighted.hpp"
#include "support/oracles.hpp"

using namespace hypmono;

namespace {

constexpr double pi = std::numbers::pi;

struct Verdict {
    bool pass = true;
    std::ostringstream detail;
    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::string fmt(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.6g", v);
    return b;
}

GaugePatch hemisphere(double theta) { return theta < 0.5 * pi ? GaugePatch::north : GaugePatch::south; }

void exact_residual(Verdict& v) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ur(0.05, 10.0), ut(0.02, pi - 0.02), uc(0, 2 * pi);
    for (double m : {0.5, 1.0, 2.7}) {
        double worst = 0.0;
        std::vector<PolarPoint> pts;
        for (int n = 0; n < 1000; ++n) {
            const PolarPoint p{ur(rng), ut(rng), uc(rng)};
            pts.push_back(p);
            const FieldJet j = analytic_jet(chakrabarti_fn({m}, hemisphere(p.theta)), p);
            worst = std::max(worst, norm_one_form(bogomolny_residual(j, p), p));
        }
        std::vector<double> grid;
        for (double h : {0.02, 0.01, 0.005}) {
            double g = 0.0;
            for (int n = 0; n < 50; ++n) {
                const PolarPoint q{0.5 + 0.1 * n, pts[n].theta, pts[n].chi};
                const FieldJet j = grid_jet(chakrabarti_fn({m}, hemisphere(q.theta)), q, h);
                g = std::max(g, norm_one_form(bogomolny_residual(j, q), q));
            }
            grid.push_back(g);
        }
        const double order = oracle::order(grid[0], grid[1], grid[2]);
        v.detail << " m=" << m << ": max " << fmt(worst) << ", grid order " << fmt(order) << ";";
        v.check(worst <= 1e-12, "analytic residual at m=" + fmt(m));
        v.check(order >= 1.9, "grid order at m=" + fmt(m));
    }
}

void charge(Verdict& v) {
    for (double m : {0.5, 1.0, 2.7}) {
        const ChargeMass c = charge_and_mass(chakrabarti_fn({m}, GaugePatch::north));
        v.detail << " m=" << m << ": k " << fmt(c.k_est) << ", m " << fmt(c.m_est) << ";";
        v.check(std::abs(c.k_est - 1.0) <= 1e-3, "k at m=" + fmt(m));
        v.check(std::abs(c.m_est - m) <= 1e-3, "m at m=" + fmt(m));
    }
}

void gluing_bound(Verdict& v) {
    double lo = INFINITY, hi = 0.0;
    for (double R : {1.0, 2.0, 3.0, 4.0}) {
        const BoundScan s = pointwise_bound_scan(single_center(1.0, R, 0.25), 0, 40, 40);
        v.detail << " R=" << R << ": K " << fmt(s.K) << (s.resolved ? "" : " (unresolved)") << ";";
        v.check(s.resolved, "scan resolution at R=" + fmt(R));
        lo = std::min(lo, s.K);
        hi = std::max(hi, s.K);
    }
    v.detail << " ratio " << fmt(hi / lo);
    v.check(lo > 0.0 && hi / lo < 2.0, "K ratio");
}

void residual_decay(Verdict& v) {
    const SlopeFit f = residual_decay_fit(1.0, 0.25, {1, 2, 3, 4, 5});
    for (std::size_t i = 0; i < f.R.size(); ++i) v.detail << " R=" << f.R[i] << ": " << fmt(f.norm[i]) << ";";
    v.detail << " slope " << fmt(f.slope);
    v.check(!f.below_floor, "norm below quadrature floor");
    v.check(f.slope <= -1.3, "slope");
}

RadialOperatorSpec op(RadialKind k, double beta, double lambda) {
    RadialOperatorSpec s;
    s.kind = k;
    s.beta = beta;
    s.lambda = lambda;
    return s;
}

void spectrum_bottoms(Verdict& v) {
    struct Case {
        RadialOperatorSpec s;
        double target, tol;
    };
    const std::vector<Case> cases{{op(RadialKind::prototype, 0.5, 0.0), 1.0, 0.02},
                                  {op(RadialKind::D1, 0.5, 2.0), 0.25, 0.05},
                                  {op(RadialKind::D0, 0.25, 0.0), 1.5625, 0.05},
                                  {op(RadialKind::D3_floer, 0.5, 2.0), 0.25, 0.05}};
    for (const auto& c : cases) {
        const SpectrumEstimate e = estimate_spectrum(c.s);
        v.detail << " " << to_string(c.s.kind) << "(beta=" << c.s.beta << "): " << fmt(e.bottom) << ";";
        v.check(e.converged, to_string(c.s.kind) + " extrapolation");
        v.check(std::abs(e.bottom - c.target) <= c.tol * c.target, to_string(c.s.kind) + " bottom");
    }
}

void point_spectrum(Verdict& v) {
    int found = 0;
    for (const ScanRow& r : no_eigenvalue_scan(SweepSpec{})) {
        if (r.candidates == 0) continue;
        found += r.candidates;
        v.detail << " " << to_string(r.kind) << "(beta=" << r.beta << ", lambda=" << r.lambda << "):";
        for (double e : r.eigenvalues) v.detail << " " << fmt(e);
        v.detail << " below onset " << fmt(r.onset) << ";";
    }
    v.detail << " " << found << " eigenvalues below onset;";
    v.check(found == 0, "eigenvalues below onset");
    RadialOperatorSpec well = op(RadialKind::prototype, 0.5, 0.0);
    well.potential = [](double x) { return -5.0 * std::exp(-x); };
    const SpectrumEstimate e = estimate_spectrum(well);
    v.detail << " detector well: " << e.discrete_below_onset.size() << " found";
    v.check(e.discrete_below_onset.size() == 1, "detector self-test");
}

BoxGrid identity_grid() {
    BoxGrid g;
    g.r0 = 1.0;
    g.r1 = 3.0;
    g.nr = 12;
    g.th0 = 0.6;
    g.th1 = 2.2;
    g.nth = 10;
    g.nchi = 8;
    return g;
}

void operator_identities(Verdict& v) {
    const BoxGrid g = identity_grid();
    const PairOperators ops(g, sample_background(g, chakrabarti_fn({1.0}, GaugePatch::base), 0.25));
    std::mt19937_64 rng(100);
    double adj = 0.0, energy = 0.0;
    for (int n = 0; n < 100; ++n) {
        const Vec z = random_test_pair(g, rng), e = random_test_pair(g, rng);
        const Vec dz = ops.apply_delta(z), dde = ops.apply_delta_dagger(e);
        adj = std::max(adj, std::abs(ops.inner(dz, e) - ops.inner(z, dde)) / (ops.norm(dz) * ops.norm(e)));
        const double n2 = ops.inner(dde, dde);
        energy = std::max(energy, std::abs(ops.inner(ops.apply_LL(e), e) - n2) / n2);
    }
    const Vec c = config_vector(g, ops.background());
    const Vec z = random_test_pair(g, rng);
    const Vec q = ops.L_map(c + z) - ops.L_map(c) - ops.linearized_L(z) - ops.quadratic_term(z);
    const double quad = ops.norm(q) / ops.norm(ops.quadratic_term(z));
    std::vector<double> err;
    for (double eps : {1e-1, 5e-2, 2.5e-2})
        err.push_back(ops.norm(ops.L_map(c + eps * z) - ops.L_map(c) - eps * ops.linearized_L(z)));
    const double order = oracle::order(err[0], err[1], err[2]);
    v.detail << " adjointness " << fmt(adj) << "; energy " << fmt(energy) << "; quadratic " << fmt(quad)
             << "; Taylor order " << fmt(order);
    v.check(adj <= 1e-6, "adjointness");
    v.check(energy <= 1e-6, "energy identity");
    v.check(quad <= 1e-12, "quadratic identity");
    v.check(order >= 1.95, "Taylor order");
}

void coercivity(Verdict& v) {
    BoxGrid g;
    g.r0 = 4.5;
    g.r1 = 9.5;
    g.nr = 40;
    g.th0 = 0.5;
    g.th1 = 2.6;
    g.nth = 12;
    g.nchi = 6;
    for (double beta : {0.25, 0.5}) {
        const PairOperators ops(g, sample_background(g, chakrabarti_fn({1.0}, GaugePatch::base), beta));
        std::mt19937_64 rng(8);
        double worst = INFINITY;
        for (int n = 0; n < 10; ++n)
            worst = std::min(worst, rayleigh_quotient(ops, RayleighOp::LL, random_test_pair(g, rng, 2, 5.0, 9.5)));
        v.detail << " beta=" << beta << ": min quotient/beta^2 " << fmt(worst / (beta * beta)) << ";";
        v.check(worst >= 0.95 * beta * beta, "quotient at beta=" + fmt(beta));
    }
}

void continuity(Verdict& v) {
    for (double m : {1.0, 2.7}) {
        const ReducedProblem pb(single_center(m, 2.0, 0.25), 14.0, 0.01);
        const SolveResult r = continuity_solve(pb, SolverParams{});
        const double newton = r.trace.empty() ? NAN : r.trace.back().residuals.back();
        const ProfileComparison c = compare_with_chakrabarti(pb, r.config, 0.5, 10.0);
        const double err = std::max({c.phi_err, c.F_err, c.w_err});
        v.detail << " m=" << m << ": t " << fmt(r.t_reached) << ", Newton " << fmt(newton) << ", ball "
                 << (r.ball_ok ? "ok" : "violated") << ", invariant error " << fmt(err) << ";";
        v.check(r.converged && r.t_reached == 1.0, "reached t=1 at m=" + fmt(m));
        v.check(newton <= 1e-8, "Newton residual at m=" + fmt(m));
        v.check(r.ball_ok, "ball at m=" + fmt(m));
        v.check(err <= 1e-3, "invariants at m=" + fmt(m));
    }
}

void compactness(Verdict& v) {
    const std::vector<RadialOperatorSpec> specs{op(RadialKind::prototype, 0.5, 0.0), op(RadialKind::D0, 0.25, 2.0),
                                                op(RadialKind::D1, 0.5, 2.0), op(RadialKind::D3_floer, 0.5, 2.0)};
    for (const CompactnessRow& r : compactness_experiment(specs, {10.0, -10.0})) {
        v.detail << " " << to_string(r.kind) << "(" << (r.amplitude > 0 ? "+" : "") << r.amplitude << "): shift "
                 << fmt(r.shift) << " tol " << fmt(r.tolerance) << ";";
        v.check(r.within, to_string(r.kind) + " amplitude " + fmt(r.amplitude));
    }
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
        {"exact-solution residual", exact_residual},
        {"charge and mass", charge},
        {"pointwise gluing bound", gluing_bound},
        {"weighted residual decay", residual_decay},
        {"spectrum bottoms", spectrum_bottoms},
        {"no point spectrum", point_spectrum},
        {"operator identities", operator_identities},
        {"coercivity", coercivity},
        {"continuity method", continuity},
        {"relative compactness", compactness}};
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[i].second(v);
        } catch (const std::exception& e) {
            v.check(false, std::string("exception: ") + e.what());
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !v.pass;
        std::printf("%s %2d %s (%.1fs):%s\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), s,
                    v.detail.str().c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
