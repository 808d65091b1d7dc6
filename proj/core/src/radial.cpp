#include "hypmono/radial.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace hypmono {

namespace {

constexpr double kPi = std::numbers::pi;
using Trip = Eigen::Triplet<double>;
using LU = Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>;

SpMat diag(const Vec& d) {
    SpMat D(d.size(), d.size());
    std::vector<Trip> t;
    for (int i = 0; i < d.size(); ++i) t.emplace_back(i, i, d[i]);
    D.setFromTriplets(t.begin(), t.end());
    return D;
}

double h_inf(double m, double r) { return m - 2.0 / std::expm1(2.0 * r); }

}  // namespace

RadialProfiles chakrabarti_profiles(const MonopoleParams& mp, const std::vector<double>& r) {
    RadialProfiles p;
    p.r = r;
    for (double x : r) {
        p.h.push_back(chakrabarti_h(x, mp.alpha()));
        p.w.push_back(chakrabarti_w(x, mp.alpha()));
    }
    return p;
}

RadialProfiles radial_glued_start(const GluingSpec& spec, const std::vector<double>& r) {
    if (spec.centers.k() != 1) throw std::invalid_argument("radial_glued_start: needs exactly one center");
    RadialProfiles p;
    p.r = r;
    const double a = spec.params.alpha();
    for (double x : r) {
        const double lam = partition_lambda(x, spec.R(), spec.band());
        const double hc = chakrabarti_h(x, a), wc = chakrabarti_w(x, a);
        p.h.push_back(lam >= 1.0 ? hc : lam * hc + (1.0 - lam) * h_inf(spec.params.m, x));
        p.w.push_back(lam * wc);
    }
    return p;
}

ReducedProblem::ReducedProblem(const GluingSpec& spec, double L, double dx) : spec_(spec), dx_(dx) {
    spec.validate();
    if (spec.centers.k() != 1) throw std::invalid_argument("ReducedProblem: radial class needs k = 1");
    if (!(dx > 0.0) || !(L > 10 * dx)) throw std::invalid_argument("ReducedProblem: bad grid");
    N_ = static_cast<int>(std::lround(L / dx));
    const int N = N_, n = N - 1;
    const double beta = spec.beta;
    gi2_.resize(n);
    Wi_.resize(n);
    gj2_.resize(N);
    Wj_.resize(N);
    for (int i = 0; i < n; ++i) {
        const double r = r_node(i);
        gi2_[i] = std::pow(std::sinh(r), 2);
        Wi_[i] = std::pow(std::cosh(beta * r), 2);
    }
    std::vector<double> rj(N);
    for (int j = 0; j < N; ++j) {
        rj[j] = r_half(j);
        gj2_[j] = std::pow(std::sinh(rj[j]), 2);
        Wj_[j] = std::pow(std::cosh(beta * rj[j]), 2);
    }
    MY_.resize(nY());
    MZ_.resize(nZ());
    for (int i = 0; i < n; ++i) {
        const double base = 4.0 * kPi * Wi_[i] * dx;
        MY_[i] = base * gi2_[i];
        MY_[n + i] = base * gi2_[i];
        MY_[2 * n + i] = 2.0 * base;
        MY_[3 * n + i] = 2.0 * base;
    }
    for (int j = 0; j < N; ++j) {
        const double base = 4.0 * kPi * Wj_[j] * dx;
        MZ_[j] = base * gj2_[j];
        MZ_[N + j] = base * gj2_[j];
        MZ_[2 * N + j] = 2.0 * base;
        MZ_[3 * N + j] = 2.0 * base;
    }
    const RadialProfiles start = radial_glued_start(spec, rj);
    c0_ = Vec::Zero(nZ());
    for (int j = 0; j < N; ++j) {
        c0_[j] = start.h[j];
        c0_[2 * N + j] = start.w[j];
    }
    G0_ = -residual(c0_);

    // delta = flat derivative part + 2 bilinear(c0, .) + slice rows.
    std::vector<Trip> t;
    const double id = 1.0 / dx;
    for (int i = 0; i < n; ++i) {
        const int j0 = i, j1 = i + 1;
        t.emplace_back(n + i, j1, id);
        t.emplace_back(n + i, j0, -id);
        t.emplace_back(2 * n + i, 3 * N + j1, -id);
        t.emplace_back(2 * n + i, 3 * N + j0, id);
        t.emplace_back(3 * n + i, 2 * N + j1, id);
        t.emplace_back(3 * n + i, 2 * N + j0, -id);
        // slice: -(g^2 W alpha)' / (g^2 W) + 2 av(v2 w1 - v1 w2) / g^2
        const double s = 1.0 / (dx * gi2_[i] * Wi_[i]);
        t.emplace_back(i, N + j1, -gj2_[j1] * Wj_[j1] * s);
        t.emplace_back(i, N + j0, gj2_[j0] * Wj_[j0] * s);
        for (int j : {j0, j1}) {
            t.emplace_back(i, 3 * N + j, c0_[2 * N + j] / gi2_[i]);
            t.emplace_back(i, 2 * N + j, -c0_[3 * N + j] / gi2_[i]);
        }
    }
    SpMat lin(nY(), nZ());
    lin.setFromTriplets(t.begin(), t.end());
    delta_ = lin + bilinear_matrix(c0_);
    deltad_ = diag(MZ_.cwiseInverse()) * SpMat(delta_.transpose()) * diag(MY_);
    LL_ = delta_ * deltad_;
}

Vec ReducedProblem::residual(const Vec& c) const {
    if (c.size() != nZ()) throw std::invalid_argument("residual: shape mismatch");
    const int N = N_, n = N - 1;
    Vec y = Vec::Zero(nY());
    auto H = [&](int j) { return c[j]; };
    auto A = [&](int j) { return c[N + j]; };
    auto W1 = [&](int j) { return c[2 * N + j]; };
    auto W2 = [&](int j) { return c[3 * N + j]; };
    for (int i = 0; i < n; ++i) {
        const int j0 = i, j1 = i + 1;
        auto av = [&](auto f) { return 0.5 * (f(j0) + f(j1)); };
        auto dr = [&](auto f) { return (f(j1) - f(j0)) / dx_; };
        const double ww = av([&](int j) { return W1(j) * W1(j) + W2(j) * W2(j); });
        y[n + i] = dr(H) - (1.0 - ww) / gi2_[i];
        y[2 * n + i] = av([&](int j) { return A(j) * W1(j) - H(j) * W2(j); }) - dr(W2);
        y[3 * n + i] = av([&](int j) { return A(j) * W2(j) + H(j) * W1(j); }) + dr(W1);
    }
    return y;
}

Vec ReducedProblem::bilinear(const Vec& x, const Vec& z) const {
    if (x.size() != nZ() || z.size() != nZ()) throw std::invalid_argument("bilinear: shape mismatch");
    return 0.5 * (bilinear_matrix(x) * z);
}

SpMat ReducedProblem::bilinear_matrix(const Vec& x) const {
    if (x.size() != nZ()) throw std::invalid_argument("bilinear_matrix: shape mismatch");
    const int N = N_, n = N - 1;
    std::vector<Trip> t;
    for (int i = 0; i < n; ++i) {
        for (int j : {i, i + 1}) {
            const double h = x[j], a = x[N + j], w1 = x[2 * N + j], w2 = x[3 * N + j];
            t.emplace_back(n + i, 2 * N + j, w1 / gi2_[i]);
            t.emplace_back(n + i, 3 * N + j, w2 / gi2_[i]);
            t.emplace_back(2 * n + i, 2 * N + j, 0.5 * a);
            t.emplace_back(2 * n + i, N + j, 0.5 * w1);
            t.emplace_back(2 * n + i, 3 * N + j, -0.5 * h);
            t.emplace_back(2 * n + i, j, -0.5 * w2);
            t.emplace_back(3 * n + i, 3 * N + j, 0.5 * a);
            t.emplace_back(3 * n + i, N + j, 0.5 * w2);
            t.emplace_back(3 * n + i, 2 * N + j, 0.5 * h);
            t.emplace_back(3 * n + i, j, 0.5 * w1);
        }
    }
    SpMat B(nY(), nZ());
    B.setFromTriplets(t.begin(), t.end());
    return B;
}

double ReducedProblem::normY(const Vec& y) const { return std::sqrt((MY_.array() * y.array().square()).sum()); }
double ReducedProblem::normZ(const Vec& z) const { return std::sqrt((MZ_.array() * z.array().square()).sum()); }

double ReducedProblem::normH(const Vec& eta) const {
    const double a = normY(eta), b = normZ(deltad_ * eta);
    return std::sqrt(a * a + b * b);
}

double ReducedProblem::pointwise_Y(const Vec& y, int i) const {
    const int n = N_ - 1;
    const double g2 = gi2_[i];
    return std::sqrt(y[i] * y[i] + y[n + i] * y[n + i] + 2.0 * (y[2 * n + i] * y[2 * n + i] + y[3 * n + i] * y[3 * n + i]) / g2);
}

double ReducedProblem::normY_p(const Vec& y, double p) const {
    const int n = N_ - 1;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::pow(pointwise_Y(y, i), p) * 4.0 * kPi * Wi_[i] * gi2_[i] * dx_;
    return std::pow(s, 1.0 / p);
}

double ReducedProblem::normZ_p(const Vec& z, double p) const {
    const int N = N_;
    double s = 0.0;
    for (int j = 0; j < N; ++j) {
        const double v = z[j] * z[j] + z[N + j] * z[N + j] +
                         2.0 * (z[2 * N + j] * z[2 * N + j] + z[3 * N + j] * z[3 * N + j]) / gj2_[j];
        s += std::pow(v, 0.5 * p) * 4.0 * kPi * Wj_[j] * gj2_[j] * dx_;
    }
    return std::pow(s, 1.0 / p);
}

namespace {

Vec random_probe(const ReducedProblem& pb, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::normal_distribution<double> nd;
    const int n = pb.N() - 1;
    const double rhi = std::min(pb.L() - 1.0, 10.0);
    Vec e = Vec::Zero(pb.nY());
    for (int k = 0; k < 4; ++k)
        for (int b = 0; b < 4; ++b) {
            const double c = 0.5 + (rhi - 0.5) * U(rng), w = 0.3 + 1.2 * U(rng), amp = nd(rng);
            for (int i = 0; i < n; ++i) {
                const double x = (pb.r_node(i) - c) / w;
                e[k * n + i] += amp * std::exp(-x * x);
            }
        }
    return e;
}

double inverse_iteration_min(const ReducedProblem& pb, const LU& lu, int iterations) {
    Vec x = Vec::Ones(pb.nY());
    double mu = 0.0;
    for (int it = 0; it < iterations; ++it) {
        x = lu.solve(x);
        x /= pb.normY(x);
        const Vec Lx = pb.LL() * x;
        mu = (pb.MY().array() * Lx.array() * x.array()).sum();
    }
    return mu;
}

// Newton on F(eta) = LL eta + sigma(dag eta) - t G0 from the given start.
bool newton(const ReducedProblem& pb, double t, Vec& eta, const SolverParams& sp, StepRecord& rec) {
    rec.residuals.clear();
    const Vec target = t * pb.G0();
    double first = -1.0;
    for (int it = 0; it <= sp.max_newton; ++it) {
        const Vec z = pb.delta_dagger() * eta;
        const Vec F = pb.LL() * eta + pb.bilinear(z, z) - target;
        const double f = pb.normY(F);
        rec.residuals.push_back(f);
        if (!std::isfinite(f)) return false;
        if (first < 0) first = f;
        if (f <= sp.newton_tol) {
            rec.iterations = it;
            return true;
        }
        if (it == sp.max_newton || f > 1e3 * std::max(first, sp.newton_tol)) break;
        SpMat J = pb.LL() + pb.bilinear_matrix(z) * pb.delta_dagger();
        J.makeCompressed();
        LU lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success) return false;
        eta -= lu.solve(F);
    }
    rec.iterations = sp.max_newton;
    return false;
}

// Residuals at the roundoff floor carry no rate information and are dropped.
double observed_order(const std::vector<double>& all) {
    std::vector<double> r;
    for (double v : all)
        if (!all.empty() && v > 1e-10 * all.front()) r.push_back(v);
    const std::size_t n = r.size();
    if (n < 3) return NAN;
    const double a = r[n - 3], b = r[n - 2], c = r[n - 1];
    if (!(a > 0 && b > 0 && c > 0) || a == b) return NAN;
    return std::log(c / b) / std::log(b / a);
}

}  // namespace

Calibration calibrate(const ReducedProblem& pb, int probes, std::uint64_t seed) {
    Calibration cal;
    SpMat L = pb.LL();
    L.makeCompressed();
    LU lu;
    lu.compute(L);
    if (lu.info() != Eigen::Success) throw std::runtime_error("calibrate: factorization failed");
    cal.mu_min = inverse_iteration_min(pb, lu, 60);
    cal.alpha1 = cal.mu_min / std::sqrt(1.0 + cal.mu_min);
    std::mt19937_64 rng(seed);
    std::vector<Vec> e;
    for (int k = 0; k < std::max(probes, 1); ++k) e.push_back(random_probe(pb, rng));
    for (std::size_t k = 0; k < e.size(); ++k)
        for (std::size_t l = k; l < std::min(e.size(), k + 2); ++l) {
            const Vec z1 = pb.delta_dagger() * e[k], z2 = pb.delta_dagger() * e[l];
            const double q = pb.normY(pb.bilinear(z1, z2)) / (pb.normH(e[k]) * pb.normH(e[l]));
            cal.alpha2 = std::max(cal.alpha2, q);
        }
    return cal;
}

SolveResult continuity_solve(const ReducedProblem& pb, const SolverParams& sp) {
    SolveResult res;
    res.G0_norm = pb.normY(pb.G0());
    res.cal = calibrate(pb, sp.probes, sp.seed);
    res.lambda_ball = sp.lambda_ball > 0 ? sp.lambda_ball : 4.0 * res.G0_norm / res.cal.alpha1;
    res.smallness_ok = res.G0_norm <= res.cal.alpha1 * res.lambda_ball / 4.0 * (1.0 + 1e-12);
    Vec eta = Vec::Zero(pb.nY());
    res.trace.push_back({0.0, 0, {0.0}, 0.0, NAN, true});
    if (sp.t_steps <= 0) {
        res.converged = true;
        res.eta = eta;
        res.config = pb.c0();
        res.regime_ok = res.lambda_ball < res.cal.alpha1 / (4.0 * res.cal.alpha2 * res.cal.alpha2);
        return res;
    }
    const double base = 1.0 / sp.t_steps;
    double t = 0.0, dt = base;
    while (t < 1.0) {
        const double tt = t + dt > 1.0 - 1e-12 ? 1.0 : t + dt;
        Vec trial = eta;
        StepRecord rec{tt, 0, {}, 0.0, NAN, false};
        const bool ok = newton(pb, tt, trial, sp, rec);
        rec.order = observed_order(rec.residuals);
        if (ok) {
            rec.accepted = true;
            rec.eta_H = pb.normH(trial);
            if (rec.eta_H > res.lambda_ball) res.ball_ok = false;
            // Path iterates are probes for the quadratic constant too.
            const Vec z = pb.delta_dagger() * trial;
            if (rec.eta_H > 0)
                res.cal.alpha2 = std::max(res.cal.alpha2, pb.normY(pb.bilinear(z, z)) / (rec.eta_H * rec.eta_H));
            eta = trial;
            t = tt;
            res.trace.push_back(rec);
            dt = std::min(base, 2.0 * dt);
        } else {
            res.trace.push_back(rec);
            dt *= 0.5;
            if (dt < sp.min_dt) break;
        }
    }
    res.t_reached = t;
    res.converged = t >= 1.0;
    res.eta = eta;
    res.config = pb.c0() + pb.delta_dagger() * eta;
    const Vec R = pb.residual(res.config);
    for (int i = 0; i + 1 < pb.N(); ++i) res.sup_residual = std::max(res.sup_residual, pb.pointwise_Y(R, i));
    res.regime_ok = res.lambda_ball < res.cal.alpha1 / (4.0 * res.cal.alpha2 * res.cal.alpha2);
    return res;
}

LinearSolveResult linearized_solve(const ReducedProblem& pb, const Vec& nu, const Vec& rhs, int iterations) {
    if (nu.size() != pb.nZ() || rhs.size() != pb.nY()) throw std::invalid_argument("linearized_solve: shape mismatch");
    LinearSolveResult out;
    SpMat J = pb.LL() + pb.bilinear_matrix(nu) * pb.delta_dagger();
    J.makeCompressed();
    LU lu;
    lu.compute(J);
    if (lu.info() != Eigen::Success) return out;
    out.eta = lu.solve(rhs);
    out.residual = pb.normY(J * out.eta - rhs);
    // inf ||J x|| / ||x||_H: inverse iteration on J^{-1} MY^{-1} J^{-T} H.
    const Vec MYinv = pb.MY().cwiseInverse();
    Vec x = Vec::Ones(pb.nY());
    for (int it = 0; it < iterations; ++it) {
        const Vec Hx = pb.MY().cwiseProduct(x + pb.LL() * x);
        const Vec y = lu.transpose().solve(Hx);
        x = lu.solve(MYinv.cwiseProduct(y));
        x /= pb.normH(x);
    }
    out.alpha_prime = pb.normY(J * x) / pb.normH(x);
    out.ok = std::isfinite(out.residual) && std::isfinite(out.alpha_prime);
    return out;
}

RadialProfiles profiles_of(const ReducedProblem& pb, const Vec& c) {
    RadialProfiles p;
    const int N = pb.N();
    for (int j = 0; j < N; ++j) {
        p.r.push_back(pb.r_half(j));
        p.h.push_back(c[j]);
        p.w.push_back(std::hypot(c[2 * N + j], c[3 * N + j]));
    }
    return p;
}

ProfileComparison compare_with_chakrabarti(const ReducedProblem& pb, const Vec& c, double rlo, double rhi) {
    const int N = pb.N();
    const double alpha = pb.spec().params.alpha(), dx = pb.dx();
    ProfileComparison out;
    double ephi = 0, mphi = 0, ew = 0, mw = 0, eF = 0, mF = 0;
    for (int j = 0; j < N; ++j) {
        const double r = pb.r_half(j);
        if (r < rlo || r > rhi) continue;
        const double hc = chakrabarti_h(r, alpha), wc = chakrabarti_w(r, alpha);
        ephi = std::max(ephi, std::abs(std::abs(c[j]) - std::abs(hc)));
        mphi = std::max(mphi, std::abs(hc));
        ew = std::max(ew, std::abs(std::hypot(c[2 * N + j], c[3 * N + j]) - wc));
        mw = std::max(mw, wc);
    }
    for (int i = 0; i + 1 < N; ++i) {
        const double r = pb.r_node(i);
        if (r < rlo || r > rhi) continue;
        const int j0 = i, j1 = i + 1;
        auto dr = [&](int k) { return (c[k * N + j1] - c[k * N + j0]) / dx; };
        auto avp = [&](int k, int l) { return 0.5 * (c[k * N + j0] * c[l * N + j0] + c[k * N + j1] * c[l * N + j1]); };
        const double g2 = std::pow(std::sinh(r), 2);
        const double ww = avp(2, 2) + avp(3, 3);
        const double f1 = (1.0 - ww) / g2, f2 = dr(3) - avp(1, 2), f3 = dr(2) + avp(1, 3);
        const double F = std::sqrt(f1 * f1 + 2.0 * (f2 * f2 + f3 * f3) / g2);
        const Dual3 rd = Dual3::variable(r, 0);
        const Dual3 wd = chakrabarti_w(rd, alpha);
        const double wc = wd.v, dwc = wd.d[0];
        const double e1 = (1.0 - wc * wc) / g2;
        const double Fc = std::sqrt(e1 * e1 + 2.0 * dwc * dwc / g2);
        eF = std::max(eF, std::abs(F - Fc));
        mF = std::max(mF, Fc);
    }
    out.phi_err = mphi > 0 ? ephi / mphi : 0.0;
    out.w_err = mw > 0 ? ew / mw : 0.0;
    out.F_err = mF > 0 ? eF / mF : 0.0;
    return out;
}

namespace {

// Cubic Hermite interpolant on the half nodes with central-difference slopes.
struct Spline {
    double x0, dx;
    std::vector<double> y, dy;

    Spline(double x0_, double dx_, std::vector<double> v) : x0(x0_), dx(dx_), y(std::move(v)) {
        const int n = static_cast<int>(y.size());
        dy.resize(n);
        for (int j = 0; j < n; ++j) {
            if (j == 0)
                dy[j] = (y[1] - y[0]) / dx;
            else if (j == n - 1)
                dy[j] = (y[n - 1] - y[n - 2]) / dx;
            else
                dy[j] = (y[j + 1] - y[j - 1]) / (2.0 * dx);
        }
    }

    template <class T>
    T operator()(const T& x) const {
        const int n = static_cast<int>(y.size());
        int j = static_cast<int>(std::floor((value(x) - x0) / dx));
        j = std::clamp(j, 0, n - 2);
        const T t = (x - (x0 + j * dx)) / dx;
        const T t2 = t * t, t3 = t2 * t;
        return (2.0 * t3 - 3.0 * t2 + 1.0) * y[j] + (t3 - 2.0 * t2 + t) * (dx * dy[j]) +
               (-2.0 * t3 + 3.0 * t2) * y[j + 1] + (t3 - t2) * (dx * dy[j + 1]);
    }
};

}  // namespace

double lifted_residual_sup(const ReducedProblem& pb, const Vec& c, double rlo, double rhi, int points,
                           std::uint64_t seed) {
    const int N = pb.N();
    std::vector<Spline> s;
    for (int k = 0; k < 4; ++k)
        s.emplace_back(pb.r_half(0), pb.dx(), std::vector<double>(c.data() + k * N, c.data() + (k + 1) * N));
    ConfigFn f = [s](const Polar<Dual3>& p) { return hedgehog_config(p, s[0](p.r), s[1](p.r), s[2](p.r), s[3](p.r)); };
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ur(rlo, rhi), ut(0.3, kPi - 0.3), uc(0.0, 2.0 * kPi);
    double sup = 0.0;
    for (int k = 0; k < points; ++k) {
        const PolarPoint p{ur(rng), ut(rng), uc(rng)};
        sup = std::max(sup, norm_one_form(bogomolny_residual(analytic_jet(f, p), p), p));
    }
    return sup;
}

namespace {

double charge_density(const FieldJet& j, const PolarPoint& p) {
    return pair_one_forms(star2(field_strength(j), p), covariant_dphi(j), p);
}

}  // namespace

ChargeMass charge_and_mass(const ConfigFn& f, const ChargeOptions& opt) {
    const int nr = static_cast<int>(std::lround(opt.r_max / opt.dr));
    const double dr = opt.r_max / nr, dth = kPi / opt.ntheta;
    double I = 0.0, msum = 0.0, wsum = 0.0;
    for (int a = 0; a < nr; ++a) {
        const double r = (a + 0.5) * dr, g = std::sinh(r);
        double ang = 0.0;
        for (int b = 0; b < opt.ntheta; ++b) {
            const PolarPoint p{r, (b + 0.5) * dth, 0.3};
            ang += charge_density(analytic_jet(f, p), p) * std::sin(p.theta);
        }
        I += ang * g * g;
    }
    I *= dr * dth * 2.0 * kPi;
    for (int b = 0; b < opt.ntheta; ++b) {
        const PolarPoint p{opt.r_max, (b + 0.5) * dth, 0.3};
        const double st = std::sin(p.theta);
        msum += norm(analytic_jet(f, p).phi) * st;
        wsum += st;
    }
    ChargeMass cm;
    cm.m_est = msum / wsum;
    cm.k_est = I / (4.0 * kPi * cm.m_est);
    return cm;
}

ChargeMass charge_and_mass(const GluingSpec& spec, const ChargeOptions& opt) {
    spec.validate();
    const CenterSet& cs = spec.centers;
    const int nr = static_cast<int>(std::lround(opt.r_max / opt.dr));
    const double dr = opt.r_max / nr, dth = kPi / opt.ntheta;
    double I = 0.0;
    for (int i = 0; i < cs.k(); ++i) {
        double acc = 0.0;
        for (int a = 0; a < nr; ++a) {
            const double r = (a + 0.5) * dr, g = std::sinh(r);
            for (int b = 0; b < opt.ntheta; ++b) {
                const PolarPoint p{r, (b + 0.5) * dth, 0.3};
                double den = 0.0;
                for (int j = 0; j < cs.k(); ++j) den += std::exp(r - transfer_chart(cs, i, j, p).r);
                const double psi = 1.0 / den;
                if (psi < 1e-14) continue;
                const ChartJet cj = c0_jet(spec, i, p);
                acc += psi * charge_density(cj.jet, cj.p) * g * g * std::sin(p.theta);
            }
        }
        I += acc * dr * dth * 2.0 * kPi;
    }
    double msum = 0.0, wsum = 0.0;
    for (int b = 0; b < opt.ntheta; ++b) {
        const PolarPoint pref{opt.r_max, (b + 0.5) * dth, 0.3};
        const PolarPoint q = shift_axial(pref, cs.s[0]);
        const ChartJet cj = c0_jet(spec, 0, q);
        const double st = std::sin(pref.theta);
        msum += norm(cj.jet.phi) * st;
        wsum += st;
    }
    ChargeMass cm;
    cm.m_est = msum / wsum;
    cm.k_est = I / (4.0 * kPi * cm.m_est);
    return cm;
}

ChargeMass charge_and_mass(const ReducedProblem& pb, const Vec& c) {
    if (c.size() != pb.nZ()) throw std::invalid_argument("charge_and_mass: shape mismatch");
    const int N = pb.N();
    const double dx = pb.dx();
    auto q = [&](int j) { return 1.0 - c[2 * N + j] * c[2 * N + j] - c[3 * N + j] * c[3 * N + j]; };
    // <*F, d_A Phi> g^2 = h'(1 - |w|^2) + h (1 - |w|^2)'
    double I = 0.0;
    for (int i = 0; i + 1 < N; ++i) {
        const int j0 = i, j1 = i + 1;
        const double dh = (c[j1] - c[j0]) / dx, dq = (q(j1) - q(j0)) / dx;
        I += (dh * 0.5 * (q(j0) + q(j1)) + 0.5 * (c[j0] + c[j1]) * dq) * dx;
    }
    ChargeMass cm;
    cm.m_est = std::abs(c[N - 1]);
    cm.k_est = I / cm.m_est;
    return cm;
}

}  // namespace hypmono
