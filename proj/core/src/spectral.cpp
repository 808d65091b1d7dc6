#include "hypmono/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace hypmono {

namespace {

constexpr double kLog2 = 0.69314718055994530942;

double lsinh(double x, bool asym) { return asym ? x : x + std::log1p(-std::exp(-2.0 * x)) - kLog2; }
double lcosh(double x, bool asym) {
    const double a = std::abs(x);
    return asym ? a : a + std::log1p(std::exp(-2.0 * a)) - kLog2;
}

struct Channel {
    std::vector<double> r, d, o, M;
};

// Scalar channel in symmetric form: A_ii = (p_{i-1/2} + p_{i+1/2}) s_i^2 / (h^2 m_i) + q_i,
// A_{i,i+1} = -p_{i+1/2} s_i s_{i+1} / (h^2 sqrt(m_i m_{i+1})); measure M_i = m_i / s_i^2.
Channel scalar_channel(const RadialOperatorSpec& sp, RadialKind kind) {
    const double h = sp.h, beta = sp.beta, lam = sp.lambda;
    const bool asym = sp.asymptotic;
    const int n = static_cast<int>(std::lround(sp.L / h));
    auto lw = [&](double x) { return 2.0 * lcosh(beta * x, asym); };
    auto lrho2 = [&](double x) { return 2.0 * lsinh(x, asym) + lw(x); };
    std::function<double(double)> lp, lm, ls;
    std::function<double(double)> q;
    const auto zero = [](double) { return 0.0; };
    auto inv_g2 = [&](double x) { return std::exp(-2.0 * lsinh(x, asym)); };
    switch (kind) {
        case RadialKind::prototype: {
            const double g = sp.gamma;
            lp = [g](double x) { return 2.0 * g * x; };
            lm = lp;
            ls = zero;
            q = sp.potential ? sp.potential : [](double x) { return 10.0 * std::exp(-x); };
            break;
        }
        case RadialKind::D0:
            lp = lrho2;
            lm = lrho2;
            ls = zero;
            q = [&](double x) { return lam * inv_g2(x); };
            break;
        case RadialKind::D1:
            lp = lw;
            lm = lw;
            ls = zero;
            q = [&](double x) { return lam * inv_g2(x); };
            break;
        case RadialKind::D2:
            lp = [&](double x) { return -lrho2(x); };
            lm = lrho2;
            ls = lrho2;
            q = [&](double x) { return lam * inv_g2(x); };
            break;
        default:
            throw std::invalid_argument("scalar_channel: not a scalar kind");
    }
    Channel c;
    const int m = n - 1;
    c.r.resize(m);
    c.d.resize(m);
    c.o.resize(std::max(0, m - 1));
    c.M.resize(m);
    const bool neu = sp.neumann_at_zero();
    for (int i = 0; i < m; ++i) {
        const double r = (i + 1) * h;
        c.r[i] = r;
        const double base = 2.0 * ls(r) - lm(r);
        const double pl = (i == 0 && neu) ? 0.0 : std::exp(lp(r - 0.5 * h) + base);
        const double pr = std::exp(lp(r + 0.5 * h) + base);
        double qi = q(r);
        if (sp.perturbation) qi += sp.perturbation(r);
        c.d[i] = (pl + pr) / (h * h) + qi;
        c.M[i] = std::exp(lm(r) - 2.0 * ls(r));
        if (i + 1 < m) {
            const double r1 = r + h;
            c.o[i] = -std::exp(lp(r + 0.5 * h) + ls(r) + ls(r1) - 0.5 * (lm(r) + lm(r1))) / (h * h);
        }
    }
    return c;
}

std::vector<double> coupling(const RadialOperatorSpec& sp, const std::vector<double>& r, bool floer_only) {
    std::vector<double> c(r.size());
    const double sl = std::sqrt(sp.lambda);
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double x = r[i];
        const double ig = sp.asymptotic ? std::exp(-x) : 1.0 / std::sinh(x);
        const double cth = sp.asymptotic ? 1.0 : 1.0 / std::tanh(x);
        const double th = sp.asymptotic ? 1.0 : std::tanh(sp.beta * x);
        const double fl = -sl * 2.0 * sp.beta * th * ig;
        c[i] = floer_only ? fl : sl * 2.0 * cth * ig + (sp.kind == RadialKind::D3_floer ? fl : 0.0);
    }
    return c;
}

BandedSym tridiag(const std::vector<double>& d, const std::vector<double>& o) {
    BandedSym A;
    A.n = static_cast<int>(d.size());
    A.kd = 1;
    A.band = {d, o};
    A.band[1].resize(A.n, 0.0);
    return A;
}

BandedSym interleave(const Channel& c1, const Channel& c2, const std::vector<double>& c) {
    const int m = static_cast<int>(c1.d.size());
    BandedSym A;
    A.n = 2 * m;
    A.kd = 2;
    A.band.assign(3, std::vector<double>(A.n, 0.0));
    for (int k = 0; k < m; ++k) {
        A.band[0][2 * k] = c1.d[k];
        A.band[0][2 * k + 1] = c2.d[k];
        A.band[1][2 * k] = c[k];
        if (k + 1 < m) {
            A.band[2][2 * k] = c1.o[k];
            A.band[2][2 * k + 1] = c2.o[k];
        }
    }
    return A;
}

BandedSym scale_to_stiffness(const BandedSym& S, const std::vector<double>& M) {
    BandedSym K = S;
    for (int k = 0; k <= S.kd; ++k)
        for (int i = 0; i + k < S.n; ++i) K.band[k][i] = S.band[k][i] * std::sqrt(M[i] * M[i + k]);
    return K;
}

bool is_d3(RadialKind k) { return k == RadialKind::D3 || k == RadialKind::D3_floer; }

}  // namespace

std::string to_string(RadialKind k) {
    switch (k) {
        case RadialKind::prototype: return "prototype";
        case RadialKind::D0: return "D0";
        case RadialKind::D1: return "D1";
        case RadialKind::D2: return "D2";
        case RadialKind::D3: return "D3";
        case RadialKind::D3_floer: return "D3_floer";
    }
    return "?";
}

RadialKind radial_kind_from_string(const std::string& s) {
    for (RadialKind k : {RadialKind::prototype, RadialKind::D0, RadialKind::D1, RadialKind::D2, RadialKind::D3,
                         RadialKind::D3_floer})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown operator kind: " + s);
}

void RadialOperatorSpec::validate() const {
    if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
    if (!(L >= 20.0)) throw std::invalid_argument("domain_L must be at least 20");
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
    if (kind != RadialKind::prototype && !(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("beta must lie in (0, 1)");
    if (is_d3(kind) && !(lambda > 0.0)) throw std::invalid_argument("D3 needs lambda > 0");
    if (L / h < 8) throw std::invalid_argument("grid too coarse");
}

double RadialOperatorSpec::onset() const {
    switch (kind) {
        case RadialKind::prototype: return gamma * gamma;
        case RadialKind::D0:
        case RadialKind::D2: return (1.0 + beta) * (1.0 + beta);
        default: return beta * beta;
    }
}

bool RadialOperatorSpec::neumann_at_zero() const {
    if (bc == BoundaryAtZero::neumann) return true;
    if (bc == BoundaryAtZero::dirichlet) return false;
    return kind == RadialKind::D0 && lambda == 0.0;
}

double BandedSym::at(int i, int j) const {
    if (i < j) std::swap(i, j);
    const int k = i - j;
    if (k > kd) return 0.0;
    return band[k][j];
}

RadialOperator build_radial_operator(const RadialOperatorSpec& spec) {
    spec.validate();
    RadialOperator op;
    if (!is_d3(spec.kind)) {
        Channel c = scalar_channel(spec, spec.kind);
        op.r = c.r;
        op.S = tridiag(c.d, c.o);
        op.M = c.M;
    } else {
        Channel c1 = scalar_channel(spec, RadialKind::D1);
        Channel c2 = scalar_channel(spec, RadialKind::D2);
        op.r = c1.r;
        op.S = interleave(c1, c2, coupling(spec, c1.r, false));
        op.M.resize(op.S.n);
        for (std::size_t k = 0; k < c1.M.size(); ++k) {
            op.M[2 * k] = c1.M[k];
            op.M[2 * k + 1] = c2.M[k];
        }
    }
    op.K = scale_to_stiffness(op.S, op.M);
    return op;
}

BandedSym unitary_conjugate(const RadialOperatorSpec& spec) {
    if (spec.kind != RadialKind::prototype && !is_d3(spec.kind))
        throw std::invalid_argument("unitary_conjugate: prototype or D3 kinds only");
    return build_radial_operator(spec).S;
}

BandedSym floer_coupling(const RadialOperatorSpec& spec) {
    if (spec.kind != RadialKind::D3_floer) throw std::invalid_argument("floer_coupling: D3_floer only");
    spec.validate();
    const int n = static_cast<int>(std::lround(spec.L / spec.h)) - 1;
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = (i + 1) * spec.h;
    const std::vector<double> c = coupling(spec, r, true);
    BandedSym T;
    T.n = 2 * n;
    T.kd = 2;
    T.band.assign(3, std::vector<double>(T.n, 0.0));
    for (int k = 0; k < n; ++k) T.band[1][2 * k] = c[k];
    return T;
}

Eigenpairs lowest_eigenpairs(const BandedSym& A, int count, bool vectors) {
    const int n = A.n;
    count = std::min(count, n);
    Eigenpairs out;
    if (count <= 0) return out;
    std::vector<double> w(n);
    lapack_int m = 0;
    if (A.kd == 1) {
        std::vector<double> d = A.band[0], e(A.band[1].begin(), A.band[1].end());
        std::vector<double> z(vectors ? static_cast<std::size_t>(n) * count : 1);
        std::vector<lapack_int> isuppz(2 * count);
        const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'I', n, d.data(), e.data(), 0.0,
                                               0.0, 1, count, 0.0, &m, w.data(), z.data(), vectors ? n : 1,
                                               isuppz.data());
        if (info != 0) throw std::runtime_error("dstevr failed");
        out.values.assign(w.begin(), w.begin() + m);
        if (vectors)
            for (int j = 0; j < m; ++j) out.vectors.emplace_back(z.begin() + j * n, z.begin() + (j + 1) * n);
        return out;
    }
    const int kd = A.kd, ld = kd + 1;
    std::vector<double> ab(static_cast<std::size_t>(ld) * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k <= kd && j + k < n; ++k) ab[k + j * ld] = A.band[k][j];
    std::vector<double> q(1), z(1);
    std::vector<lapack_int> ifail(n);
    const lapack_int info = LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'N', 'I', 'L', n, kd, ab.data(), ld, q.data(), 1, 0.0,
                                           0.0, 1, count, 0.0, &m, w.data(), z.data(), 1, ifail.data());
    if (info != 0) throw std::runtime_error("dsbevx failed");
    out.values.assign(w.begin(), w.begin() + m);
    if (!vectors) return out;
    // Inverse iteration on the general band LU of A - sigma I.
    const int kl = kd, ku = kd, ldg = 2 * kl + ku + 1;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    for (int j = 0; j < m; ++j) {
        const double mu = out.values[j];
        const double sigma = mu - 1e-10 * std::max(1.0, std::abs(mu));
        std::vector<double> g(static_cast<std::size_t>(ldg) * n, 0.0);
        for (int col = 0; col < n; ++col)
            for (int row = std::max(0, col - ku); row <= std::min(n - 1, col + kl); ++row)
                g[(kl + ku + row - col) + col * ldg] = A.at(row, col) - (row == col ? sigma : 0.0);
        std::vector<lapack_int> ipiv(n);
        if (LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kl, ku, g.data(), ldg, ipiv.data()) < 0)
            throw std::runtime_error("dgbtrf failed");
        std::vector<double> x(n);
        for (auto& v : x) v = nd(rng);
        for (int it = 0; it < 3; ++it) {
            for (const auto& prev : out.vectors) {
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += prev[i] * x[i];
                for (int i = 0; i < n; ++i) x[i] -= dot * prev[i];
            }
            LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, kl, ku, 1, g.data(), ldg, ipiv.data(), x.data(), n);
            double nrm = 0.0;
            for (double v : x) nrm += v * v;
            nrm = std::sqrt(nrm);
            for (auto& v : x) v /= nrm;
        }
        out.vectors.push_back(x);
    }
    return out;
}

std::vector<double> generalized_eigenvalues(const RadialOperator& op) {
    const int n = op.K.n, kd = op.K.kd, ld = kd + 1;
    std::vector<double> ab(static_cast<std::size_t>(ld) * n, 0.0), bb(op.M), w(n), z(1);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k <= kd && j + k < n; ++k) ab[k + j * ld] = op.K.band[k][j];
    const lapack_int info =
        LAPACKE_dsbgv(LAPACK_COL_MAJOR, 'N', 'L', n, kd, 0, ab.data(), ld, bb.data(), 1, w.data(), z.data(), 1);
    if (info != 0) throw std::runtime_error("dsbgv failed");
    return w;
}

SpectrumEstimate estimate_spectrum(const RadialOperatorSpec& spec, const EstimateOptions& opt) {
    if (opt.hs.empty() || opt.Ls.empty()) throw std::invalid_argument("estimate_spectrum: empty resolution lists");
    std::vector<double> hs = opt.hs;
    std::sort(hs.begin(), hs.end(), std::greater<>());  // coarse to fine
    std::vector<double> Ls = opt.Ls;
    std::sort(Ls.begin(), Ls.end());
    SpectrumEstimate est;
    est.onset_predicted = spec.onset();
    const int nL = static_cast<int>(Ls.size()), nh = static_cast<int>(hs.size());
    std::vector<std::vector<double>> ext(nL), fine(nL);
    std::vector<Eigenpairs> finest(nL);
    std::vector<std::vector<double>> radii(nL);
    for (int a = 0; a < nL; ++a) {
        std::vector<std::vector<double>> mu(nh);
        for (int b = 0; b < nh; ++b) {
            RadialOperatorSpec s = spec;
            s.L = Ls[a];
            s.h = hs[b];
            const RadialOperator op = build_radial_operator(s);
            const bool last = b == nh - 1;
            Eigenpairs ep = lowest_eigenpairs(op.S, opt.count, last);
            mu[b] = ep.values;
            est.resolution.push_back({hs[b], Ls[a], ep.values});
            if (last) {
                finest[a] = std::move(ep);
                radii[a] = op.r;
            }
        }
        fine[a] = mu[nh - 1];
        ext[a] = mu[nh - 1];
        if (nh >= 2)
            for (std::size_t j = 0; j < ext[a].size() && j < mu[nh - 2].size(); ++j)
                ext[a][j] = mu[nh - 1][j] + (mu[nh - 1][j] - mu[nh - 2][j]) / 3.0;
        if (a == 0 && nh >= 3 && !mu[0].empty()) {
            const double d1 = std::abs(mu[0][0] - mu[1][0]), d2 = std::abs(mu[1][0] - mu[2][0]);
            est.h_order = d2 > 0 ? std::log2(d1 / d2) : INFINITY;
        }
    }
    // Detector: below onset, L-stable, interior-localized.
    const int a1 = 0, a2 = nL - 1;
    const auto& e1 = finest[a1];
    const auto& e2 = finest[a2];
    const bool d3 = is_d3(spec.kind);
    std::vector<bool> genuine(e2.values.size(), false);
    for (std::size_t j = 0; j < e2.values.size(); ++j) {
        const double mu2 = e2.values[j];
        if (!(mu2 < est.onset_predicted)) continue;
        const bool stable = nL >= 2 && j < e1.values.size() &&
                            std::abs(mu2 - e1.values[j]) <= opt.stability_tol * std::max(1.0, std::abs(mu2));
        double outer = 0.0, total = 0.0;
        const auto& v = e2.vectors[j];
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double r = radii[a2][d3 ? i / 2 : i];
            total += v[i] * v[i];
            if (r > 0.5 * Ls[a1]) outer += v[i] * v[i];
        }
        const bool localized = total > 0 && outer / total <= opt.outer_fraction;
        if (stable && localized) {
            genuine[j] = true;
            est.discrete_below_onset.push_back(ext[a2][j]);
        }
    }
    std::size_t js = 0;
    while (js < genuine.size() && genuine[js]) ++js;
    if (js >= ext[a2].size() || js >= ext[a1].size()) {
        est.converged = false;
        est.onset_estimate = NAN;
    } else {
        const double L1 = Ls[a1], L2 = Ls[a2];
        const double m2 = ext[a2][js], m1 = ext[a1][js];
        est.onset_estimate = nL >= 2 ? (m2 * L2 * L2 - m1 * L1 * L1) / (L2 * L2 - L1 * L1) : m2;
        est.tolerance = std::abs(est.onset_estimate - m2) + std::abs(fine[a2][js] - m2);
        est.converged = std::isfinite(est.onset_estimate) &&
                        est.tolerance <= 0.02 * std::max(std::abs(est.onset_estimate), 0.05);
    }
    est.bottom = est.onset_estimate;
    for (double v : est.discrete_below_onset) est.bottom = std::min(est.bottom, v);
    return est;
}

std::vector<double> sweep_lambdas(RadialKind k) {
    switch (k) {
        case RadialKind::D0: return {0, 2, 6, 12};
        case RadialKind::D2: return {0};
        case RadialKind::prototype: return {0};
        default: return {2, 6, 12};
    }
}

std::vector<ScanRow> no_eigenvalue_scan(const SweepSpec& sweep) {
    std::vector<ScanRow> rows;
    EstimateOptions opt;
    opt.hs = {4 * sweep.h, 2 * sweep.h, sweep.h};
    for (RadialKind k : sweep.kinds)
        for (double b : sweep.betas)
            for (double lam : sweep_lambdas(k)) {
                RadialOperatorSpec s;
                s.kind = k;
                s.beta = b;
                s.lambda = lam;
                const SpectrumEstimate e = estimate_spectrum(s, opt);
                rows.push_back({k, b, lam, e.onset_predicted, e.bottom,
                                static_cast<int>(e.discrete_below_onset.size()), e.discrete_below_onset});
            }
    return rows;
}

double compact_bump(double r) {
    const double x = r - 2.0;
    if (std::abs(x) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

std::vector<CompactnessRow> compactness_experiment(const std::vector<RadialOperatorSpec>& specs,
                                                   const std::vector<double>& amplitudes,
                                                   const EstimateOptions& opt) {
    std::vector<CompactnessRow> rows;
    for (const auto& s : specs) {
        const SpectrumEstimate base = estimate_spectrum(s, opt);
        for (double amp : amplitudes) {
            RadialOperatorSpec p = s;
            auto prev = s.perturbation;
            p.perturbation = [amp, prev](double r) { return amp * compact_bump(r) + (prev ? prev(r) : 0.0); };
            const SpectrumEstimate pe = estimate_spectrum(p, opt);
            CompactnessRow row{s.kind, s.beta, s.lambda, amp, base.onset_estimate, pe.onset_estimate, 0, 0, false};
            row.shift = std::abs(pe.onset_estimate - base.onset_estimate);
            row.tolerance = base.tolerance + pe.tolerance;
            row.within = row.shift <= row.tolerance;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace hypmono
