#include "hypmono/weighted.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hypmono {

namespace {

using Trip = Eigen::Triplet<double>;
constexpr double kPi = std::numbers::pi;
// 2-form slot rho holds the (mu, nu) component.
constexpr int kPair[3][2] = {{1, 2}, {2, 0}, {0, 1}};

// [X, v] = C(X) v.
Eigen::Matrix3d ad_matrix(const AlgebraElement& X) {
    Eigen::Matrix3d C;
    C << 0, -X[2], X[1], X[2], 0, -X[0], -X[1], X[0], 0;
    return C;
}

void add_block(std::vector<Trip>& t, int row, int col, const Eigen::Matrix3d& C, double s) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (C(i, j) != 0.0) t.emplace_back(row + i, col + j, s * C(i, j));
}

void add_identity(std::vector<Trip>& t, int row, int col, double s) {
    for (int i = 0; i < 3; ++i) t.emplace_back(row + i, col + i, s);
}

SpMat build(int n, std::vector<Trip>& t) {
    SpMat M(n, n);
    M.setFromTriplets(t.begin(), t.end());
    M.prune(0.0);
    return M;
}

SpMat diag(const Vec& d) {
    std::vector<Trip> t;
    for (int i = 0; i < d.size(); ++i)
        if (d[i] != 0.0) t.emplace_back(i, i, d[i]);
    return build(static_cast<int>(d.size()), t);
}

struct NodeGeom {
    double g, st;
    double s2[3];  // star on 2-form components
    double metric[3];  // inverse metric on 1-form components
};

NodeGeom geom(const PolarPoint& p) {
    NodeGeom q;
    q.g = std::sinh(p.r);
    q.st = std::sin(p.theta);
    const double g2 = q.g * q.g;
    q.s2[0] = 1.0 / (g2 * q.st);
    q.s2[1] = 1.0 / q.st;
    q.s2[2] = q.st;
    q.metric[0] = 1.0;
    q.metric[1] = 1.0 / g2;
    q.metric[2] = 1.0 / (g2 * q.st * q.st);
    return q;
}

AlgebraElement get(const Vec& x, int n, int slot) {
    const int i = dof(n, slot, 0);
    return {x[i], x[i + 1], x[i + 2]};
}

void put(Vec& x, int n, int slot, const AlgebraElement& v) {
    const int i = dof(n, slot, 0);
    x[i] = v[0];
    x[i + 1] = v[1];
    x[i + 2] = v[2];
}

// Orthonormal-frame scale of slot s at a point: coordinate component = scale * frame component.
double frame_scale(const NodeGeom& q, int slot) {
    return slot == 2 ? q.g : slot == 3 ? q.g * q.st : 1.0;
}

}  // namespace

double BoxGrid::dchi() const { return 2.0 * kPi / nchi; }

PolarPoint BoxGrid::node(int n) const {
    int a, b, c;
    coords(n, a, b, c);
    return {r0 + (a + 0.5) * dr(), th0 + (b + 0.5) * dth(), c * dchi()};
}

void BoxGrid::coords(int n, int& a, int& b, int& c) const {
    c = n % nchi;
    b = (n / nchi) % nth;
    a = n / (nchi * nth);
}

Background sample_background(const BoxGrid& g, const ConfigFn& f, double beta) {
    Background bg;
    bg.beta = beta;
    const int N = g.nodes();
    bg.phi.resize(N);
    bg.A.resize(N);
    bg.dphi.resize(N);
    for (int n = 0; n < N; ++n) {
        const PolarPoint p = g.node(n);
        const FieldJet j = analytic_jet(f, p);
        bg.phi[n] = j.phi;
        bg.A[n] = j.A;
        bg.dphi[n] = covariant_dphi(j);
    }
    return bg;
}

Background zero_background(const BoxGrid& g, double beta) {
    Background bg;
    bg.beta = beta;
    const int N = g.nodes();
    bg.phi.assign(N, AlgebraElement(0, 0, 0));
    bg.A.assign(N, OneForm{});
    bg.dphi.assign(N, OneForm{});
    return bg;
}

Vec config_vector(const BoxGrid& g, const Background& bg) {
    Vec x = Vec::Zero(g.dofs());
    for (int n = 0; n < g.nodes(); ++n) {
        put(x, n, 0, bg.phi[n]);
        for (int mu = 0; mu < 3; ++mu) put(x, n, 1 + mu, bg.A[n][mu]);
    }
    return x;
}

void PairOperators::derivative_entries(int n, int mu, std::vector<std::pair<int, double>>& out) const {
    out.clear();
    int a, b, c;
    g_.coords(n, a, b, c);
    if (mu == 0) {
        const double w = 0.5 / g_.dr();
        if (a + 1 < g_.nr) out.emplace_back(g_.index(a + 1, b, c), w);
        if (a > 0) out.emplace_back(g_.index(a - 1, b, c), -w);
    } else if (mu == 1) {
        const double w = 0.5 / g_.dth();
        if (b + 1 < g_.nth) out.emplace_back(g_.index(a, b + 1, c), w);
        if (b > 0) out.emplace_back(g_.index(a, b - 1, c), -w);
    } else {
        const double w = 0.5 / g_.dchi();
        out.emplace_back(g_.index(a, b, (c + 1) % g_.nchi), w);
        out.emplace_back(g_.index(a, b, (c + g_.nchi - 1) % g_.nchi), -w);
    }
}

PairOperators::PairOperators(const BoxGrid& g, const Background& bg) : g_(g), bg_(bg) {
    const int N = g.nodes(), D = g.dofs();
    if (static_cast<int>(bg.phi.size()) != N || static_cast<int>(bg.A.size()) != N)
        throw std::invalid_argument("PairOperators: background shape mismatch");
    const double beta = bg.beta;
    M_.resize(D);
    M2_.resize(D);
    u_.resize(N);
    std::vector<Trip> t0, t1, t1z, ts, ta, tx;
    std::vector<std::pair<int, double>> nb;
    for (int n = 0; n < N; ++n) {
        const PolarPoint p = g.node(n);
        const NodeGeom q = geom(p);
        const double wt = std::cosh(beta * p.r);
        const double vol = wt * wt * q.g * q.g * q.st * g.dr() * g.dth() * g.dchi();
        u_[n] = 2.0 * beta * std::tanh(beta * p.r);
        for (int k = 0; k < 3; ++k) {
            M_[dof(n, 0, k)] = vol;
            M2_[dof(n, 0, k)] = vol;
            for (int mu = 0; mu < 3; ++mu) {
                M_[dof(n, 1 + mu, k)] = vol * q.metric[mu];
                // |w|^2 for a 2-form equals |*w|^2 as a 1-form.
                M2_[dof(n, 1 + mu, k)] = vol * q.metric[mu] * q.s2[mu] * q.s2[mu];
            }
        }
        // d_A on 0-forms.
        for (int mu = 0; mu < 3; ++mu) {
            derivative_entries(n, mu, nb);
            for (auto [m, w] : nb) add_identity(t0, dof(n, 1 + mu, 0), dof(m, 0, 0), w);
            add_block(t0, dof(n, 1 + mu, 0), dof(n, 0, 0), ad_matrix(bg.A[n][mu]), 1.0);
        }
        // d_A on 1-forms.
        for (int rho = 0; rho < 3; ++rho) {
            const int mu = kPair[rho][0], nu = kPair[rho][1];
            const int row = dof(n, 1 + rho, 0);
            derivative_entries(n, mu, nb);
            for (auto [m, w] : nb) {
                add_identity(t1, row, dof(m, 1 + nu, 0), w);
                add_identity(t1z, row, dof(m, 1 + nu, 0), w);
            }
            derivative_entries(n, nu, nb);
            for (auto [m, w] : nb) {
                add_identity(t1, row, dof(m, 1 + mu, 0), -w);
                add_identity(t1z, row, dof(m, 1 + mu, 0), -w);
            }
            add_block(t1, row, dof(n, 1 + nu, 0), ad_matrix(bg.A[n][mu]), 1.0);
            add_block(t1, row, dof(n, 1 + mu, 0), ad_matrix(bg.A[n][nu]), -1.0);
            add_identity(ts, row, row, q.s2[rho]);
        }
        const Eigen::Matrix3d C = ad_matrix(bg.phi[n]);
        for (int s = 0; s < 4; ++s) add_block(ta, dof(n, s, 0), dof(n, s, 0), C, 1.0);
        // *(dr ^ b) = (0, -b_chi / sin, b_theta sin).
        add_identity(tx, dof(n, 2, 0), dof(n, 3, 0), -1.0 / q.st);
        add_identity(tx, dof(n, 3, 0), dof(n, 2, 0), q.st);
    }
    d0_ = build(D, t0);
    d1_ = build(D, t1);
    d1z_ = build(D, t1z);
    S2_ = build(D, ts);
    ad_ = build(D, ta);
    X_ = build(D, tx);
    d0d_ = adjoint(d0_);
    d1d_ = adjoint(d1_, M2_, M_);
    deltaA_ = d0d_ + d0_ - S2_ * d1_;
    delta_ = deltaA_ - ad_;
    deltad_ = adjoint(delta_);
}

double PairOperators::inner(const Vec& x, const Vec& y) const {
    if (x.size() != M_.size() || y.size() != M_.size()) throw std::invalid_argument("inner: shape mismatch");
    double s = 0.0;
    for (int i = 0; i < x.size(); ++i) s += M_[i] * x[i] * y[i];
    return s;
}

SpMat PairOperators::adjoint(const SpMat& X, const Vec& Min, const Vec& Mout) const {
    SpMat T = SpMat(X.transpose());
    Vec inv = Mout.cwiseInverse();
    return SpMat(diag(inv) * T * diag(Min));
}

Vec PairOperators::apply_delta(const Vec& zeta) const {
    if (zeta.size() != M_.size()) throw std::invalid_argument("apply_delta: shape mismatch");
    return delta_ * zeta;
}

Vec PairOperators::apply_delta_dagger(const Vec& eta) const {
    if (eta.size() != M_.size()) throw std::invalid_argument("apply_delta_dagger: shape mismatch");
    return deltad_ * eta;
}

Vec PairOperators::apply_LL(const Vec& eta) const { return delta_ * apply_delta_dagger(eta); }

SpMat PairOperators::W() const { return SpMat(adjoint(deltaA_) - deltaA_); }

SpMat PairOperators::W_formula() const { return SpMat(-(diag(node_field(u_)) * X_)); }

Vec PairOperators::node_field(const Vec& per_node) const {
    Vec x(M_.size());
    for (int n = 0; n < g_.nodes(); ++n)
        for (int i = 0; i < 12; ++i) x[12 * n + i] = per_node[n];
    return x;
}

SpMat PairOperators::E_dphi() const {
    const int N = g_.nodes();
    std::vector<Trip> t;
    for (int n = 0; n < N; ++n) {
        const PolarPoint p = g_.node(n);
        const NodeGeom q = geom(p);
        const double s1[3] = {q.g * q.g * q.st, q.st, 1.0 / q.st};
        const double s3 = 1.0 / (q.g * q.g * q.st);
        const OneForm& Dp = bg_.dphi[n];
        for (int mu = 0; mu < 3; ++mu) {
            const Eigen::Matrix3d C = ad_matrix(Dp[mu]);
            // -*[dPhi ^ *b]
            add_block(t, dof(n, 0, 0), dof(n, 1 + mu, 0), C, -s3 * s1[mu]);
            // [dPhi, psi]
            add_block(t, dof(n, 1 + mu, 0), dof(n, 0, 0), C, 1.0);
        }
        // -*[dPhi ^ b]
        for (int rho = 0; rho < 3; ++rho) {
            const int mu = kPair[rho][0], nu = kPair[rho][1];
            add_block(t, dof(n, 1 + rho, 0), dof(n, 1 + nu, 0), ad_matrix(Dp[mu]), -q.s2[rho]);
            add_block(t, dof(n, 1 + rho, 0), dof(n, 1 + mu, 0), ad_matrix(Dp[nu]), q.s2[rho]);
        }
    }
    return build(g_.dofs(), t);
}

SpMat PairOperators::E_weight() const { return SpMat(diag(node_field(u_)) * ad_ * X_); }

SpMat PairOperators::E() const { return SpMat(E_dphi() + E_weight()); }

SpMat PairOperators::T1() const {
    const SpMat U = diag(node_field(u_));
    return SpMat(S2_ * d1z_ * U * X_ - U * X_ * S2_ * d1z_);
}

SpMat PairOperators::hodge_laplacian() const { return SpMat(d0d_ * d0_ + d0_ * d0d_ + d1d_ * d1_); }

Vec PairOperators::L_map(const Vec& c) const {
    if (c.size() != M_.size()) throw std::invalid_argument("L_map: shape mismatch");
    const int N = g_.nodes();
    Vec out = Vec::Zero(c.size());
    std::vector<std::pair<int, double>> nb;
    for (int n = 0; n < N; ++n) {
        const NodeGeom q = geom(g_.node(n));
        AlgebraElement phi = get(c, n, 0);
        OneForm A{get(c, n, 1), get(c, n, 2), get(c, n, 3)};
        // dA[nu][mu] = d_nu A_mu, dphi[nu]
        std::array<AlgebraElement, 3> dphi{};
        std::array<std::array<AlgebraElement, 3>, 3> dA{};
        for (int nu = 0; nu < 3; ++nu) {
            derivative_entries(n, nu, nb);
            for (auto [m, w] : nb) {
                dphi[nu] += get(c, m, 0) * w;
                for (int mu = 0; mu < 3; ++mu) dA[nu][mu] += get(c, m, 1 + mu) * w;
            }
        }
        for (int rho = 0; rho < 3; ++rho) {
            const int mu = kPair[rho][0], nu = kPair[rho][1];
            const AlgebraElement F = dA[mu][nu] - dA[nu][mu] + bracket(A[mu], A[nu]);
            put(out, n, 1 + rho, dphi[rho] + bracket(A[rho], phi) - F * q.s2[rho]);
        }
    }
    return out;
}

Vec PairOperators::linearized_L(const Vec& zeta) const {
    Vec y = apply_delta(zeta);
    for (int n = 0; n < g_.nodes(); ++n) put(y, n, 0, AlgebraElement(0, 0, 0));
    return y;
}

Vec PairOperators::quadratic_term(const Vec& z) const {
    if (z.size() != M_.size()) throw std::invalid_argument("quadratic_term: shape mismatch");
    Vec out = Vec::Zero(z.size());
    for (int n = 0; n < g_.nodes(); ++n) {
        const NodeGeom q = geom(g_.node(n));
        const AlgebraElement phi = get(z, n, 0);
        OneForm a{get(z, n, 1), get(z, n, 2), get(z, n, 3)};
        for (int rho = 0; rho < 3; ++rho) {
            const int mu = kPair[rho][0], nu = kPair[rho][1];
            put(out, n, 1 + rho, bracket(a[rho], phi) - bracket(a[mu], a[nu]) * q.s2[rho]);
        }
    }
    return out;
}

Vec random_test_pair(const BoxGrid& g, std::mt19937_64& rng, int harmonics, double rlo, double rhi) {
    if (rlo < 0) rlo = g.r0;
    if (rhi < 0) rhi = g.r1;
    std::normal_distribution<double> nd;
    const double tlo = g.th0, thi = g.th1;
    auto bump = [](double x) {  // x in [-1, 1]
        const double y = 1.0 - x * x;
        return y > 0 ? y * y * y * y : 0.0;
    };
    std::vector<std::vector<double>> coef(12, std::vector<double>(2 * harmonics + 1));
    for (auto& cc : coef)
        for (auto& v : cc) v = nd(rng);
    Vec x = Vec::Zero(g.dofs());
    for (int n = 0; n < g.nodes(); ++n) {
        const PolarPoint p = g.node(n);
        const double br = bump(2.0 * (p.r - rlo) / (rhi - rlo) - 1.0);
        const double bt = bump(2.0 * (p.theta - tlo) / (thi - tlo) - 1.0);
        if (br == 0.0 || bt == 0.0) continue;
        const NodeGeom q = geom(p);
        for (int i = 0; i < 12; ++i) {
            const auto& cc = coef[i];
            double h = cc[0];
            for (int k = 1; k <= harmonics; ++k)
                h += cc[2 * k - 1] * std::cos(k * p.chi) + cc[2 * k] * std::sin(k * p.chi);
            x[12 * n + i] = br * bt * h * frame_scale(q, i / 3);
        }
    }
    return x;
}

double pointwise_sq(const BoxGrid& g, const Vec& x, int n) {
    const NodeGeom q = geom(g.node(n));
    double s = 0.0;
    for (int i = 0; i < 12; ++i) {
        const double v = x[12 * n + i] / frame_scale(q, i / 3);
        s += v * v;
    }
    return s;
}

double weighted_norm_box(const BoxGrid& g, const Vec& x, double p, double beta) {
    if (x.size() != g.dofs()) throw std::invalid_argument("weighted_norm_box: shape mismatch");
    double s = 0.0;
    for (int n = 0; n < g.nodes(); ++n) {
        const PolarPoint pt = g.node(n);
        const double wt = std::cosh(beta * pt.r);
        const double vol = wt * wt * std::pow(std::sinh(pt.r), 2) * std::sin(pt.theta) * g.dr() * g.dth() * g.dchi();
        s += std::pow(pointwise_sq(g, x, n), 0.5 * p) * vol;
    }
    return std::pow(s, 1.0 / p);
}

NormEstimate weighted_norm_radial(const std::function<double(double)>& f, double p, double beta, double L, int n) {
    if (!(p >= 1.0)) throw std::invalid_argument("weighted_norm_radial: p must be >= 1");
    auto integrand = [&](double r) {
        const double w = std::cosh(beta * r), g = std::sinh(r);
        return 4.0 * kPi * std::pow(std::abs(f(r)), p) * w * w * g * g;
    };
    if (n % 2) ++n;
    const double h = L / n;
    double s = integrand(0.0) + integrand(L);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * integrand(i * h);
    s *= h / 3.0;
    NormEstimate e;
    const double iL = integrand(L), iL1 = integrand(L - 1.0);
    double tail = 0.0;
    if (iL > 0.0) {
        const double kappa = std::log(iL1 / iL);
        if (!(kappa > 0.0)) {
            e.divergent = true;
            tail = INFINITY;
        } else {
            tail = iL / kappa;
        }
    }
    e.value = std::pow(s, 1.0 / p);
    e.tail = std::isfinite(tail) ? std::pow(s + tail, 1.0 / p) - e.value : INFINITY;
    if (!e.divergent && e.tail > 1e-6 * std::max(e.value, 1e-300) && e.tail > 1e-14) e.divergent = true;
    return e;
}

namespace {
double action_integral(const ConfigFn& f, double beta, double rmin, double L, int nr, int nth) {
    const double span = std::log(L / rmin), dt = 1.0 / nr, dth = kPi / nth;
    double s = 0.0;
    for (int a = 0; a < nr; ++a) {
        const double r = rmin * std::exp(span * (a + 0.5) * dt);
        const double jac = r * span * dt;
        const double g = std::sinh(r), w = std::cosh(beta * r);
        double ang = 0.0;
        for (int b = 0; b < nth; ++b) {
            const PolarPoint p{r, (b + 0.5) * dth, 0.0};
            const FieldJet j = analytic_jet(f, p);
            const double F = norm_two_form(field_strength(j), p), Dp = norm_one_form(covariant_dphi(j), p);
            ang += (F * F + Dp * Dp) * std::sin(p.theta) * dth;
        }
        s += ang * g * g * w * w * jac;
    }
    return 0.5 * 2.0 * kPi * s;
}
}  // namespace

NormEstimate weighted_action(const ConfigFn& f, double beta, double rmin, double L, int nr, int nth) {
    if (!(rmin > 0.0) || !(L > rmin)) throw std::invalid_argument("weighted_action: need 0 < rmin < L");
    NormEstimate e;
    e.value = action_integral(f, beta, rmin, L, nr, nth);
    const double inner = action_integral(f, beta, 0.5 * rmin, rmin, nr / 4 + 8, nth);
    const double outer = action_integral(f, beta, L, L + 2.0, nr / 4 + 8, nth);
    e.tail = inner + outer;
    e.divergent = !std::isfinite(e.value) || e.tail > 1e-3 * std::max(e.value, 1e-300);
    return e;
}

double rayleigh_quotient(const PairOperators& ops, RayleighOp op, const Vec& eta) {
    const BoxGrid& g = ops.grid();
    if (eta.size() != g.dofs()) throw std::invalid_argument("rayleigh_quotient: shape mismatch");
    Vec x = eta;
    if (op == RayleighOp::laplace0 || op == RayleighOp::laplace1) {
        for (int n = 0; n < g.nodes(); ++n)
            for (int i = 0; i < 12; ++i)
                if ((op == RayleighOp::laplace0) != (i < 3)) x[12 * n + i] = 0.0;
    }
    const double nn = ops.inner(x, x);
    if (!(nn > 0.0)) throw std::invalid_argument("rayleigh_quotient: zero input");
    Vec y;
    switch (op) {
        case RayleighOp::laplace0:
        case RayleighOp::laplace1:
        case RayleighOp::covariant_laplace: y = ops.hodge_laplacian() * x; break;
        case RayleighOp::floer: y = ops.delta_A() * (ops.adjoint(ops.delta_A()) * x); break;
        case RayleighOp::LL: y = ops.apply_LL(x); break;
    }
    return ops.inner(y, x) / nn;
}

namespace {
using RowMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

double slope_fit(const std::vector<double>& r, const std::vector<double>& tau, double from) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] < from || !(tau[i] > 0)) continue;
        const double y = std::log(tau[i]);
        sx += r[i];
        sy += y;
        sxx += r[i] * r[i];
        sxy += r[i] * y;
        ++n;
    }
    if (n < 2) return 0.0;
    return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Largest singular value of the local response of P to unit constant and
// unit-gradient linear fields at node n (orthonormal frame).
double local_norm(const BoxGrid& g, const RowMat& P, int n) {
    const PolarPoint pn = g.node(n);
    const NodeGeom qn = geom(pn);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(12, 48);
    for (int ro = 0; ro < 12; ++ro) {
        const int row = 12 * n + ro;
        const double so = frame_scale(qn, ro / 3);
        for (RowMat::InnerIterator it(P, row); it; ++it) {
            const int col = static_cast<int>(it.col());
            const int m = col / 12, ci = col % 12;
            const PolarPoint pm = g.node(m);
            const NodeGeom qm = geom(pm);
            double dchi = pm.chi - pn.chi;
            if (dchi > kPi) dchi -= 2.0 * kPi;
            if (dchi < -kPi) dchi += 2.0 * kPi;
            const double x[4] = {1.0, pm.r - pn.r, qn.g * (pm.theta - pn.theta), qn.g * qn.st * dchi};
            const double v = it.value() * frame_scale(qm, ci / 3) / so;
            for (int k = 0; k < 4; ++k) B(ro, 4 * ci + k) += v * x[k];
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
    return svd.singularValues()(0);
}
}  // namespace

RemainderProfile remainder_decay_profile(const BoxGrid& g, const ConfigFn& f, double beta, double fit_from) {
    PairOperators ops(g, sample_background(g, f, beta));
    PairOperators ops0(g, zero_background(g, beta));
    const SpMat dA = ops.delta_A(), d0 = ops0.delta_A();
    const RowMat RS = RowMat(dA * ops.adjoint(dA) - d0 * ops0.adjoint(d0));
    const RowMat E = RowMat(ops.E_dphi());
    const RowMat Ew = RowMat(ops.E_weight());
    const RowMat T = RowMat(ops0.T1());
    RemainderProfile prof;
    for (int a = 2; a + 2 < g.nr; ++a) {
        double trs = 0, te = 0, tw = 0, tt = 0;
        for (int b = 2; b + 2 < g.nth; ++b) {
            const int n = g.index(a, b, 0);
            trs = std::max(trs, local_norm(g, RS, n));
            te = std::max(te, local_norm(g, E, n));
            tw = std::max(tw, local_norm(g, Ew, n));
            tt = std::max(tt, local_norm(g, T, n));
        }
        prof.r.push_back(g.node(g.index(a, 0, 0)).r);
        prof.tau_RS.push_back(trs);
        prof.tau_E.push_back(te);
        prof.tau_Eweight.push_back(tw);
        prof.tau_T.push_back(tt);
    }
    prof.rate_RS = slope_fit(prof.r, prof.tau_RS, fit_from);
    prof.rate_E = slope_fit(prof.r, prof.tau_E, fit_from);
    return prof;
}

}  // namespace hypmono
