#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

#include "hypmono/fields.hpp"
#include "hypmono/gluing.hpp"

namespace hypmono {

// Spherically symmetric sector in the base gauge:
//   Phi = h e1,  A = -cos(theta) dchi e1 + a dr e1 + w1 U1 + w2 U2,
//   U1 = dtheta e3 + sin(theta) dchi e2,  U2 = dtheta e2 - sin(theta) dchi e3.
// The Bogomolny residual is P dr e1 + Q1 U1 + Q2 U2 with
//   P  = h' - (1 - w1^2 - w2^2) / sinh^2 r,
//   Q1 = a w1 - h w2 - w2',
//   Q2 = w1' + h w1 + a w2,
// and |R|^2 = P^2 + 2 (Q1^2 + Q2^2) / sinh^2 r.
template <class T>
struct ReducedResidual {
    T P, Q1, Q2;
};

template <class T>
ReducedResidual<T> reduced_residual(const T& r, const T& h, const T& dh, const T& a, const T& w1, const T& dw1,
                                    const T& w2, const T& dw2) {
    using std::sinh;
    const T g = sinh(r);
    return {dh - (1.0 - w1 * w1 - w2 * w2) / (g * g), a * w1 - h * w2 - dw2, dw1 + h * w1 + a * w2};
}

// (w' + h w, h' - (1 - w^2) / sinh^2 r) for the two-profile hedgehog.
inline std::array<double, 2> hedgehog_residual(double r, double h, double dh, double w, double dw) {
    const double g = std::sinh(r);
    return {dw + h * w, dh - (1.0 - w * w) / (g * g)};
}

template <class T>
Config<T> hedgehog_config(const Polar<T>& p, const T& h, const T& a, const T& w1, const T& w2) {
    using std::cos;
    using std::sin;
    const T ct = cos(p.theta), st = sin(p.theta);
    const T zero(0.0);
    Config<T> c;
    c.phi = Alg<T>(h, zero, zero);
    c.A[0] = Alg<T>(a, zero, zero);
    c.A[1] = Alg<T>(zero, w2, w1);
    c.A[2] = Alg<T>(-ct, w1 * st, -(w2 * st));
    return c;
}

struct RadialProfiles {
    std::vector<double> r, h, w;
};

RadialProfiles chakrabarti_profiles(const MonopoleParams& mp, const std::vector<double>& r);
// k = 1 start: h0 = lambda h_C + (1 - lambda)(m + 1 - coth r), w0 = lambda w_C.
// Throws std::invalid_argument unless there is exactly one center.
RadialProfiles radial_glued_start(const GluingSpec& spec, const std::vector<double>& r);

using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

// Staggered discretization on [0, L]:
//   configurations and zeta = (s, alpha, v1, v2) on half nodes r_j = (j + 1/2) dx, j < N;
//   eta and residuals (slice, P, Q1, Q2) on interior nodes r_i = i dx, 0 < i < N (Dirichlet).
// Block layout: component-major, Z blocks of N, Y blocks of N - 1.
class ReducedProblem {
public:
    ReducedProblem(const GluingSpec& spec, double L, double dx);

    const GluingSpec& spec() const { return spec_; }
    int N() const { return N_; }
    double dx() const { return dx_; }
    double L() const { return N_ * dx_; }
    int nY() const { return 4 * (N_ - 1); }
    int nZ() const { return 4 * N_; }
    double r_half(int j) const { return (j + 0.5) * dx_; }
    double r_node(int i) const { return (i + 1) * dx_; }  // Y index i

    const Vec& c0() const { return c0_; }
    const Vec& G0() const { return G0_; }
    const SpMat& delta() const { return delta_; }
    const SpMat& delta_dagger() const { return deltad_; }
    const SpMat& LL() const { return LL_; }
    const Vec& MY() const { return MY_; }
    const Vec& MZ() const { return MZ_; }

    // Bogomolny residual of a configuration (slot 0 = 0).
    Vec residual(const Vec& c) const;
    // Symmetric bilinear part of the residual; sigma(z, z) = bilinear(z, z).
    Vec bilinear(const Vec& x, const Vec& y) const;
    // y -> 2 bilinear(x, y) as a sparse matrix.
    SpMat bilinear_matrix(const Vec& x) const;

    double normY(const Vec& y) const;
    double normZ(const Vec& z) const;
    // ||eta||_H^2 = ||eta||^2 + ||delta^dagger eta||^2.
    double normH(const Vec& eta) const;
    // Weighted L^p norms from pointwise |.| on each staggering.
    double normY_p(const Vec& y, double p) const;
    double normZ_p(const Vec& z, double p) const;
    // Pointwise |R|(r_i) for a Y vector.
    double pointwise_Y(const Vec& y, int i) const;

    // Component views of a Z vector: h, a, w1, w2 at half nodes.
    double comp(const Vec& z, int k, int j) const { return z[k * N_ + j]; }

private:
    GluingSpec spec_;
    int N_;
    double dx_;
    std::vector<double> gi2_, Wi_, gj2_, Wj_;
    Vec c0_, G0_, MY_, MZ_;
    SpMat delta_, deltad_, LL_;
};

struct SolverParams {
    int t_steps = 10;
    double newton_tol = 1e-9;
    int max_newton = 20;
    double min_dt = 1e-3;
    double lambda_ball = 0.0;  // <= 0: set to 4 ||G0|| / alpha1
    int probes = 16;
    std::uint64_t seed = 1;
};

struct StepRecord {
    double t;
    int iterations;
    std::vector<double> residuals;  // Newton residual after each iterate
    double eta_H;
    double order;  // observed convergence order from the last three residuals (NaN if unavailable)
    bool accepted;
};

struct Calibration {
    double alpha1 = 0.0;  // inf ||L eta|| / ||eta||_H
    double mu_min = 0.0;  // lowest eigenvalue of delta delta^dagger
    double alpha2 = 0.0;  // sup ||(d^dag e1) # (d^dag e2)|| / (||e1||_H ||e2||_H) over probes
};

Calibration calibrate(const ReducedProblem& pb, int probes, std::uint64_t seed);

struct SolveResult {
    bool converged = false;
    bool ball_ok = true;
    double t_reached = 0.0;
    Vec eta, config;
    std::vector<StepRecord> trace;
    Calibration cal;
    double G0_norm = 0.0;
    double lambda_ball = 0.0;
    bool smallness_ok = false;  // ||G0|| <= alpha1 lambda / 4
    bool regime_ok = false;     // lambda < alpha1 / (4 alpha2^2)
    double sup_residual = 0.0;  // pointwise sup of the reduced residual at t = 1
};

SolveResult continuity_solve(const ReducedProblem& pb, const SolverParams& sp);

struct LinearSolveResult {
    Vec eta;
    double residual = 0.0;
    double alpha_prime = 0.0;  // inf ||L_nu eta|| / ||eta||_H by inverse iteration
    bool ok = false;
};

// Solves (delta delta^dagger + nu # delta^dagger) eta = rhs by sparse LU.
LinearSolveResult linearized_solve(const ReducedProblem& pb, const Vec& nu, const Vec& rhs, int iterations = 30);

struct ProfileComparison {
    double phi_err = 0.0, F_err = 0.0, w_err = 0.0;  // relative sup errors
};

// |Phi|, |F| and |w| of the configuration against the exact profiles on [rlo, rhi].
ProfileComparison compare_with_chakrabarti(const ReducedProblem& pb, const Vec& c, double rlo, double rhi);

RadialProfiles profiles_of(const ReducedProblem& pb, const Vec& c);

// Smooth cubic Hermite interpolant of the configuration lifted to 3-D; the sup of
// the full Bogomolny residual over random points with r in [rlo, rhi].
double lifted_residual_sup(const ReducedProblem& pb, const Vec& c, double rlo, double rhi, int points,
                           std::uint64_t seed);

struct ChargeMass {
    double k_est = 0.0, m_est = 0.0;
};

struct ChargeOptions {
    double r_max = 20.0;
    double dr = 0.01;
    int ntheta = 96;
};

// Single-chart configuration regular off the axis (e.g. the exact monopole).
ChargeMass charge_and_mass(const ConfigFn& f, const ChargeOptions& opt = {});
// Glued configuration, integrand split over charts by softmax weights exp(-r_i).
ChargeMass charge_and_mass(const GluingSpec& spec, const ChargeOptions& opt = {});
// Reduced configuration: radial quadrature of <*F, d_A Phi> on the interior nodes.
ChargeMass charge_and_mass(const ReducedProblem& pb, const Vec& c);

}  // namespace hypmono
