#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <random>
#include <vector>

#include "hypmono/fields.hpp"

namespace hypmono {

using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

// Cell-centered box in (r, theta, chi); theta stays off the axis, chi is periodic.
// Fields vanish outside the box (zero extension).
struct BoxGrid {
    double r0 = 1.0, r1 = 4.0;
    int nr = 12;
    double th0 = 0.4, th1 = 2.3;
    int nth = 10;
    int nchi = 8;

    double dr() const { return (r1 - r0) / nr; }
    double dth() const { return (th1 - th0) / nth; }
    double dchi() const;
    int nodes() const { return nr * nth * nchi; }
    int dofs() const { return 12 * nodes(); }
    int index(int a, int b, int c) const { return (a * nth + b) * nchi + c; }
    PolarPoint node(int n) const;
    void coords(int n, int& a, int& b, int& c) const;
};

// Pair layout per node: slot 0 = psi (3 comps), slots 1..3 = b_r, b_theta, b_chi.
// The same layout stores a configuration (Phi, A) and, for 2-forms, the
// components (theta chi, chi r, r theta) in slots 1..3.
inline int dof(int node, int slot, int comp) { return 12 * node + 3 * slot + comp; }

struct Background {
    std::vector<AlgebraElement> phi;
    std::vector<OneForm> A;
    std::vector<OneForm> dphi;  // exact d Phi0 from jets (used by the E term)
    double beta = 0.25;
};

Background sample_background(const BoxGrid& g, const ConfigFn& f, double beta);
Background zero_background(const BoxGrid& g, double beta);
// Configuration vector (Phi, A) of a background in pair layout.
Vec config_vector(const BoxGrid& g, const Background& bg);

class PairOperators {
public:
    PairOperators(const BoxGrid& g, const Background& bg);

    const BoxGrid& grid() const { return g_; }
    const Background& background() const { return bg_; }
    const Vec& mass() const { return M_; }
    const Vec& mass2() const { return M2_; }

    double inner(const Vec& x, const Vec& y) const;
    double norm(const Vec& x) const { return std::sqrt(inner(x, x)); }

    // Weighted adjoint X^dagger = M_out^{-1} X^T M_in.
    SpMat adjoint(const SpMat& X, const Vec& Min, const Vec& Mout) const;
    SpMat adjoint(const SpMat& X) const { return adjoint(X, M_, M_); }

    const SpMat& d0() const { return d0_; }        // d_A on 0-forms (slot 0 -> slots 1..3)
    const SpMat& d0_dag() const { return d0d_; }   // weighted codifferential on 1-forms
    const SpMat& d1() const { return d1_; }        // d_A on 1-forms (-> 2-form slots)
    const SpMat& d1_dag() const { return d1d_; }
    const SpMat& star2() const { return S2_; }
    const SpMat& ad_phi() const { return ad_; }

    const SpMat& delta_A() const { return deltaA_; }
    const SpMat& delta() const { return delta_; }
    const SpMat& delta_dagger() const { return deltad_; }
    SpMat LL() const { return delta_ * deltad_; }

    // Throw std::invalid_argument on a shape mismatch.
    Vec apply_delta(const Vec& zeta) const;
    Vec apply_delta_dagger(const Vec& eta) const;
    Vec apply_LL(const Vec& eta) const;
    // Slots 1..3 of delta zeta: the linearization of L_map.
    Vec linearized_L(const Vec& zeta) const;

    // W = delta_A^dagger - delta_A from the discrete adjoint, and the closed
    // form -u *(dr ^ b) with u = w'/w.
    SpMat W() const;
    SpMat W_formula() const;
    // E = dPhi part + weight part [Phi, u *(dr ^ b)], assembled pointwise.
    SpMat E_dphi() const;
    SpMat E_weight() const;
    SpMat E() const;
    // T1 at the zero connection (uses the flat d on 1-forms): *d(u *(dr^b)) - u *(dr ^ *db), u = 2 beta tanh(beta r).
    SpMat T1() const;
    // Weighted Hodge Laplacian (d0^dag d0 on psi; d0 d0^dag + d1^dag d1 on b).
    SpMat hodge_laplacian() const;

    // Discrete Bogomolny map of a configuration in pair layout (slot 0 = 0).
    Vec L_map(const Vec& config) const;
    // (0, sigma(zeta, zeta)), sigma = [a, phi] - *(a ^ a) with (a ^ a)_{mu nu} = [a_mu, a_nu].
    Vec quadratic_term(const Vec& zeta) const;

private:
    void derivative_entries(int n, int mu, std::vector<std::pair<int, double>>& out) const;
    Vec node_field(const Vec& per_node) const;

    BoxGrid g_;
    Background bg_;
    Vec M_, M2_, u_;
    SpMat d0_, d0d_, d1_, d1z_, d1d_, S2_, ad_, X_, deltaA_, delta_, deltad_;
};

// Random compactly supported pair: bumps in r and theta that vanish with
// three derivatives at the box faces, chi harmonics up to `harmonics`,
// random algebra directions in every component.
Vec random_test_pair(const BoxGrid& g, std::mt19937_64& rng, int harmonics = 2, double rlo = -1, double rhi = -1);

// Pointwise |eta|^2 at node n (orthonormal frame).
double pointwise_sq(const BoxGrid& g, const Vec& x, int n);

// (sum |eta|^p w dV)^{1/p} over the box.
double weighted_norm_box(const BoxGrid& g, const Vec& x, double p, double beta);

struct NormEstimate {
    double value = 0.0;
    double tail = 0.0;  // truncation-tail estimate
    bool divergent = false;
};

// Weighted L^p norm of a radial scalar on H^3 truncated at L.
NormEstimate weighted_norm_radial(const std::function<double(double)>& f, double p, double beta, double L,
                                  int n = 20000);

// (1/2) int (|F|^2 + |d_A Phi|^2) cosh^2(beta r) dV over r in [rmin, L], using
// axisymmetry of the gauge invariants. Divergence is flagged when halving rmin
// or growing L changes the value by more than a relative 1e-3.
NormEstimate weighted_action(const ConfigFn& f, double beta, double rmin, double L, int nr = 800, int nth = 64);

enum class RayleighOp { laplace0, laplace1, floer, covariant_laplace, LL };
double rayleigh_quotient(const PairOperators& ops, RayleighOp op, const Vec& eta);

struct RemainderProfile {
    std::vector<double> r;
    std::vector<double> tau_RS, tau_E, tau_Eweight, tau_T;
    double rate_RS = 0.0, rate_E = 0.0;  // fitted exponential decay rates
};

// Pointwise operator-norm envelope of the remainder terms per radial shell,
// probing each operator with local constant and linear fields.
RemainderProfile remainder_decay_profile(const BoxGrid& g, const ConfigFn& f, double beta, double fit_from);

}  // namespace hypmono
