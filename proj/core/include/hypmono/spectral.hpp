#pragma once

#include <functional>
#include <string>
#include <vector>

namespace hypmono {

enum class RadialKind { prototype, D0, D1, D2, D3, D3_floer };

std::string to_string(RadialKind k);
// Throws std::invalid_argument on an unknown name.
RadialKind radial_kind_from_string(const std::string& s);

enum class BoundaryAtZero { automatic, dirichlet, neumann };

struct RadialOperatorSpec {
    RadialKind kind = RadialKind::D1;
    double lambda = 2.0;  // sphere eigenvalue
    double gamma = 1.0;   // prototype drift
    double beta = 0.25;
    double L = 40.0;
    double h = 0.01;
    BoundaryAtZero bc = BoundaryAtZero::automatic;
    // Prototype potential c(x); defaults to 10 e^{-x}.
    std::function<double(double)> potential;
    // Extra potential added to every diagonal channel (compact perturbations).
    std::function<double(double)> perturbation;
    // Replace sinh r, cosh(beta r) by their exponential asymptotes.
    bool asymptotic = false;

    // Throws std::invalid_argument on h <= 0, L < 20, lambda < 0 or beta outside (0, 1).
    void validate() const;
    double onset() const;
    bool neumann_at_zero() const;
};

// Symmetric band matrix in lower storage: band[k][i] = A(i + k, i).
struct BandedSym {
    int n = 0;
    int kd = 0;
    std::vector<std::vector<double>> band;
    double at(int i, int j) const;
};

struct RadialOperator {
    std::vector<double> r;  // node radii (D3: one per (h3, h4) pair)
    // Stiffness K and the diagonal measure M: K f = mu M f.
    BandedSym K;
    std::vector<double> M;
    // The unitarily equivalent symmetric form M^{-1/2} K M^{-1/2}.
    BandedSym S;
};

// Divergence-form finite differences on the vertex grid r_i = i h, i = 1..n-1,
// Dirichlet at r = L. D3 interleaves (h3, h4) per node.
RadialOperator build_radial_operator(const RadialOperatorSpec& spec);

// Operator in the unweighted variable k = M^{1/2} f: the prototype becomes
// -k'' + (gamma_h^2 + c) k with gamma_h^2 = 2 (cosh(gamma h) - 1) / h^2, and
// D3 becomes a system in (k3, k4) whose couplings decay like e^{-r}.
// Throws std::invalid_argument unless kind is prototype, D3 or D3_floer.
BandedSym unitary_conjugate(const RadialOperatorSpec& spec);

// The Floer term -2 beta tanh(beta r) (h4, lambda g^{-2} h3) in the symmetric form,
// as a band matrix with the same layout as S.
BandedSym floer_coupling(const RadialOperatorSpec& spec);

struct Eigenpairs {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;  // in the symmetric (unweighted) variable
};

// Lowest `count` eigenvalues of a symmetric band matrix (LAPACK stevr / sbevx);
// vectors by inverse iteration when the bandwidth exceeds one.
Eigenpairs lowest_eigenpairs(const BandedSym& A, int count, bool vectors);
// All eigenvalues of the generalized problem K f = mu M f (LAPACK sbgv).
std::vector<double> generalized_eigenvalues(const RadialOperator& op);

struct EstimateOptions {
    std::vector<double> hs{0.02, 0.01, 0.005};
    std::vector<double> Ls{40.0, 60.0};
    int count = 4;
    double stability_tol = 1e-4;  // |mu(L2) - mu(L1)| for an L-stable eigenvalue
    double outer_fraction = 0.1;  // eigenvector mass beyond L1/2 for interior localization
};

struct ResolutionRow {
    double h, L;
    std::vector<double> values;
};

struct SpectrumEstimate {
    double onset_predicted = 0.0;
    double bottom = 0.0;
    // Flagged genuine eigenvalues below onset (h-extrapolated, largest L).
    std::vector<double> discrete_below_onset;
    // L- and h-extrapolated lowest eigenvalue not flagged as genuine.
    double onset_estimate = 0.0;
    // Size of the extrapolation corrections; used as the convergence tolerance.
    double tolerance = 0.0;
    double h_order = 0.0;  // observed order of the lowest eigenvalue under h-halving
    bool converged = true;
    std::vector<ResolutionRow> resolution;
};

SpectrumEstimate estimate_spectrum(const RadialOperatorSpec& spec, const EstimateOptions& opt = {});

struct ScanRow {
    RadialKind kind;
    double beta, lambda, onset, bottom;
    int candidates;  // genuine eigenvalues below onset
    std::vector<double> eigenvalues;
};

struct SweepSpec {
    std::vector<RadialKind> kinds{RadialKind::D0, RadialKind::D1, RadialKind::D2, RadialKind::D3,
                                  RadialKind::D3_floer};
    std::vector<double> betas{0.25, 0.5, 0.75};
    double h = 0.01;  // finest step; coarser steps are 2h, 4h
};

// Admissible sphere eigenvalues per kind: D0 {0,2,6,12}, D2 {0}, others {2,6,12}.
std::vector<double> sweep_lambdas(RadialKind k);

std::vector<ScanRow> no_eigenvalue_scan(const SweepSpec& sweep);

struct CompactnessRow {
    RadialKind kind;
    double beta, lambda, amplitude;
    double onset_base, onset_perturbed, shift, tolerance;
    bool within;
};

// Smooth bump supported in [1, 3] with peak 1.
double compact_bump(double r);

// Adds amplitude * compact_bump(r) for each amplitude and compares onset estimates.
std::vector<CompactnessRow> compactness_experiment(const std::vector<RadialOperatorSpec>& specs,
                                                   const std::vector<double>& amplitudes,
                                                   const EstimateOptions& opt = {});

}  // namespace hypmono
