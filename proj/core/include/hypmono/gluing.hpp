#pragma once

#include <vector>

#include "hypmono/fields.hpp"

namespace hypmono {

struct GluingSpec {
    MonopoleParams params;
    CenterSet centers;
    double beta = 0.25;
    // Width of the transition band [2R - width, 2R]; capped at R.
    double band_width = 1.0;

    double R() const { return centers.R; }
    double band() const { return band_width < centers.R ? band_width : centers.R; }
    // Throws std::invalid_argument on beta >= min(1, m), bad centers or band.
    void validate() const;
};

GluingSpec single_center(double m, double R, double beta);

template <class T>
T smoothstep5(const T& t) {
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

// lambda_i as a function of r_i: 1 on [0, 2R - band], 0 beyond 2R, C^2 in between.
template <class T>
T partition_lambda(const T& ri, double R, double band) {
    const double lo = 2.0 * R - band;
    if (value(ri) <= lo) return T(1.0);
    if (value(ri) >= 2.0 * R) return T(0.0);
    return 1.0 - smoothstep5((ri - lo) / band);
}

struct PartitionWeights {
    std::vector<double> lambda;
    double lambda_inf = 1.0;
};

// p in the reference chart (origin of the axis).
PartitionWeights partition_of_unity(const GluingSpec& spec, const PolarPoint& p);

// c0 in the chart of center i. Valid where no other center's weight is active;
// throws std::domain_error otherwise (evaluate in that center's chart instead).
template <class T>
Config<T> approximate_monopole(const GluingSpec& spec, int i, const Polar<T>& p, GaugePatch patch) {
    const CenterSet& cs = spec.centers;
    for (int j = 0; j < cs.k(); ++j) {
        if (j == i) continue;
        const Polar<T> q = transfer_chart(cs, i, j, p);
        if (value(q.r) < 2.0 * cs.R)
            throw std::domain_error("approximate_monopole: point inside another center's ball");
    }
    const T lam = partition_lambda(p.r, cs.R, spec.band());
    if (value(lam) >= 1.0) return chakrabarti(spec.params, p, patch);
    Config<T> cinf = dirac_infinity(spec.params, cs, i, p, patch);
    if (value(lam) <= 0.0) return cinf;
    Config<T> ci = chakrabarti(spec.params, p, patch);
    const T lin = 1.0 - lam;
    Config<T> c;
    c.phi = ci.phi * lam + cinf.phi * lin;
    for (int mu = 0; mu < 3; ++mu) c.A[mu] = ci.A[mu] * lam + cinf.A[mu] * lin;
    return c;
}

ConfigFn approximate_monopole_fn(const GluingSpec& spec, int i, GaugePatch patch);

// Index of the center closest to a reference-chart point.
int nearest_center(const CenterSet& cs, const PolarPoint& p);

// Jet of c0 at a point given in the chart of center i; evaluated in the
// nearest center's chart, patch chosen by the hemisphere there.
struct ChartJet {
    int chart;
    PolarPoint p;  // coordinates in `chart`
    FieldJet jet;
};
ChartJet c0_jet(const GluingSpec& spec, int i, const PolarPoint& p);

double residual_norm_at(const GluingSpec& spec, int i, const PolarPoint& p);

struct BoundScan {
    double K = 0.0;
    double max_residual = 0.0;
    double K_refined = 0.0;  // same scan on a doubled grid
    bool resolved = true;    // |K - K_refined| <= 1% K
    struct Node {
        double r, theta, residual, bound;
    };
    std::vector<Node> nodes;
};

// Fits the smallest K with |L c0| <= K (e^{-alpha r_i} + e^{-4R}) on the annulus R <= r_i <= 2R.
BoundScan pointwise_bound_scan(const GluingSpec& spec, int i, int nr, int ntheta);

struct NormOptions {
    int nr = 200;      // per unit of radial band
    int ntheta = 200;
};

// ||L c0||_{2,beta} over the union of the annuli (c0 is exact elsewhere).
double weighted_residual_norm(const GluingSpec& spec, const NormOptions& opt = {});

struct SlopeFit {
    std::vector<double> R, norm;
    double slope = 0.0, intercept = 0.0;
    bool below_floor = false;  // some norm under the quadrature floor
};
SlopeFit residual_decay_fit(double m, double beta, const std::vector<double>& Rs, const NormOptions& opt = {});

}  // namespace hypmono
