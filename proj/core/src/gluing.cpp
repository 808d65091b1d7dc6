#include "hypmono/gluing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hypmono {

void GluingSpec::validate() const {
    if (!(params.m > 0)) throw std::invalid_argument("mass must be positive");
    if (!(beta > 0) || beta >= std::min(1.0, params.m))
        throw std::invalid_argument("beta must satisfy 0 < beta < min(1, m)");
    if (!(band_width > 0)) throw std::invalid_argument("band_width must be positive");
    centers.validate();
}

GluingSpec single_center(double m, double R, double beta) {
    GluingSpec s;
    s.params.m = m;
    s.centers.s = {0.0};
    s.centers.R = R;
    s.beta = beta;
    return s;
}

PartitionWeights partition_of_unity(const GluingSpec& spec, const PolarPoint& p) {
    PartitionWeights pw;
    double sum = 0.0;
    for (int j = 0; j < spec.centers.k(); ++j) {
        const double rj = chart_coordinates(spec.centers, j, p).r;
        const double l = partition_lambda(rj, spec.R(), spec.band());
        pw.lambda.push_back(l);
        sum += l;
    }
    pw.lambda_inf = 1.0 - sum;
    return pw;
}

ConfigFn approximate_monopole_fn(const GluingSpec& spec, int i, GaugePatch patch) {
    return [spec, i, patch](const Polar<Dual3>& q) { return approximate_monopole(spec, i, q, patch); };
}

int nearest_center(const CenterSet& cs, const PolarPoint& p) {
    int best = 0;
    double dbest = 1e300;
    for (int j = 0; j < cs.k(); ++j) {
        const double d = shift_axial(p, cs.s[j]).r;
        if (d < dbest) {
            dbest = d;
            best = j;
        }
    }
    return best;
}

ChartJet c0_jet(const GluingSpec& spec, int i, const PolarPoint& p) {
    const CenterSet& cs = spec.centers;
    const PolarPoint ref = cs.s[i] == 0.0 ? p : shift_axial(p, -cs.s[i]);
    const int n = nearest_center(cs, ref);
    ChartJet cj;
    cj.chart = n;
    cj.p = transfer_chart(cs, i, n, p);
    const GaugePatch patch = cj.p.theta < 0.5 * std::numbers::pi ? GaugePatch::north : GaugePatch::south;
    cj.jet = analytic_jet(approximate_monopole_fn(spec, n, patch), cj.p);
    return cj;
}

double residual_norm_at(const GluingSpec& spec, int i, const PolarPoint& p) {
    const ChartJet cj = c0_jet(spec, i, p);
    return norm_one_form(bogomolny_residual(cj.jet, cj.p), cj.p);
}

namespace {
double scan_K(const GluingSpec& spec, int i, int nr, int nth, std::vector<BoundScan::Node>* nodes) {
    const double R = spec.R(), alpha = spec.params.alpha();
    const double dr = R / nr, dth = std::numbers::pi / nth;
    double K = 0.0;
    for (int a = 0; a < nr; ++a) {
        const double r = R + (a + 0.5) * dr;
        const double bound = std::exp(-alpha * r) + std::exp(-4.0 * R);
        for (int b = 0; b < nth; ++b) {
            const PolarPoint p{r, (b + 0.5) * dth, 0.3};
            const double res = residual_norm_at(spec, i, p);
            K = std::max(K, res / bound);
            if (nodes) nodes->push_back({r, p.theta, res, bound});
        }
    }
    return K;
}
}  // namespace

BoundScan pointwise_bound_scan(const GluingSpec& spec, int i, int nr, int ntheta) {
    BoundScan s;
    s.K = scan_K(spec, i, nr, ntheta, &s.nodes);
    for (const auto& n : s.nodes) s.max_residual = std::max(s.max_residual, n.residual);
    s.K_refined = scan_K(spec, i, 2 * nr, 2 * ntheta, nullptr);
    s.resolved = std::abs(s.K - s.K_refined) <= 0.01 * std::max(s.K, s.K_refined) || s.K_refined == 0.0;
    return s;
}

double weighted_residual_norm(const GluingSpec& spec, const NormOptions& opt) {
    const double R = spec.R(), band = spec.band();
    const int nr = std::max(20, static_cast<int>(std::lround(opt.nr * band)));
    const int nth = opt.ntheta;
    const double dr = band / nr, dth = std::numbers::pi / nth;
    double total = 0.0;
    for (int i = 0; i < spec.centers.k(); ++i) {
        const double si = spec.centers.s[i];
        double acc = 0.0;
        for (int a = 0; a < nr; ++a) {
            const double r = 2.0 * R - band + (a + 0.5) * dr;
            const double g = std::sinh(r);
            for (int b = 0; b < nth; ++b) {
                const PolarPoint p{r, (b + 0.5) * dth, 0.3};
                const double res = residual_norm_at(spec, i, p);
                const double r0 = si == 0.0 ? r : shift_axial(p, -si).r;
                const double w = std::cosh(spec.beta * r0);
                acc += res * res * w * w * g * g * std::sin(p.theta);
            }
        }
        total += acc * dr * dth * 2.0 * std::numbers::pi;
    }
    return std::sqrt(total);
}

SlopeFit residual_decay_fit(double m, double beta, const std::vector<double>& Rs, const NormOptions& opt) {
    SlopeFit f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double R : Rs) {
        const double v = weighted_residual_norm(single_center(m, R, beta), opt);
        f.R.push_back(R);
        f.norm.push_back(v);
        if (!(v > 1e-280) || !std::isfinite(v)) {
            f.below_floor = true;
            continue;
        }
        const double y = std::log(v);
        sx += R;
        sy += y;
        sxx += R * R;
        sxy += R * y;
        ++n;
    }
    if (n >= 2) {
        f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        f.intercept = (sy - f.slope * sx) / n;
    }
    return f;
}

}  // namespace hypmono
