#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "hypmono/gluing.hpp"
#include "hypmono/weighted.hpp"
#include "support/oracles.hpp"

using namespace hypmono;
constexpr double pi = std::numbers::pi;

namespace {
BoxGrid small_grid(int lev = 0) {
    BoxGrid g;
    g.r0 = 1.0;
    g.r1 = 3.0;
    g.nr = 12 << lev;
    g.th0 = 0.6;
    g.th1 = 2.2;
    g.nth = 10 << lev;
    g.nchi = 8 << lev;
    return g;
}

ConfigFn exact(double m) { return chakrabarti_fn({m}, GaugePatch::base); }

ConfigFn abelian_fn(double m) {
    const CenterSet one{{0.0}, 1.0};
    const MonopoleParams mp{m};
    return [mp, one](const Polar<Dual3>& q) { return dirac_infinity(mp, one, 0, q, GaugePatch::north); };
}

ConfigFn constant_higgs(double v) {
    return [v](const Polar<Dual3>&) {
        Config<Dual3> c;
        c.phi = Alg<Dual3>(Dual3(v), Dual3(0.0), Dual3(0.0));
        for (auto& a : c.A) a = Alg<Dual3>(Dual3(0.0), Dual3(0.0), Dual3(0.0));
        return c;
    };
}

double rel(const PairOperators& o, const Vec& a, const Vec& b) {
    return o.norm(a - b) / std::max(o.norm(a), o.norm(b));
}

// Keeps only the e1 components of every slot.
Vec abelian_part(const Vec& x) {
    Vec y = x;
    for (int i = 0; i < y.size(); ++i)
        if (i % 3) y[i] = 0.0;
    return y;
}
}  // namespace

TEST(Weighted, BoxGridIndexing) {
    const BoxGrid g = small_grid();
    for (int n : {0, 17, g.nodes() - 1}) {
        int a, b, c;
        g.coords(n, a, b, c);
        EXPECT_EQ(g.index(a, b, c), n);
    }
    EXPECT_EQ(g.dofs(), 12 * g.nodes());
    EXPECT_EQ(dof(2, 3, 1), 24 + 10);
}

TEST(Weighted, RadialNormMatchesQuadratureOracle) {
    const double beta = 0.25;
    EXPECT_EQ(weighted_norm_radial([](double) { return 0.0; }, 2, beta, 40).value, 0.0);
    for (double s : {1.5, 2.0, 3.0}) {
        const NormEstimate e = weighted_norm_radial([s](double r) { return std::exp(-s * r); }, 2, beta, 60);
        const double ref = oracle::adaptive(
            [&](double r) {
                return 4 * pi * std::exp(-2 * s * r) * std::pow(std::cosh(beta * r) * std::sinh(r), 2);
            },
            0, 200, 1e-13);
        EXPECT_NEAR(e.value, std::sqrt(ref), 1e-7 * std::sqrt(ref)) << "s = " << s;
        EXPECT_FALSE(e.divergent);
    }
    // Finite only for s > 1 + beta.
    EXPECT_TRUE(weighted_norm_radial([](double r) { return std::exp(-1.1 * r); }, 2, beta, 60).divergent);
}

TEST(Weighted, ActionOfExactMonopoleAndDivergences) {
    for (double m : {1.0, 2.7}) {
        const NormEstimate e = weighted_action(exact(m), 0.0, 1e-3, 30.0, 1200, 48);
        EXPECT_FALSE(e.divergent);
        EXPECT_NEAR(e.value, 4 * pi * m, 2e-3 * 4 * pi * m) << "m = " << m;
    }
    const NormEstimate c0 = weighted_action(approximate_monopole_fn(single_center(1.0, 2.0, 0.25), 0, GaugePatch::north),
                                            0.25, 1e-3, 40.0, 1600, 48);
    EXPECT_FALSE(c0.divergent);
    EXPECT_TRUE(std::isfinite(c0.value));
    const NormEstimate d = weighted_action(abelian_fn(1.0), 0.25, 1e-3, 30.0, 800, 32);
    EXPECT_TRUE(d.divergent);
    EXPECT_NEAR(weighted_action(constant_higgs(1.3), 0.25, 0.1, 10.0, 100, 16).value, 0.0, 1e-15);
}

class WeightedOps : public ::testing::Test {
protected:
    BoxGrid g = small_grid();
    PairOperators ops{g, sample_background(g, exact(1.0), 0.25)};
    std::mt19937_64 rng{42};
};

TEST_F(WeightedOps, TrivialInputs) {
    const Vec zero = Vec::Zero(g.dofs());
    EXPECT_EQ(ops.apply_delta(zero).norm(), 0.0);
    EXPECT_EQ(ops.apply_delta_dagger(zero).norm(), 0.0);
    EXPECT_EQ(ops.apply_LL(zero).norm(), 0.0);
    EXPECT_EQ(ops.quadratic_term(zero).norm(), 0.0);
    EXPECT_THROW(ops.apply_delta(Vec::Zero(5)), std::invalid_argument);
    EXPECT_THROW(ops.apply_delta_dagger(Vec::Zero(5)), std::invalid_argument);
    EXPECT_THROW(ops.apply_LL(Vec::Zero(5)), std::invalid_argument);
    EXPECT_EQ(weighted_norm_box(g, zero, 2, 0.25), 0.0);
}

TEST_F(WeightedOps, AdjointnessAndEnergyIdentity) {
    for (int n = 0; n < 10; ++n) {
        const Vec z = random_test_pair(g, rng), e = random_test_pair(g, rng);
        const Vec dz = ops.apply_delta(z), dde = ops.apply_delta_dagger(e);
        EXPECT_LT(std::abs(ops.inner(dz, e) - ops.inner(z, dde)) / (ops.norm(dz) * ops.norm(e)), 1e-10);
        EXPECT_NEAR(ops.inner(ops.apply_LL(e), e), ops.inner(dde, dde), 1e-10 * ops.inner(dde, dde));
    }
}

TEST_F(WeightedOps, HiggsActionIsSkewAdjoint) {
    const SpMat& ad = ops.ad_phi();
    for (int n = 0; n < 5; ++n) {
        const Vec a = random_test_pair(g, rng), b = random_test_pair(g, rng);
        EXPECT_LT(std::abs(ops.inner(ad * a, b) + ops.inner(a, ad * b)), 1e-12 * ops.norm(a) * ops.norm(b));
    }
}

TEST_F(WeightedOps, QuadraticIdentityAndTaylorOrder) {
    const Vec c = config_vector(g, ops.background());
    const Vec z = random_test_pair(g, rng);
    const Vec q = ops.L_map(c + z) - ops.L_map(c) - ops.linearized_L(z) - ops.quadratic_term(z);
    EXPECT_LT(ops.norm(q) / ops.norm(ops.quadratic_term(z)), 1e-12);
    std::vector<double> err;
    for (double eps : {1e-1, 5e-2, 2.5e-2}) {
        const Vec r = ops.L_map(c + eps * z) - ops.L_map(c) - eps * ops.linearized_L(z);
        err.push_back(ops.norm(r));
    }
    EXPECT_GE(oracle::order(err[0], err[1], err[2]), 1.95);
}

TEST_F(WeightedOps, RayleighHomogeneity) {
    const Vec e = random_test_pair(g, rng);
    EXPECT_NEAR(rayleigh_quotient(ops, RayleighOp::LL, 3.7 * e), rayleigh_quotient(ops, RayleighOp::LL, e),
                1e-12 * rayleigh_quotient(ops, RayleighOp::LL, e));
    EXPECT_THROW(rayleigh_quotient(ops, RayleighOp::LL, Vec::Zero(g.dofs())), std::invalid_argument);
}

TEST(Weighted, AbelianDegeneration) {
    const BoxGrid g = small_grid();
    const PairOperators ops(g, sample_background(g, abelian_fn(1.0), 0.25));
    std::mt19937_64 rng(4);
    const Vec z = abelian_part(random_test_pair(g, rng));
    EXPECT_LT(ops.quadratic_term(z).norm(), 1e-14);
    // Brackets vanish, so delta keeps the e1 line.
    const Vec dz = ops.apply_delta(z);
    EXPECT_LT((dz - abelian_part(dz)).norm(), 1e-14 * dz.norm());
}

TEST(Weighted, ExactMonopoleDiscreteResidualConverges) {
    std::vector<double> err;
    for (int lev = 0; lev < 2; ++lev) {
        const BoxGrid g = small_grid(lev);
        const PairOperators ops(g, sample_background(g, exact(1.0), 0.25));
        const Vec L = ops.L_map(config_vector(g, ops.background()));
        double worst = 0.0;
        const int m = 2 << lev;
        for (int n = 0; n < g.nodes(); ++n) {
            int a, b, c;
            g.coords(n, a, b, c);
            if (a < m || a >= g.nr - m || b < m || b >= g.nth - m) continue;
            worst = std::max(worst, std::sqrt(pointwise_sq(g, L, n)));
        }
        err.push_back(worst);
    }
    EXPECT_GT(err[0] / err[1], 3.0);
}

TEST(Weighted, RemainderTermsConvergeAtSecondOrder) {
    std::vector<double> eW, eE, eT;
    for (int lev = 0; lev < 2; ++lev) {
        const BoxGrid g = small_grid(lev);
        const PairOperators ops(g, sample_background(g, exact(1.0), 0.25));
        const PairOperators ops0(g, zero_background(g, 0.25));
        std::mt19937_64 rng(1);
        const Vec z = random_test_pair(g, rng), e = random_test_pair(g, rng);
        eW.push_back(rel(ops, ops.W() * z, ops.W_formula() * z));
        const SpMat dA = ops.delta_A();
        const SpMat dAd = ops.adjoint(dA);
        const Vec lhs = ops.apply_LL(e) - dA * (dAd * e) + ops.ad_phi() * (ops.ad_phi() * e);
        eE.push_back(rel(ops, lhs, ops.E() * e));
        const SpMat d0 = ops0.delta_A();
        const Vec lt = d0 * (ops0.adjoint(d0) * e) - ops0.hodge_laplacian() * e;
        eT.push_back(rel(ops0, lt, ops0.T1() * e));
    }
    EXPECT_GT(eW[0] / eW[1], 3.0);
    EXPECT_GT(eE[0] / eE[1], 3.0);
    EXPECT_GT(eT[0] / eT[1], 3.0);
    EXPECT_LT(eW[1], 0.05);
    EXPECT_LT(eE[1], 0.05);
    EXPECT_LT(eT[1], 0.05);
}

TEST(Weighted, RemainderDecayRates) {
    BoxGrid g;
    g.r0 = 1.0;
    g.r1 = 7.0;
    g.nr = 30;
    g.th0 = 0.6;
    g.th1 = 2.2;
    g.nth = 8;
    g.nchi = 6;
    const RemainderProfile p = remainder_decay_profile(g, exact(1.0), 0.25, 3.0);
    ASSERT_FALSE(p.r.empty());
    EXPECT_NEAR(p.rate_E, 2.0, 0.3);
    EXPECT_NEAR(p.rate_RS, 1.0, 0.3);
    for (std::size_t i = 0; i < p.r.size(); ++i) {
        EXPECT_LE(p.tau_T[i], 2 * 0.25 * 3.0);
        EXPECT_GT(p.tau_Eweight[i], 0.0);
    }

    // Zero connection, constant Higgs field and beta = 0: every remainder vanishes.
    const RemainderProfile z = remainder_decay_profile(g, constant_higgs(1.0), 0.0, 3.0);
    for (std::size_t i = 0; i < z.r.size(); ++i) {
        EXPECT_LT(z.tau_RS[i], 1e-10);
        EXPECT_LT(z.tau_E[i], 1e-10);
        EXPECT_LT(z.tau_T[i], 1e-10);
    }
}

TEST(Weighted, CoercivityOnFarSupportedPairs) {
    BoxGrid g;
    g.r0 = 4.5;
    g.r1 = 9.5;
    g.nr = 40;
    g.th0 = 0.5;
    g.th1 = 2.6;
    g.nth = 12;
    g.nchi = 6;
    for (double beta : {0.25, 0.5}) {
        const PairOperators ops(g, sample_background(g, exact(1.0), beta));
        const PairOperators ops0(g, zero_background(g, beta));
        std::mt19937_64 rng(9);
        for (int n = 0; n < 4; ++n) {
            const Vec e = random_test_pair(g, rng, 2, 5.0, 9.5);
            EXPECT_GE(rayleigh_quotient(ops, RayleighOp::LL, e), 0.95 * beta * beta);
            EXPECT_GE(rayleigh_quotient(ops0, RayleighOp::laplace0, e), 0.95 * (1 + beta) * (1 + beta));
        }
    }
}

TEST(Weighted, FloerTermOnRadialAndCoclosedModes) {
    // Type two (f(r) dr) is annihilated; type one (h(r) sin^2 theta dchi) keeps the zeroth-order
    // remainder -u' h from differentiating the weight u = 2 beta tanh(beta r).
    const double beta = 0.5;
    auto h = [](double r) { return r * std::exp(-r); };
    std::vector<double> err;
    for (int lev = 0; lev < 3; ++lev) {
        BoxGrid g;
        g.r0 = 1.0;
        g.r1 = 4.0;
        g.nr = 12 << lev;
        g.th0 = 0.5;
        g.th1 = 2.6;
        g.nth = 10 << lev;
        g.nchi = 4;
        const PairOperators ops(g, zero_background(g, beta));
        Vec b1 = Vec::Zero(g.dofs()), b2 = Vec::Zero(g.dofs()), ref = Vec::Zero(g.dofs());
        for (int n = 0; n < g.nodes(); ++n) {
            const PolarPoint p = g.node(n);
            const double s2 = std::sin(p.theta) * std::sin(p.theta);
            const double du = 2 * beta * beta / std::pow(std::cosh(beta * p.r), 2);
            b1[dof(n, 3, 0)] = h(p.r) * s2;
            ref[dof(n, 3, 0)] = -du * h(p.r) * s2;
            b2[dof(n, 1, 1)] = h(p.r);
        }
        const Vec t1 = ops.T1() * b1, t2 = ops.T1() * b2;
        double e = 0.0, size = 0.0, radial = 0.0;
        const int m = 2 << lev;
        for (int n = 0; n < g.nodes(); ++n) {
            int a, b, c;
            g.coords(n, a, b, c);
            if (a < m || a >= g.nr - m || b < m || b >= g.nth - m) continue;
            for (int k = 0; k < 12; ++k) {
                e = std::max(e, std::abs(t1[12 * n + k] - ref[12 * n + k]));
                size = std::max(size, std::abs(ref[12 * n + k]));
                radial = std::max(radial, std::abs(t2[12 * n + k]));
            }
        }
        // Away from the box faces, where the zero extension cuts the mode off.
        EXPECT_EQ(radial, 0.0);
        err.push_back(e / size);
    }
    EXPECT_GE(oracle::order(err[0], err[1], err[2]), 1.8);
    EXPECT_LT(err[2], 1e-3);
}
