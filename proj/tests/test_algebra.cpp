#include <gtest/gtest.h>

#include <random>

#include "hypmono/algebra.hpp"
#include "hypmono/dual.hpp"
#include "support/oracles.hpp"

using namespace hypmono;

namespace {
void expect_near(const AlgebraElement& a, const AlgebraElement& b, double tol) {
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(a[i], b[i], tol) << "component " << i;
}
}  // namespace

TEST(Algebra, BracketMatchesMatrixCommutator) {
    std::mt19937_64 rng(1);
    for (int n = 0; n < 100; ++n) {
        const auto u = oracle::random_element(rng), v = oracle::random_element(rng);
        const auto ref = oracle::su2_vector(oracle::commutator(oracle::su2_matrix(u), oracle::su2_matrix(v)));
        expect_near(bracket(u, v), ref, 1e-13);
    }
    expect_near(bracket(basis<double>(0), basis<double>(1)), basis<double>(2), 0.0);
    expect_near(bracket(basis<double>(1), basis<double>(2)), basis<double>(0), 0.0);
    expect_near(bracket(basis<double>(2), basis<double>(0)), basis<double>(1), 0.0);
}

TEST(Algebra, AntisymmetryAndJacobi) {
    std::mt19937_64 rng(2);
    for (int n = 0; n < 100; ++n) {
        const auto u = oracle::random_element(rng), v = oracle::random_element(rng), w = oracle::random_element(rng);
        expect_near(bracket(u, u), {0, 0, 0}, 0.0);
        expect_near(bracket(u, v) + bracket(v, u), {0, 0, 0}, 1e-15);
        const auto jac = bracket(u, bracket(v, w)) + bracket(v, bracket(w, u)) + bracket(w, bracket(u, v));
        expect_near(jac, {0, 0, 0}, 1e-13);
    }
}

TEST(Algebra, InnerProduct) {
    EXPECT_EQ(inner(basis<double>(0), basis<double>(0)), 1.0);
    EXPECT_EQ(inner(basis<double>(0), basis<double>(1)), 0.0);
    const AlgebraElement v(1.0, -2.0, 3.0);
    EXPECT_DOUBLE_EQ(norm(v) * norm(v), 14.0);
    std::mt19937_64 rng(3);
    for (int n = 0; n < 100; ++n) {
        const auto u = oracle::random_element(rng), a = oracle::random_element(rng), b = oracle::random_element(rng);
        EXPECT_NEAR(inner(bracket(u, a), b) + inner(a, bracket(u, b)), 0.0, 1e-13);
    }
}

TEST(Algebra, AdAction) {
    std::mt19937_64 rng(4);
    PairSample p;
    p.psi = oracle::random_element(rng);
    for (auto& b : p.b) b = oracle::random_element(rng);
    const PairSample z = ad_action(AlgebraElement(0, 0, 0), p);
    expect_near(z.psi, {0, 0, 0}, 0.0);
    for (const auto& b : z.b) expect_near(b, {0, 0, 0}, 0.0);

    const AlgebraElement phi(0.3, -1.2, 0.5);
    PairSample par;
    par.psi = 2.0 * phi;
    for (int mu = 0; mu < 3; ++mu) par.b[mu] = (mu - 1.5) * phi;
    const PairSample zp = ad_action(phi, par);
    expect_near(zp.psi, {0, 0, 0}, 1e-15);
    for (const auto& b : zp.b) expect_near(b, {0, 0, 0}, 1e-15);

    EXPECT_THROW(ad_action(std::vector<AlgebraElement>(2), PairField(3)), std::invalid_argument);
}

TEST(Algebra, ValueOfDual) {
    const Alg<Dual3> a(Dual3::variable(1.5, 0), Dual3(2.0), Dual3(-1.0));
    expect_near(value_of(a), {1.5, 2.0, -1.0}, 0.0);
}
