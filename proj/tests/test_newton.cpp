#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"

using namespace mvinterp;
using testing_support::inf;

namespace {

double runge10(std::span<const double> x) { return runge(x, 10.0); }

// Newton basis value straight from its definition.
double basis_direct(std::span<const Exponent> a, const GeneratingNodes& gp, const std::vector<double>& x) {
    double v = 1.0;
    for (std::size_t d = 0; d < a.size(); ++d)
        for (Exponent j = 0; j < a[d]; ++j) v *= x[d] - gp[d][j];
    return v;
}

}  // namespace

TEST(DividedDifferences, OneDimensionMatchesClassicTable) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Exponent n = 1 + static_cast<Exponent>(rng() % 30);
        std::vector<double> x = leja_order(chebyshev_second(n));
        if (trial % 2) {
            for (double& v : x) v = u(rng);
            x = leja_order(x);
        }
        std::vector<double> y(n + 1);
        for (double& v : y) v = u(rng);
        auto A = std::make_shared<const MultiIndexSet>(build_complete_set(1, n, {1.0}));
        auto gp = std::make_shared<const GeneratingNodes>(GeneratingNodes({x}));
        const UnisolventNodes P(A, gp);
        const auto c = divided_differences(P, y);
        const auto ref = oracle::dd_table(x, y);
        for (std::size_t i = 0; i <= n; ++i)
            EXPECT_LE(std::abs(c.coefficients()[i] - ref[i]), 1e-13 * std::max(1.0, std::abs(ref[i])));
    }
}

class Exactness : public ::testing::TestWithParam<std::tuple<int, double>> {};

TEST_P(Exactness, ReproducesPolynomialsInTheSpace) {
    const auto [m, p] = GetParam();
    for (Exponent n = 0; n <= 6; ++n) {
        const UnisolventNodes P = testing_support::nodes_for(m, n, p);
        const auto terms = testing_support::as_oracle(P.set());
        const auto pts = oracle::random_points(m, 100, 1000 + n);
        for (int k = 0; k < 20; ++k) {
            const oracle::Poly q = oracle::random_poly(terms, 31 * n + k);
            std::vector<double> F(P.size());
            for (std::size_t i = 0; i < P.size(); ++i) F[i] = q(testing_support::point(P, i));
            const NewtonPolynomial Q = divided_differences(P, F);
            for (const auto& x : pts) {
                const double ref = q(x);
                EXPECT_LE(std::abs(Q(x) - ref), 1e-9 * std::max(1.0, q.abs_sum(x)));
            }
        }
    }
}

INSTANTIATE_TEST_SUITE_P(DimsAndNorms, Exactness,
                         ::testing::Combine(::testing::Values(1, 2, 3), ::testing::Values(1.0, 2.0, inf)));

TEST(DividedDifferences, InterpolatesAtTheNodes) {
    for (double p : {1.0, 2.0, inf}) {
        const UnisolventNodes P = testing_support::nodes_for(3, 7, p);
        const auto F = sample_at_nodes(P, runge10);
        const auto Q = divided_differences(P, F);
        for (std::size_t i = 0; i < P.size(); ++i) EXPECT_NEAR(Q(P.point(i)), F[i], 1e-12);
    }
}

TEST(DividedDifferences, OperationCountIsSumOfL1Norms) {
    for (double p : {1.0, 2.0, inf}) {
        const UnisolventNodes P = testing_support::nodes_for(3, 6, p);
        OpCount ops;
        divided_differences(P, sample_at_nodes(P, runge10), &ops);
        std::size_t expected = 0;
        for (std::size_t i = 0; i < P.size(); ++i) expected += P.set().index(i).l1();
        EXPECT_EQ(ops.multiply_adds, expected);
        EXPECT_LE(ops.multiply_adds, 3 * 6 * P.size());
    }
}

TEST(NewtonEvaluation, HornerMatchesDirectBasisSum) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double p : {1.0, 2.0, inf, 1.5}) {
        const UnisolventNodes P = testing_support::nodes_for(3, 6, p);
        std::vector<double> c(P.size());
        for (double& v : c) v = u(rng);
        const NewtonPolynomial Q(P.set_ptr(), P.gp_ptr(), c);
        for (const auto& x : oracle::random_points(3, 50, 11)) {
            double s = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < P.size(); ++i) {
                const double t = c[i] * basis_direct(P.set().at(i), P.gp(), x);
                s += t;
                scale += std::abs(t);
            }
            EXPECT_NEAR(Q(x), s, 1e-13 * std::max(1.0, scale));
            EXPECT_NEAR(newton_basis_eval(P.set().index(5), P.gp(), x), basis_direct(P.set().at(5), P.gp(), x), 1e-15);
        }
    }
}

TEST(NewtonEvaluation, BasisValuesMatchDefinition) {
    const UnisolventNodes P = testing_support::nodes_for(2, 5, 2.0);
    const std::vector<double> x{0.3, -0.7};
    const auto v = newton_basis_values(P.set(), P.gp(), x);
    for (std::size_t i = 0; i < P.size(); ++i) EXPECT_NEAR(v[i], basis_direct(P.set().at(i), P.gp(), x), 1e-15);
}

TEST(NewtonEvaluation, BatchAgreesWithSinglePoints) {
    const UnisolventNodes P = testing_support::nodes_for(2, 9, 2.0);
    const auto Q = divided_differences(P, sample_at_nodes(P, runge10));
    const auto pts = oracle::random_points(2, 40, 5);
    const auto flat = oracle::flatten(pts);
    const auto vals = eval_newton_batch(Q, flat);
    for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(vals[i], Q(pts[i]));
}

TEST(TensorOracle, FullGridMatchesProductLagrangeFormula) {
    for (std::size_t m : {1u, 2u, 3u}) {
        const Exponent n = m == 3 ? 4 : 8;
        const UnisolventNodes P = testing_support::nodes_for(m, n, inf);
        std::vector<std::vector<double>> grid;
        for (std::size_t d = 0; d < m; ++d) grid.emplace_back(P.gp()[d].begin(), P.gp()[d].end());
        const auto F = sample_at_nodes(P, runge10);
        for (const auto& x : oracle::random_points(m, 30, 17)) {
            const double ref = oracle::tensor_interpolant(grid, [](const std::vector<double>& y) { return runge10(y); }, x);
            EXPECT_NEAR(lagrange_eval(P, F, x), ref, 1e-12);
        }
    }
}

TEST(DividedDifferences, InputValidation) {
    const UnisolventNodes P = testing_support::nodes_for(2, 3, 1.0);
    EXPECT_THROW(divided_differences(P, std::vector<double>(3, 0.0)), DimensionError);
    EXPECT_THROW(divided_differences(build_complete_set(2, 4, {1.0}), P, std::vector<double>(P.size(), 0.0)),
                 InvalidArgument);
    const auto Q = divided_differences(P, std::vector<double>(P.size(), 1.0));
    EXPECT_THROW(Q(std::vector<double>{0.0}), DimensionError);
    EXPECT_THROW(NewtonPolynomial(P.set_ptr(), P.gp_ptr(), std::vector<double>(2, 0.0)), DimensionError);
}
