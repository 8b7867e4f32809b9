#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"

using namespace mvinterp;
using testing_support::inf;

namespace {

double max_abs(const Matrix& M) { return M.cwiseAbs().maxCoeff(); }

double runge1(std::span<const double> x) { return runge(x, 1.0); }

struct Case {
    std::size_t m;
    Exponent n;
    double p;
};

const Case kCases[] = {{1, 25, 1.0}, {2, 12, 1.0}, {2, 14, 2.0}, {2, 9, inf}, {3, 6, 2.0}, {3, 5, inf}, {4, 4, 1.0}, {3, 8, 2.0}};

}  // namespace

TEST(Transforms, TriangularStructure) {
    for (const auto& c : kCases) {
        const auto P = testing_support::nodes_for(c.m, c.n, c.p);
        const Matrix NL = build_NL(P), CN = build_CN(P);
        const auto N = NL.rows();
        for (Eigen::Index i = 0; i < N; ++i) {
            EXPECT_NE(NL(i, i), 0.0);
            EXPECT_EQ(CN(i, i), 1.0);
            for (Eigen::Index j = i + 1; j < N; ++j) {
                EXPECT_EQ(NL(i, j), 0.0);
                EXPECT_EQ(CN(j, i), 0.0);
            }
        }
    }
}

TEST(Transforms, InverseAndFactorisationIdentities) {
    for (const auto& c : kCases) {
        const auto P = testing_support::nodes_for(c.m, c.n, c.p);
        ASSERT_LE(P.size(), 500u);
        const TransformSet T(P);
        const auto N = static_cast<Eigen::Index>(P.size());
        const Matrix I = Matrix::Identity(N, N);
        EXPECT_LE(max_abs(T.NL() * T.LN() - I), 1e-12 * max_abs(T.NL()) * max_abs(T.LN()));
        EXPECT_LE(max_abs(T.LN() * T.NL() - I), 1e-12 * max_abs(T.NL()) * max_abs(T.LN()));
        EXPECT_LE(max_abs(T.CN() * T.NC() - I), 1e-12 * max_abs(T.CN()) * max_abs(T.NC()));
        const Matrix V = vandermonde(P);
        EXPECT_LE(max_abs(V - T.NL() * T.CN()), 1e-13 * max_abs(T.NL()) * max_abs(T.CN()) * static_cast<double>(N));
    }
}

TEST(Transforms, VandermondeEntriesAreMonomials) {
    const auto P = testing_support::nodes_for(3, 4, 2.0);
    const Matrix V = vandermonde(P);
    const auto terms = testing_support::as_oracle(P.set());
    for (std::size_t i = 0; i < P.size(); ++i)
        for (std::size_t j = 0; j < P.size(); ++j)
            EXPECT_NEAR(V(i, j), static_cast<double>(oracle::monomial(terms[j], testing_support::point(P, i))), 1e-15);
}

TEST(Transforms, CanonicalCoefficientsMatchDenseVandermondeSolve) {
    for (const auto& c : {Case{1, 8, 1.0}, Case{2, 6, 1.0}, Case{2, 6, 2.0}, Case{2, 4, inf}, Case{3, 4, 2.0}}) {
        const auto P = testing_support::nodes_for(c.m, c.n, c.p);
        const TransformSet T(P);
        const auto F = sample_at_nodes(P, runge1);
        std::vector<std::vector<double>> pts;
        for (std::size_t i = 0; i < P.size(); ++i) pts.push_back(testing_support::point(P, i));
        const auto ref = oracle::vandermonde_solve(testing_support::as_oracle(P.set()), pts, F);
        Eigen::Map<const Vector> f(F.data(), static_cast<Eigen::Index>(F.size()));
        const Vector can = T.NC() * (T.LN() * f);
        double scale = 1.0;
        for (double v : ref) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(can(static_cast<Eigen::Index>(i)), ref[i], 1e-9 * scale);
        // Round trip canonical -> Newton reproduces the divided differences.
        const Vector back = T.from_canonical(can);
        const auto Qd = divided_differences(P, F);
        const auto dd = Qd.coefficients();
        for (std::size_t i = 0; i < dd.size(); ++i)
            EXPECT_NEAR(back(static_cast<Eigen::Index>(i)), dd[i], 1e-9 * std::max(1.0, std::abs(dd[i])));
    }
}

TEST(Transforms, FastInterpolationAgreesWithDividedDifferences) {
    for (const auto& c : kCases) {
        const auto P = testing_support::nodes_for(c.m, c.n, c.p);
        const TransformSet T(P);
        const auto F = sample_at_nodes(P, runge1);
        const auto Qa = interpolate_fast(T, F), Qb = divided_differences(P, F);
        const auto a = Qa.coefficients(), b = Qb.coefficients();
        // Rounding in LN * F scales with the row sums of LN.
        const double tol = 1e-14 * T.LN().cwiseAbs().rowwise().sum().maxCoeff();
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol);
    }
}

TEST(Transforms, LagrangeBasisIsCardinalAtNodes) {
    for (double p : {1.0, 2.0, inf}) {
        const TransformSet T(testing_support::nodes_for(2, 6, p));
        for (std::size_t i = 0; i < T.set().size(); ++i) {
            const Vector l = lagrange_values(T, T.nodes().point(i));
            for (Eigen::Index j = 0; j < l.size(); ++j)
                EXPECT_NEAR(l(j), static_cast<Eigen::Index>(i) == j ? 1.0 : 0.0, 1e-12);
        }
        // Partition of unity.
        for (const auto& x : oracle::random_points(2, 20, 9)) EXPECT_NEAR(lagrange_values(T, x).sum(), 1.0, 1e-11);
    }
}

TEST(Transforms, FromCanonicalOfMonomialIsExact) {
    const auto P = testing_support::nodes_for(2, 5, 1.0);
    const TransformSet T(P);
    const auto terms = testing_support::as_oracle(P.set());
    for (std::size_t j = 0; j < P.size(); ++j) {
        Vector e = Vector::Zero(static_cast<Eigen::Index>(P.size()));
        e(static_cast<Eigen::Index>(j)) = 1.0;
        const Vector c = T.from_canonical(e);
        const auto Q = T.newton(std::vector<double>(c.data(), c.data() + c.size()));
        for (const auto& x : oracle::random_points(2, 10, j))
            EXPECT_NEAR(Q(x), static_cast<double>(oracle::monomial(terms[j], x)), 1e-12);
    }
}

TEST(Transforms, Validation) {
    const auto P = testing_support::nodes_for(2, 3, 1.0);
    const TransformSet T(P);
    EXPECT_THROW(interpolate_fast(T, std::vector<double>(2, 0.0)), DimensionError);
    EXPECT_THROW(TransformSet(P, Matrix(2, 2), T.LN(), T.CN(), T.NC()), DimensionError);
    const auto other = build_complete_set(2, 3, {2.0});
    EXPECT_THROW(lagrange_eval(other, P, std::vector<double>(P.size(), 0.0), std::vector<double>{0.0, 0.0}),
                 InvalidArgument);
}
