#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"

using namespace mvinterp;
using testing_support::inf;

namespace {

std::vector<std::vector<double>> rows(std::span<const double> flat, std::size_t m) {
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < flat.size(); i += m) out.emplace_back(flat.begin() + i, flat.begin() + i + m);
    return out;
}

}  // namespace

TEST(Scattered, ReferenceNodesGiveIdentity) {
    for (double p : {1.0, 2.0, inf}) {
        const auto P = testing_support::nodes_for(2, 7, p);
        const auto sys = build_scattered(P, P.coordinates());
        const auto N = static_cast<Eigen::Index>(P.size());
        EXPECT_LE((sys.R() - Matrix::Identity(N, N)).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_NEAR(sys.s_inf(), 1.0, 1e-12);
        EXPECT_NEAR(scattered_error_factor(sys, 2.5), 3.5, 1e-11);
    }
}

TEST(Scattered, MatrixMatchesDenseLagrangeOracle) {
    const auto P = testing_support::nodes_for(2, 4, 2.0);
    std::mt19937_64 rng(21);
    const auto given = perturb_nodes(P, 0.3, rng);
    const auto sys = build_scattered(P, given);
    const auto terms = testing_support::as_oracle(P.set());
    std::vector<std::vector<double>> ref;
    for (std::size_t i = 0; i < P.size(); ++i) ref.push_back(testing_support::point(P, i));
    const auto g = rows(given, 2);
    for (std::size_t b = 0; b < P.size(); ++b) {
        std::vector<double> e(P.size(), 0.0);
        e[b] = 1.0;
        oracle::Poly Lb{terms, oracle::vandermonde_solve(terms, ref, e)};
        for (std::size_t a = 0; a < P.size(); ++a)
            EXPECT_NEAR(sys.R()(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)), Lb(g[a]), 1e-10);
    }
}

TEST(Scattered, ReproducesPolynomialsOnPerturbedNodes) {
    for (double p : {1.0, 2.0, inf})
        for (double nu : {0.1, 0.5}) {
            const auto P = testing_support::nodes_for(2, 6, p);
            std::mt19937_64 rng(static_cast<std::uint64_t>(100 * nu));
            const auto given = perturb_nodes(P, nu, rng);
            const auto sys = build_scattered(P, given);
            const auto q = oracle::random_poly(testing_support::as_oracle(P.set()), 5);
            std::vector<double> F;
            for (const auto& x : rows(given, 2)) F.push_back(q(x));
            const auto lag = interpolate_scattered(sys, F);
            for (std::size_t i = 0; i < P.size(); ++i) EXPECT_NEAR(lag[i], q(testing_support::point(P, i)), 1e-9);
            const auto Q = lagrange_to_newton(P, lag);
            for (const auto& x : oracle::random_points(2, 30, 3)) EXPECT_NEAR(Q(x), q(x), 1e-9);
            // The interpolant matches the data at the given nodes.
            const auto gr = rows(given, 2);
            for (std::size_t i = 0; i < gr.size(); ++i) EXPECT_NEAR(Q(gr[i]), F[i], 1e-9);
        }
}

TEST(Scattered, InverseIsConsistent) {
    const auto P = testing_support::nodes_for(3, 4, 2.0);
    std::mt19937_64 rng(4);
    const auto sys = build_scattered(P, perturb_nodes(P, 0.4, rng));
    const auto N = static_cast<Eigen::Index>(P.size());
    EXPECT_LE((sys.R() * sys.S() - Matrix::Identity(N, N)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(sys.s_inf(), sys.S().cwiseAbs().rowwise().sum().maxCoeff(), 0.0);
    EXPECT_GE(sys.s_inf(), 1.0 - 1e-12);
}

TEST(Scattered, DuplicateNodesAreSingular) {
    const auto P = testing_support::nodes_for(2, 4, 1.0);
    std::vector<double> given(P.coordinates().begin(), P.coordinates().end());
    given[2] = given[0];
    given[3] = given[1];
    try {
        build_scattered(P, given);
        FAIL() << "expected SingularSystemError";
    } catch (const SingularSystemError& e) {
        EXPECT_GT(e.condition_estimate(), scattered_singularity_threshold());
    }
}

TEST(Scattered, Validation) {
    const auto P = testing_support::nodes_for(2, 3, 1.0);
    EXPECT_THROW(build_scattered(P, std::vector<double>(5, 0.0)), DimensionError);
    const auto sys = build_scattered(P, P.coordinates());
    EXPECT_THROW(interpolate_scattered(sys, std::vector<double>(3, 0.0)), DimensionError);
    EXPECT_THROW(scattered_error_factor(sys, 0.5), InvalidArgument);
}

TEST(Perturbation, StaysInsideCubeWithinAmplitude) {
    const auto P = testing_support::nodes_for(3, 6, 2.0);
    for (double nu : {0.0, 0.25, 1.0}) {
        std::mt19937_64 rng(8);
        const auto g = perturb_nodes(P, nu, rng);
        const auto c = P.coordinates();
        for (std::size_t i = 0; i < g.size(); ++i) {
            EXPECT_LE(std::abs(g[i]), 1.0);
            EXPECT_LE(std::abs(g[i] - c[i]), nu * (1.0 - std::abs(c[i])) + 1e-15);
            if (std::abs(c[i]) == 1.0) EXPECT_EQ(g[i], c[i]);
            if (nu == 0.0) EXPECT_EQ(g[i], c[i]);
        }
    }
    std::mt19937_64 rng(1);
    EXPECT_THROW(perturb_nodes(P, 1.5, rng), InvalidArgument);
}
