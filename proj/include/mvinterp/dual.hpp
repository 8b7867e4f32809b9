#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mvinterp/error.hpp"
#include "mvinterp/multiindex.hpp"
#include "mvinterp/newton.hpp"
#include "mvinterp/nodes.hpp"
#include "mvinterp/transform.hpp"

namespace mvinterp {

inline constexpr double default_rank_tol = 1e-10;

/// Maximal unisolvent subset of arbitrary nodes plus the matching
/// interpolation and kernel bases. All bases are given as Lagrange
/// coordinates with respect to the reference nodes.
struct DualDecomposition {
    std::shared_ptr<const MultiIndexSet> A;
    UnisolventNodes reference;
    std::vector<double> input_nodes;  // row by row
    Matrix R;                         // R(i, beta) = L_beta(input_i)
    std::size_t k = 0;
    std::vector<std::size_t> P0;            // input rows, pivot order
    std::vector<std::size_t> basis_order;   // column order: first k span the fit space
    std::vector<std::vector<double>> interp_basis;  // rho_i(P0_j) = delta_ij
    std::vector<std::vector<double>> kernel_basis;  // unit inf-norm
    double rank_tol = default_rank_tol;

    std::size_t dim() const noexcept { return reference.dim(); }
    std::size_t input_count() const noexcept { return input_nodes.size() / dim(); }
    std::span<const double> input_node(std::size_t i) const {
        return std::span(input_nodes).subspan(i * dim(), dim());
    }
};

namespace detail {

/// Row-pivoted elimination that skips columns whose best remaining pivot is
/// below `threshold`. Returns (row permutation, accepted pivot columns); the
/// first (number of pivots) rows of the permutation are the pivot rows. `W`
/// is overwritten with the echelon form.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> echelon_gepp(Matrix& W, double threshold) {
    const Eigen::Index rows = W.rows(), cols = W.cols();
    std::vector<std::size_t> perm(static_cast<std::size_t>(rows));
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::vector<std::size_t> pivots;
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
        Eigen::Index best;
        const double mag = W.col(c).segment(r, rows - r).cwiseAbs().maxCoeff(&best);
        best += r;
        if (!(mag > threshold)) continue;
        if (best != r) {
            W.row(best).swap(W.row(r));
            std::swap(perm[static_cast<std::size_t>(best)], perm[static_cast<std::size_t>(r)]);
        }
        for (Eigen::Index i = r + 1; i < rows; ++i) {
            const double f = W(i, c) / W(r, c);
            if (f != 0.0) W.row(i).segment(c, cols - c) -= f * W.row(r).segment(c, cols - c);
            W(i, c) = 0.0;
        }
        pivots.push_back(static_cast<std::size_t>(c));
        ++r;
    }
    return {std::move(perm), std::move(pivots)};
}

inline void normalize_inf(std::vector<double>& v) {
    double mx = 0.0;
    for (double x : v) mx = std::max(mx, std::abs(x));
    if (mx > 0.0)
        for (double& x : v) x /= mx;
}

}  // namespace detail

/// Decomposes arbitrary nodes against Pi_A. First pass: partial-pivot
/// elimination on R with column skipping; the accepted pivots give the rank k
/// and the node subset P0. Second pass: partial-pivot elimination on the
/// transpose of the k pivot rows orders the columns, and its first k columns
/// form the nonsingular block R_1 = R[P0, B_1]. rho_i comes from R_1^{-1},
/// mu_i from -R_1^{-1} R_2 e_i with a unit entry at B_{k+i}.
inline DualDecomposition dual_decompose(const TransformSet& T, std::span<const double> input_nodes,
                                        double rank_tol = default_rank_tol) {
    const MultiIndexSet& A = T.set();
    const std::size_t m = A.dim(), N = A.size();
    if (!(rank_tol > 0.0 && rank_tol < 1.0)) throw InvalidArgument("dual_decompose: rank_tol must be in (0,1)");
    if (input_nodes.empty() || input_nodes.size() % m != 0)
        throw DimensionError("dual_decompose: input coordinate count must be a positive multiple of " +
                             std::to_string(m));
    for (double x : input_nodes)
        if (!std::isfinite(x)) throw InvalidArgument("dual_decompose: non-finite input node");

    DualDecomposition D{.A = T.nodes().set_ptr(),
                        .reference = T.nodes(),
                        .input_nodes = std::vector<double>(input_nodes.begin(), input_nodes.end()),
                        .R = newton_basis_matrix(A, T.nodes().gp(), input_nodes) * T.LN(),
                        .k = 0,
                        .P0 = {},
                        .basis_order = {},
                        .interp_basis = {},
                        .kernel_basis = {},
                        .rank_tol = rank_tol};
    const double scale = D.R.cwiseAbs().maxCoeff();
    if (!(scale > 0.0)) throw SingularSystemError("dual_decompose: all Lagrange evaluations vanish", 0.0);

    Matrix W = D.R;
    auto [perm, pivot_cols] = detail::echelon_gepp(W, rank_tol * scale);
    const std::size_t k = pivot_cols.size();
    D.k = k;
    D.P0.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));

    // Column order from pivoting on the transposed echelon rows.
    Matrix Ut = W.topRows(static_cast<Eigen::Index>(k)).transpose();
    auto [col_perm, col_pivots] = detail::echelon_gepp(Ut, 0.0);
    if (col_pivots.size() != k) throw SingularSystemError("dual_decompose: column selection lost rank", 0.0);
    D.basis_order.assign(col_perm.begin(), col_perm.begin() + static_cast<std::ptrdiff_t>(k));
    {
        std::vector<bool> used(N, false);
        for (std::size_t c : D.basis_order) used[c] = true;
        for (std::size_t c = 0; c < N; ++c)
            if (!used[c]) D.basis_order.push_back(c);
    }

    Matrix R1(k, k), R2(k, N - k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) R1(i, j) = D.R(D.P0[i], D.basis_order[j]);
        for (std::size_t j = k; j < N; ++j) R2(i, j - k) = D.R(D.P0[i], D.basis_order[j]);
    }
    Eigen::PartialPivLU<Matrix> lu(R1);
    const Matrix R1inv = lu.inverse();
    const Matrix Dmat = -(lu.solve(R2));

    D.interp_basis.assign(k, std::vector<double>(N, 0.0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) D.interp_basis[i][D.basis_order[j]] = R1inv(j, i);

    D.kernel_basis.assign(N - k, std::vector<double>(N, 0.0));
    for (std::size_t i = 0; i < N - k; ++i) {
        auto& mu = D.kernel_basis[i];
        for (std::size_t j = 0; j < k; ++j) mu[D.basis_order[j]] = Dmat(j, i);
        mu[D.basis_order[k + i]] = 1.0;
        detail::normalize_inf(mu);
    }
    return D;
}

inline DualDecomposition dual_decompose(const UnisolventNodes& reference, std::span<const double> input_nodes,
                                        double rank_tol = default_rank_tol) {
    return dual_decompose(TransformSet(reference), input_nodes, rank_tol);
}

/// Values at `points` of the polynomial with the given Lagrange coordinates.
inline std::vector<double> eval_lagrange_coordinates(const TransformSet& T, std::span<const double> lagrange,
                                                     std::span<const double> points) {
    Eigen::Map<const Vector> c(lagrange.data(), static_cast<Eigen::Index>(lagrange.size()));
    Vector nc = T.to_newton(c);
    NewtonPolynomial Q = T.newton(std::vector<double>(nc.data(), nc.data() + nc.size()));
    return eval_newton_batch(Q, points);
}

struct VarietyFit {
    DualDecomposition decomposition;
    std::vector<double> lagrange;  // zero outside the first k basis columns
    double residual_max = 0.0;
    double residual_rms = 0.0;
    std::size_t ls_rank = 0;  // numerical rank of the least-squares block
};

/// Least-squares fit R[:, B_1] c = F over the k-dimensional space found by
/// dual_decompose on the sample locations.
inline VarietyFit variety_fit(const TransformSet& T, std::span<const double> samples, std::span<const double> F,
                              double rank_tol = default_rank_tol) {
    const std::size_t m = T.set().dim();
    if (samples.size() != F.size() * m)
        throw DimensionError("variety_fit: " + std::to_string(F.size()) + " values for " +
                             std::to_string(samples.size() / m) + " samples");
    VarietyFit out{.decomposition = dual_decompose(T, samples, rank_tol), .lagrange = {}};
    const auto& D = out.decomposition;
    const std::size_t S = F.size(), k = D.k, N = T.set().size();

    Matrix B(S, k);
    for (std::size_t j = 0; j < k; ++j) B.col(static_cast<Eigen::Index>(j)) = D.R.col(D.basis_order[j]);
    Eigen::Map<const Vector> f(F.data(), static_cast<Eigen::Index>(S));
    Eigen::ColPivHouseholderQR<Matrix> qr(B);
    qr.setThreshold(rank_tol);
    Vector c = qr.solve(f);
    out.ls_rank = static_cast<std::size_t>(qr.rank());

    out.lagrange.assign(N, 0.0);
    for (std::size_t j = 0; j < k; ++j) out.lagrange[D.basis_order[j]] = c(static_cast<Eigen::Index>(j));
    Vector r = B * c - f;
    out.residual_max = S ? r.cwiseAbs().maxCoeff() : 0.0;
    out.residual_rms = S ? std::sqrt(r.squaredNorm() / static_cast<double>(S)) : 0.0;
    return out;
}

// ---- torus helpers ----

/// Q_T(x) = (|x|^2 + R^2 - r^2)^2 - 4 R^2 (x_1^2 + x_2^2).
inline double torus_level_set(double R, double r, std::span<const double> x) {
    const double s = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + R * R - r * r;
    return s * s - 4.0 * R * R * (x[0] * x[0] + x[1] * x[1]);
}

/// Points ((R + r cos v) cos u, (R + r cos v) sin u, r sin v) with u, v
/// uniform in [0, 2 pi).
template <class Rng>
std::vector<double> torus_samples(double R, double r, std::size_t count, Rng& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<double> out;
    out.reserve(3 * count);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = angle(rng), v = angle(rng);
        const double w = R + r * std::cos(v);
        out.push_back(w * std::cos(u));
        out.push_back(w * std::sin(u));
        out.push_back(r * std::sin(v));
    }
    return out;
}

/// Leja-ordered second-kind Chebyshev values in x and y, the same scaled by
/// r in z.
inline GeneratingNodes torus_reference_gp(Exponent n, double r) {
    std::vector<double> base = leja_order(chebyshev_second(n));
    std::vector<double> z = base;
    for (double& v : z) v *= r;
    return GeneratingNodes({base, base, z});
}

/// Canonical coordinates of a Lagrange-coordinate polynomial, unit inf-norm,
/// sign chosen so the largest-magnitude entry is positive.
inline std::vector<double> normalized_canonical(const TransformSet& T, std::span<const double> lagrange) {
    Eigen::Map<const Vector> c(lagrange.data(), static_cast<Eigen::Index>(lagrange.size()));
    Vector can = T.to_canonical(T.to_newton(c));
    std::vector<double> v(can.data(), can.data() + can.size());
    Eigen::Index at = 0;
    can.cwiseAbs().maxCoeff(&at);
    if (can.size() && can(at) < 0)
        for (double& x : v) x = -x;
    detail::normalize_inf(v);
    return v;
}

/// Largest coefficient gap between the normalized canonical forms of a kernel
/// polynomial and of Q_T (interpolated exactly from its node values).
inline double torus_kernel_deviation(const TransformSet& T, std::span<const double> kernel, double R, double r) {
    const std::vector<double> q = sample_at_nodes(T.nodes(), [&](std::span<const double> x) { return torus_level_set(R, r, x); });
    const std::vector<double> a = normalized_canonical(T, kernel), b = normalized_canonical(T, q);
    double dev = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dev = std::max(dev, std::abs(a[i] - b[i]));
    return dev;
}

}  // namespace mvinterp
