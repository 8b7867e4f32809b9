#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mvinterp/error.hpp"
#include "mvinterp/newton.hpp"
#include "mvinterp/nodes.hpp"
#include "mvinterp/transform.hpp"

namespace mvinterp {

/// Pivot ratio above which a change-of-nodes matrix counts as singular.
inline double scattered_singularity_threshold() { return 1.0 / (50.0 * std::numeric_limits<double>::epsilon()); }

/// max_i |U_ii| / min_i |U_ii| of an LU factorization; +inf for a zero pivot.
inline double pivot_ratio(const Matrix& lu) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (Eigen::Index i = 0; i < std::min(lu.rows(), lu.cols()); ++i) {
        const double v = std::abs(lu(i, i));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lu.rows() == 0) return 1.0;
    return lo == 0.0 ? std::numeric_limits<double>::infinity() : hi / lo;
}

/// Change of nodes from the reference grid P_A to given nodes:
/// R[alpha, beta] = L_beta(given_alpha), S = R^{-1}, C_lag = S * F.
class ScatteredSystem {
public:
    ScatteredSystem(UnisolventNodes reference, std::vector<double> given_nodes, Matrix R, Matrix S,
                    double condition_estimate)
        : reference_(std::move(reference)), given_(std::move(given_nodes)), R_(std::move(R)), S_(std::move(S)),
          cond_(condition_estimate) {
        s_inf_ = S_.rows() == 0 ? 0.0 : S_.cwiseAbs().rowwise().sum().maxCoeff();
    }

    const UnisolventNodes& reference() const noexcept { return reference_; }
    const MultiIndexSet& set() const noexcept { return reference_.set(); }
    std::span<const double> given_nodes() const noexcept { return given_; }
    std::span<const double> given_node(std::size_t i) const { return std::span(given_).subspan(i * dim(), dim()); }
    std::size_t dim() const noexcept { return reference_.dim(); }
    const Matrix& R() const noexcept { return R_; }
    const Matrix& S() const noexcept { return S_; }
    /// ||S||_inf, the max absolute row sum.
    double s_inf() const noexcept { return s_inf_; }
    double condition_estimate() const noexcept { return cond_; }

private:
    UnisolventNodes reference_;
    std::vector<double> given_;
    Matrix R_, S_;
    double s_inf_ = 0.0;
    double cond_ = 1.0;
};

/// Builds R row by row from the Newton basis values at each given node times
/// LN, factors it with partial pivoting and inverts. Throws
/// SingularSystemError when the pivot ratio exceeds 1/(50 eps).
inline ScatteredSystem build_scattered(const TransformSet& T, std::span<const double> given_nodes) {
    const MultiIndexSet& A = T.set();
    const std::size_t m = A.dim(), N = A.size();
    if (given_nodes.size() != N * m)
        throw DimensionError("build_scattered: expected " + std::to_string(N) + " nodes of dimension " +
                             std::to_string(m) + ", got " + std::to_string(given_nodes.size()) + " coordinates");
    Matrix R = newton_basis_matrix(A, T.nodes().gp(), given_nodes) * T.LN();
    Eigen::PartialPivLU<Matrix> lu(R);
    const double ratio = pivot_ratio(lu.matrixLU());
    if (!(ratio <= scattered_singularity_threshold()))
        throw SingularSystemError("build_scattered: given nodes are not unisolvent (pivot ratio " +
                                      std::to_string(ratio) + ")",
                                  ratio);
    Matrix S = lu.inverse();
    return ScatteredSystem(T.nodes(), std::vector<double>(given_nodes.begin(), given_nodes.end()), std::move(R),
                           std::move(S), ratio);
}

inline ScatteredSystem build_scattered(const UnisolventNodes& reference, std::span<const double> given_nodes) {
    return build_scattered(TransformSet(reference), given_nodes);
}

/// C_lag = S * F: Lagrange coordinates with respect to the reference nodes.
inline std::vector<double> interpolate_scattered(const ScatteredSystem& sys, std::span<const double> F) {
    if (F.size() != sys.set().size())
        throw DimensionError("interpolate_scattered: " + std::to_string(F.size()) + " values for " +
                             std::to_string(sys.set().size()) + " nodes");
    Eigen::Map<const Vector> f(F.data(), static_cast<Eigen::Index>(F.size()));
    Vector c = sys.S() * f;
    return {c.data(), c.data() + c.size()};
}

/// Newton form of the polynomial with the given Lagrange coordinates on the
/// reference nodes (the coordinates are its values there).
inline NewtonPolynomial lagrange_to_newton(const UnisolventNodes& reference, std::span<const double> lagrange) {
    return divided_differences(reference, lagrange);
}

/// s_n = 1 + ||S||_inf * Lambda(P_A).
inline double scattered_error_factor(const ScatteredSystem& sys, double lebesgue_reference) {
    if (!(lebesgue_reference >= 1.0 - 1e-12))
        throw InvalidArgument("scattered_error_factor: Lebesgue constant estimate must be >= 1");
    return 1.0 + sys.s_inf() * lebesgue_reference;
}

/// Moves every coordinate by rho * dist(p, {-1, 1}) with rho uniform in
/// [-amplitude, amplitude]. Nodes on the boundary stay on it.
template <class Rng>
std::vector<double> perturb_nodes(const UnisolventNodes& nodes, double amplitude, Rng& rng) {
    if (!(amplitude >= 0.0 && amplitude <= 1.0)) throw InvalidArgument("perturb_nodes: amplitude must be in [0,1]");
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> out(nodes.coordinates().begin(), nodes.coordinates().end());
    for (double& x : out) {
        const double r = amplitude * unit(rng);
        x += r * (1.0 - std::abs(x));
    }
    return out;
}

}  // namespace mvinterp
