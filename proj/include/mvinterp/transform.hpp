#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mvinterp/error.hpp"
#include "mvinterp/multiindex.hpp"
#include "mvinterp/newton.hpp"
#include "mvinterp/nodes.hpp"

namespace mvinterp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// V(P_A)[alpha, beta] = p_alpha^beta.
inline Matrix vandermonde(const UnisolventNodes& nodes) {
    const MultiIndexSet& A = nodes.set();
    const std::size_t N = A.size(), m = A.dim();
    // powers[d][k] for the current node
    std::vector<std::vector<double>> powers(m);
    Matrix V(N, N);
    for (std::size_t i = 0; i < N; ++i) {
        auto p = nodes.point(i);
        for (std::size_t d = 0; d < m; ++d) {
            powers[d].assign(A.max_exponent(d) + 1, 1.0);
            for (Exponent k = 1; k <= A.max_exponent(d); ++k) powers[d][k] = powers[d][k - 1] * p[d];
        }
        for (std::size_t j = 0; j < N; ++j) {
            auto b = A.at(j);
            double v = 1.0;
            for (std::size_t d = 0; d < m; ++d) v *= powers[d][b[d]];
            V(i, j) = v;
        }
    }
    return V;
}

/// NL[alpha, beta] = N_beta(p_alpha). Lower triangular; the strict upper part
/// is set to zero.
inline Matrix build_NL(const UnisolventNodes& nodes) {
    const std::size_t N = nodes.size();
    Matrix NL = Matrix::Zero(N, N);
    std::vector<double> row(N);
    for (std::size_t i = 0; i < N; ++i) {
        newton_basis_values(nodes.set(), nodes.gp(), nodes.point(i), row);
        for (std::size_t j = 0; j <= i; ++j) NL(i, j) = row[j];
    }
    return NL;
}

namespace detail {

inline void require_nonsingular_diagonal(const Matrix& T, const char* who) {
    for (Eigen::Index i = 0; i < T.rows(); ++i)
        if (T(i, i) == 0.0 || !std::isfinite(T(i, i)))
            throw SingularSystemError(std::string(who) + ": zero diagonal entry (repeated generating values?)",
                                      std::numeric_limits<double>::infinity());
}

}  // namespace detail

/// LN = NL^{-1} by forward substitution; stays lower triangular.
inline Matrix build_LN(const Matrix& NL) {
    detail::require_nonsingular_diagonal(NL, "build_LN");
    const Eigen::Index N = NL.rows();
    Matrix LN = NL.triangularView<Eigen::Lower>().solve(Matrix::Identity(N, N));
    LN.triangularView<Eigen::StrictlyUpper>().setZero();
    return LN;
}

inline Matrix build_LN(const UnisolventNodes& nodes) { return build_LN(build_NL(nodes)); }

/// CN[:, beta] = Newton coefficients of the monomial x^beta, obtained by
/// running the divided differences on the monomial's node values. Upper
/// triangular; the strict lower part is set to zero and the diagonal, whose
/// exact value is 1, is stored as 1.
inline Matrix build_CN(const UnisolventNodes& nodes) {
    const MultiIndexSet& A = nodes.set();
    const std::size_t N = A.size();
    const Matrix V = vandermonde(nodes);
    Matrix CN = Matrix::Zero(N, N);
    std::vector<double> column(N);
    for (std::size_t j = 0; j < N; ++j) {
        for (std::size_t i = 0; i < N; ++i) column[i] = V(i, j);
        NewtonPolynomial q = divided_differences(nodes, column);
        auto c = q.coefficients();
        for (std::size_t i = 0; i < j; ++i) CN(i, j) = c[i];
        CN(j, j) = 1.0;
    }
    return CN;
}

/// NC = CN^{-1} by back substitution; stays upper triangular.
inline Matrix build_NC(const Matrix& CN) {
    detail::require_nonsingular_diagonal(CN, "build_NC");
    const Eigen::Index N = CN.rows();
    Matrix NC = CN.triangularView<Eigen::Upper>().solve(Matrix::Identity(N, N));
    NC.triangularView<Eigen::StrictlyLower>().setZero();
    return NC;
}

inline Matrix build_NC(const UnisolventNodes& nodes) { return build_NC(build_CN(nodes)); }

/// The four basis transforms for a fixed (A, P_A):
///   NL * C_newt = C_lag,  LN = NL^{-1},  CN * C_can = C_newt,  NC = CN^{-1},
/// and V(P_A) = NL * CN.
class TransformSet {
public:
    explicit TransformSet(UnisolventNodes nodes)
        : nodes_(std::move(nodes)), NL_(build_NL(nodes_)), LN_(build_LN(NL_)), CN_(build_CN(nodes_)),
          NC_(build_NC(CN_)) {}

    TransformSet(UnisolventNodes nodes, Matrix NL, Matrix LN, Matrix CN, Matrix NC)
        : nodes_(std::move(nodes)), NL_(std::move(NL)), LN_(std::move(LN)), CN_(std::move(CN)), NC_(std::move(NC)) {
        const auto N = static_cast<Eigen::Index>(nodes_.size());
        for (const Matrix* M : {&NL_, &LN_, &CN_, &NC_})
            if (M->rows() != N || M->cols() != N) throw DimensionError("transform set: matrix size mismatch");
    }

    const UnisolventNodes& nodes() const noexcept { return nodes_; }
    const MultiIndexSet& set() const noexcept { return nodes_.set(); }
    const Matrix& NL() const noexcept { return NL_; }
    const Matrix& LN() const noexcept { return LN_; }
    const Matrix& CN() const noexcept { return CN_; }
    const Matrix& NC() const noexcept { return NC_; }

    NewtonPolynomial newton(std::vector<double> coefficients) const {
        return NewtonPolynomial(nodes_.set_ptr(), nodes_.gp_ptr(), std::move(coefficients));
    }

    /// Lagrange coordinates -> Newton coordinates.
    Vector to_newton(const Vector& lagrange) const { return LN_ * lagrange; }
    /// Newton coordinates -> canonical (monomial) coordinates.
    Vector to_canonical(const Vector& newton) const { return NC_ * newton; }
    /// Canonical coordinates -> Newton coordinates.
    Vector from_canonical(const Vector& canonical) const { return CN_ * canonical; }

private:
    UnisolventNodes nodes_;
    Matrix NL_, LN_, CN_, NC_;
};

/// C_newt = LN * F.
inline NewtonPolynomial interpolate_fast(const TransformSet& T, std::span<const double> F) {
    if (F.size() != T.set().size())
        throw DimensionError("interpolate_fast: " + std::to_string(F.size()) + " values for " +
                             std::to_string(T.set().size()) + " nodes");
    Eigen::Map<const Vector> f(F.data(), static_cast<Eigen::Index>(F.size()));
    Vector c = T.LN() * f;
    return T.newton(std::vector<double>(c.data(), c.data() + c.size()));
}

/// All Lagrange basis values L_beta(x) = sum_gamma N_gamma(x) LN[gamma, beta].
inline Vector lagrange_values(const MultiIndexSet& A, const GeneratingNodes& gp, const Matrix& LN,
                              std::span<const double> x) {
    std::vector<double> nv = newton_basis_values(A, gp, x);
    Eigen::Map<const Vector> n(nv.data(), static_cast<Eigen::Index>(nv.size()));
    return LN.transpose() * n;
}

inline Vector lagrange_values(const TransformSet& T, std::span<const double> x) {
    return lagrange_values(T.set(), T.nodes().gp(), T.LN(), x);
}

/// Row i holds N_gamma(x_i) for the points given row by row.
inline Matrix newton_basis_matrix(const MultiIndexSet& A, const GeneratingNodes& gp, std::span<const double> points) {
    const std::size_t m = A.dim();
    if (points.size() % m != 0) throw DimensionError("newton_basis_matrix: coordinate count not a multiple of m");
    const std::size_t n = points.size() / m;
    Matrix out(n, A.size());
    std::vector<double> row(A.size());
    for (std::size_t i = 0; i < n; ++i) {
        newton_basis_values(A, gp, points.subspan(i * m, m), row);
        for (std::size_t j = 0; j < A.size(); ++j) out(i, j) = row[j];
    }
    return out;
}

/// sum_alpha F_alpha L_alpha(x), evaluated through the Newton form: the
/// Lagrange basis is never built explicitly.
inline double lagrange_eval(const UnisolventNodes& nodes, std::span<const double> F, std::span<const double> x) {
    return eval_newton(divided_differences(nodes, F), x);
}

inline double lagrange_eval(const MultiIndexSet& A, const UnisolventNodes& nodes, std::span<const double> F,
                            std::span<const double> x) {
    if (!(A == nodes.set())) throw InvalidArgument("lagrange_eval: nodes were built for a different set");
    return lagrange_eval(nodes, F, x);
}

}  // namespace mvinterp
