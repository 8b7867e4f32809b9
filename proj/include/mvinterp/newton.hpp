#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mvinterp/error.hpp"
#include "mvinterp/multiindex.hpp"
#include "mvinterp/nodes.hpp"

namespace mvinterp {

/// Counts the multiply-adds performed by divided_differences.
struct OpCount {
    std::size_t multiply_adds = 0;
};

/// N_alpha(x) = prod_i prod_{j < alpha_i} (x_i - p_{j,i}); empty products are 1.
inline double newton_basis_eval(const MultiIndex& alpha, const GeneratingNodes& gp, std::span<const double> x) {
    if (alpha.dim() != x.size() || alpha.dim() != gp.dim())
        throw DimensionError("newton_basis_eval: alpha has dimension " + std::to_string(alpha.dim()) +
                             ", x has " + std::to_string(x.size()) + ", gp has " + std::to_string(gp.dim()));
    double v = 1.0;
    for (std::size_t i = 0; i < alpha.dim(); ++i) {
        auto p = gp[i];
        if (p.size() < alpha[i]) throw CoverageError("newton_basis_eval: generating nodes do not cover alpha");
        for (Exponent j = 0; j < alpha[i]; ++j) v *= x[i] - p[j];
    }
    return v;
}

/// All N_alpha(x), alpha in A, in lex order. One multiplication per entry:
/// N_alpha = N_{alpha - e_f} * (x_f - p_{alpha_f - 1, f}) with f the first
/// nonzero coordinate of alpha.
inline void newton_basis_values(const MultiIndexSet& A, const GeneratingNodes& gp, std::span<const double> x,
                                std::span<double> out) {
    const std::size_t m = A.dim();
    if (x.size() != m) throw DimensionError("newton_basis_values: point dimension mismatch");
    if (out.size() != A.size()) throw DimensionError("newton_basis_values: output size mismatch");
    for (std::size_t i = 0; i < A.size(); ++i) {
        auto a = A.at(i);
        std::size_t f = 0;
        while (f < m && a[f] == 0) ++f;
        if (f == m) {
            out[i] = 1.0;
            continue;
        }
        out[i] = out[A.down(i, f)] * (x[f] - gp[f][a[f] - 1]);
    }
}

inline std::vector<double> newton_basis_values(const MultiIndexSet& A, const GeneratingNodes& gp,
                                               std::span<const double> x) {
    std::vector<double> out(A.size());
    newton_basis_values(A, gp, x, out);
    return out;
}

/// Q(x) = sum_alpha c_alpha N_alpha(x) over a complete set A.
class NewtonPolynomial {
public:
    NewtonPolynomial(std::shared_ptr<const MultiIndexSet> A, std::shared_ptr<const GeneratingNodes> gp,
                     std::vector<double> coefficients)
        : A_(std::move(A)), gp_(std::move(gp)), c_(std::move(coefficients)) {
        if (!A_ || !gp_) throw InvalidArgument("newton polynomial: null input");
        if (c_.size() != A_->size())
            throw DimensionError("newton polynomial: " + std::to_string(c_.size()) + " coefficients for " +
                                 std::to_string(A_->size()) + " multi-indices");
        if (!is_complete(*A_)) throw InvalidArgument("newton polynomial: multi-index set is not complete");
        gp_->check_covers(*A_);
        build_plan();
    }

    const MultiIndexSet& set() const noexcept { return *A_; }
    const GeneratingNodes& gp() const noexcept { return *gp_; }
    std::shared_ptr<const MultiIndexSet> set_ptr() const noexcept { return A_; }
    std::shared_ptr<const GeneratingNodes> gp_ptr() const noexcept { return gp_; }
    std::span<const double> coefficients() const noexcept { return c_; }
    std::size_t dim() const noexcept { return A_->dim(); }

    /// Multivariate Horner scheme: collapse dimension 1, then 2, ..., each
    /// fiber from its highest exponent down. |A| - 1 multiply-adds.
    /// `scratch` must have |A| entries.
    double evaluate(std::span<const double> x, std::span<double> scratch) const {
        if (x.size() != dim()) throw DimensionError("eval_newton: point dimension mismatch");
        std::copy(c_.begin(), c_.end(), scratch.begin());
        for (const Step& s : plan_) scratch[s.dst] += (x[s.dim] - s.node) * scratch[s.src];
        return scratch.empty() ? 0.0 : scratch[0];
    }

    double operator()(std::span<const double> x) const {
        std::vector<double> scratch(c_.size());
        return evaluate(x, scratch);
    }

private:
    struct Step {
        std::size_t src, dst, dim;
        double node;
    };

    void build_plan() {
        const std::size_t m = A_->dim();
        plan_.reserve(A_->size());
        for (std::size_t d = 0; d < m; ++d) {
            for (std::size_t pos = A_->size(); pos-- > 0;) {
                auto a = A_->at(pos);
                bool alive = true;
                for (std::size_t j = 0; j < d && alive; ++j) alive = a[j] == 0;
                if (!alive || a[d] == 0) continue;
                plan_.push_back({pos, A_->down(pos, d), d, (*gp_)[d][a[d] - 1]});
            }
        }
    }

    std::shared_ptr<const MultiIndexSet> A_;
    std::shared_ptr<const GeneratingNodes> gp_;
    std::vector<double> c_;
    std::vector<Step> plan_;
};

/// Newton coefficients of the unique interpolant in Pi_A of the values F on P_A.
///
/// Unrolls the split Q = Q1 + (x_m - p_{0,m}) Q2: a 1D in-place divided
/// difference sweep along x_m on every fiber of fixed (alpha_1..alpha_{m-1}),
/// then the same along x_{m-1} inside every slice, down to x_1. Denominators
/// use the stored generating values, so they match the node coordinates bit
/// for bit. Extra memory is the coefficient vector itself.
inline NewtonPolynomial divided_differences(const UnisolventNodes& nodes, std::span<const double> F,
                                            OpCount* ops = nullptr) {
    const MultiIndexSet& A = nodes.set();
    const GeneratingNodes& gp = nodes.gp();
    if (F.size() != A.size())
        throw DimensionError("divided_differences: " + std::to_string(F.size()) + " values for " +
                             std::to_string(A.size()) + " nodes");
    std::vector<double> c(F.begin(), F.end());
    std::size_t count = 0;
    for (std::size_t d = A.dim(); d-- > 0;) {
        auto g = gp[d];
        const Exponent top = A.max_exponent(d);
        for (Exponent j = 1; j <= top; ++j) {
            for (std::size_t pos = A.size(); pos-- > 0;) {
                const Exponent ad = A.at(pos)[d];
                if (ad < j) continue;
                const std::size_t prev = A.down(pos, d);
                c[pos] = (c[pos] - c[prev]) / (g[ad] - g[ad - j]);
                ++count;
            }
        }
    }
    if (ops) ops->multiply_adds += count;
    return NewtonPolynomial(nodes.set_ptr(), nodes.gp_ptr(), std::move(c));
}

inline NewtonPolynomial divided_differences(const MultiIndexSet& A, const UnisolventNodes& nodes,
                                            std::span<const double> F, OpCount* ops = nullptr) {
    if (!(A == nodes.set())) throw InvalidArgument("divided_differences: nodes were built for a different set");
    return divided_differences(nodes, F, ops);
}

inline double eval_newton(const NewtonPolynomial& Q, std::span<const double> x) { return Q(x); }

/// `points` holds the points row by row (m values each).
inline std::vector<double> eval_newton_batch(const NewtonPolynomial& Q, std::span<const double> points) {
    const std::size_t m = Q.dim();
    if (points.size() % m != 0) throw DimensionError("eval_newton_batch: coordinate count not a multiple of m");
    const std::size_t n = points.size() / m;
    std::vector<double> out(n);
    std::vector<double> scratch(Q.set().size());
    for (std::size_t i = 0; i < n; ++i) out[i] = Q.evaluate(points.subspan(i * m, m), scratch);
    return out;
}

/// Values of f at every node of P_A, in lex order.
template <class Fn>
std::vector<double> sample_at_nodes(const UnisolventNodes& nodes, Fn&& f) {
    std::vector<double> F(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) F[i] = f(nodes.point(i));
    return F;
}

}  // namespace mvinterp
