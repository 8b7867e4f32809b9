#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "mvinterp/error.hpp"
#include "mvinterp/multiindex.hpp"

namespace mvinterp {

/// cos((2k-1) pi / (2(n+1))), k = 1..n+1, evaluated as a sine of the
/// complementary angle so the set is exactly symmetric and contains an exact 0
/// for even n.
inline std::vector<double> chebyshev_first(Exponent n) {
    std::vector<double> x(n + 1);
    const double den = 2.0 * (static_cast<double>(n) + 1.0);
    for (Exponent k = 1; k <= n + 1; ++k) {
        const long num = static_cast<long>(n) + 2 - 2 * static_cast<long>(k);
        x[k - 1] = std::sin(static_cast<double>(num) * std::numbers::pi / den);
    }
    return x;
}

/// cos(k pi / n), k = 0..n. n = 0 returns {1} by convention.
inline std::vector<double> chebyshev_second(Exponent n) {
    if (n == 0) return {1.0};
    std::vector<double> x(n + 1);
    const double den = 2.0 * static_cast<double>(n);
    for (Exponent k = 0; k <= n; ++k) {
        const long num = static_cast<long>(n) - 2 * static_cast<long>(k);
        x[k] = std::sin(static_cast<double>(num) * std::numbers::pi / den);
    }
    return x;
}

namespace detail {
// Scores closer than this (in log space) count as ties.
inline constexpr double leja_tie_tolerance = 1e-12;
}

/// Permutation realizing the Leja order: start with the largest |p|, then
/// repeatedly take the candidate maximizing prod_i |p - p_i| over the already
/// chosen points. Products are compared as sums of logs. Ties go to the larger
/// signed value, then to the lower input position.
inline std::vector<std::size_t> leja_permutation(std::span<const double> points) {
    const std::size_t n = points.size();
    if (n == 0) throw InvalidArgument("leja_order: empty input");
    {
        std::vector<double> s(points.begin(), points.end());
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw InvalidArgument("leja_order: duplicate values");
    }

    std::vector<std::size_t> order;
    order.reserve(n);
    std::vector<bool> used(n, false);
    std::vector<double> score(n, 0.0);  // sum of log-distances to chosen points

    auto better = [&](std::size_t cand, double cand_score, std::size_t best, double best_score) {
        if (cand_score > best_score + detail::leja_tie_tolerance) return true;
        if (cand_score < best_score - detail::leja_tie_tolerance) return false;
        if (points[cand] != points[best]) return points[cand] > points[best];
        return cand < best;
    };

    std::size_t first = 0;
    for (std::size_t i = 1; i < n; ++i) {
        const double ai = std::abs(points[i]), af = std::abs(points[first]);
        if (ai > af || (ai == af && points[i] > points[first])) first = i;
    }
    order.push_back(first);
    used[first] = true;

    for (std::size_t j = 1; j < n; ++j) {
        const double last = points[order.back()];
        std::size_t best = npos;
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            const double d = std::abs(points[i] - last);
            score[i] += d == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(d);
            if (best == npos || better(i, score[i], best, score[best])) best = i;
        }
        order.push_back(best);
        used[best] = true;
    }
    return order;
}

inline std::vector<double> leja_order(std::span<const double> points) {
    std::vector<double> out;
    out.reserve(points.size());
    for (std::size_t i : leja_permutation(points)) out.push_back(points[i]);
    return out;
}

/// Per-dimension 1D node sequences P_1, ..., P_m.
class GeneratingNodes {
public:
    GeneratingNodes() = default;

    /// Values must be pairwise distinct within each dimension. Values outside
    /// [-1, 1] require `unscaled = true`.
    explicit GeneratingNodes(std::vector<std::vector<double>> per_dimension, bool unscaled = false)
        : dims_(std::move(per_dimension)), unscaled_(unscaled) {
        if (dims_.empty()) throw InvalidArgument("generating nodes need at least one dimension");
        for (std::size_t d = 0; d < dims_.size(); ++d) {
            const auto& v = dims_[d];
            if (v.empty()) throw InvalidArgument("generating nodes: dimension " + std::to_string(d) + " is empty");
            std::vector<double> s = v;
            std::sort(s.begin(), s.end());
            if (std::adjacent_find(s.begin(), s.end()) != s.end())
                throw InvalidArgument("generating nodes: repeated value in dimension " + std::to_string(d));
            for (double x : v) {
                if (!std::isfinite(x)) throw InvalidArgument("generating nodes: non-finite value");
                if (!unscaled_ && std::abs(x) > 1.0)
                    throw InvalidArgument("generating nodes: value outside [-1,1] without the unscaled flag");
            }
        }
    }

    /// Same 1D sequence in all m dimensions.
    static GeneratingNodes repeated(std::size_t m, const std::vector<double>& nodes, bool unscaled = false) {
        return GeneratingNodes(std::vector<std::vector<double>>(m, nodes), unscaled);
    }

    std::size_t dim() const noexcept { return dims_.size(); }
    std::span<const double> operator[](std::size_t d) const { return dims_[d]; }
    const std::vector<std::vector<double>>& per_dimension() const noexcept { return dims_; }
    bool unscaled() const noexcept { return unscaled_; }

    /// Throws CoverageError unless every dimension has at least 1 + max alpha_d values.
    void check_covers(const MultiIndexSet& A) const {
        if (A.dim() != dim())
            throw DimensionError("generating nodes of dimension " + std::to_string(dim()) +
                                 " for a multi-index set of dimension " + std::to_string(A.dim()));
        for (std::size_t d = 0; d < dim(); ++d)
            if (!A.empty() && dims_[d].size() < std::size_t(A.max_exponent(d)) + 1)
                throw CoverageError("generating nodes: dimension " + std::to_string(d) + " has " +
                                    std::to_string(dims_[d].size()) + " values, need " +
                                    std::to_string(A.max_exponent(d) + 1));
    }

    bool operator==(const GeneratingNodes&) const = default;

private:
    std::vector<std::vector<double>> dims_;
    bool unscaled_ = false;
};

enum class NodeFamily { cheb1, cheb2 };

/// Per-dimension family of degree n, Leja-ordered unless `leja` is false.
inline GeneratingNodes make_generating_nodes(std::size_t m, Exponent n, NodeFamily family = NodeFamily::cheb2,
                                             bool leja = true) {
    std::vector<double> base = family == NodeFamily::cheb1 ? chebyshev_first(n) : chebyshev_second(n);
    if (leja) base = leja_order(base);
    return GeneratingNodes::repeated(m, base);
}

/// P_A = { (p_{alpha_1,1}, ..., p_{alpha_m,m}) : alpha in A }, row i belongs to
/// the i-th index of A in lex order. Coordinates are copied from gp, so they are
/// bit-identical to the generating values.
class UnisolventNodes {
public:
    UnisolventNodes(std::shared_ptr<const MultiIndexSet> A, std::shared_ptr<const GeneratingNodes> gp)
        : A_(std::move(A)), gp_(std::move(gp)) {
        if (!A_ || !gp_) throw InvalidArgument("unisolvent nodes: null input");
        if (!is_complete(*A_)) throw InvalidArgument("unisolvent nodes: multi-index set is not complete");
        gp_->check_covers(*A_);
        const std::size_t m = A_->dim();
        coords_.resize(A_->size() * m);
        for (std::size_t i = 0; i < A_->size(); ++i) {
            auto a = A_->at(i);
            for (std::size_t d = 0; d < m; ++d) coords_[i * m + d] = (*gp_)[d][a[d]];
        }
    }

    const MultiIndexSet& set() const noexcept { return *A_; }
    const GeneratingNodes& gp() const noexcept { return *gp_; }
    std::shared_ptr<const MultiIndexSet> set_ptr() const noexcept { return A_; }
    std::shared_ptr<const GeneratingNodes> gp_ptr() const noexcept { return gp_; }

    std::size_t dim() const noexcept { return A_->dim(); }
    std::size_t size() const noexcept { return A_->size(); }
    std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim(), dim()}; }
    std::span<const double> coordinates() const noexcept { return coords_; }

private:
    std::shared_ptr<const MultiIndexSet> A_;
    std::shared_ptr<const GeneratingNodes> gp_;
    std::vector<double> coords_;
};

inline UnisolventNodes generate_unisolvent(const MultiIndexSet& A, const GeneratingNodes& gp) {
    return UnisolventNodes(std::make_shared<const MultiIndexSet>(A), std::make_shared<const GeneratingNodes>(gp));
}

}  // namespace mvinterp
