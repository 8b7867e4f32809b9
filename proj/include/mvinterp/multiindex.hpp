#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mvinterp/error.hpp"

namespace mvinterp {

using Exponent = std::uint32_t;

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
inline constexpr std::size_t default_cardinality_cap = 100'000'000;

/// Exponent vector alpha = (alpha_1, ..., alpha_m).
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t m) : e_(m, 0) {}
    MultiIndex(std::initializer_list<Exponent> e) : e_(e) {}
    explicit MultiIndex(std::vector<Exponent> e) : e_(std::move(e)) {}
    explicit MultiIndex(std::span<const Exponent> e) : e_(e.begin(), e.end()) {}

    std::size_t dim() const noexcept { return e_.size(); }
    Exponent operator[](std::size_t i) const { return e_[i]; }
    Exponent& operator[](std::size_t i) { return e_[i]; }
    std::span<const Exponent> entries() const noexcept { return e_; }
    auto begin() const noexcept { return e_.begin(); }
    auto end() const noexcept { return e_.end(); }

    MultiIndex plus_unit(std::size_t i) const {
        MultiIndex r = *this;
        ++r.e_[i];
        return r;
    }

    /// beta! = prod_i beta_i!
    double factorial() const {
        double f = 1.0;
        for (Exponent k : e_)
            for (Exponent j = 2; j <= k; ++j) f *= static_cast<double>(j);
        return f;
    }

    std::uint64_t l1() const {
        std::uint64_t s = 0;
        for (Exponent k : e_) s += k;
        return s;
    }

    bool operator==(const MultiIndex&) const = default;

private:
    std::vector<Exponent> e_;
};

/// Lexicographic order that compares the last coordinate first, then moves
/// toward the first one: (5,3,1) < (1,0,3) < (1,1,3).
inline std::strong_ordering lex_compare(std::span<const Exponent> a, std::span<const Exponent> b) {
    if (a.size() != b.size())
        throw DimensionError("lex_compare: multi-indices of dimension " + std::to_string(a.size()) +
                             " and " + std::to_string(b.size()));
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

inline std::strong_ordering lex_compare(const MultiIndex& a, const MultiIndex& b) {
    return lex_compare(a.entries(), b.entries());
}

/// Degree norm p in [1, inf]. Infinity is stored as +inf.
struct DegreeNorm {
    double p = 2.0;

    static DegreeNorm infinity() { return {std::numeric_limits<double>::infinity()}; }
    bool is_inf() const { return std::isinf(p); }
    bool is_one() const { return p == 1.0; }
    bool is_two() const { return p == 2.0; }
    bool operator==(const DegreeNorm&) const = default;

    std::string to_string() const {
        if (is_inf()) return "inf";
        std::string s = std::to_string(p);
        s.erase(s.find_last_not_of('0') + 1);
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    }
};

struct DegreeSpec {
    Exponent n = 0;
    DegreeNorm p;
    bool operator==(const DegreeSpec&) const = default;
};

namespace detail {

struct SpanHash {
    std::size_t operator()(const std::vector<Exponent>& v) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (Exponent e : v) {
            h ^= e;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace detail

/// Finite set of multi-indices of a fixed dimension, sorted by lex_compare.
/// Storage is one flat exponent array plus a hash table for O(1) membership
/// and a table of "alpha - e_d" positions used by the Newton sweeps.
class MultiIndexSet {
public:
    MultiIndexSet() = default;

    /// Sorts, rejects duplicates and mixed dimensions. Completeness is not
    /// required here; see is_complete().
    static MultiIndexSet from_indices(std::size_t m, std::vector<MultiIndex> indices,
                                      std::optional<DegreeSpec> spec = std::nullopt) {
        if (m == 0) throw InvalidArgument("multi-index set needs dimension m >= 1");
        for (const auto& a : indices)
            if (a.dim() != m)
                throw DimensionError("multi-index of dimension " + std::to_string(a.dim()) +
                                     " in a set of dimension " + std::to_string(m));
        std::sort(indices.begin(), indices.end(),
                  [](const MultiIndex& a, const MultiIndex& b) { return lex_compare(a, b) < 0; });
        for (std::size_t i = 1; i < indices.size(); ++i)
            if (indices[i] == indices[i - 1]) throw InvalidArgument("duplicate multi-index in set");
        std::vector<Exponent> flat;
        flat.reserve(indices.size() * m);
        for (const auto& a : indices) flat.insert(flat.end(), a.begin(), a.end());
        return MultiIndexSet(m, std::move(flat), spec);
    }

    std::size_t dim() const noexcept { return m_; }
    std::size_t size() const noexcept { return m_ == 0 ? 0 : data_.size() / m_; }
    bool empty() const noexcept { return size() == 0; }
    const std::optional<DegreeSpec>& degree_spec() const noexcept { return spec_; }

    std::span<const Exponent> at(std::size_t i) const { return {data_.data() + i * m_, m_}; }
    MultiIndex index(std::size_t i) const { return MultiIndex(at(i)); }
    std::vector<MultiIndex> indices() const {
        std::vector<MultiIndex> r;
        r.reserve(size());
        for (std::size_t i = 0; i < size(); ++i) r.push_back(index(i));
        return r;
    }

    /// Position of alpha in lex order, or npos.
    std::size_t find(std::span<const Exponent> alpha) const {
        if (alpha.size() != m_) throw DimensionError("find: dimension mismatch");
        auto it = lookup_.find(std::vector<Exponent>(alpha.begin(), alpha.end()));
        return it == lookup_.end() ? npos : it->second;
    }
    std::size_t find(const MultiIndex& alpha) const { return find(alpha.entries()); }
    bool contains(const MultiIndex& alpha) const { return find(alpha) != npos; }

    /// Position of alpha - e_d for the entry at position i (npos if alpha_d == 0
    /// or the predecessor is not in the set).
    std::size_t down(std::size_t i, std::size_t d) const { return down_[i * m_ + d]; }

    /// max_{alpha in A} alpha_d
    Exponent max_exponent(std::size_t d) const { return max_exp_[d]; }

    bool operator==(const MultiIndexSet& o) const { return m_ == o.m_ && data_ == o.data_; }

private:
    MultiIndexSet(std::size_t m, std::vector<Exponent> flat, std::optional<DegreeSpec> spec)
        : m_(m), data_(std::move(flat)), spec_(spec), max_exp_(m, 0) {
        const std::size_t n = size();
        lookup_.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto a = at(i);
            lookup_.emplace(std::vector<Exponent>(a.begin(), a.end()), i);
            for (std::size_t d = 0; d < m_; ++d) max_exp_[d] = std::max(max_exp_[d], a[d]);
        }
        down_.assign(n * m_, npos);
        std::vector<Exponent> probe(m_);
        for (std::size_t i = 0; i < n; ++i) {
            auto a = at(i);
            for (std::size_t d = 0; d < m_; ++d) {
                if (a[d] == 0) continue;
                probe.assign(a.begin(), a.end());
                --probe[d];
                auto it = lookup_.find(probe);
                if (it != lookup_.end()) down_[i * m_ + d] = it->second;
            }
        }
    }

    std::size_t m_ = 0;
    std::vector<Exponent> data_;
    std::optional<DegreeSpec> spec_;
    std::vector<Exponent> max_exp_;
    std::vector<std::size_t> down_;
    std::unordered_map<std::vector<Exponent>, std::size_t, detail::SpanHash> lookup_;
};

/// A_{m,n,p} = { alpha : ||alpha||_p <= n }, sorted by lex_compare.
/// Integer-exact membership for p in {1, 2, inf}; other p use
/// sum alpha_i^p <= n^p (1 + 1e-12).
inline MultiIndexSet build_complete_set(std::size_t m, Exponent n, DegreeNorm p,
                                        std::size_t cap = default_cardinality_cap) {
    if (m == 0) throw InvalidArgument("build_complete_set: m must be >= 1");
    if (std::isnan(p.p) || p.p < 1.0) throw InvalidArgument("build_complete_set: degree norm p must be >= 1");

    enum class Kind { one, two, inf, real } kind =
        p.is_inf() ? Kind::inf : p.is_one() ? Kind::one : p.is_two() ? Kind::two : Kind::real;

    const std::uint64_t nn = n;
    const double real_budget = std::pow(static_cast<double>(n), p.p) * (1.0 + 1e-12);

    std::vector<Exponent> flat;
    std::vector<Exponent> cur(m, 0);
    std::size_t count = 0;

    // Dimension m-1 is the outermost loop so indices come out in lex order.
    std::function<void(std::size_t, std::uint64_t, double)> rec = [&](std::size_t d, std::uint64_t used,
                                                                       double used_real) {
        for (Exponent a = 0;; ++a) {
            std::uint64_t u = used;
            double ur = used_real;
            switch (kind) {
                case Kind::one:
                    u += a;
                    if (u > nn) return;
                    break;
                case Kind::two:
                    u += std::uint64_t(a) * a;
                    if (u > nn * nn) return;
                    break;
                case Kind::inf:
                    if (a > n) return;
                    break;
                case Kind::real:
                    ur += std::pow(static_cast<double>(a), p.p);
                    if (ur > real_budget) return;
                    break;
            }
            cur[d] = a;
            if (d == 0) {
                if (++count > cap)
                    throw CardinalityError("build_complete_set: more than " + std::to_string(cap) +
                                           " multi-indices");
                flat.insert(flat.end(), cur.begin(), cur.end());
            } else {
                rec(d - 1, u, ur);
            }
        }
    };
    rec(m - 1, 0, 0.0);
    cur.assign(m, 0);

    std::vector<MultiIndex> idx;
    idx.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        idx.emplace_back(std::span<const Exponent>(flat.data() + i * m, m));
    return MultiIndexSet::from_indices(m, std::move(idx), DegreeSpec{n, p});
}

/// Downward closed: alpha in A and beta <= alpha componentwise implies beta in A.
/// Checking the immediate predecessors alpha - e_i suffices.
inline bool is_complete(const MultiIndexSet& A) {
    for (std::size_t i = 0; i < A.size(); ++i) {
        auto a = A.at(i);
        for (std::size_t d = 0; d < A.dim(); ++d)
            if (a[d] > 0 && A.down(i, d) == npos) return false;
    }
    return true;
}

struct Boundaries {
    std::vector<MultiIndex> inner;  // alpha in A with alpha + e_i not in A for every i
    std::vector<MultiIndex> outer;  // { alpha + e_i : alpha in inner }, deduplicated, lex sorted
    MultiIndexSet closure;          // A union outer
};

inline Boundaries boundaries(const MultiIndexSet& A) {
    if (!is_complete(A)) throw InvalidArgument("boundaries: set is not complete");
    Boundaries b;
    const std::size_t m = A.dim();
    for (std::size_t i = 0; i < A.size(); ++i) {
        MultiIndex a = A.index(i);
        bool interior = false;
        for (std::size_t d = 0; d < m && !interior; ++d) interior = A.contains(a.plus_unit(d));
        if (!interior) b.inner.push_back(std::move(a));
    }
    std::vector<MultiIndex> outer;
    for (const auto& a : b.inner)
        for (std::size_t d = 0; d < m; ++d) {
            MultiIndex up = a.plus_unit(d);
            if (!A.contains(up)) outer.push_back(std::move(up));
        }
    auto less = [](const MultiIndex& x, const MultiIndex& y) { return lex_compare(x, y) < 0; };
    std::sort(outer.begin(), outer.end(), less);
    outer.erase(std::unique(outer.begin(), outer.end()), outer.end());
    b.outer = outer;

    std::vector<MultiIndex> all = A.indices();
    all.insert(all.end(), outer.begin(), outer.end());
    b.closure = MultiIndexSet::from_indices(m, std::move(all));
    return b;
}

struct LastSplit {
    MultiIndexSet lower;  // A1 = { alpha : alpha_m = 0 }
    MultiIndexSet upper;  // A2 = A \ A1, stored with alpha_m decremented
    bool upper_shifted = true;
    std::size_t upper_dim() const { return upper.dim(); }
};

inline LastSplit split_on_last(const MultiIndexSet& A) {
    if (A.empty()) throw InvalidArgument("split_on_last: empty set");
    if (!is_complete(A)) throw InvalidArgument("split_on_last: set is not complete");
    const std::size_t m = A.dim();
    std::vector<MultiIndex> lo, hi;
    for (std::size_t i = 0; i < A.size(); ++i) {
        MultiIndex a = A.index(i);
        if (a[m - 1] == 0) {
            lo.push_back(std::move(a));
        } else {
            --a[m - 1];
            hi.push_back(std::move(a));
        }
    }
    return {MultiIndexSet::from_indices(m, std::move(lo)), MultiIndexSet::from_indices(m, std::move(hi)), true};
}

/// Multi-indices beta whose terms d^beta f / beta! * N_beta make up the
/// interpolation remainder, obtained by unrolling the split A = A1 + (x_m - p_0m) A2:
///   E(A) = lift(E_{m-1}(A1)) u (E(A2 shifted) + e_m),   E(empty) = {0}.
/// Coincides with the outer boundary for A_{m,n,1} and for m = 1.
inline std::vector<MultiIndex> remainder_indices(const MultiIndexSet& A) {
    if (!is_complete(A)) throw InvalidArgument("remainder_indices: set is not complete");
    const std::size_t m = A.dim();
    using Key = std::vector<Exponent>;

    // Works on the first `dims` coordinates of sets whose higher coordinates are zero.
    std::function<std::set<Key>(const std::vector<Key>&, std::size_t)> rec =
        [&](const std::vector<Key>& set, std::size_t dims) -> std::set<Key> {
        std::set<Key> out;
        if (set.empty()) {
            out.insert(Key(m, 0));
            return out;
        }
        if (dims == 0) return out;
        const std::size_t last = dims - 1;
        std::vector<Key> lo, hi;
        for (const auto& a : set) {
            if (a[last] == 0) {
                lo.push_back(a);
            } else {
                Key s = a;
                --s[last];
                hi.push_back(std::move(s));
            }
        }
        for (const auto& b : rec(lo, last)) out.insert(b);
        for (auto b : rec(hi, dims)) {
            ++b[last];
            out.insert(std::move(b));
        }
        return out;
    };

    std::vector<Key> all;
    all.reserve(A.size());
    for (std::size_t i = 0; i < A.size(); ++i) all.emplace_back(A.at(i).begin(), A.at(i).end());
    std::vector<MultiIndex> r;
    for (auto& k : rec(all, m)) r.emplace_back(std::move(k));
    std::sort(r.begin(), r.end(), [](const MultiIndex& x, const MultiIndex& y) { return lex_compare(x, y) < 0; });
    return r;
}

}  // namespace mvinterp
