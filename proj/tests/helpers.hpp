#pragma once

#include <memory>
#include <vector>

#include "mvinterp/mvinterp.hpp"
#include "oracles.hpp"

namespace testing_support {

inline mvinterp::DegreeNorm norm(double p) { return {p}; }
inline constexpr double inf = std::numeric_limits<double>::infinity();

inline mvinterp::UnisolventNodes nodes_for(std::size_t m, mvinterp::Exponent n, double p,
                                           mvinterp::NodeFamily family = mvinterp::NodeFamily::cheb2,
                                           bool leja = true) {
    auto A = std::make_shared<const mvinterp::MultiIndexSet>(mvinterp::build_complete_set(m, n, {p}));
    auto gp = std::make_shared<const mvinterp::GeneratingNodes>(mvinterp::make_generating_nodes(m, n, family, leja));
    return mvinterp::UnisolventNodes(A, gp);
}

inline std::vector<oracle::Index> as_oracle(const mvinterp::MultiIndexSet& A) {
    std::vector<oracle::Index> out;
    for (std::size_t i = 0; i < A.size(); ++i) out.emplace_back(A.at(i).begin(), A.at(i).end());
    return out;
}

inline std::vector<double> point(const mvinterp::UnisolventNodes& P, std::size_t i) {
    auto s = P.point(i);
    return {s.begin(), s.end()};
}

}  // namespace testing_support
