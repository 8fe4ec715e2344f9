#pragma once

#include <cstddef>
#include <vector>

#include "peerlens/error.hpp"

namespace peerlens {

/// Nodes and weights of a composite Simpson rule.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Composite Simpson rule on [lo, hi] with `n` nodes (odd, >= 3).
inline QuadratureRule simpson_rule(double lo, double hi, std::size_t n) {
    if (n < 3 || n % 2 == 0) {
        throw InvalidArgument("Simpson rule needs an odd node count >= 3");
    }
    if (!(hi > lo)) {
        throw InvalidArgument("Simpson rule needs lo < hi");
    }
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double h = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
        // Fill from both ends so the node set is mirror-symmetric about the midpoint.
        rule.nodes[k] = k <= (n - 1) / 2 ? lo + static_cast<double>(k) * h
                                         : hi - static_cast<double>(n - 1 - k) * h;
        const double w = (k == 0 || k == n - 1) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        rule.weights[k] = w * h / 3.0;
    }
    return rule;
}

}  // namespace peerlens
