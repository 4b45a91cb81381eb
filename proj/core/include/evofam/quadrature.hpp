#pragma once

#include <utility>
#include <vector>

namespace evofam {

/// Gauss-Legendre rule of the given order on [-1, 1]: nodes and weights,
/// weights summing to 2. Order 1 is the midpoint rule. Rules are cached.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussRule& gauss_legendre(int order);

}  // namespace evofam
