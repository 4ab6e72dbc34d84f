#pragma once

#include <vector>

namespace fraclap::quadrature {

/// Gauss-Legendre rule on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point rule, computed once per n and cached.
const Rule& gauss_legendre(int n);

}  // namespace fraclap::quadrature
