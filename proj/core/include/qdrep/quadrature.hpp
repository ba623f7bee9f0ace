#pragma once

#include <vector>

namespace qdrep {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Hermite rule for the weight exp(-x^2) on the real line.
/// Nodes are returned in ascending order; weights sum to sqrt(pi).
QuadratureRule gauss_hermite(int n);

/// Same rule rescaled for expectations over a standard normal variable:
/// E[f(Z)] ~ sum_i w_i f(z_i), with sum_i w_i = 1.
QuadratureRule gauss_hermite_normal(int n);

}  // namespace qdrep
