#pragma once

#include <functional>
#include <vector>

namespace stiefel {

/// n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int n);

/// Composite Gauss-Legendre quadrature of f over [a, b] using `nodes` points
/// in total, split into panels of at most 16 nodes.
double integrate(const std::function<double(double)> &f, double a, double b, int nodes);

}  // namespace stiefel
