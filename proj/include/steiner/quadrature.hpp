#pragma once

#include <functional>
#include <vector>

namespace steiner {

/// n-point Gauss-Legendre rule on [-1, 1]; nodes ascending.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int n);

  int size() const { return static_cast<int>(nodes.size()); }

  /// Integral of f over [a, b].
  double integrate(const std::function<double(double)>& f, double a, double b) const;
};

/// Adaptive Gauss-Legendre (20 vs 10 point) on [a, b] with absolute/relative
/// tolerance; throws NumericalError when the subdivision limit is hit.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-13,
                          double rel_tol = 1e-13, int max_depth = 40);

}  // namespace steiner
