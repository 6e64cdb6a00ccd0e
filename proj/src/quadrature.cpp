#include "steiner/quadrature.hpp"

#include <cmath>

#include "steiner/errors.hpp"
#include "steiner/model.hpp"

namespace steiner {

GaussLegendre::GaussLegendre(int n) {
  if (n < 1) throw DomainError("GaussLegendre: need at least one node");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Tricomi initial guess, then Newton on P_n
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

double GaussLegendre::integrate(const std::function<double(double)>& f, double a, double b) const {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(mid + half * nodes[i]);
  return half * s;
}

namespace {

double adapt(const std::function<double(double)>& f, double a, double b, double coarse, const GaussLegendre& lo,
             const GaussLegendre& hi, double abs_tol, double rel_tol, int depth) {
  const double fine = hi.integrate(f, a, b);
  if (std::abs(fine - coarse) <= std::max(abs_tol, rel_tol * std::abs(fine))) return fine;
  if (depth <= 0) throw NumericalError("integrate_adaptive: subdivision limit reached");
  const double m = 0.5 * (a + b);
  const double left = lo.integrate(f, a, m);
  const double right = lo.integrate(f, m, b);
  return adapt(f, a, m, left, lo, hi, 0.5 * abs_tol, rel_tol, depth - 1) +
         adapt(f, m, b, right, lo, hi, 0.5 * abs_tol, rel_tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol, double rel_tol,
                          int max_depth) {
  static const GaussLegendre lo(10);
  static const GaussLegendre hi(20);
  if (a == b) return 0.0;
  return adapt(f, a, b, lo.integrate(f, a, b), lo, hi, abs_tol, rel_tol, max_depth);
}

}  // namespace steiner
