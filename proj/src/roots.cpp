#include "steiner/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "steiner/errors.hpp"

namespace steiner {

double bracketed_root(const std::function<double(double)>& f, double lo, double hi, const RootOptions& opt) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!std::isfinite(flo) || !std::isfinite(fhi) || (flo > 0) == (fhi > 0))
    throw NumericalError("bracketed_root: endpoints do not bracket a sign change");

  for (int it = 0; it < opt.max_iter; ++it) {
    const double width = hi - lo;
    const double ulp_floor = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi));
    if (std::abs(width) <= std::max(opt.xtol, ulp_floor)) return 0.5 * (lo + hi);

    double x = lo - flo * (hi - lo) / (fhi - flo);
    const double mid = 0.5 * (lo + hi);
    // secant point must sit inside the bracket, away from the endpoints
    const double margin = 0.01 * std::abs(width);
    if (!std::isfinite(x) || x <= std::min(lo, hi) + margin || x >= std::max(lo, hi) - margin) x = mid;

    double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0) == (flo > 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    // a bisection step after the secant guarantees geometric shrinkage
    if (std::abs(hi - lo) > 0.5 * std::abs(width)) {
      const double m = 0.5 * (lo + hi);
      const double fm = f(m);
      if (fm == 0.0) return m;
      if ((fm > 0) == (flo > 0)) {
        lo = m;
        flo = fm;
      } else {
        hi = m;
        fhi = fm;
      }
    }
  }
  throw NumericalError("bracketed_root: no convergence");
}

std::vector<std::pair<double, double>> sign_change_brackets(const std::function<double(double)>& f,
                                                            const std::vector<double>& grid) {
  std::vector<std::pair<double, double>> out;
  if (grid.size() < 2) return out;
  double prev = f(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = f(grid[i]);
    if (std::isfinite(prev) && std::isfinite(cur)) {
      if (prev == 0.0 && i == 1) out.emplace_back(grid[0], grid[0]);
      if (cur == 0.0)
        out.emplace_back(grid[i], grid[i]);
      else if (prev != 0.0 && (prev > 0) != (cur > 0))
        out.emplace_back(grid[i - 1], grid[i]);
    }
    prev = cur;
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
  return g;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return g;
}

}  // namespace steiner
