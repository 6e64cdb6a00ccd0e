#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace steiner {

struct RootOptions {
  double xtol = 1e-14;  ///< absolute bracket width at which to stop
  int max_iter = 200;
};

/// Root of f on [lo, hi] where f(lo) and f(hi) differ in sign. Bisection
/// safeguarding a secant step: the secant point is accepted only when it falls
/// strictly inside the current bracket and shrinks it by at least half.
/// Throws NumericalError if the bracket is invalid or iteration does not converge.
double bracketed_root(const std::function<double(double)>& f, double lo, double hi, const RootOptions& opt = {});

/// Intervals [grid[i], grid[i+1]] over which f changes sign (exact zeros at a
/// node produce a degenerate interval around that node).
std::vector<std::pair<double, double>> sign_change_brackets(const std::function<double(double)>& f,
                                                            const std::vector<double>& grid);

std::vector<double> log_grid(double lo, double hi, int n);
std::vector<double> linear_grid(double lo, double hi, int n);

}  // namespace steiner
