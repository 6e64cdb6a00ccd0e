#include "steiner/equilibria.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "steiner/csv.hpp"
#include "steiner/roots.hpp"

namespace steiner {

std::string_view to_string(Branch b) { return b == Branch::Primary ? "primary" : "secondary"; }

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::Center: return "center";
    case Stability::Saddle: return "saddle";
    case Stability::Degenerate: return "degenerate";
  }
  return "degenerate";
}

Branch branch_from_string(std::string_view s) {
  if (s == "primary" || s == "x0") return Branch::Primary;
  if (s == "secondary" || s == "x1") return Branch::Secondary;
  throw DomainError("unknown branch '" + std::string(s) + "' (expected primary or secondary)");
}

double critical_alpha_star(double tol) {
  RootOptions opt;
  opt.xtol = tol;
  return bracketed_root(dq_dalpha, 1.2, 1.5, opt);
}

double equilibrium_level(double y) {
  const double y4 = 81.0 * std::pow(y, 4);
  const double r = std::sqrt(y4 + 1.0);
  return 486.0 * std::pow(y, 5) / ((y4 + 1.0) * (r + 4.0));
}

Equilibrium primary_equilibrium(const Params& params) {
  const double a = params.alpha0();
  return Equilibrium{std::sqrt(std::tan(a)) / 3.0, a, Branch::Primary};
}

Equilibrium secondary_equilibrium(const Params& params, double tol) {
  static const double alpha_star = critical_alpha_star();
  const double y_star = std::sqrt(std::tan(alpha_star)) / 3.0;
  const double level = params.q();
  const double y0 = primary_equilibrium(params).y_eq;
  const auto g = [level](double y) { return equilibrium_level(y) - level; };

  // the level curve touches the maximum: both roots sit at y_star to round-off
  if (g(y_star) <= 64.0 * std::numeric_limits<double>::epsilon() * level)
    throw CoincidentRootsError("secondary_equilibrium: roots coincide at alpha0 ~ alpha0*");

  const bool upper = y0 < y_star;  // y1 lies on the opposite side of the maximum
  double lo = 1e-4, hi = 1e3;
  while (upper && g(hi) > 0.0 && hi < 1e6) hi *= 2.0;
  while (!upper && g(lo) > 0.0 && lo > 1e-12) lo *= 0.5;

  std::vector<double> grid = log_grid(lo, hi, 400);
  grid.push_back(y_star);
  std::sort(grid.begin(), grid.end());

  double y1 = std::numeric_limits<double>::quiet_NaN();
  RootOptions opt;
  opt.xtol = 1e-3 * tol;
  for (const auto& [a, b] : sign_change_brackets(g, grid)) {
    const bool on_far_side = upper ? a >= y_star : b <= y_star;
    if (!on_far_side) continue;
    y1 = a == b ? a : bracketed_root(g, a, b, opt);
    break;
  }
  if (!std::isfinite(y1)) throw NumericalError("secondary_equilibrium: no bracket for the second root");
  if (std::abs(y1 - y0) < 10.0 * tol)
    throw CoincidentRootsError("secondary_equilibrium: |y1 - y0| below 10*tol");
  return Equilibrium{y1, std::atan(9.0 * y1 * y1), Branch::Secondary};
}

JacobianPartials jacobian_partials(double y) {
  if (!(y > 0.0)) throw DomainError("jacobian_partials: y must be positive");
  const double s = 81.0 * std::pow(y, 4) + 1.0;
  const double r = std::sqrt(s);
  const double s32 = s * r;
  const double fx = -1458.0 * std::pow(y, 5) / s32;
  const double hy = 18.0 * y / s32 * ((s - 1.0) * (r - 4.0) / (r + 4.0) - 5.0);
  return {fx, hy};
}

JacobianPartials primary_partials_closed_form(double a) {
  const double s = std::sin(a), c = std::cos(a);
  const double fx = -6.0 * std::sqrt(std::pow(s, 5) * c);
  const double hy = -6.0 * std::sqrt(std::tan(a)) / (1.0 / c + 4.0) *
                    (16.0 * c + 3.0 * std::cos(2.0 * a) + 4.0 * std::cos(3.0 * a) + 2.0);
  return {fx, hy};
}

EigenSet eigenvalues(double y_eq) {
  const auto p = jacobian_partials(y_eq);
  const std::complex<double> l1 = std::sqrt(std::complex<double>(p.fx, 0.0));
  const std::complex<double> l3 = std::sqrt(std::complex<double>(p.hy, 0.0));
  return EigenSet{{l1, -l1}, {l3, -l3}, p.fx, p.hy};
}

std::vector<std::complex<double>> numeric_eigenvalues(const State& s, const Params& params, double step) {
  Eigen::Matrix4d J;
  const auto base = s.as_array();
  for (int j = 0; j < 4; ++j) {
    auto plus = base, minus = base;
    plus[static_cast<std::size_t>(j)] += step;
    minus[static_cast<std::size_t>(j)] -= step;
    const auto fp = rhs(State::from_array(plus), params);
    const auto fm = rhs(State::from_array(minus), params);
    for (int i = 0; i < 4; ++i)
      J(i, j) = (fp[static_cast<std::size_t>(i)] - fm[static_cast<std::size_t>(i)]) / (2.0 * step);
  }
  Eigen::EigenSolver<Eigen::Matrix4d> es(J, false);
  std::vector<std::complex<double>> ev(4);
  for (int i = 0; i < 4; ++i) ev[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return ev;
}

Stability stability_from_partials(const JacobianPartials& p) {
  if (p.fx == 0.0 || p.hy == 0.0) return Stability::Degenerate;
  if (p.fx < 0.0 && p.hy < 0.0) return Stability::Center;
  return Stability::Saddle;
}

std::pair<Equilibrium, Equilibrium> classify(const Params& params) {
  static const double alpha_star = critical_alpha_star();
  Equilibrium e0 = primary_equilibrium(params);
  if (std::abs(params.alpha0() - alpha_star) < kDegenerateWindow) {
    Equilibrium e1{e0.y_eq, e0.contact_angle, Branch::Secondary, Stability::Degenerate};
    try {
      const Equilibrium s = secondary_equilibrium(params);
      e1.y_eq = s.y_eq;
      e1.contact_angle = s.contact_angle;
    } catch (const CoincidentRootsError&) {
    }
    e0.stability = Stability::Degenerate;
    return {e0, e1};
  }
  Equilibrium e1 = secondary_equilibrium(params);
  e0.stability = stability_from_partials(jacobian_partials(e0.y_eq));
  e1.stability = stability_from_partials(jacobian_partials(e1.y_eq));
  return {e0, e1};
}

std::vector<BifurcationRow> bifurcation_scan(const std::vector<double>& alpha_grid) {
  std::vector<BifurcationRow> rows;
  rows.reserve(alpha_grid.size());
  for (const double a : alpha_grid) {
    BifurcationRow row{a, std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
                       Stability::Degenerate, Stability::Degenerate, false};
    try {
      const Params p(a);
      row.y0 = primary_equilibrium(p).y_eq;
      const auto [e0, e1] = classify(p);
      row.y1 = e1.y_eq;
      row.stab0 = e0.stability;
      row.stab1 = e1.stability;
    } catch (const std::exception&) {
      row.root_failed = true;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_bifurcation_csv(std::ostream& os, const std::vector<BifurcationRow>& rows) {
  os << "alpha0,y0,y1,stab0,stab1\n";
  for (const auto& r : rows)
    os << fmt17(r.alpha0) << ',' << fmt17(r.y0) << ',' << fmt17(r.y1) << ',' << to_string(r.stab0) << ','
       << to_string(r.stab1) << '\n';
}

}  // namespace steiner
