#include "steiner/manifolds.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "steiner/csv.hpp"
#include "steiner/ode.hpp"
#include "steiner/quadrature.hpp"
#include "steiner/roots.hpp"

namespace steiner {

double bouncing_acceleration(double y, const Params& params) {
  if (!(y > 0.0)) throw DomainError("bouncing_acceleration: y must be positive");
  return accelerations(0.0, y, params.q()).second;
}

// --- reduced Hamiltonian -----------------------------------------------------

namespace {

double integrate_h0(double q, double from, double to) {
  const auto h0 = [q](double y) { return accelerations(0.0, y, q).second; };
  return integrate_adaptive(h0, from, to, 1e-15, 1e-14);
}

std::size_t nearest_node(const std::vector<double>& grid, double y) {
  const auto it = std::lower_bound(grid.begin(), grid.end(), y);
  if (it == grid.begin()) return 0;
  if (it == grid.end()) return grid.size() - 1;
  const auto i = static_cast<std::size_t>(it - grid.begin());
  return (y - grid[i - 1] <= grid[i] - y) ? i - 1 : i;
}

}  // namespace

ReducedHamiltonian::ReducedHamiltonian(const Params& params, std::vector<double> y_grid, double y_ref)
    : alpha0_(params.alpha0()), q_(params.q()), y_ref_(y_ref), y_grid_(std::move(y_grid)) {
  if (y_grid_.empty()) throw DomainError("reduced_potential: empty grid");
  if (!(y_ref_ > 0.0)) throw DomainError("reduced_potential: y_ref must be positive");
  for (std::size_t i = 0; i < y_grid_.size(); ++i) {
    if (!(y_grid_[i] > 0.0)) throw DomainError("reduced_potential: grid must be strictly positive");
    if (i > 0 && !(y_grid_[i] > y_grid_[i - 1])) throw DomainError("reduced_potential: grid must be ascending");
  }
  u_.assign(y_grid_.size(), 0.0);
  const std::size_t k = nearest_node(y_grid_, y_ref_);
  u_[k] = -integrate_h0(q_, y_ref_, y_grid_[k]);
  for (std::size_t i = k + 1; i < y_grid_.size(); ++i) u_[i] = u_[i - 1] - integrate_h0(q_, y_grid_[i - 1], y_grid_[i]);
  for (std::size_t i = k; i-- > 0;) u_[i] = u_[i + 1] - integrate_h0(q_, y_grid_[i + 1], y_grid_[i]);
}

double ReducedHamiltonian::potential(double y) const {
  if (!(y > 0.0)) throw DomainError("ReducedHamiltonian::potential: y must be positive");
  const std::size_t k = nearest_node(y_grid_, y);
  return u_[k] - integrate_h0(q_, y_grid_[k], y);
}

ReducedHamiltonian reduced_potential(const Params& params, std::vector<double> y_grid, std::optional<double> y_ref) {
  return ReducedHamiltonian(params, std::move(y_grid), y_ref.value_or(primary_equilibrium(params).y_eq));
}

namespace {

Equilibrium saddle_of(const Params& params) {
  const auto [e0, e1] = classify(params);
  if (e1.stability == Stability::Saddle) return e1;
  if (e0.stability == Stability::Saddle) return e0;
  throw DomainError("no saddle in the reduced system at this alpha0 (degenerate)");
}

}  // namespace

double saddle_energy(const ReducedHamiltonian& H, const Params& params) {
  return H.potential(saddle_of(params).y_eq);
}

// --- separatrix --------------------------------------------------------------

std::vector<SeparatrixBranch> separatrix(const Params& params, const SeparatrixOptions& opt) {
  static const double alpha_star = critical_alpha_star();
  if (!(params.alpha0() < alpha_star - kDegenerateWindow))
    throw DomainError("separatrix: requires alpha0 < alpha0* (saddle on the secondary branch)");
  const double ys = secondary_equilibrium(params).y_eq;
  const double lambda = std::sqrt(jacobian_partials(ys).hy);
  const double q = params.q();
  const double d = opt.seed;

  struct Seed {
    const char* name;
    double y, z, t_dir;
  };
  const Seed seeds[] = {
      {"unstable-up", ys + d, lambda * d, 1.0},
      {"unstable-down", ys - d, -lambda * d, 1.0},
      {"stable-up", ys + d, -lambda * d, -1.0},
      {"stable-down", ys - d, lambda * d, -1.0},
  };

  const auto field = [q](double, const Vec<2>& u) -> Vec<2> {
    if (!(u[0] > 0.0)) throw LeftDomainError("separatrix: y <= 0", u[0]);
    return {u[1], accelerations(0.0, u[0], q).second};
  };

  AdaptiveOptions aopt;
  aopt.rtol = 1e-13;
  aopt.atol = 1e-14;
  aopt.h_max = 0.5 * opt.ds;

  std::vector<SeparatrixBranch> out;
  for (const Seed& s : seeds) {
    SeparatrixBranch br;
    br.name = s.name;
    br.zy.emplace_back(s.z, s.y);
    Vec<2> u{s.y, s.z};
    double h = 1e-4;
    bool left_saddle = false;
    const auto observer = [&](double, const Vec<2>& v) {
      const auto& last = br.zy.back();
      if (std::hypot(v[1] - last.first, v[0] - last.second) >= opt.ds) br.zy.emplace_back(v[1], v[0]);
      const double r = std::hypot(v[0] - ys, v[1]);
      if (r > 10.0 * opt.return_radius) left_saddle = true;
      if (v[0] < opt.y_low || v[0] > opt.y_high) {
        br.escaped = true;
        br.zy.emplace_back(v[1], v[0]);
        return false;
      }
      if (left_saddle && r < opt.return_radius) {
        br.zy.emplace_back(v[1], v[0]);
        return false;
      }
      return true;
    };
    dopri5<2>(field, 0.0, u, s.t_dir * opt.t_max, h, aopt, observer);
    out.push_back(std::move(br));
  }
  return out;
}

void write_separatrix_csv(std::ostream& os, const std::vector<SeparatrixBranch>& branches) {
  os << "z,y,branch\n";
  for (const auto& b : branches)
    for (const auto& [z, y] : b.zy) os << fmt17(z) << ',' << fmt17(y) << ',' << b.name << '\n';
}

// --- rocking manifold series -------------------------------------------------

Poly2 invariance_residual(const Poly2& g, const Params& params) {
  const int n = g.degree();
  const Poly2 X = Poly2::variable(n, 0);
  const Poly2 W = Poly2::variable(n, 1);
  const auto [F, Hh] = accelerations(X, g, params.q());
  const Poly2 Dg = W * g.derivative(0) + F * g.derivative(1);
  const Poly2 D2g = W * Dg.derivative(0) + F * Dg.derivative(1);
  return D2g - Hh;
}

namespace {

using Monomials = std::vector<std::pair<int, int>>;

Monomials monomials_of_degree(int k, bool even_only) {
  Monomials m;
  for (int j = 0; j <= k; ++j) {
    const int i = k - j;
    if (even_only && (i % 2 != 0 || j % 2 != 0)) continue;
    m.emplace_back(i, j);
  }
  return m;
}

struct DegreeSystem {
  Eigen::MatrixXd M;
  Eigen::VectorXd rhs;
  Monomials unknowns;
};

// Degree-k part of the residual is affine in the degree-k coefficients of g,
// so probing with unit coefficients recovers the matrix exactly.
DegreeSystem build_degree_system(const Poly2& g_lower, int k, bool even_only, const Params& params) {
  DegreeSystem sys;
  sys.unknowns = monomials_of_degree(k, even_only);
  const auto n = static_cast<Eigen::Index>(sys.unknowns.size());
  sys.M.resize(n, n);
  sys.rhs.resize(n);
  const Poly2 r0 = invariance_residual(g_lower, params);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto [i, j] = sys.unknowns[static_cast<std::size_t>(r)];
    sys.rhs(r) = -r0.at(i, j);
  }
  for (Eigen::Index c = 0; c < n; ++c) {
    Poly2 g = g_lower;
    const auto [ci, cj] = sys.unknowns[static_cast<std::size_t>(c)];
    g.at(ci, cj) += 1.0;
    const Poly2 r1 = invariance_residual(g, params);
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto [i, j] = sys.unknowns[static_cast<std::size_t>(r)];
      sys.M(r, c) = r1.at(i, j) - r0.at(i, j);
    }
  }
  return sys;
}

double condition_number(const Eigen::MatrixXd& M) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / s(s.size() - 1);
}

std::vector<double> singular_roots_of_degree(int k) {
  static std::mutex mu;
  static std::map<int, std::vector<double>> cache;
  const std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(k); it != cache.end()) return it->second;

  const auto det = [k](double a) { return even_block_determinant(a, k); };
  std::vector<double> roots;
  RootOptions opt;
  opt.xtol = 1e-15;
  for (const auto& [lo, hi] : sign_change_brackets(det, linear_grid(0.1, 1.55, 1451)))
    roots.push_back(lo == hi ? lo : bracketed_root(det, lo, hi, opt));
  cache.emplace(k, roots);
  return roots;
}

}  // namespace

std::vector<std::vector<double>> even_block_matrix(double alpha0, int degree) {
  const Params p(alpha0);
  const Poly2 g(degree, primary_equilibrium(p).y_eq);
  const DegreeSystem sys = build_degree_system(g, degree, true, p);
  std::vector<std::vector<double>> m(static_cast<std::size_t>(sys.M.rows()));
  for (Eigen::Index r = 0; r < sys.M.rows(); ++r)
    for (Eigen::Index c = 0; c < sys.M.cols(); ++c) m[static_cast<std::size_t>(r)].push_back(sys.M(r, c));
  return m;
}

double even_block_determinant(double alpha0, int degree) {
  const Params p(alpha0);
  const Poly2 g(degree, primary_equilibrium(p).y_eq);
  return build_degree_system(g, degree, true, p).M.determinant();
}

double even_block_condition(double alpha0, int degree) {
  const Params p(alpha0);
  const Poly2 g(degree, primary_equilibrium(p).y_eq);
  return condition_number(build_degree_system(g, degree, true, p).M);
}

std::vector<double> singular_alphas(int order) {
  if (order < 2) throw DomainError("singular_alphas: order must be at least 2");
  std::vector<double> all;
  for (int k = 2; k <= order; k += 2)
    for (double r : singular_roots_of_degree(k)) {
      const bool dup = std::any_of(all.begin(), all.end(), [r](double a) { return std::abs(a - r) < 1e-8; });
      if (!dup) all.push_back(r);
    }
  std::sort(all.begin(), all.end());
  return all;
}

ManifoldSeries rocking_series(const Params& params, const SeriesOptions& opt) {
  if (opt.order < 1 || opt.order > 8) throw DomainError("rocking_series: order must be in [1, 8]");
  static const double alpha_star = critical_alpha_star();
  const double a0 = params.alpha0();

  if (std::abs(a0 - alpha_star) < opt.singular_window) {
    std::ostringstream msg;
    msg << "rocking_series: alpha0 = " << fmt17(a0) << " is within " << opt.singular_window
        << " of the singular value " << fmt17(alpha_star) << " (order 2)";
    throw SingularSeriesError(msg.str(), 2, alpha_star);
  }
  if (opt.branch == Branch::Primary) {
    for (int k = 2; k <= opt.order; k += 2)
      for (double s : singular_roots_of_degree(k))
        if (std::abs(a0 - s) < opt.singular_window) {
          std::ostringstream msg;
          msg << "rocking_series: alpha0 = " << fmt17(a0) << " is within " << opt.singular_window
              << " of the singular value " << fmt17(s) << " (order " << k << ")";
          throw SingularSeriesError(msg.str(), k, s);
        }
  }

  const Equilibrium center =
      opt.branch == Branch::Primary ? primary_equilibrium(params) : secondary_equilibrium(params);

  ManifoldSeries series{a0, opt.branch, center.y_eq, opt.order, Poly2(opt.order, center.y_eq),
                        std::vector<double>(static_cast<std::size_t>(opt.order) + 1, 0.0), opt.parity};
  const bool even_only = opt.parity == Parity::Even;
  for (int k = 1; k <= opt.order; ++k) {
    if (even_only && k % 2 != 0) continue;
    const DegreeSystem sys = build_degree_system(series.g, k, even_only, params);
    const double cond = condition_number(sys.M);
    series.condition[static_cast<std::size_t>(k)] = cond;
    if (!(cond < opt.max_condition)) {
      std::ostringstream msg;
      msg << "rocking_series: linear system at order " << k << " is singular (condition " << cond << ")";
      throw SingularSeriesError(msg.str(), k, a0);
    }
    const Eigen::VectorXd c = sys.M.fullPivLu().solve(sys.rhs);
    for (std::size_t u = 0; u < sys.unknowns.size(); ++u)
      series.g.at(sys.unknowns[u].first, sys.unknowns[u].second) = c(static_cast<Eigen::Index>(u));
  }
  return series;
}

double a3_denominator(double a) {
  const double c = std::cos(a), s = std::sin(a);
  const double A = 14.0 * c + 4.0 * std::cos(2.0 * a) + 6.0 * std::cos(3.0 * a) + 1.0;
  const double csc4 = 1.0 / std::pow(s, 4);
  return 4.0 * (A * A * csc4 - 4.0 * (4.0 * c + 1.0) * (4.0 * c + 1.0));
}

std::pair<double, double> rocking_closed_form(double a) {
  if (!(a > 0.0 && a < kPi / 2)) throw DomainError("rocking_closed_form: alpha0 must lie in (0, pi/2)");
  const double c = std::cos(a), s = std::sin(a);
  const double A = 14.0 * c + 4.0 * std::cos(2.0 * a) + 6.0 * std::cos(3.0 * a) + 1.0;
  const double B = 8.0 * c + 7.0 * std::cos(2.0 * a) + 8.0 * std::cos(3.0 * a) + 1.0;
  const double den3 = a3_denominator(a);
  const double den5 = 2.0 * (208.0 * c + 388.0 * std::cos(2.0 * a) + 148.0 * std::cos(3.0 * a) +
                             191.0 * std::cos(4.0 * a) + 44.0 * std::cos(5.0 * a) + 32.0 * std::cos(6.0 * a) + 239.0);
  constexpr double eps = 1e-13;
  if (std::abs(den3) < eps || std::abs(den5) < eps)
    throw NumericalError("rocking_closed_form: denominator vanishes at alpha0 = " + fmt17(a));
  const double a3 = -3.0 * A * B * std::sqrt(c / s) / (s * s) / den3;
  const double a5 = s * (4.0 * c + 1.0) * B / den5;
  return {a3, a5};
}

SurfacePoint evaluate_g(const ManifoldSeries& series, double x, double w) {
  return {series.g(x, w), std::hypot(x, w) <= kTrustRadius};
}

State on_manifold_state(const ManifoldSeries& series, const Params& params, double x, double w) {
  const double y = series.g(x, w);
  const double gx = series.g.derivative(0)(x, w);
  const double gw = series.g.derivative(1)(x, w);
  const double f = accelerations(x, y, params.q()).first;
  return State(x, w, y, gx * w + gw * f);
}

void write_series_json(std::ostream& os, const ManifoldSeries& series) {
  nlohmann::ordered_json j;
  j["alpha0"] = series.alpha0;
  j["branch"] = std::string(to_string(series.branch));
  j["y_center"] = series.y_center;
  j["order"] = series.order;
  j["parity"] = series.parity == Parity::Even ? "even" : "unconstrained";
  auto coeffs = nlohmann::ordered_json::array();
  for (int k = 1; k <= series.order; ++k)
    for (int jj = 0; jj <= k; ++jj) {
      const int i = k - jj;
      if (series.parity == Parity::Even && (i % 2 != 0 || jj % 2 != 0)) continue;
      coeffs.push_back({{"i", i}, {"j", jj}, {"value", series.coefficient(i, jj)}});
    }
  j["coeffs"] = std::move(coeffs);
  os << j.dump(2) << '\n';
}

}  // namespace steiner
