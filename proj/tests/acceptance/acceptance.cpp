// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "steiner/dynamics.hpp"
#include "steiner/sessile.hpp"

using namespace steiner;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int n, const char* title, const std::function<Outcome()>& fn) {
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", n, title, o.detail.c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double dist(const State& a, const State& b) {
  return std::max({std::abs(a.x - b.x), std::abs(a.w - b.w), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

bool near_singular(double a, const std::vector<double>& roots, double w) {
  for (double r : roots)
    if (std::abs(a - r) < w) return true;
  return false;
}

CapMode cap(double alpha, int l, double eps, Profile xi) {
  CapMode m;
  m.alpha = alpha;
  m.l = l;
  m.k = 2;
  m.epsilon = eps;
  m.xi = std::move(xi);
  return m;
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i <= n; ++i) g.push_back(lo + (hi - lo) * i / n);
  return g;
}

}  // namespace

int main() {
  constexpr double pi = oracle::pi;

  report(1, "critical angle", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const double a = critical_alpha_star();
    const double dt = seconds_since(t0);
    return Outcome{std::abs(a - 1.391) <= 1e-3 && dt < 1.0, fmt("alpha0* = %.10f, %.3f s", a, dt)};
  });

  report(2, "rocking constants at 1.45", [] {
    const auto t0 = std::chrono::steady_clock::now();
    SeriesOptions so;
    so.branch = Branch::Secondary;
    const auto s = rocking_series(Params(1.45), so);
    const double dt = seconds_since(t0);
    const double y = s.y_center, a = s.coefficient(2, 0), b = s.coefficient(0, 2);
    // four significant figures
    const bool ok = std::abs(y - 0.6504) <= 5e-5 && std::abs(a - 2.1064) <= 5e-4 && std::abs(b - 0.91936) <= 5e-5;
    return Outcome{ok && dt < 10.0, fmt("y = %.6f, x^2: %.6f, w^2: %.6f, %.3f s", y, a, b, dt)};
  });

  report(3, "singular alphas", [] {
    const auto s2 = singular_alphas(2), s4 = singular_alphas(4);
    bool ok = s2.size() == 2 && std::abs(s2[0] - 0.870) <= 1e-3 && std::abs(s2[1] - 1.391) <= 1e-3;
    ok = ok && s4.size() == 3 && std::abs(s4[0] - 0.517) <= 2e-3;
    std::string d = "order 2:";
    for (double r : s2) d += fmt(" %.6f", r);
    d += "; order 4:";
    for (double r : s4) d += fmt(" %.6f", r);
    return Outcome{ok, d};
  });

  report(4, "closed-form quadratic coefficients", [] {
    const auto sing = singular_alphas(4);
    double worst = 0.0;
    int n = 0;
    for (int i = 0; n < 50; ++i) {
      const double a = 0.1 + 1.45 * i / 60.0;
      if (near_singular(a, sing, 0.02)) continue;
      const auto s = rocking_series(Params(a));
      const auto [a3, a5] = oracle::rocking_a3_a5(a);
      worst = std::max({worst, std::abs(s.coefficient(2, 0) - a3), std::abs(s.coefficient(0, 2) - a5)});
      ++n;
    }
    return Outcome{worst < 1e-9, fmt("%d alpha0 values, max difference %.3e", n, worst)};
  });

  report(5, "symmetry suite", [] {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> X(-2.0, 2.0), Y(0.01, 5.0), A(0.1, 1.55), U(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double x = X(rng), y = Y(rng), q = q_of_alpha(A(rng));
      const auto [f1, h1] = accelerations(x, y, q);
      const auto [f2, h2] = accelerations(-x, y, q);
      worst = std::max({worst, std::abs(f1 + f2), std::abs(h1 - h2)});
    }
    bool pairing = true;
    for (int i = 0; i < 100; ++i) {
      const EigenSet ev = eigenvalues(0.05 + 2.0 * (U(rng) + 1.0));
      pairing &= ev.lambda12.first == -ev.lambda12.second && ev.lambda34.first == -ev.lambda34.second;
    }
    bool inv = true;
    for (int i = 0; i < 1000; ++i) {
      const State s(U(rng), U(rng), 1.0 + 0.9 * U(rng), U(rng));
      inv &= apply_G1(apply_G1(s)) == s && apply_G2(apply_G2(s)) == s && apply_S(s) == apply_G2(apply_G1(s));
    }
    return Outcome{worst <= 1e-13 && pairing && inv,
                   fmt("max parity defect %.2e, pairing %s, involutions %s", worst, pairing ? "exact" : "broken",
                       inv ? "exact" : "broken")};
  });

  report(6, "reversibility round trip", [] {
    const Params p(1.2);
    const double y0 = primary_equilibrium(p).y_eq;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const State s0(0.05 * U(rng), 0.05 * U(rng), y0 + 0.05 * U(rng), 0.05 * U(rng));
      const Trajectory a = integrate(s0, p, 1e-3, 10.0);
      const Trajectory b = integrate(apply_G2(a.states.back()), p, 1e-3, 10.0);
      worst = std::max(worst, dist(apply_G2(b.states.back()), s0));
    }
    return Outcome{worst < 1e-9, fmt("10 orbits, max return error %.3e", worst)};
  });

  report(7, "bouncing Hamiltonian and escape", [] {
    const Params p(1.2);
    const double y0 = primary_equilibrium(p).y_eq, y1 = secondary_equilibrium(p).y_eq;
    const auto H = reduced_potential(p, grid(0.02, 12.0, 1200));
    const double Hs = saddle_energy(H, p);
    IntegrateOptions rk;
    rk.scheme = Scheme::RkAdaptive;
    double drift = 0.0, drift_sym = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double z = (i % 2 ? 1.0 : -1.0) * std::sqrt(2.0 * Hs * (0.05 + 0.09 * i));
      const State s0(0, 0, y0, z);
      const Trajectory tr = integrate(s0, p, 1e-3, 100.0, rk);
      if (tr.times.back() < 100.0 - 1e-9) return Outcome{false, "in-island orbit stopped early"};
      for (const State& s : tr.states) drift = std::max(drift, std::abs(H.energy(s.y, s.z) - H.energy(s0.y, s0.z)));
      for (const State& s : integrate(s0, p, 1e-3, 100.0).states)
        drift_sym = std::max(drift_sym, std::abs(H.energy(s.y, s.z) - H.energy(s0.y, s0.z)));
    }
    // above the saddle level, starting flattened (y < y0) and stretched (y > y1)
    int escaped = 0, total = 0;
    std::string classes;
    for (double y : {0.05, 0.1, 0.15, 0.3 * y0, 1.2 * y1, 1.5 * y1, 2.0 * y1}) {
      const double E = H.energy(y, 0.0);
      if (E <= Hs) continue;
      const EscapeClass c = escape_detect(integrate(State(0, 0, y, 0), p, 1e-3, 100.0), p);
      ++total;
      escaped += c != EscapeClass::Bounded;
      classes += fmt(" y=%.3f:%s", y, std::string(to_string(c)).c_str());
    }
    // kicked from the center and from beyond the saddle, both directions
    for (double ys : {y0, 1.2 * y1, 1.5 * y1})
      for (double f : {1.05, 1.5}) {
        const double z = std::sqrt(2.0 * (Hs * f - H.potential(ys)));
        for (double sgn : {-1.0, 1.0}) {
          const EscapeClass c = escape_detect(integrate(State(0, 0, ys, sgn * z), p, 1e-3, 100.0), p);
          ++total;
          escaped += c != EscapeClass::Bounded;
        }
      }
    const bool ok = drift < 1e-8 && escaped == total && total >= 16;
    return Outcome{ok, fmt("max |H(t) - H(0)| %.3e adaptive (symmetric dt = 1e-3: %.3e, bounded), escaped %d/%d;", drift,
                               drift_sym, escaped, total) +
                           classes};
  });

  report(8, "rocking invariance", [] {
    IntegrateOptions rk;
    rk.scheme = Scheme::RkAdaptive;
    bool ok = true;
    std::string d;
    for (double a : {pi / 4, 2 * pi / 5}) {
      const Params p(a);
      const auto s = rocking_series(p);
      std::vector<double> rs, devs;
      for (double r : {0.05, 0.025, 0.0125}) {
        const State s0 = on_manifold_state(s, p, r / std::sqrt(2.0), r / std::sqrt(2.0));
        rs.push_back(r);
        devs.push_back(manifold_deviation(s, integrate(s0, p, 1e-3, 50.0, rk)));
      }
      const double slope = oracle::loglog_slope(rs, devs);
      ok = ok && devs[0] < 5e-4 && slope >= 4.5;
      d += fmt("alpha0 %.4f: dev(0.05) %.2e, order %.2f; ", a, devs[0], slope);
    }
    return Outcome{ok, d};
  });

  report(9, "transcritical exchange", [] {
    std::vector<double> g;
    for (int i = 0; i < 200; ++i) g.push_back(0.1 + 1.45 * i / 199.0);
    const auto rows = bifurcation_scan(g);
    int f0 = 0, f1 = 0;
    double at = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].stab0 != rows[i - 1].stab0) {
        ++f0;
        at = 0.5 * (rows[i].alpha0 + rows[i - 1].alpha0);
      }
      f1 += rows[i].stab1 != rows[i - 1].stab1;
    }
    const bool ok = f0 == 1 && f1 == 1 && std::abs(at - critical_alpha_star()) < 0.01;
    return Outcome{ok, fmt("flips %d / %d near alpha0 = %.4f", f0, f1, at)};
  });

  report(10, "sessile selection rules", [] {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst_ratio = 0.0;  // |oracle - reduced| / max(1e-8, 5 eps^2)
    bool rules = true;
    double min_order = 1e300;
    for (double a : {pi / 3, 4 * pi / 9}) {
      std::vector<Profile> shapes{builtin_profile("cos1", a), builtin_profile("bump", a), builtin_profile("poly", a)};
      for (int r = 0; r < 3; ++r) {
        std::array<double, 4> c{};
        for (double& v : c) v = U(rng);
        const auto raw = [c, a](double s) {
          double v = 0.0;
          for (int n = 0; n < 4; ++n) v += c[n] * std::cos(n * pi * s / a);
          return v;
        };
        double mx = 0.0;
        for (int i = 0; i <= 2000; ++i) mx = std::max(mx, std::abs(raw(a * i / 2000.0)));
        shapes.push_back([raw, mx](double s) { return raw(s) / mx; });
      }
      const double M0 = unperturbed_volume(a);
      for (int l = 0; l <= 5; ++l)
        for (const Profile& xi : shapes) {
          std::vector<double> disp;
          for (double e : {1e-2, 5e-3}) {
            const CapMode m = cap(a, l, e, xi);
            const double tol = std::max(1e-8, 5 * e * e);
            const ComTrace tr = com_trace(m, {0.0, 0.8});
            for (std::size_t i = 0; i < tr.times.size(); ++i) {
              const Moments o = com_oracle_3d(m, tr.times[i]);
              const double d = std::max({std::abs(o.M - tr.M[i]), std::abs(o.Mx - tr.M[i] * tr.xbar[i]),
                                         std::abs(o.Mz - tr.M[i] * tr.zbar[i]), std::abs(o.My)});
              worst_ratio = std::max(worst_ratio, d / tol);
              rules = rules && std::abs(o.My) < 1e-12 && tr.ybar[i] == 0.0;
              if (l == 0) rules = rules && std::abs(o.Mx) < 1e-12 && tr.xbar[i] == 0.0;
              if (l == 1)
                rules = rules && std::abs(o.Mz - pi / 4) < tol && std::abs(o.M - M0) < tol &&
                        std::abs(tr.zbar[i] * tr.M[i] - pi / 4) < 1e-15;
            }
            if (l >= 2) {
              const Moments o = com_oracle_3d(m, 0.0);
              disp.push_back(std::max(std::abs(o.Mx / o.M), std::abs(o.Mz / o.M - pi / (4 * M0))));
              rules = rules && tr.xbar[0] == 0.0 && std::abs(tr.zbar[0] - pi / (4 * M0)) < 1e-15;
            }
            const ModeClass want = l == 0 ? ModeClass::Bouncing : l == 1 ? ModeClass::Rocking : ModeClass::Stationary;
            rules = rules && tr.classification == want;
          }
          if (l >= 2) min_order = std::min(min_order, std::log(disp[0] / disp[1]) / std::log(2.0));
        }
    }
    double base = 0.0;
    std::mt19937_64 r2(20);
    std::uniform_real_distribution<double> A(0.2, 3.0);
    for (int i = 0; i < 20; ++i) {
      const double a = A(r2);
      const auto [M, Mz] = oracle::cap_moments(a);
      const Moments o = com_oracle_3d(cap(a, 0, 0.0, builtin_profile("constant", a)), 0.0);
      base = std::max({base, std::abs(unperturbed_volume(a) - M), std::abs(o.M - M), std::abs(o.Mz - Mz),
                       std::abs(Mz - pi / 4)});
    }
    const bool ok = worst_ratio <= 1.0 && rules && min_order >= 1.9 && base < 1e-10;
    return Outcome{ok, fmt("max error / tolerance %.3f, selection rules %s, l>=2 order >= %.2f, baseline %.2e",
                           worst_ratio, rules ? "hold" : "violated", min_order, base)};
  });

  report(11, "torus evidence", [] {
    const Params p(pi / 4);
    const State s0 = initial_condition(p, 0.05, pi / 4);
    const Trajectory t200 = integrate(s0, p, 1e-3, 200.0);
    const Trajectory t800 = integrate(s0, p, 1e-3, 800.0);
    const SectionMap m200 = poincare(t200), m800 = poincare(t800);
    const double g200 = max_nearest_neighbor_gap(m200.crossings);
    const double g800 = max_nearest_neighbor_gap(m800.crossings);
    double max_x = 0.0;
    for (const auto& c : m800.crossings) max_x = std::max(max_x, std::abs(c.state.x));
    double extent = 0.0;
    bool finite = true;
    for (const auto& e : torus_embed(t800))
      for (double v : e) {
        finite &= std::isfinite(v);
        extent = std::max(extent, std::abs(v));
      }
    const bool bounded = finite && extent < 2.0 && escape_detect(t800, p) == EscapeClass::Bounded;
    const bool ok = m800.status == SectionStatus::Ok && g800 < g200 && max_x < kSectionTolerance && bounded;
    return Outcome{ok, fmt("%zu -> %zu crossings, gap %.4e -> %.4e, embedding extent %.3f", m200.crossings.size(),
                           m800.crossings.size(), g200, g800, extent)};
  });

  report(12, "determinism", [] {
    const fs::path root = fs::temp_directory_path() / "steiner_acceptance_det";
    fs::remove_all(root);
    const std::vector<std::string> cmds{
        "simulate --alpha0 0.7853981633974483 --phi 0.7853981633974483 --t-end 50",
        "sweep --preset two-fifths-pi --t-end 20",
        "sessile --alpha 1.3962634015954636 --l 1 --k 2 --oracle --n 21",
        "bifurcation --n 100",
        "manifold --alpha0 1.2",
    };
    int files = 0;
    for (std::size_t k = 0; k < cmds.size(); ++k) {
      std::array<fs::path, 2> dirs{root / fmt("%zu_a", k), root / fmt("%zu_b", k)};
      for (const auto& d : dirs) {
        const std::string cmd = std::string("\"") + STEINER_CLI_PATH + "\" " + cmds[k] + " --out \"" + d.string() +
                                "\" >/dev/null 2>&1";
        const int st = std::system(cmd.c_str());
        if (!WIFEXITED(st) || WEXITSTATUS(st) != 0) return Outcome{false, "command failed: " + cmds[k]};
      }
      for (const auto& e : fs::recursive_directory_iterator(dirs[0])) {
        if (!e.is_regular_file()) continue;
        const fs::path other = dirs[1] / fs::relative(e.path(), dirs[0]);
        if (!fs::exists(other) || slurp(e.path()) != slurp(other))
          return Outcome{false, "differs: " + fs::relative(e.path(), root).string()};
        ++files;
      }
    }
    fs::remove_all(root);
    return Outcome{files > 0, fmt("%d output files byte-identical across two runs", files)};
  });

  return failures;
}
