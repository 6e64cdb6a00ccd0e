#include "steiner/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <ostream>

#include "steiner/csv.hpp"
#include "steiner/roots.hpp"

namespace steiner {

std::string_view to_string(Scheme s) { return s == Scheme::Symmetric ? "symmetric" : "rk-adaptive"; }

Scheme scheme_from_string(std::string_view s) {
  if (s == "symmetric" || s == "leapfrog" || s == "verlet") return Scheme::Symmetric;
  if (s == "rk-adaptive" || s == "rk" || s == "dopri5") return Scheme::RkAdaptive;
  throw DomainError("unknown scheme '" + std::string(s) + "' (expected symmetric or rk-adaptive)");
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Escape: return "escape";
    case EventKind::SectionCrossing: return "section-crossing";
    case EventKind::DomainExit: return "domain-exit";
    case EventKind::StepFailure: return "step-failure";
  }
  return "unknown";
}

bool Trajectory::left_domain() const {
  return std::any_of(events.begin(), events.end(), [](const TrajectoryEvent& e) { return e.kind == EventKind::DomainExit; });
}

State symmetric_step(const State& s, double q, double dt) {
  const double half = 0.5 * dt;
  const double xh = s.x + half * s.w;
  const double yh = s.y + half * s.z;
  const auto [f, h] = accelerations(xh, yh, q);
  const double w = s.w + dt * f;
  const double z = s.z + dt * h;
  return State(xh + half * w, w, yh + half * z, z);
}

namespace {

void push_sample(Trajectory& tr, double t, const State& s) {
  tr.times.push_back(t);
  tr.states.push_back(s);
}

void integrate_symmetric(Trajectory& tr, const State& s0, const Params& params, double dt, long n,
                         const IntegrateOptions& opt) {
  const double q = params.q();
  const double half = 0.5 * dt;
  State s = s0;
  for (long i = 1; i <= n; ++i) {
    const double xh = s.x + half * s.w;
    const double yh = s.y + half * s.z;
    if (!opt.guard.contains(yh)) {
      tr.events.push_back({(i - 1) * dt, EventKind::DomainExit, "y = " + fmt17(yh) + " left the validity window"});
      return;
    }
    const auto [f, h] = accelerations(xh, yh, q);
    if (!std::isfinite(f) || !std::isfinite(h)) {
      tr.events.push_back({(i - 1) * dt, EventKind::StepFailure, "non-finite acceleration"});
      return;
    }
    const double w = s.w + dt * f;
    const double z = s.z + dt * h;
    const double x = xh + half * w;
    const double y = yh + half * z;
    if (!opt.guard.contains(y)) {
      tr.events.push_back({i * dt, EventKind::DomainExit, "y = " + fmt17(y) + " left the validity window"});
      return;
    }
    s = State(x, w, y, z);
    if (i % opt.stride == 0 || i == n) push_sample(tr, i * dt, s);
  }
}

void integrate_adaptive_rk(Trajectory& tr, const State& s0, const Params& params, double dt, long n,
                           const IntegrateOptions& opt) {
  const double q = params.q();
  const DomainGuard guard = opt.guard;
  const auto field = [q, guard](double, const Vec<4>& u) -> Vec<4> {
    if (!guard.contains(u[2])) throw LeftDomainError("y left the validity window", u[2]);
    const auto [f, h] = accelerations(u[0], u[2], q);
    return {u[1], f, u[3], h};
  };
  Vec<4> u = s0.as_array();
  double h = std::min(opt.adaptive.h_init, dt);
  for (long i = 1; i <= n; ++i) {
    try {
      dopri5<4>(field, (i - 1) * dt, u, i * dt, h, opt.adaptive);
    } catch (const LeftDomainError& e) {
      tr.events.push_back({(i - 1) * dt, EventKind::DomainExit, e.what()});
      return;
    } catch (const NumericalError& e) {
      tr.events.push_back({(i - 1) * dt, EventKind::StepFailure, e.what()});
      return;
    }
    if (!guard.contains(u[2])) {
      tr.events.push_back({i * dt, EventKind::DomainExit, "y = " + fmt17(u[2]) + " left the validity window"});
      return;
    }
    if (i % opt.stride == 0 || i == n) push_sample(tr, i * dt, State::from_array(u));
  }
}

}  // namespace

Trajectory integrate(const State& s0, const Params& params, double dt, double t_end, const IntegrateOptions& opt) {
  if (!(dt > 0.0)) throw DomainError("integrate: dt must be positive");
  if (!(t_end >= 0.0)) throw DomainError("integrate: t_end must be non-negative");
  if (opt.stride < 1) throw DomainError("integrate: stride must be at least 1");
  if (!opt.guard.contains(s0.y)) throw LeftDomainError("integrate: initial y outside the validity window", s0.y);

  Trajectory tr;
  tr.meta = {opt.scheme, dt, params.alpha0()};
  const long n = std::lround(t_end / dt);
  tr.times.reserve(static_cast<std::size_t>(n / opt.stride + 2));
  tr.states.reserve(static_cast<std::size_t>(n / opt.stride + 2));
  push_sample(tr, 0.0, s0);
  if (opt.scheme == Scheme::Symmetric)
    integrate_symmetric(tr, s0, params, dt, n, opt);
  else
    integrate_adaptive_rk(tr, s0, params, dt, n, opt);
  return tr;
}

// --- escape ------------------------------------------------------------------

std::string_view to_string(EscapeClass c) {
  switch (c) {
    case EscapeClass::Bounded: return "bounded";
    case EscapeClass::EscapedFlat: return "escaped-flat";
    case EscapeClass::EscapedStretched: return "escaped-stretched";
  }
  return "bounded";
}

EscapeClass escape_detect(const Trajectory& traj, const Params& params, const EscapeOptions& opt) {
  const auto& st = traj.states;
  std::size_t i = 0;
  for (; i < st.size(); ++i)
    if (st[i].y < opt.y_flat || st[i].y > opt.y_tall) break;

  if (i == st.size()) {
    if (!traj.left_domain() || st.empty()) return EscapeClass::Bounded;
    // halted at the guard before reaching a threshold sample
    return st.back().y < 1.0 ? EscapeClass::EscapedFlat : EscapeClass::EscapedStretched;
  }

  const bool flat = st[i].y < opt.y_flat;
  const auto outside = [&](double y) { return flat ? y < opt.y_flat : y > opt.y_tall; };

  // Confirmation: the orbit must stay beyond the threshold for confirm_time
  // (or leave the validity window) and end farther out than where it crossed.
  double y_cross = st[i].y;
  double t_covered = traj.times.back() - traj.times[i];
  bool ended_at_guard = traj.left_domain();
  for (std::size_t k = i; k < st.size(); ++k)
    if (!outside(st[k].y)) return EscapeClass::Bounded;
  double y_last = st.back().y;

  if (t_covered < opt.confirm_time && !ended_at_guard) {
    IntegrateOptions io;
    io.scheme = traj.meta.scheme;
    const double dt = traj.meta.dt > 0.0 ? traj.meta.dt : 1e-3;
    const Trajectory more = integrate(st.back(), params, dt, opt.confirm_time - t_covered, io);
    for (const State& s : more.states)
      if (!outside(s.y)) return EscapeClass::Bounded;
    ended_at_guard = more.left_domain();
    y_last = more.states.back().y;
  }
  const bool farther = flat ? y_last <= y_cross : y_last >= y_cross;
  if (!farther && !ended_at_guard) return EscapeClass::Bounded;
  return flat ? EscapeClass::EscapedFlat : EscapeClass::EscapedStretched;
}

// --- sections ----------------------------------------------------------------

std::string_view to_string(SectionStatus s) {
  switch (s) {
    case SectionStatus::Ok: return "ok";
    case SectionStatus::NonTransversal: return "non-transversal";
    case SectionStatus::TooFewCrossings: return "too-few-crossings";
  }
  return "ok";
}

namespace {

struct Hermite {
  double p0, m0, p1, m1, h;
  double operator()(double tau) const {
    const double t2 = tau * tau, t3 = t2 * tau;
    return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + tau) * h * m0 + (-2 * t3 + 3 * t2) * p1 +
           (t3 - t2) * h * m1;
  }
};

std::array<double, 4> derivative_of(const State& s, double q) {
  const auto [f, h] = accelerations(s.x, s.y, q);
  return {s.w, f, s.z, h};
}

}  // namespace

std::vector<SectionPoint> section_crossings(const Trajectory& traj, int component, double level, int direction) {
  if (component < 0 || component > 3) throw DomainError("section_crossings: component must be 0..3");
  if (direction == 0) throw DomainError("section_crossings: direction must be +1 or -1");
  const double q = Params(traj.meta.alpha0).q();
  const auto c = static_cast<std::size_t>(component);
  std::vector<SectionPoint> out;
  for (std::size_t i = 0; i + 1 < traj.states.size(); ++i) {
    const auto a = traj.states[i].as_array();
    const auto b = traj.states[i + 1].as_array();
    const double v0 = (a[c] - level) * direction;
    const double v1 = (b[c] - level) * direction;
    if (!(v0 < 0.0 && v1 >= 0.0)) continue;

    const double h = traj.times[i + 1] - traj.times[i];
    const auto da = derivative_of(traj.states[i], q);
    const auto db = derivative_of(traj.states[i + 1], q);
    std::array<Hermite, 4> H;
    for (std::size_t k = 0; k < 4; ++k) H[k] = Hermite{a[k], da[k], b[k], db[k], h};

    double lo = 0.0, hi = 1.0, tau = 1.0;
    for (int it = 0; it < 200; ++it) {
      tau = 0.5 * (lo + hi);
      const double v = (H[c](tau) - level) * direction;
      if (std::abs(v) < 0.1 * kSectionTolerance) break;
      (v < 0.0 ? lo : hi) = tau;
      if (hi - lo < 1e-17) break;
    }
    std::array<double, 4> s;
    for (std::size_t k = 0; k < 4; ++k) s[k] = H[k](tau);
    out.push_back({traj.times[i] + tau * h, State::from_array(s)});
  }
  return out;
}

SectionMap poincare(const Trajectory& traj) {
  SectionMap map;
  double xmax = 0.0;
  for (const State& s : traj.states) xmax = std::max(xmax, std::abs(s.x));
  if (xmax < 1e-12) {
    map.status = SectionStatus::NonTransversal;
    return map;
  }
  map.crossings = section_crossings(traj, 0, 0.0, +1);
  if (map.crossings.size() < 2) map.status = SectionStatus::TooFewCrossings;
  return map;
}

double max_nearest_neighbor_gap(const std::vector<SectionPoint>& pts) {
  if (pts.size() < 2) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      const double d = std::sqrt(std::pow(pts[i].state.w - pts[j].state.w, 2) +
                                 std::pow(pts[i].state.y - pts[j].state.y, 2) +
                                 std::pow(pts[i].state.z - pts[j].state.z, 2));
      best = std::min(best, d);
    }
    worst = std::max(worst, best);
  }
  return worst;
}

// --- embedding ---------------------------------------------------------------

std::string_view to_string(Embedding e) { return e == Embedding::Verbatim ? "verbatim" : "corrected"; }

Embedding embedding_from_string(std::string_view s) {
  if (s == "verbatim") return Embedding::Verbatim;
  if (s == "corrected") return Embedding::Corrected;
  throw DomainError("unknown embedding '" + std::string(s) + "' (expected verbatim or corrected)");
}

std::vector<std::array<double, 3>> torus_embed(const Trajectory& traj, Embedding variant) {
  std::vector<std::array<double, 3>> out;
  out.reserve(traj.states.size());
  for (const State& s : traj.states) {
    const double r = std::hypot(s.y, s.z);
    if (!(r > 0.0)) throw DomainError("torus_embed: y = z = 0 has no embedding direction");
    const double second = variant == Embedding::Verbatim ? s.y : s.z;
    out.push_back({s.y + s.x * s.y / r, s.z + s.x * second / r, s.w});
  }
  return out;
}

// --- initial conditions and sweeps ---------------------------------------------

Equilibrium stable_center(const Params& params) {
  const auto [e0, e1] = classify(params);
  if (e0.stability == Stability::Center) return e0;
  if (e1.stability == Stability::Center) return e1;
  throw DomainError("no Lyapunov-stable equilibrium at alpha0 = " + fmt17(params.alpha0()));
}

State initial_condition(const Params& params, double radius, double phi) {
  if (!(radius > 0.0)) throw DomainError("initial_condition: radius must be positive");
  const double yc = stable_center(params).y_eq;
  return State(radius * std::sin(phi), 0.0, yc + radius * std::cos(phi), 0.0);
}

double rocking_phi(const ManifoldSeries& series, double radius) {
  const auto gap = [&](double phi) {
    return radius * std::cos(phi) - (series.g(radius * std::sin(phi), 0.0) - series.y_center);
  };
  return bracketed_root(gap, 0.1, kPi - 0.1);
}

double manifold_deviation(const ManifoldSeries& series, const Trajectory& traj) {
  double dev = 0.0;
  for (const State& s : traj.states) dev = std::max(dev, std::abs(s.y - series.g(s.x, s.w)));
  return dev;
}

SweepResult sweep(const Params& params, double radius, const std::vector<double>& phi_list, double dt, double t_end,
                  const SweepOptions& opt) {
  const Equilibrium center = stable_center(params);
  SweepResult res{params.alpha0(), radius, center.branch, center.y_eq, std::nullopt, {}, {}};
  try {
    SeriesOptions so;
    so.order = opt.series_order;
    so.branch = center.branch;
    res.series = rocking_series(params, so);
  } catch (const NumericalError& e) {
    res.rocking_note = std::string("no differentiable rocking manifold: ") + e.what();
  }

  const auto run_one = [&](double phi) {
    SweepEntry entry{phi, std::nullopt, EscapeClass::Bounded, 0, std::numeric_limits<double>::quiet_NaN(), {}};
    try {
      const State s0(radius * std::sin(phi), 0.0, center.y_eq + radius * std::cos(phi), 0.0);
      Trajectory tr = integrate(s0, params, dt, t_end, opt.integrate);
      entry.escape = escape_detect(tr, params, opt.escape);
      entry.section_count = poincare(tr).crossings.size();
      if (res.series) entry.max_manifold_dev = manifold_deviation(*res.series, tr);
      if (opt.keep_trajectories) entry.trajectory = std::move(tr);
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    return entry;
  };

  std::vector<std::future<SweepEntry>> jobs;
  jobs.reserve(phi_list.size());
  for (double phi : phi_list) jobs.push_back(std::async(std::launch::async, run_one, phi));
  for (auto& j : jobs) res.entries.push_back(j.get());
  return res;
}

// --- output ------------------------------------------------------------------

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,x,w,y,z\n";
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const State& s = traj.states[i];
    os << fmt17(traj.times[i]) << ',' << fmt17(s.x) << ',' << fmt17(s.w) << ',' << fmt17(s.y) << ',' << fmt17(s.z)
       << '\n';
  }
}

void write_section_csv(std::ostream& os, const SectionMap& map) {
  os << "n,w,y,z\n";
  for (std::size_t i = 0; i < map.crossings.size(); ++i) {
    const State& s = map.crossings[i].state;
    os << i << ',' << fmt17(s.w) << ',' << fmt17(s.y) << ',' << fmt17(s.z) << '\n';
  }
}

void write_embedding_csv(std::ostream& os, const std::vector<std::array<double, 3>>& pts) {
  os << "e1,e2,e3\n";
  for (const auto& p : pts) os << fmt17(p[0]) << ',' << fmt17(p[1]) << ',' << fmt17(p[2]) << '\n';
}

void write_sweep_summary_csv(std::ostream& os, const SweepResult& result) {
  os << "phi,bounded,max_manifold_dev,section_count\n";
  for (const auto& e : result.entries)
    os << fmt17(e.phi) << ',' << (e.error.empty() && e.escape == EscapeClass::Bounded ? "true" : "false") << ','
       << fmt17(e.max_manifold_dev) << ',' << e.section_count << '\n';
}

Trajectory to_dimensional(const Trajectory& traj, const PhysicalScales& scales) {
  const double L = scales.length();
  const double T = scales.time();
  Trajectory out;
  out.meta = traj.meta;
  out.meta.dt = traj.meta.dt * T;
  out.times.reserve(traj.times.size());
  out.states.reserve(traj.states.size());
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const State& s = traj.states[i];
    out.times.push_back(traj.times[i] * T);
    out.states.emplace_back(s.x * L, s.w * L / T, s.y * L, s.z * L / T);
  }
  for (const auto& e : traj.events) out.events.push_back({e.t * T, e.kind, e.detail});
  return out;
}

}  // namespace steiner
