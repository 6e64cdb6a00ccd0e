// steiner: command-line front end. Every subcommand writes its outputs plus a
// resolved config.json into --out; rerunning with --config <out>/config.json
// reproduces the outputs byte for byte.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "json_config.hpp"
#include "steiner/csv.hpp"
#include "steiner/dynamics.hpp"
#include "steiner/equilibria.hpp"
#include "steiner/manifolds.hpp"
#include "steiner/model.hpp"
#include "steiner/sessile.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace steiner;

namespace {

constexpr int kExitDomain = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitOther = 1;

// Within this distance of alpha0* the two equilibria are hard to tell apart.
constexpr double kNearCriticalWarning = 1e-3;

double to_radians(double v, bool degrees) { return degrees ? v * kPi / 180.0 : v; }

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  std::ofstream os(dir / name);
  if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
  return os;
}

void write_json(const fs::path& dir, const std::string& name, const json& j) {
  auto os = open_out(dir, name);
  os << j.dump(2) << '\n';
}

fs::path prepare_dir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

void write_snapshot(const fs::path& dir, const std::string& sub, const json& cfg) {
  json j;
  j["degrees"] = false;
  j[sub] = cfg;
  write_json(dir, "config.json", j);
}

json state_json(const State& s) { return json{{"x", s.x}, {"w", s.w}, {"y", s.y}, {"z", s.z}}; }

json events_json(const Trajectory& tr) {
  json arr = json::array();
  for (const auto& e : tr.events) arr.push_back({{"t", e.t}, {"kind", to_string(e.kind)}, {"detail", e.detail}});
  return arr;
}

// --- equilibria -------------------------------------------------------------------

struct EquilibriaCfg {
  double alpha0 = 0.0;
  std::string out;
};

json equilibrium_json(const Equilibrium& e) {
  const EigenSet ev = eigenvalues(e.y_eq);
  json lam = json::array();
  for (const auto& l : {ev.lambda12.first, ev.lambda12.second, ev.lambda34.first, ev.lambda34.second})
    lam.push_back({l.real(), l.imag()});
  return {{"branch", to_string(e.branch)}, {"y", e.y_eq},      {"contact_angle", e.contact_angle},
          {"stability", to_string(e.stability)}, {"fx", ev.fx}, {"hy", ev.hy}, {"eigenvalues", lam}};
}

int run_equilibria(const EquilibriaCfg& cfg) {
  const Params params(cfg.alpha0);
  const double astar = critical_alpha_star();
  const auto [e0, e1] = classify(params);
  std::printf("alpha0 = %s  q = %s  alpha0* = %s\n", fmt17(cfg.alpha0).c_str(), fmt17(params.q()).c_str(),
              fmt17(astar).c_str());
  std::printf("%-10s %-24s %-12s %-24s %-24s\n", "branch", "y", "stability", "fx", "hy");
  json arr = json::array();
  for (const Equilibrium& e : {e0, e1}) {
    const EigenSet ev = eigenvalues(e.y_eq);
    std::printf("%-10s %-24s %-12s %-24s %-24s\n", std::string(to_string(e.branch)).c_str(), fmt17(e.y_eq).c_str(),
                std::string(to_string(e.stability)).c_str(), fmt17(ev.fx).c_str(), fmt17(ev.hy).c_str());
    arr.push_back(equilibrium_json(e));
  }
  if (std::abs(cfg.alpha0 - astar) < kNearCriticalWarning)
    std::fprintf(stderr, "warning: alpha0 is within %g of alpha0* = %.12g; the equilibria are nearly degenerate\n",
                 kNearCriticalWarning, astar);
  if (!cfg.out.empty()) {
    const fs::path dir = prepare_dir(cfg.out);
    write_json(dir, "equilibria.json",
               {{"alpha0", cfg.alpha0}, {"q", params.q()}, {"alpha_star", astar}, {"equilibria", arr}});
    write_snapshot(dir, "equilibria", {{"alpha0", cfg.alpha0}});
  }
  return 0;
}

// --- bifurcation ------------------------------------------------------------------

struct BifurcationCfg {
  double alpha_min = 0.1;
  double alpha_max = 1.55;
  int n = 200;
  std::string out;
};

int run_bifurcation(const BifurcationCfg& cfg) {
  if (cfg.n < 2) throw DomainError("bifurcation: --n must be at least 2");
  if (!(cfg.alpha_min < cfg.alpha_max)) throw DomainError("bifurcation: need alpha-min < alpha-max");
  std::vector<double> grid(static_cast<std::size_t>(cfg.n));
  for (int i = 0; i < cfg.n; ++i) grid[i] = cfg.alpha_min + (cfg.alpha_max - cfg.alpha_min) * i / (cfg.n - 1);
  const auto rows = bifurcation_scan(grid);
  const fs::path dir = prepare_dir(cfg.out);
  {
    auto os = open_out(dir, "bifurcation.csv");
    write_bifurcation_csv(os, rows);
  }
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.root_failed ? 1 : 0;
  std::printf("%zu rows written to %s (%zu without a separable secondary root)\n", rows.size(),
              (dir / "bifurcation.csv").string().c_str(), failed);
  write_snapshot(dir, "bifurcation", {{"alpha-min", cfg.alpha_min}, {"alpha-max", cfg.alpha_max}, {"n", cfg.n}});
  return 0;
}

// --- manifold ---------------------------------------------------------------------

struct ManifoldCfg {
  double alpha0 = 0.0;
  int order = 4;
  std::string branch = "primary";
  std::string parity = "even";
  std::string out;
};

int run_manifold(const ManifoldCfg& cfg) {
  const Params params(cfg.alpha0);
  SeriesOptions so;
  so.order = cfg.order;
  so.branch = branch_from_string(cfg.branch);
  if (cfg.parity == "even")
    so.parity = Parity::Even;
  else if (cfg.parity == "unconstrained")
    so.parity = Parity::Unconstrained;
  else
    throw DomainError("manifold: --parity must be even or unconstrained");

  json report;
  report["singular_alphas"] = {{"order2", singular_alphas(2)}, {"order4", singular_alphas(4)}};
  std::optional<fs::path> dir;
  if (!cfg.out.empty()) {
    dir = prepare_dir(cfg.out);
    write_snapshot(*dir, "manifold",
                   {{"alpha0", cfg.alpha0}, {"order", cfg.order}, {"branch", cfg.branch}, {"parity", cfg.parity}});
  }
  try {
    const ManifoldSeries s = rocking_series(params, so);
    report["status"] = "ok";
    report["condition"] = s.condition;
    if (dir) {
      std::printf("alpha0 = %s  branch = %s  y_center = %s\n", fmt17(s.alpha0).c_str(),
                  std::string(to_string(s.branch)).c_str(), fmt17(s.y_center).c_str());
      for (int d = 1; d <= s.order; ++d)
        for (int j = 0; j <= d; ++j) {
          const double c = s.coefficient(d - j, j);
          if (c != 0.0) std::printf("  x^%d w^%d  %s\n", d - j, j, fmt17(c).c_str());
        }
      auto os = open_out(*dir, "series.json");
      write_series_json(os, s);
    } else {
      write_series_json(std::cout, s);
    }
  } catch (const SingularSeriesError& e) {
    report["status"] = "singular";
    report["message"] = e.what();
    report["order"] = e.order();
    report["alpha_singular"] = e.alpha_singular();
    if (dir) write_json(*dir, "singularity.json", report);
    throw;
  }
  if (dir) write_json(*dir, "singularity.json", report);
  return 0;
}

// --- simulate ---------------------------------------------------------------------

struct SimulateCfg {
  double alpha0 = 0.0;
  std::string recipe = "custom";
  std::vector<double> state;
  std::vector<double> on_manifold;
  std::optional<double> phi;
  double radius = 0.05;
  double dt = 1e-3;
  double t_end = 500.0;
  std::string scheme = "symmetric";
  std::string embedding = "verbatim";
  int output_stride = 1;
  std::string out;
};

void write_trajectory_outputs(const fs::path& dir, const Trajectory& tr, Embedding emb, int stride,
                              const SectionMap& map) {
  Trajectory thinned;
  const Trajectory* to_write = &tr;
  if (stride > 1) {
    thinned.meta = tr.meta;
    for (std::size_t i = 0; i < tr.states.size(); ++i)
      if (i % static_cast<std::size_t>(stride) == 0 || i + 1 == tr.states.size()) {
        thinned.times.push_back(tr.times[i]);
        thinned.states.push_back(tr.states[i]);
      }
    to_write = &thinned;
  }
  {
    auto os = open_out(dir, "trajectory.csv");
    write_trajectory_csv(os, *to_write);
  }
  {
    auto os = open_out(dir, "section.csv");
    write_section_csv(os, map);
  }
  {
    auto os = open_out(dir, "embedding-" + std::string(to_string(emb)) + ".csv");
    write_embedding_csv(os, torus_embed(*to_write, emb));
  }
}

json section_json(const SectionMap& map) {
  return {{"status", to_string(map.status)},
          {"crossings", map.crossings.size()},
          {"max_nearest_neighbor_gap", map.crossings.size() >= 2 ? max_nearest_neighbor_gap(map.crossings) : 0.0}};
}

int run_simulate(SimulateCfg cfg) {
  const Params params(cfg.alpha0);
  const Embedding emb = embedding_from_string(cfg.embedding);
  IntegrateOptions io;
  io.scheme = scheme_from_string(cfg.scheme);
  if (cfg.output_stride < 1) throw DomainError("simulate: --output-stride must be at least 1");

  const int given = (cfg.state.empty() ? 0 : 1) + (cfg.on_manifold.empty() ? 0 : 1) + (cfg.phi ? 1 : 0) +
                    (cfg.recipe == "custom" ? 0 : 1);
  if (given != 1)
    throw DomainError("simulate: give exactly one of --recipe, --state, --phi, --on-manifold");

  std::string ic_note;
  std::optional<State> s0;
  if (cfg.recipe == "bouncing") {
    cfg.phi = 0.0;
  } else if (cfg.recipe == "rocking") {
    SeriesOptions so;
    so.branch = stable_center(params).branch;
    cfg.phi = rocking_phi(rocking_series(params, so), cfg.radius);
  } else if (cfg.recipe == "escape") {
    const double yc = stable_center(params).y_eq;
    cfg.state = {0.0, 0.0, 0.25 * yc, 0.0};
  } else if (cfg.recipe != "custom") {
    throw DomainError("simulate: unknown recipe '" + cfg.recipe + "' (bouncing, rocking, escape)");
  }

  if (cfg.phi) {
    s0 = initial_condition(params, cfg.radius, *cfg.phi);
    ic_note = "position-only perturbation of the stable center, w = z = 0";
  } else if (!cfg.state.empty()) {
    if (cfg.state.size() != 4) throw DomainError("simulate: --state needs four values x w y z");
    s0 = State(cfg.state[0], cfg.state[1], cfg.state[2], cfg.state[3]);
    ic_note = "explicit state";
  } else if (!cfg.on_manifold.empty()) {
    if (cfg.on_manifold.size() != 2) throw DomainError("simulate: --on-manifold needs two values x w");
    SeriesOptions so;
    so.branch = stable_center(params).branch;
    const ManifoldSeries series = rocking_series(params, so);
    s0 = on_manifold_state(series, params, cfg.on_manifold[0], cfg.on_manifold[1]);
    ic_note = "on the quartic rocking surface, z from the chain rule";
  }

  const Trajectory tr = integrate(*s0, params, cfg.dt, cfg.t_end, io);
  const SectionMap map = poincare(tr);
  const EscapeClass esc = escape_detect(tr, params);
  json dev = nullptr;
  try {
    SeriesOptions so;
    so.branch = stable_center(params).branch;
    dev = manifold_deviation(rocking_series(params, so), tr);
  } catch (const std::exception&) {
    // no center or no series at this alpha0: leave the field null
  }

  const fs::path dir = prepare_dir(cfg.out);
  write_trajectory_outputs(dir, tr, emb, cfg.output_stride, map);

  json cfg_json{{"alpha0", cfg.alpha0}, {"recipe", "custom"}, {"radius", cfg.radius}};
  if (cfg.phi)
    cfg_json["phi"] = *cfg.phi;
  else if (!cfg.state.empty())
    cfg_json["state"] = cfg.state;
  else
    cfg_json["on-manifold"] = cfg.on_manifold;
  cfg_json.update({{"dt", cfg.dt},
                   {"t-end", cfg.t_end},
                   {"scheme", cfg.scheme},
                   {"embedding", cfg.embedding},
                   {"output-stride", cfg.output_stride}});
  write_snapshot(dir, "simulate", cfg_json);

  write_json(dir, "summary.json",
             {{"alpha0", cfg.alpha0},
              {"initial_state", state_json(*s0)},
              {"initial_condition", ic_note},
              {"scheme", to_string(io.scheme)},
              {"dt", cfg.dt},
              {"t_end", cfg.t_end},
              {"t_last", tr.times.back()},
              {"escape", to_string(esc)},
              {"max_manifold_dev", dev},
              {"events", events_json(tr)},
              {"section", section_json(map)},
              {"embedding", to_string(emb)}});
  std::printf("%s: %zu samples to t = %s, %s, %zu section crossings\n", dir.string().c_str(), tr.states.size(),
              fmt17(tr.times.back()).c_str(), std::string(to_string(esc)).c_str(), map.crossings.size());
  return 0;
}

// --- sweep ------------------------------------------------------------------------

struct Preset {
  std::string name;
  std::string description;
  double alpha0;
};

std::vector<Preset> presets() {
  return {{"quarter-pi", "alpha0 = pi/4", kPi / 4.0},
          {"alpha-dagger", "alpha0 at the first quadratic-order singularity (about 0.870)", singular_alphas(2).front()},
          {"two-fifths-pi", "alpha0 = 2 pi/5", 2.0 * kPi / 5.0},
          {"post-critical", "alpha0 = 1.45, above alpha0*", 1.45}};
}

struct SweepCfg {
  std::string preset;
  std::optional<double> alpha0;
  std::vector<double> phi;
  double radius = 0.05;
  double dt = 1e-3;
  double t_end = 500.0;
  std::string scheme = "symmetric";
  std::string embedding = "verbatim";
  int output_stride = 1;
  bool list_presets = false;
  std::string out;
};

int run_sweep(SweepCfg cfg) {
  if (cfg.list_presets) {
    for (const Preset& p : presets()) std::printf("%-14s %-24s %s\n", p.name.c_str(), fmt17(p.alpha0).c_str(), p.description.c_str());
    return 0;
  }
  if (cfg.out.empty()) throw DomainError("sweep: --out is required");
  if (cfg.preset.empty() == !cfg.alpha0) throw DomainError("sweep: give exactly one of --preset or --alpha0");
  if (!cfg.preset.empty()) {
    bool found = false;
    for (const Preset& p : presets())
      if (p.name == cfg.preset) {
        cfg.alpha0 = p.alpha0;
        found = true;
      }
    if (!found) throw DomainError("sweep: unknown preset '" + cfg.preset + "'");
  }
  const Params params(*cfg.alpha0);
  const Embedding emb = embedding_from_string(cfg.embedding);

  if (cfg.phi.empty()) {
    std::optional<double> phi_rock;
    try {
      SeriesOptions so;
      so.branch = stable_center(params).branch;
      phi_rock = rocking_phi(rocking_series(params, so), cfg.radius);
    } catch (const NumericalError&) {
    }
    if (phi_rock)
      cfg.phi = {0.0, 0.1, kPi / 4.0, *phi_rock - 0.1, *phi_rock};
    else
      cfg.phi = {0.0, 0.1, kPi / 4.0, kPi / 2.0};
  }

  SweepOptions so;
  so.integrate.scheme = scheme_from_string(cfg.scheme);
  if (cfg.output_stride < 1) throw DomainError("sweep: --output-stride must be at least 1");
  const SweepResult res = sweep(params, cfg.radius, cfg.phi, cfg.dt, cfg.t_end, so);

  const fs::path dir = prepare_dir(cfg.out);
  {
    auto os = open_out(dir, "summary.csv");
    write_sweep_summary_csv(os, res);
  }
  json entries = json::array();
  for (std::size_t k = 0; k < res.entries.size(); ++k) {
    const SweepEntry& e = res.entries[k];
    char name[32];
    std::snprintf(name, sizeof name, "phi-%02zu", k);
    json ej{{"phi", e.phi}, {"dir", name}, {"escape", to_string(e.escape)}, {"section_count", e.section_count}};
    if (!e.error.empty()) ej["error"] = e.error;
    if (e.trajectory) {
      const fs::path sub = prepare_dir((dir / name).string());
      const SectionMap map = poincare(*e.trajectory);
      write_trajectory_outputs(sub, *e.trajectory, emb, cfg.output_stride, map);
      ej["section"] = section_json(map);
      ej["events"] = events_json(*e.trajectory);
    }
    entries.push_back(ej);
  }
  json meta{{"alpha0", res.alpha0},
            {"radius", res.radius},
            {"center_branch", to_string(res.center_branch)},
            {"y_center", res.y_center},
            {"perturbation", "position-only: (x, y) = (r sin phi, y_c + r cos phi), w = z = 0"},
            {"embedding", to_string(emb)},
            {"scheme", cfg.scheme},
            {"dt", cfg.dt},
            {"t_end", cfg.t_end}};
  if (res.series)
    meta["rocking_series_order"] = res.series->order;
  else
    meta["rocking_note"] = res.rocking_note;
  meta["entries"] = entries;
  write_json(dir, "sweep.json", meta);

  write_snapshot(dir, "sweep",
                 {{"alpha0", *cfg.alpha0},
                  {"phi", cfg.phi},
                  {"radius", cfg.radius},
                  {"dt", cfg.dt},
                  {"t-end", cfg.t_end},
                  {"scheme", cfg.scheme},
                  {"embedding", cfg.embedding},
                  {"output-stride", cfg.output_stride}});

  std::printf("alpha0 = %s, %zu trajectories around the %s center\n", fmt17(res.alpha0).c_str(), res.entries.size(),
              std::string(to_string(res.center_branch)).c_str());
  if (!res.series) std::printf("%s\n", res.rocking_note.c_str());
  for (const auto& e : res.entries)
    std::printf("  phi = %-22s %-18s crossings %zu%s\n", fmt17(e.phi).c_str(), std::string(to_string(e.escape)).c_str(),
                e.section_count, e.error.empty() ? "" : ("  error: " + e.error).c_str());
  return 0;
}

// --- sessile ----------------------------------------------------------------------

struct SessileCfg {
  double alpha = 0.0;
  int l = 0;
  int k = 0;
  double epsilon = 0.01;
  double omega = 1.0;
  std::string xi = "cos1";
  std::string xi_csv;
  std::optional<double> t_end;
  int n = 201;
  bool oracle = false;
  std::string out;
};

int run_sessile(const SessileCfg& cfg) {
  CapMode mode;
  mode.alpha = cfg.alpha;
  mode.l = cfg.l;
  mode.k = cfg.k;
  mode.epsilon = cfg.epsilon;
  mode.Omega = cfg.omega;
  if (!cfg.xi_csv.empty()) {
    mode.xi = profile_from_csv(cfg.xi_csv, cfg.alpha);
    mode.xi_label = "csv:" + cfg.xi_csv;
  } else {
    mode.xi = builtin_profile(cfg.xi, cfg.alpha);
    mode.xi_label = cfg.xi;
  }
  for (const auto& w : validate(mode)) std::fprintf(stderr, "warning: %s\n", w.c_str());
  if (cfg.n < 1) throw DomainError("sessile: --n must be positive");

  const double t_end = cfg.t_end ? *cfg.t_end : (cfg.omega != 0.0 ? 2.0 * kPi / std::abs(cfg.omega) : 1.0);
  std::vector<double> times(static_cast<std::size_t>(cfg.n));
  for (int i = 0; i < cfg.n; ++i) times[i] = cfg.n == 1 ? 0.0 : t_end * i / (cfg.n - 1);

  const ComTrace trace = com_trace(mode, times);
  const FirstOrderTerms f = first_order_terms(mode);
  const fs::path dir = prepare_dir(cfg.out);
  {
    auto os = open_out(dir, "com_trace.csv");
    write_com_trace_csv(os, trace);
  }
  if (cfg.oracle) {
    auto os = open_out(dir, "oracle.csv");
    os << "t,M,Mx,My,Mz,error\n";
    for (double t : times) {
      const Moments m = com_oracle_3d(mode, t);
      os << fmt17(t) << ',' << fmt17(m.M) << ',' << fmt17(m.Mx) << ',' << fmt17(m.My) << ',' << fmt17(m.Mz) << ','
         << fmt17(m.error) << '\n';
    }
  }
  write_json(dir, "summary.json",
             {{"alpha", cfg.alpha},
              {"l", cfg.l},
              {"k", cfg.k},
              {"epsilon", cfg.epsilon},
              {"Omega", cfg.omega},
              {"xi", mode.xi_label},
              {"class", to_string(trace.classification)},
              {"M0", unperturbed_volume(cfg.alpha)},
              {"first_order", {{"volume", f.volume}, {"Mx", f.mx}, {"Mz", f.mz}}}});
  json cfg_json{{"alpha", cfg.alpha}, {"l", cfg.l}, {"k", cfg.k}, {"epsilon", cfg.epsilon}, {"Omega", cfg.omega}};
  if (!cfg.xi_csv.empty())
    cfg_json["xi-csv"] = cfg.xi_csv;
  else
    cfg_json["xi"] = cfg.xi;
  cfg_json.update({{"t-end", t_end}, {"n", cfg.n}, {"oracle", cfg.oracle}});
  write_snapshot(dir, "sessile", cfg_json);
  std::printf("class=%s  first-order terms: volume %s  Mx %s  Mz %s\n",
              std::string(to_string(trace.classification)).c_str(), fmt17(f.volume).c_str(), fmt17(f.mx).c_str(),
              fmt17(f.mz).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steiner triangular drop: equilibria, invariant manifolds, trajectories and sessile-cap modes"};
  app.config_formatter(std::make_shared<steiner_cli::JsonConfig>());
  app.set_config("--config", "", "JSON run configuration; command-line flags override it");
  bool degrees = false;
  app.add_flag("--degrees", degrees, "Angles given in degrees instead of radians");
  app.require_subcommand(1);
  app.fallthrough();

  EquilibriaCfg eq;
  auto* c_eq = app.add_subcommand("equilibria", "Both equilibria, eigenvalues and stability");
  c_eq->add_option("--alpha0", eq.alpha0, "Rest contact angle")->required();
  c_eq->add_option("--out", eq.out, "Output directory (optional)");

  BifurcationCfg bif;
  auto* c_bif = app.add_subcommand("bifurcation", "Equilibria and stability over an alpha0 grid");
  c_bif->add_option("--alpha-min", bif.alpha_min, "Grid start")->capture_default_str();
  c_bif->add_option("--alpha-max", bif.alpha_max, "Grid end")->capture_default_str();
  c_bif->add_option("--n", bif.n, "Number of grid points")->capture_default_str();
  c_bif->add_option("--out", bif.out, "Output directory")->required();

  ManifoldCfg man;
  auto* c_man = app.add_subcommand("manifold", "Rocking-manifold power series and singularity report");
  c_man->add_option("--alpha0", man.alpha0, "Rest contact angle")->required();
  c_man->add_option("--order", man.order, "Series order")->capture_default_str();
  c_man->add_option("--branch", man.branch, "primary or secondary")->capture_default_str();
  c_man->add_option("--parity", man.parity, "even or unconstrained")->capture_default_str();
  c_man->add_option("--out", man.out, "Output directory (optional; JSON goes to stdout without it)");

  SimulateCfg sim;
  double sim_phi = 0.0;
  auto* c_sim = app.add_subcommand("simulate", "Integrate one trajectory");
  c_sim->add_option("--alpha0", sim.alpha0, "Rest contact angle")->required();
  c_sim->add_option("--recipe", sim.recipe, "bouncing, rocking, escape or custom")->capture_default_str();
  c_sim->add_option("--state", sim.state, "Initial state x w y z")->expected(4);
  auto* o_phi = c_sim->add_option("--phi", sim_phi, "Perturbation angle around the stable center");
  c_sim->add_option("--on-manifold", sim.on_manifold, "Start on the rocking surface at x w")->expected(2);
  c_sim->add_option("--radius", sim.radius, "Perturbation radius")->capture_default_str();
  c_sim->add_option("--dt", sim.dt, "Step size")->capture_default_str();
  c_sim->add_option("--t-end", sim.t_end, "Final time")->capture_default_str();
  c_sim->add_option("--scheme", sim.scheme, "symmetric or rk-adaptive")->capture_default_str();
  c_sim->add_option("--embedding", sim.embedding, "verbatim or corrected")->capture_default_str();
  c_sim->add_option("--output-stride", sim.output_stride, "Write every n-th trajectory sample")->capture_default_str();
  c_sim->add_option("--out", sim.out, "Output directory")->required();

  SweepCfg sw;
  double sw_alpha0 = 0.0;
  auto* c_sw = app.add_subcommand("sweep", "Trajectories over a list of perturbation angles");
  c_sw->add_option("--preset", sw.preset, "quarter-pi, alpha-dagger, two-fifths-pi or post-critical");
  auto* o_sw_alpha = c_sw->add_option("--alpha0", sw_alpha0, "Rest contact angle (instead of a preset)");
  c_sw->add_option("--phi", sw.phi, "Perturbation angles");
  c_sw->add_option("--radius", sw.radius, "Perturbation radius")->capture_default_str();
  c_sw->add_option("--dt", sw.dt, "Step size")->capture_default_str();
  c_sw->add_option("--t-end", sw.t_end, "Final time")->capture_default_str();
  c_sw->add_option("--scheme", sw.scheme, "symmetric or rk-adaptive")->capture_default_str();
  c_sw->add_option("--embedding", sw.embedding, "verbatim or corrected")->capture_default_str();
  c_sw->add_option("--output-stride", sw.output_stride, "Write every n-th trajectory sample")->capture_default_str();
  c_sw->add_flag("--list-presets", sw.list_presets, "Print the presets and exit");
  c_sw->add_option("--out", sw.out, "Output directory");

  SessileCfg ses;
  double ses_t_end = 0.0;
  auto* c_ses = app.add_subcommand("sessile", "Center-of-mass trace of a spherical-cap mode");
  c_ses->add_option("--alpha", ses.alpha, "Cap contact angle")->required();
  c_ses->add_option("--l", ses.l, "Azimuthal wavenumber")->capture_default_str();
  c_ses->add_option("--k", ses.k, "Polar wavenumber (label)")->capture_default_str();
  c_ses->add_option("--epsilon", ses.epsilon, "Perturbation amplitude")->capture_default_str();
  c_ses->add_option("--Omega", ses.omega, "Angular frequency")->capture_default_str();
  c_ses->add_option("--xi", ses.xi, "Built-in mode shape: constant, cos1, cos2, bump, poly")->capture_default_str();
  c_ses->add_option("--xi-csv", ses.xi_csv, "Mode shape samples, CSV with columns s,xi");
  auto* o_ses_t = c_ses->add_option("--t-end", ses_t_end, "Trace length (default one period)");
  c_ses->add_option("--n", ses.n, "Number of trace samples")->capture_default_str();
  c_ses->add_flag("--oracle", ses.oracle, "Also write the direct 3D quadrature moments");
  c_ses->add_option("--out", ses.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitDomain;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDomain;
  }

  try {
    if (c_eq->parsed()) {
      eq.alpha0 = to_radians(eq.alpha0, degrees);
      return run_equilibria(eq);
    }
    if (c_bif->parsed()) {
      bif.alpha_min = to_radians(bif.alpha_min, degrees);
      bif.alpha_max = to_radians(bif.alpha_max, degrees);
      return run_bifurcation(bif);
    }
    if (c_man->parsed()) {
      man.alpha0 = to_radians(man.alpha0, degrees);
      return run_manifold(man);
    }
    if (c_sim->parsed()) {
      sim.alpha0 = to_radians(sim.alpha0, degrees);
      if (o_phi->count() > 0) sim.phi = to_radians(sim_phi, degrees);
      return run_simulate(sim);
    }
    if (c_sw->parsed()) {
      if (o_sw_alpha->count() > 0) sw.alpha0 = to_radians(sw_alpha0, degrees);
      for (double& p : sw.phi) p = to_radians(p, degrees);
      return run_sweep(sw);
    }
    if (c_ses->parsed()) {
      ses.alpha = to_radians(ses.alpha, degrees);
      if (o_ses_t->count() > 0) ses.t_end = ses_t_end;
      return run_sessile(ses);
    }
  } catch (const DomainError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return kExitDomain;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitOther;
  }
  return kExitOther;
}
