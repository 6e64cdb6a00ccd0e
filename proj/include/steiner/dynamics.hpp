#pragma once

// Time integration of the 4D drop system, escape classification, Poincare
// sections at x = 0, the 3D torus embedding and initial-condition sweeps.

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "steiner/equilibria.hpp"
#include "steiner/manifolds.hpp"
#include "steiner/model.hpp"
#include "steiner/ode.hpp"

namespace steiner {

enum class Scheme {
  Symmetric,   ///< drift-kick-drift leapfrog; time-symmetric, second order
  RkAdaptive,  ///< Dormand-Prince 5(4), sampled on the dt grid; cross-check only
};

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view s);

enum class EventKind { Escape, SectionCrossing, DomainExit, StepFailure };
std::string_view to_string(EventKind k);

struct TrajectoryEvent {
  double t;
  EventKind kind;
  std::string detail;
};

struct TrajectoryMeta {
  Scheme scheme = Scheme::Symmetric;
  double dt = 0.0;
  double alpha0 = 0.0;
};

/// Samples at strictly increasing times; states[i] is the state at times[i].
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<TrajectoryEvent> events;
  TrajectoryMeta meta;

  bool left_domain() const;
};

struct IntegrateOptions {
  Scheme scheme = Scheme::Symmetric;
  DomainGuard guard;
  AdaptiveOptions adaptive;
  int stride = 1;  ///< record every stride-th step
};

/// Integrates from t = 0 to t_end with step dt. Stops early (with an event)
/// when y leaves the guard window or an acceleration is not finite.
Trajectory integrate(const State& s0, const Params& params, double dt, double t_end, const IntegrateOptions& opt = {});

/// One drift-kick-drift step of the symmetric scheme (no guard checks).
State symmetric_step(const State& s, double q, double dt);

// --- escape ------------------------------------------------------------------

enum class EscapeClass { Bounded, EscapedFlat, EscapedStretched };
std::string_view to_string(EscapeClass c);

struct EscapeOptions {
  double y_flat = 0.02;
  double y_tall = 10.0;
  double confirm_time = 10.0;  ///< extra integration used to confirm divergence
};

EscapeClass escape_detect(const Trajectory& traj, const Params& params, const EscapeOptions& opt = {});

// --- sections ----------------------------------------------------------------

/// A crossing of the section; `state` is interpolated to the crossing time.
struct SectionPoint {
  double t;
  State state;
};

enum class SectionStatus { Ok, NonTransversal, TooFewCrossings };
std::string_view to_string(SectionStatus s);

struct SectionMap {
  std::vector<SectionPoint> crossings;
  SectionStatus status = SectionStatus::Ok;
};

inline constexpr double kSectionTolerance = 1e-10;

/// Crossings of component `component` (0..3 for x, w, y, z) through `level`
/// in direction `direction` (+1 increasing, -1 decreasing), refined by
/// bisection on the cubic Hermite interpolant of the stored samples.
std::vector<SectionPoint> section_crossings(const Trajectory& traj, int component, double level, int direction);

/// Crossings of x = 0 with dx/dt > 0.
SectionMap poincare(const Trajectory& traj);

/// Largest nearest-neighbour distance among the section points in (w, y, z).
/// Decreases as the points fill an invariant curve.
double max_nearest_neighbor_gap(const std::vector<SectionPoint>& pts);

// --- embedding ---------------------------------------------------------------

enum class Embedding {
  Verbatim,   ///< [y + x y / r, z + x y / r, w], r = sqrt(y^2 + z^2)
  Corrected,  ///< [y + x y / r, z + x z / r, w]
};
std::string_view to_string(Embedding e);
Embedding embedding_from_string(std::string_view s);

std::vector<std::array<double, 3>> torus_embed(const Trajectory& traj, Embedding variant = Embedding::Verbatim);

// --- initial conditions and sweeps ---------------------------------------------

/// The Lyapunov-stable equilibrium at alpha0 (primary below alpha0*, secondary above).
Equilibrium stable_center(const Params& params);

/// (x, y) = (r sin phi, y_c + r cos phi), w = z = 0, around the stable center.
State initial_condition(const Params& params, double radius, double phi);

/// Angle phi at which the perturbation circle meets the curve y = g(x, 0).
double rocking_phi(const ManifoldSeries& series, double radius);

/// max |y - g(x, w)| over the trajectory.
double manifold_deviation(const ManifoldSeries& series, const Trajectory& traj);

struct SweepOptions {
  IntegrateOptions integrate;
  EscapeOptions escape;
  bool keep_trajectories = true;
  int series_order = 4;
};

struct SweepEntry {
  double phi;
  std::optional<Trajectory> trajectory;
  EscapeClass escape = EscapeClass::Bounded;
  std::size_t section_count = 0;
  double max_manifold_dev;  ///< NaN when no rocking series is available
  std::string error;        ///< non-empty when this trajectory failed
};

struct SweepResult {
  double alpha0;
  double radius;
  Branch center_branch;
  double y_center;
  std::optional<ManifoldSeries> series;
  std::string rocking_note;  ///< why no series, when absent
  std::vector<SweepEntry> entries;  ///< ordered as phi_list
};

SweepResult sweep(const Params& params, double radius, const std::vector<double>& phi_list, double dt, double t_end,
                  const SweepOptions& opt = {});

// --- output ------------------------------------------------------------------

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_section_csv(std::ostream& os, const SectionMap& map);
void write_embedding_csv(std::ostream& os, const std::vector<std::array<double, 3>>& pts);
void write_sweep_summary_csv(std::ostream& os, const SweepResult& result);

/// Rescale a dimensionless trajectory with the params' physical scales.
Trajectory to_dimensional(const Trajectory& traj, const PhysicalScales& scales);

}  // namespace steiner
