#pragma once

// The two invariant 2D manifolds through a center:
//   bouncing  {x = w = 0}, carrying the reduced Hamiltonian H(y, z) = z^2/2 + U(y);
//   rocking   {y = g(x, w)}, approximated by a Taylor polynomial in (x, w).

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "steiner/equilibria.hpp"
#include "steiner/model.hpp"
#include "steiner/taylor.hpp"

namespace steiner {

// --- bouncing manifold -------------------------------------------------------

/// h(0, y): vertical acceleration on the bouncing manifold.
double bouncing_acceleration(double y, const Params& params);

/// Potential U with U'(y) = -h(0, y) and U(y_ref) = 0, tabulated on a grid.
/// potential() integrates from the nearest tabulated node, so it is accurate
/// between and beyond the nodes.
class ReducedHamiltonian {
 public:
  ReducedHamiltonian(const Params& params, std::vector<double> y_grid, double y_ref);

  double alpha0() const noexcept { return alpha0_; }
  double y_ref() const noexcept { return y_ref_; }
  const std::vector<double>& y_grid() const noexcept { return y_grid_; }
  const std::vector<double>& U() const noexcept { return u_; }

  double potential(double y) const;
  double energy(double y, double z) const { return 0.5 * z * z + potential(y); }

 private:
  double alpha0_;
  double q_;
  double y_ref_;
  std::vector<double> y_grid_;
  std::vector<double> u_;
};

/// y_grid must be strictly positive and ascending. y_ref defaults to the
/// primary equilibrium ordinate.
ReducedHamiltonian reduced_potential(const Params& params, std::vector<double> y_grid,
                                     std::optional<double> y_ref = std::nullopt);

/// Energy of the saddle of the reduced system, i.e. the level of the separatrix.
/// Requires alpha0 < alpha0* (the saddle is the secondary equilibrium).
double saddle_energy(const ReducedHamiltonian& H, const Params& params);

struct SeparatrixBranch {
  std::string name;                          ///< stable-up, stable-down, unstable-up, unstable-down
  std::vector<std::pair<double, double>> zy;  ///< polyline points (z, y)
  bool escaped = false;                       ///< left the escape window instead of returning
};

struct SeparatrixOptions {
  double ds = 1e-3;           ///< polyline spacing in the (z, y) plane
  double seed = 1e-7;         ///< offset from the saddle along its eigenvectors
  double t_max = 200.0;       ///< time cap per branch
  double y_low = 0.02;        ///< branch terminated (escaped) below this y
  double y_high = 10.0;       ///< ... or above this y
  double return_radius = 1e-3;  ///< branch terminated when it comes back this close to the saddle
};

/// Stable and unstable manifolds of the reduced saddle, as polylines in (z, y).
/// Requires alpha0 < alpha0*.
std::vector<SeparatrixBranch> separatrix(const Params& params, const SeparatrixOptions& opt = {});

/// CSV `z,y,branch`.
void write_separatrix_csv(std::ostream& os, const std::vector<SeparatrixBranch>& branches);

// --- rocking manifold --------------------------------------------------------

enum class Parity {
  Even,           ///< solve only for monomials even in both x and w
  Unconstrained,  ///< solve every monomial; odd ones come out ~0
};

struct SeriesOptions {
  int order = 4;
  Branch branch = Branch::Primary;
  Parity parity = Parity::Even;
  double singular_window = 1e-4;  ///< refuse within this distance of a singular alpha0
  double max_condition = 1e12;    ///< refuse when an order's linear system is worse than this
};

/// y = g(x, w) = y_center + sum c_ij x^i w^j, 1 <= i + j <= order.
struct ManifoldSeries {
  double alpha0;
  Branch branch;
  double y_center;
  int order;
  Poly2 g;  ///< full polynomial including the constant y_center
  std::vector<double> condition;  ///< condition number of the solve at each degree (index = degree)
  Parity parity = Parity::Even;

  double coefficient(int i, int j) const { return g.at(i, j); }
};

/// Thrown when alpha0 is too close to a value where the series solve is singular.
class SingularSeriesError : public NumericalError {
 public:
  SingularSeriesError(const std::string& what, int order, double alpha_singular)
      : NumericalError(what), order_(order), alpha_singular_(alpha_singular) {}
  int order() const noexcept { return order_; }
  double alpha_singular() const noexcept { return alpha_singular_; }

 private:
  int order_;
  double alpha_singular_;
};

/// Invariance equation residual D^2 g - h(x, g) as a polynomial in (x, w), where
/// D = w d/dx + f(x, g) d/dw is the flow derivative on the surface.
Poly2 invariance_residual(const Poly2& g, const Params& params);

ManifoldSeries rocking_series(const Params& params, const SeriesOptions& opt = {});

/// Matrix of the degree-k step of the series solve restricted to monomials even
/// in both variables, at the primary equilibrium of alpha0.
std::vector<std::vector<double>> even_block_matrix(double alpha0, int degree);
double even_block_determinant(double alpha0, int degree);
double even_block_condition(double alpha0, int degree);

/// Closed-form quadratic coefficients (a3 for x^2, a5 for w^2) at the primary equilibrium.
std::pair<double, double> rocking_closed_form(double alpha0);

/// Denominator of the closed-form a3, exposed for singularity location.
double a3_denominator(double alpha0);

/// alpha0 values on the primary branch where the series solve up to `order`
/// (2 or 4) is singular, ascending.
std::vector<double> singular_alphas(int order);

struct SurfacePoint {
  double y;
  bool within_trust;  ///< false when ||(x, w)|| exceeds kTrustRadius
};

inline constexpr double kTrustRadius = 0.15;

SurfacePoint evaluate_g(const ManifoldSeries& series, double x, double w);

/// Point on the surface with z from the chain rule z = g_x w + g_w f(x, g).
State on_manifold_state(const ManifoldSeries& series, const Params& params, double x, double w);

/// JSON `{alpha0, branch, y_center, order, parity, coeffs: [{i, j, value}]}`. An even
/// series lists only the monomials even in both variables.
void write_series_json(std::ostream& os, const ManifoldSeries& series);

}  // namespace steiner
