#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "steiner/errors.hpp"
#include "steiner/model.hpp"

namespace steiner {

enum class Branch { Primary, Secondary };
enum class Stability { Center, Saddle, Degenerate };

std::string_view to_string(Branch b);
std::string_view to_string(Stability s);
Branch branch_from_string(std::string_view s);

/// Isosceles rest state (0, 0, y_eq, 0). The x coordinate is zero by construction.
struct Equilibrium {
  double y_eq;
  double contact_angle;  ///< radians; y_eq = sqrt(tan(contact_angle)) / 3
  Branch branch;
  Stability stability = Stability::Degenerate;

  State state() const { return State(0.0, 0.0, y_eq, 0.0); }
};

/// The two roots y0, y1 are numerically indistinguishable (alpha0 at or very near alpha0*).
class CoincidentRootsError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Argmax of q on (0, pi/2), located as the root of dq/dalpha. ~1.3908.
double critical_alpha_star(double tol = 1e-14);

/// Half-width of the window around alpha0* in which stability is reported Degenerate.
inline constexpr double kDegenerateWindow = 1e-6;

/// Left side of the secondary-equilibrium equation as a function of y:
/// 486 y^5 / ((81 y^4 + 1)(sqrt(81 y^4 + 1) + 4)), which equals q(arctan(9 y^2)).
double equilibrium_level(double y);

Equilibrium primary_equilibrium(const Params& params);

/// The second positive root y1 of equilibrium_level(y) = q(alpha0).
/// Throws CoincidentRootsError when y1 cannot be separated from y0.
Equilibrium secondary_equilibrium(const Params& params, double tol = 1e-12);

struct JacobianPartials {
  double fx;  ///< df/dx at (0, y_eq)
  double hy;  ///< dh/dy at (0, y_eq)
};

/// Closed forms valid at any equilibrium ordinate (f_y = h_x = 0 there).
JacobianPartials jacobian_partials(double y_eq);

/// The same partials at the primary equilibrium, written in alpha0.
JacobianPartials primary_partials_closed_form(double alpha0);

/// lambda_{1,2} = +-sqrt(fx), lambda_{3,4} = +-sqrt(hy).
struct EigenSet {
  std::pair<std::complex<double>, std::complex<double>> lambda12;
  std::pair<std::complex<double>, std::complex<double>> lambda34;
  double fx;
  double hy;
};

EigenSet eigenvalues(double y_eq);

/// Eigenvalues of a central-difference Jacobian of the full 4D field computed by
/// a general eigensolver; used to cross-check the closed forms.
std::vector<std::complex<double>> numeric_eigenvalues(const State& s, const Params& params, double step = 1e-5);

Stability stability_from_partials(const JacobianPartials& p);

/// Both equilibria with stability labels; Degenerate inside the window around alpha0*.
std::pair<Equilibrium, Equilibrium> classify(const Params& params);

struct BifurcationRow {
  double alpha0;
  double y0;
  double y1;  ///< NaN when the secondary root could not be found
  Stability stab0;
  Stability stab1;
  bool root_failed = false;
};

/// One row per grid point; failures are flagged per row, never thrown.
std::vector<BifurcationRow> bifurcation_scan(const std::vector<double>& alpha_grid);

/// CSV `alpha0,y0,y1,stab0,stab1`, 17 significant digits.
void write_bifurcation_csv(std::ostream& os, const std::vector<BifurcationRow>& rows);

}  // namespace steiner
