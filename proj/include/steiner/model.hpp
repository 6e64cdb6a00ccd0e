#pragma once

// Steiner triangular drop: parameters, phase-space state, triangle geometry,
// the dimensionless vector field and its reversing involutions.
//
// Lengths are scaled by l = V^(1/3) (the triangle has unit area) and time by
// sqrt(rho V / sigma). The phase space is (x, w, y, z) = (x, dx/dt, y, dy/dt)
// where (x, y) is the center of mass measured from the middle of the base.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <utility>

#include "steiner/errors.hpp"

namespace steiner {

inline constexpr double kPi = std::numbers::pi;

/// Dimensionless pressure coefficient q(alpha) = 2 sin^2(a) sqrt(tan a) / (4 + sec a).
/// Defined on 0 < alpha < pi/2; throws DomainError elsewhere.
double q_of_alpha(double alpha);

/// dq/dalpha, same domain as q_of_alpha.
double dq_dalpha(double alpha);

/// Optional physical scales, used only to convert dimensionless output.
struct PhysicalScales {
  double sigma;   ///< surface tension
  double rho;     ///< density
  double volume;  ///< drop volume V; the length scale is V^(1/3)

  double length() const { return std::cbrt(volume); }
  double time() const { return std::sqrt(rho * volume / sigma); }
};

/// The single model parameter alpha0 and the derived q(alpha0).
class Params {
 public:
  explicit Params(double alpha0, std::optional<PhysicalScales> scales = std::nullopt);

  double alpha0() const noexcept { return alpha0_; }
  double q() const noexcept { return q_; }
  const std::optional<PhysicalScales>& scales() const noexcept { return scales_; }

 private:
  double alpha0_;
  double q_;
  std::optional<PhysicalScales> scales_;
};

/// A point (x, w, y, z) of phase space. y > 0 is enforced at construction.
struct State {
  double x;
  double w;
  double y;
  double z;

  State(double x_, double w_, double y_, double z_) : x(x_), w(w_), y(y_), z(z_) {
    if (!(y > 0.0)) throw DomainError("State: center of mass must lie above the substrate (y > 0)");
  }

  std::array<double, 4> as_array() const { return {x, w, y, z}; }
  static State from_array(const std::array<double, 4>& a) { return State(a[0], a[1], a[2], a[3]); }

  friend bool operator==(const State&, const State&) = default;
};

/// Validity window for the vertical coordinate. Outside it the vector field is
/// considered singular and operations report LeftDomainError.
struct DomainGuard {
  double y_min = 1e-6;
  double y_max = 1e6;

  bool contains(double y) const { return y >= y_min && y <= y_max; }
};

/// Reconstructed triangle for a center-of-mass position.
struct TriangleConfig {
  double xA, xB, xC, yC;    ///< vertices A = (xA, 0), B = (xB, 0), C = (xC, yC)
  double a, b, c;           ///< side lengths opposite A, B, C
  double alpha, beta, gamma;  ///< interior angles at A, B, C (radians)

  double area() const;
};

TriangleConfig triangle_from_com(double x, double y);

/// Net force per unit (sigma l); equal to the acceleration in these units.
struct ForcePair {
  double Fx;
  double Fy;
};

/// Accelerations (f, h) of the dimensionless Newton law. Templated so that the
/// same expression can be expanded with Taylor arithmetic (see taylor.hpp).
template <class T>
std::pair<T, T> accelerations(const T& x, const T& y, double q) {
  using std::sqrt;
  const T p = 1.0 / (3.0 * y);  // half base length d
  const T right = p - 3.0 * x;  // xB - xC
  const T left = p + 3.0 * x;   // xC - xA
  const T height2 = 9.0 * (y * y);
  const T a = sqrt(right * right + height2);
  const T b = sqrt(left * left + height2);
  T f = right / a - left / b;
  T h = -3.0 * y * (1.0 / a + 1.0 / b) + q * p * (2.0 * (a + b) * p + a * b);
  return {std::move(f), std::move(h)};
}

ForcePair net_force(double x, double y, const Params& params);

/// The vector field (dx/dt, dw/dt, dy/dt, dz/dt). Throws LeftDomainError when
/// state.y is outside the guard, NumericalError if the result is not finite.
std::array<double, 4> rhs(const State& state, const Params& params, const DomainGuard& guard = {});

/// G1: (x, w, y, z) -> (-x, w, y, -z), reverses time.
State apply_G1(const State& s);
/// G2: (x, w, y, z) -> (x, -w, y, -z), reverses time.
State apply_G2(const State& s);
/// S = G2 o G1: (x, w, y, z) -> (-x, -w, y, z), a symmetry.
State apply_S(const State& s);

/// True when s lies in the fixed set {w = z = 0} of G2.
inline bool is_G2_fixed(const State& s) { return s.w == 0.0 && s.z == 0.0; }

}  // namespace steiner
