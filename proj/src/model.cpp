#include "steiner/model.hpp"

#include <cmath>
#include <string>

namespace steiner {

namespace {

void require_open_quadrant(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < kPi / 2))
    throw DomainError(std::string(who) + ": alpha must lie in (0, pi/2), got " + std::to_string(alpha));
}

}  // namespace

double q_of_alpha(double alpha) {
  require_open_quadrant(alpha, "q_of_alpha");
  const double s = std::sin(alpha);
  return 2.0 * s * s * std::sqrt(std::tan(alpha)) / (4.0 + 1.0 / std::cos(alpha));
}

double dq_dalpha(double alpha) {
  require_open_quadrant(alpha, "dq_dalpha");
  const double s = std::sin(alpha);
  const double c = std::cos(alpha);
  const double sec = 1.0 / c;
  // d(log q)/d(alpha)
  const double dlog = 2.0 * c / s + 1.0 / (2.0 * s * c) - sec * std::tan(alpha) / (4.0 + sec);
  return q_of_alpha(alpha) * dlog;
}

Params::Params(double alpha0, std::optional<PhysicalScales> scales)
    : alpha0_(alpha0), q_(q_of_alpha(alpha0)), scales_(scales) {
  if (scales_ && !(scales_->sigma > 0 && scales_->rho > 0 && scales_->volume > 0))
    throw DomainError("Params: physical scales must be positive");
}

double TriangleConfig::area() const {
  return 0.5 * (xB - xA) * yC;
}

TriangleConfig triangle_from_com(double x, double y) {
  if (!(y > 0.0)) throw DomainError("triangle_from_com: y must be positive");
  TriangleConfig t{};
  const double d = 1.0 / (3.0 * y);
  t.xA = -d;
  t.xB = d;
  t.xC = 3.0 * x;
  t.yC = 3.0 * y;
  t.a = std::hypot(t.xB - t.xC, t.yC);
  t.b = std::hypot(t.xC - t.xA, t.yC);
  t.c = t.xB - t.xA;
  t.alpha = std::atan2(t.yC, t.xC - t.xA);
  t.beta = std::atan2(t.yC, t.xB - t.xC);
  t.gamma = kPi - t.alpha - t.beta;
  return t;
}

ForcePair net_force(double x, double y, const Params& params) {
  if (!(y > 0.0)) throw DomainError("net_force: y must be positive");
  const auto [f, h] = accelerations(x, y, params.q());
  return {f, h};
}

std::array<double, 4> rhs(const State& state, const Params& params, const DomainGuard& guard) {
  if (!guard.contains(state.y))
    throw LeftDomainError("rhs: y = " + std::to_string(state.y) + " outside the validity window", state.y);
  const auto [f, h] = accelerations(state.x, state.y, params.q());
  if (!std::isfinite(f) || !std::isfinite(h)) throw NumericalError("rhs: non-finite acceleration");
  return {state.w, f, state.z, h};
}

State apply_G1(const State& s) { return State(-s.x, s.w, s.y, -s.z); }
State apply_G2(const State& s) { return State(s.x, -s.w, s.y, -s.z); }
State apply_S(const State& s) { return apply_G2(apply_G1(s)); }

}  // namespace steiner
