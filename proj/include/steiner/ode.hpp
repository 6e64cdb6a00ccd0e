#pragma once

// Dormand-Prince 5(4) with embedded error control, for small fixed-size systems.
// Used as the high-accuracy reference integrator; the production integrator for
// the 4D drop system is the symmetric scheme in dynamics.hpp.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

#include "steiner/errors.hpp"

namespace steiner {

struct AdaptiveOptions {
  double rtol = 1e-12;
  double atol = 1e-13;
  double h_init = 1e-3;
  double h_max = 0.05;
  long max_steps = 50'000'000;
};

template <std::size_t N>
using Vec = std::array<double, N>;

/// Integrates dy/dt = f(t, y) from t0 to t1 (either direction), landing exactly
/// on t1. After every accepted step observer(t, y) is called; returning false
/// stops the integration early. `h` carries the step size between calls.
/// Returns the last accepted time; y is updated in place.
template <std::size_t N, class F, class Observer>
double dopri5(F&& f, double t0, Vec<N>& y, double t1, double& h, const AdaptiveOptions& opt, Observer&& observer) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double dir = t1 >= t0 ? 1.0 : -1.0;
  double t = t0;
  h = std::clamp(std::abs(h), 1e-14, opt.h_max);
  Vec<N> k1 = f(t, y), k2, k3, k4, k5, k6, k7, tmp, ynew;
  long steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > opt.max_steps) throw NumericalError("dopri5: step limit exceeded");
    bool last = false;
    double hs = h;
    if (hs >= std::abs(t1 - t)) {
      hs = std::abs(t1 - t);
      last = true;
    }
    const double hh = dir * hs;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hh * a21 * k1[i];
    k2 = f(t + c2 * hh, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hh * (a31 * k1[i] + a32 * k2[i]);
    k3 = f(t + c3 * hh, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hh * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = f(t + c4 * hh, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + hh * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = f(t + c5 * hh, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + hh * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = f(t + hh, tmp);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + hh * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    k7 = f(t + hh, ynew);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei = hh * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err = std::max(err, std::abs(ei) / sc);
    }
    if (!std::isfinite(err)) throw NumericalError("dopri5: non-finite error estimate");

    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    if (err <= 1.0) {
      t = last ? t1 : t + hh;
      y = ynew;
      k1 = k7;  // FSAL
      if (!last) h = std::min(hs * factor, opt.h_max);
      if (!observer(t, y)) return t;
    } else {
      h = hs * std::max(factor, 0.1);
      if (h < 1e-14) throw NumericalError("dopri5: step size underflow");
    }
  }
  return t;
}

template <std::size_t N, class F>
double dopri5(F&& f, double t0, Vec<N>& y, double t1, double& h, const AdaptiveOptions& opt) {
  return dopri5<N>(std::forward<F>(f), t0, y, t1, h, opt, [](double, const Vec<N>&) { return true; });
}

}  // namespace steiner
