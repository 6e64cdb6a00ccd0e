#include "steiner/sessile.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <ostream>

#include <boost/math/interpolators/makima.hpp>

#include "steiner/csv.hpp"
#include "steiner/errors.hpp"
#include "steiner/model.hpp"
#include "steiner/quadrature.hpp"

namespace steiner {

std::vector<std::string> validate(const CapMode& mode) {
  if (!(mode.alpha > 0.0 && mode.alpha < kPi)) throw DomainError("cap mode: alpha must lie in (0, pi)");
  if (mode.l < 0) throw DomainError("cap mode: l must be a non-negative integer");
  if (!(mode.epsilon >= 0.0) || !std::isfinite(mode.epsilon)) throw DomainError("cap mode: epsilon must be >= 0");
  if (!std::isfinite(mode.Omega)) throw DomainError("cap mode: Omega must be finite");
  if (!mode.xi) throw DomainError("cap mode: no mode shape supplied");
  if (mode.k == 1 && mode.l == 1)
    throw DomainError("cap mode: (k, l) = (1, 1) is unstable and has no oscillatory mode shape");
  for (int i = 0; i <= 64; ++i) {
    const double s = mode.alpha * i / 64.0;
    if (!std::isfinite(mode.xi(s))) throw DomainError("cap mode: xi is not finite at s = " + fmt17(s));
  }
  std::vector<std::string> warnings;
  if (mode.epsilon > 0.05)
    warnings.push_back("epsilon = " + fmt17(mode.epsilon) + " is large; first-order formulas lose accuracy");
  return warnings;
}

Profile builtin_profile(std::string_view name, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("builtin_profile: alpha must be positive");
  if (name == "constant") return [](double) { return 1.0; };
  if (name == "cos1") return [alpha](double s) { return std::cos(kPi * s / alpha); };
  if (name == "cos2") return [alpha](double s) { return std::cos(2.0 * kPi * s / alpha); };
  if (name == "bump") return [alpha](double s) { return std::sin(kPi * s / alpha); };
  if (name == "poly")
    return [alpha](double s) {
      const double u = s / alpha;
      return 1.0 - 3.0 * u * u + 2.0 * u * u * u;
    };
  throw DomainError("unknown mode shape '" + std::string(name) + "'");
}

std::vector<std::string> builtin_profile_names() { return {"constant", "cos1", "cos2", "bump", "poly"}; }

Profile profile_from_samples(std::vector<double> s, std::vector<double> xi, double alpha) {
  if (s.size() != xi.size()) throw DomainError("mode shape: s and xi differ in length");
  if (s.size() < 4) throw DomainError("mode shape: need at least 4 samples");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i]) || !std::isfinite(xi[i])) throw DomainError("mode shape: non-finite sample");
    if (i > 0 && !(s[i] > s[i - 1])) throw DomainError("mode shape: s must be strictly ascending");
  }
  const double span_tol = 1e-9 * std::max(1.0, alpha);
  if (s.front() > span_tol || s.back() < alpha - span_tol)
    throw DomainError("mode shape: samples must cover [0, alpha]");
  const double lo = s.front(), hi = s.back();
  auto spline = std::make_shared<boost::math::interpolators::makima<std::vector<double>>>(std::move(s), std::move(xi));
  return [spline, lo, hi](double t) { return (*spline)(std::clamp(t, lo, hi)); };
}

Profile profile_from_csv(const std::string& path, double alpha) {
  const CsvTable table = read_csv(path);
  return profile_from_samples(table.column("s"), table.column("xi"), alpha);
}

std::string_view to_string(ModeClass c) {
  switch (c) {
    case ModeClass::Bouncing: return "bouncing";
    case ModeClass::Rocking: return "rocking";
    case ModeClass::Stationary: return "stationary";
  }
  return "stationary";
}

ModeClass classify_mode(const CapMode& mode) {
  validate(mode);
  if (mode.l == 0) return ModeClass::Bouncing;
  if (mode.l == 1) return ModeClass::Rocking;
  return ModeClass::Stationary;
}

double unperturbed_volume(double alpha) {
  const double t = std::tan(0.5 * alpha);
  const double c = std::cos(0.5 * alpha);
  return kPi / 6.0 * (std::cos(alpha) + 2.0) * t / (c * c);
}

namespace {

double reduced_integral(const CapMode& mode, const std::function<double(double)>& weight) {
  return integrate_adaptive([&](double s) { return mode.xi(s) * weight(s); }, 0.0, mode.alpha, 1e-15, 1e-14);
}

}  // namespace

// Separate l = 0 / l = 1 / l > 1 paths; the generic-l expression has vanishing
// denominators at l = 0 and l = 1 and is never evaluated there.
FirstOrderTerms first_order_terms(const CapMode& mode) {
  validate(mode);
  const double csc = 1.0 / std::sin(mode.alpha);
  FirstOrderTerms t;
  if (mode.l == 0) {
    t.volume = reduced_integral(mode, [csc](double s) { return 2.0 * kPi * csc * csc * std::sin(s); });
    t.mz = reduced_integral(mode, [csc](double s) { return kPi * csc * csc * csc * std::sin(2.0 * s); });
  } else if (mode.l == 1) {
    t.mx = reduced_integral(mode, [csc](double s) {
      const double sn = std::sin(s);
      return kPi * csc * csc * csc * sn * sn;
    });
  }
  return t;
}

double cap_volume(const CapMode& mode, double t) {
  const FirstOrderTerms f = first_order_terms(mode);
  return unperturbed_volume(mode.alpha) + mode.epsilon * std::cos(mode.Omega * t) * f.volume;
}

ComTrace com_trace(const CapMode& mode, const std::vector<double>& t_grid) {
  for (double t : t_grid)
    if (!std::isfinite(t)) throw DomainError("com_trace: time grid contains a non-finite value");
  const FirstOrderTerms f = first_order_terms(mode);
  const double M0 = unperturbed_volume(mode.alpha);
  ComTrace tr;
  tr.classification = classify_mode(mode);
  for (double t : t_grid) {
    const double amp = mode.epsilon * std::cos(mode.Omega * t);
    const double M = M0 + amp * f.volume;
    tr.times.push_back(t);
    tr.M.push_back(M);
    tr.xbar.push_back(amp * f.mx / M);
    tr.ybar.push_back(0.0);
    tr.zbar.push_back((0.25 * kPi + amp * f.mz) / M);
  }
  return tr;
}

namespace {

Moments product_rule(const CapMode& mode, double t, int n) {
  const GaussLegendre gl(n);
  const double a = mode.alpha;
  const double R = 1.0 / std::sin(a);
  const double amp = mode.epsilon * std::cos(mode.Omega * t);
  const double hs = 0.5 * a, hp = kPi;

  std::vector<double> s(n), xi(n), cphi(n), sphi(n), clphi(n);
  for (int i = 0; i < n; ++i) {
    s[i] = hs * (gl.nodes[i] + 1.0);
    xi[i] = mode.xi(s[i]);
    const double phi = hp * (gl.nodes[i] + 1.0);
    cphi[i] = std::cos(phi);
    sphi[i] = std::sin(phi);
    clphi[i] = std::cos(mode.l * phi);
  }

  double M = 0.0, Mx = 0.0, My = 0.0, Mz = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ss = std::sin(s[i]), cs = std::cos(s[i]);
    double m = 0.0, mx = 0.0, my = 0.0, mz = 0.0;
    for (int j = 0; j < n; ++j) {
      const double rho = R + amp * xi[i] * clphi[j];
      const double r3 = rho * rho * rho / 3.0;
      const double r4 = rho * rho * rho * rho / 4.0;
      m += gl.weights[j] * r3;
      mx += gl.weights[j] * r4 * cphi[j];
      my += gl.weights[j] * r4 * sphi[j];
      mz += gl.weights[j] * r4;
    }
    const double w = gl.weights[i] * hs * hp;
    M += w * m * ss;
    Mx += w * mx * ss * ss;
    My += w * my * ss * ss;
    Mz += w * mz * ss * cs;
  }
  const double cot = std::cos(a) / std::sin(a);
  return {M - kPi * cot / 3.0, Mx, My, Mz - kPi * cot * cot / 4.0, 0.0};
}

}  // namespace

Moments com_oracle_3d(const CapMode& mode, double t, const OracleOptions& opt) {
  validate(mode);
  if (opt.nodes < 8) throw DomainError("com_oracle_3d: need at least 8 nodes per direction");
  Moments fine = product_rule(mode, t, opt.nodes);
  const Moments coarse = product_rule(mode, t, opt.nodes / 2);
  fine.error = std::max({std::abs(fine.M - coarse.M), std::abs(fine.Mx - coarse.Mx), std::abs(fine.My - coarse.My),
                         std::abs(fine.Mz - coarse.Mz)});
  if (!(fine.error <= opt.tol))
    throw NumericalError("com_oracle_3d: estimated quadrature error " + fmt17(fine.error) + " exceeds " +
                         fmt17(opt.tol) + "; increase the node count");
  return fine;
}

void write_com_trace_csv(std::ostream& os, const ComTrace& trace) {
  os << "t,xbar,ybar,zbar,M,class\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    os << fmt17(trace.times[i]) << ',' << fmt17(trace.xbar[i]) << ',' << fmt17(trace.ybar[i]) << ','
       << fmt17(trace.zbar[i]) << ',' << fmt17(trace.M[i]) << ',' << to_string(trace.classification) << '\n';
}

}  // namespace steiner
