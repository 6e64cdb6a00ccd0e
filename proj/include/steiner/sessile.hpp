#pragma once

// Center-of-mass motion of a perturbed spherical-cap drop whose surface is
//   rho(s, phi, t) = csc(alpha) + eps xi(s) cos(l phi) cos(Omega t),
// with the origin at the center of the unperturbed sphere and the contact
// line of unit radius.

#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace steiner {

using Profile = std::function<double(double)>;

struct CapMode {
  double alpha = 0.0;
  int l = 0;
  int k = 0;  ///< polar wavenumber, a label only
  double epsilon = 0.0;
  double Omega = 1.0;
  Profile xi;
  std::string xi_label = "custom";
};

/// Throws DomainError for an invalid mode; returns warnings (e.g. large epsilon).
std::vector<std::string> validate(const CapMode& mode);

/// Built-in smooth test shapes on [0, alpha]: constant, cos1, cos2, bump, poly.
Profile builtin_profile(std::string_view name, double alpha);
std::vector<std::string> builtin_profile_names();

/// Shape sampled as CSV `s,xi`, s ascending and covering [0, alpha]; interpolated
/// with a modified Akima cubic.
Profile profile_from_samples(std::vector<double> s, std::vector<double> xi, double alpha);
Profile profile_from_csv(const std::string& path, double alpha);

enum class ModeClass { Bouncing, Rocking, Stationary };
std::string_view to_string(ModeClass c);

ModeClass classify_mode(const CapMode& mode);

/// Unperturbed volume (pi/6)(cos a + 2) tan(a/2) sec^2(a/2).
double unperturbed_volume(double alpha);

/// Volume to first order in epsilon.
double cap_volume(const CapMode& mode, double t);

/// First-order coefficients of the l-specific reduced integrals, i.e. the
/// quantities multiplying eps cos(Omega t).
struct FirstOrderTerms {
  double volume = 0.0;  ///< l = 0 only
  double mx = 0.0;      ///< l = 1 only
  double mz = 0.0;      ///< l = 0 only
};
FirstOrderTerms first_order_terms(const CapMode& mode);

struct ComTrace {
  std::vector<double> times;
  std::vector<double> xbar, ybar, zbar;
  std::vector<double> M;
  ModeClass classification = ModeClass::Stationary;
};

ComTrace com_trace(const CapMode& mode, const std::vector<double>& t_grid);

struct Moments {
  double M = 0.0, Mx = 0.0, My = 0.0, Mz = 0.0;
  double error = 0.0;  ///< largest estimated quadrature error among the four
};

struct OracleOptions {
  int nodes = 128;     ///< Gauss-Legendre nodes per direction
  double tol = 1e-10;  ///< estimated error above this is an error
};

/// Direct quadrature over cone + perturbed sector; r is integrated exactly,
/// (s, phi) with a Gauss-Legendre product rule. The error estimate compares
/// against the rule with half the nodes.
Moments com_oracle_3d(const CapMode& mode, double t, const OracleOptions& opt = {});

/// CSV `t,xbar,ybar,zbar,M,class`.
void write_com_trace_csv(std::ostream& os, const ComTrace& trace);

}  // namespace steiner
