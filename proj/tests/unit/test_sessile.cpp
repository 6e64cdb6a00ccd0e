#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "steiner/errors.hpp"
#include "steiner/sessile.hpp"

using namespace steiner;

namespace {

constexpr double pi = oracle::pi;

CapMode make_mode(double alpha, int l, double eps, Profile xi, int k = 0) {
  CapMode m;
  m.alpha = alpha;
  m.l = l;
  m.k = k;
  m.epsilon = eps;
  m.xi = std::move(xi);
  return m;
}

/// Random smooth profile: short cosine series in s/alpha, scaled to max |xi| = 1.
Profile random_profile(double alpha, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::array<double, 4> c{};
  for (double& v : c) v = U(rng);
  const auto raw = [c, alpha](double s) {
    double v = 0.0;
    for (int n = 0; n < 4; ++n) v += c[n] * std::cos(n * pi * s / alpha);
    return v;
  };
  double mx = 0.0;
  for (int i = 0; i <= 2000; ++i) mx = std::max(mx, std::abs(raw(alpha * i / 2000.0)));
  return [raw, mx](double s) { return raw(s) / mx; };
}

double tol(double eps) { return std::max(1e-8, 5.0 * eps * eps); }

}  // namespace

TEST_SUITE("sessile") {
  TEST_CASE("unperturbed volume") {
    CHECK(unperturbed_volume(pi / 2) == doctest::Approx(2.0 * pi / 3.0).epsilon(1e-15));
    const CapMode m = make_mode(pi / 2, 0, 0.0, builtin_profile("constant", pi / 2));
    CHECK(cap_volume(m, 0.3) == doctest::Approx(2.0 * pi / 3.0).epsilon(1e-15));
    for (int l : {1, 2, 5}) {
      const CapMode ml = make_mode(1.1, l, 0.01, builtin_profile("cos1", 1.1));
      CHECK(cap_volume(ml, 0.7) == unperturbed_volume(1.1));
    }
  }

  TEST_CASE("l = 0, constant shape: first-order volume term") {
    for (double a : {pi / 3, 4 * pi / 9, 2.0}) {
      const CapMode m = make_mode(a, 0, 0.01, builtin_profile("constant", a));
      const double expect = 2.0 * pi * (1.0 - std::cos(a)) / (std::sin(a) * std::sin(a));
      CHECK(first_order_terms(m).volume == doctest::Approx(expect).epsilon(1e-12));
      CHECK(cap_volume(m, 0.0) == doctest::Approx(unperturbed_volume(a) + 0.01 * expect).epsilon(1e-14));
    }
  }

  TEST_CASE("unperturbed trace sits at pi/(4M)") {
    const CapMode m = make_mode(1.0, 3, 0.0, builtin_profile("bump", 1.0));
    const ComTrace tr = com_trace(m, {0.0, 0.5, 1.0});
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      CHECK(tr.zbar[i] == pi / (4.0 * tr.M[i]));
      CHECK(tr.xbar[i] == 0.0);
      CHECK(tr.ybar[i] == 0.0);
    }
  }

  TEST_CASE("l = 0 moves vertically only") {
    const double a = 4 * pi / 9;
    const CapMode m = make_mode(a, 0, 0.01, builtin_profile("cos1", a));
    std::vector<double> ts;
    for (int i = 0; i <= 50; ++i) ts.push_back(2 * pi * i / 50.0);
    const ComTrace tr = com_trace(m, ts);
    CHECK(tr.classification == ModeClass::Bouncing);
    double zr = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      CHECK(std::abs(tr.xbar[i]) < 1e-12);
      CHECK(tr.ybar[i] == 0.0);
      zr = std::max(zr, std::abs(tr.zbar[i] - tr.zbar[0]));
    }
    CHECK(zr > 1e-4);
    // the 3D moments agree at the half period
    const Moments o = com_oracle_3d(m, pi / 2);
    CHECK(std::abs(o.Mx) < 1e-12);
    CHECK(std::abs(o.My) < 1e-12);
  }

  TEST_CASE("l = 1 rocks in phase with cos(Omega t)") {
    const double a = pi / 3;
    CapMode m = make_mode(a, 1, 0.01, builtin_profile("poly", a), 2);
    m.Omega = 2.5;
    const double mx = first_order_terms(m).mx;
    CHECK(std::abs(mx) > 1e-3);
    std::vector<double> ts;
    for (int i = 0; i <= 40; ++i) ts.push_back(0.1 * i);
    const ComTrace tr = com_trace(m, ts);
    CHECK(tr.classification == ModeClass::Rocking);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      CHECK(tr.ybar[i] == 0.0);
      CHECK(tr.xbar[i] * tr.M[i] == doctest::Approx(0.01 * std::cos(2.5 * ts[i]) * mx).epsilon(1e-12));
      const Moments o = com_oracle_3d(m, ts[i]);
      CHECK(std::abs(o.My) < 1e-12);
      CHECK(std::abs(o.Mx - tr.xbar[i] * tr.M[i]) < tol(0.01));
    }
  }

  TEST_CASE("l >= 2 is stationary to first order, displacement ~ eps^2") {
    const double a = 4 * pi / 9;
    std::vector<double> eps, disp;
    for (double e : {1e-2, 5e-3}) {
      const CapMode m = make_mode(a, 2, e, builtin_profile("cos1", a));
      CHECK(classify_mode(m) == ModeClass::Stationary);
      const CapMode m0 = make_mode(a, 2, 0.0, builtin_profile("cos1", a));
      const Moments o0 = com_oracle_3d(m0, 0.0);
      const Moments o = com_oracle_3d(m, 0.0);
      const double d = std::max(std::abs(o.Mx / o.M), std::abs(o.Mz / o.M - o0.Mz / o0.M));
      CHECK(d < 5.0 * e * e);
      eps.push_back(e);
      disp.push_back(d);
    }
    CHECK(oracle::loglog_slope(eps, disp) >= 1.9);
  }

  TEST_CASE("classification by azimuthal wavenumber") {
    const Profile xi = builtin_profile("cos2", 1.0);
    CHECK(classify_mode(make_mode(1.0, 0, 0.01, xi)) == ModeClass::Bouncing);
    CHECK(classify_mode(make_mode(1.0, 1, 0.01, xi, 2)) == ModeClass::Rocking);
    CHECK(classify_mode(make_mode(1.0, 7, 0.01, xi)) == ModeClass::Stationary);
    CHECK_THROWS_AS(classify_mode(make_mode(1.0, 1, 0.01, xi, 1)), DomainError);
    CHECK_THROWS_AS(com_trace(make_mode(1.0, 1, 0.01, xi, 1), {0.0}), DomainError);
    CHECK(to_string(ModeClass::Rocking) == "rocking");
  }

  TEST_CASE("validation") {
    const Profile xi = builtin_profile("cos1", 1.0);
    CHECK_THROWS_AS(validate(make_mode(0.0, 0, 0.01, xi)), DomainError);
    CHECK_THROWS_AS(validate(make_mode(pi, 0, 0.01, xi)), DomainError);
    CHECK_THROWS_AS(validate(make_mode(1.0, -1, 0.01, xi)), DomainError);
    CHECK_THROWS_AS(validate(make_mode(1.0, 0, -0.01, xi)), DomainError);
    CHECK_THROWS_AS(validate(make_mode(1.0, 0, 0.01, Profile{})), DomainError);
    CHECK_THROWS_AS(validate(make_mode(1.0, 0, 0.01, [](double) { return std::nan(""); })), DomainError);
    CHECK(validate(make_mode(1.0, 0, 0.01, xi)).empty());
    CHECK(validate(make_mode(1.0, 0, 0.1, xi)).size() == 1);
    CHECK_THROWS_AS(builtin_profile("square", 1.0), DomainError);
  }

  TEST_CASE("hemisphere moments from the 3D quadrature") {
    const Moments o = com_oracle_3d(make_mode(pi / 2, 0, 0.0, builtin_profile("constant", pi / 2)), 0.0);
    CHECK(o.M == doctest::Approx(2.0 * pi / 3.0).epsilon(1e-13));
    CHECK(std::abs(o.Mx) < 1e-14);
    CHECK(std::abs(o.My) < 1e-14);
    CHECK(o.Mz == doctest::Approx(pi / 4.0).epsilon(1e-13));
    CHECK(o.error < 1e-12);
  }

  TEST_CASE("unperturbed moments match the elementary solids") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> A(0.2, 3.0);
    for (int i = 0; i < 20; ++i) {
      const double a = A(rng);
      const auto [M, Mz] = oracle::cap_moments(a);
      CHECK(std::abs(unperturbed_volume(a) - M) < 1e-10 * std::max(1.0, M));
      const Moments o = com_oracle_3d(make_mode(a, 0, 0.0, builtin_profile("constant", a)), 0.0);
      CHECK(std::abs(o.M - M) < 1e-10 * std::max(1.0, M));
      CHECK(std::abs(o.Mz - Mz) < 1e-10 * std::max(1.0, M));
      CHECK(std::abs(Mz - pi / 4) < 1e-10 * std::max(1.0, M));
    }
  }

  TEST_CASE("selection rules against the 3D quadrature") {
    std::mt19937_64 rng(2024);
    for (double a : {pi / 3, 4 * pi / 9}) {
      for (int l = 0; l <= 5; ++l) {
        for (int trial = 0; trial < 3; ++trial) {
          const Profile xi = random_profile(a, rng);
          for (double e : {1e-2, 5e-3}) {
            const CapMode m = make_mode(a, l, e, xi, 2);
            const ComTrace tr = com_trace(m, {0.0, 1.0});
            for (std::size_t i = 0; i < tr.times.size(); ++i) {
              const Moments o = com_oracle_3d(m, tr.times[i]);
              CHECK(std::abs(o.M - tr.M[i]) < tol(e));
              CHECK(std::abs(o.Mx - tr.M[i] * tr.xbar[i]) < tol(e));
              CHECK(std::abs(o.Mz - tr.M[i] * tr.zbar[i]) < tol(e));
              CHECK(std::abs(o.My) < 1e-12);
            }
            // which first-order terms appear
            const FirstOrderTerms f = first_order_terms(m);
            if (l == 0) {
              CHECK(f.mx == 0.0);
              CHECK(tr.classification == ModeClass::Bouncing);
            } else if (l == 1) {
              CHECK(f.mz == 0.0);
              CHECK(f.volume == 0.0);
              CHECK(std::abs(f.mx) > 0.0);
              CHECK(tr.classification == ModeClass::Rocking);
            } else {
              CHECK(f.mx == 0.0);
              CHECK(f.mz == 0.0);
              CHECK(f.volume == 0.0);
            }
          }
        }
      }
    }
  }

  TEST_CASE("sampled profiles") {
    const double a = 1.0;
    const Profile ref = builtin_profile("cos1", a);
    std::vector<double> s, xi;
    for (int i = 0; i <= 200; ++i) {
      s.push_back(a * i / 200.0);
      xi.push_back(ref(s.back()));
    }
    const Profile p = profile_from_samples(s, xi, a);
    for (double u : {0.0, 0.123, 0.5, 0.77, 1.0}) CHECK(std::abs(p(u) - ref(u)) < 1e-6);

    const auto path = std::filesystem::temp_directory_path() / "steiner_profile_test.csv";
    {
      std::ofstream f(path);
      f << "s,xi\n";
      for (std::size_t i = 0; i < s.size(); ++i) f << s[i] << ',' << xi[i] << '\n';
    }
    const Profile pc = profile_from_csv(path.string(), a);
    CHECK(std::abs(pc(0.5) - ref(0.5)) < 1e-5);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(profile_from_samples({0.0, 0.5, 0.7}, {1, 1, 1}, a), DomainError);
    CHECK_THROWS_AS(profile_from_samples({0.0, 0.3, 0.5, 0.7}, {1, 1, 1, 1}, a), DomainError);
    CHECK_THROWS_AS(profile_from_samples({0.0, 0.5, 0.3, 1.0}, {1, 1, 1, 1}, a), DomainError);
  }

  TEST_CASE("trace CSV") {
    const CapMode m = make_mode(1.0, 0, 0.01, builtin_profile("cos1", 1.0));
    std::ostringstream os;
    write_com_trace_csv(os, com_trace(m, {0.0, 0.5}));
    const std::string s = os.str();
    CHECK(s.rfind("t,xbar,ybar,zbar,M,class\n", 0) == 0);
    CHECK(s.find(",bouncing\n") != std::string::npos);
  }
}
