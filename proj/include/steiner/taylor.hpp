#pragma once

// Truncated bivariate Taylor polynomials.
//
// A Poly2 of degree N holds the coefficients c(i, j) of u^i v^j for i + j <= N.
// All arithmetic drops terms above degree N, so evaluating a smooth function on
// Poly2 arguments yields its Taylor expansion to order N (forward-mode AD).

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

#include "steiner/errors.hpp"

namespace steiner {

class Poly2 {
 public:
  explicit Poly2(int degree, double constant = 0.0)
      : degree_(degree), c_(size_for(degree), 0.0) {
    assert(degree >= 0);
    c_[0] = constant;
  }

  /// The coordinate u (var == 0) or v (var == 1), optionally shifted by a constant.
  static Poly2 variable(int degree, int var, double shift = 0.0) {
    Poly2 p(degree, shift);
    if (degree >= 1) p.at(var == 0 ? 1 : 0, var == 0 ? 0 : 1) = 1.0;
    return p;
  }

  static std::size_t size_for(int degree) {
    const auto n = static_cast<std::size_t>(degree);
    return (n + 1) * (n + 2) / 2;
  }

  /// Flat index of the monomial u^i v^j, grouped by total degree.
  static std::size_t index(int i, int j) {
    const auto k = static_cast<std::size_t>(i + j);
    return k * (k + 1) / 2 + static_cast<std::size_t>(j);
  }

  int degree() const noexcept { return degree_; }
  double constant() const noexcept { return c_[0]; }

  double& at(int i, int j) { return c_[index(i, j)]; }
  double at(int i, int j) const {
    if (i < 0 || j < 0 || i + j > degree_) return 0.0;
    return c_[index(i, j)];
  }

  double operator()(double u, double v) const {
    // Horner over total degree is not worth it at N <= 8.
    double s = 0.0;
    for (int k = degree_; k >= 0; --k) {
      double term = 0.0;
      for (int j = 0; j <= k; ++j)
        term += at(k - j, j) * std::pow(u, k - j) * std::pow(v, j);
      s += term;
    }
    return s;
  }

  /// Partial derivative in u (var == 0) or v (var == 1); the top degree is lost.
  Poly2 derivative(int var) const {
    Poly2 d(degree_);
    for (int k = 1; k <= degree_; ++k)
      for (int j = 0; j <= k; ++j) {
        const int i = k - j;
        if (var == 0 && i > 0) d.at(i - 1, j) += i * at(i, j);
        if (var == 1 && j > 0) d.at(i, j - 1) += j * at(i, j);
      }
    return d;
  }

  Poly2 homogeneous_part(int k) const {
    Poly2 p(degree_);
    if (k > degree_) return p;
    for (int j = 0; j <= k; ++j) p.at(k - j, j) = at(k - j, j);
    return p;
  }

  Poly2& operator+=(const Poly2& o) {
    check(o);
    for (std::size_t n = 0; n < c_.size(); ++n) c_[n] += o.c_[n];
    return *this;
  }
  Poly2& operator-=(const Poly2& o) {
    check(o);
    for (std::size_t n = 0; n < c_.size(); ++n) c_[n] -= o.c_[n];
    return *this;
  }
  Poly2& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }
  Poly2& operator+=(double s) {
    c_[0] += s;
    return *this;
  }

  Poly2 operator-() const {
    Poly2 r = *this;
    r *= -1.0;
    return r;
  }

  friend Poly2 operator*(const Poly2& a, const Poly2& b) {
    a.check(b);
    Poly2 r(a.degree_);
    for (int ka = 0; ka <= a.degree_; ++ka)
      for (int ja = 0; ja <= ka; ++ja) {
        const double ca = a.at(ka - ja, ja);
        if (ca == 0.0) continue;
        for (int kb = 0; kb + ka <= a.degree_; ++kb)
          for (int jb = 0; jb <= kb; ++jb)
            r.at(ka - ja + kb - jb, ja + jb) += ca * b.at(kb - jb, jb);
      }
    return r;
  }

  /// 1/p via the geometric series in the non-constant part.
  Poly2 reciprocal() const {
    const double c0 = c_[0];
    if (c0 == 0.0) throw NumericalError("Poly2::reciprocal: zero constant term");
    Poly2 r = *this;
    r.c_[0] = 0.0;
    r *= -1.0 / c0;  // r = -(p - c0)/c0
    Poly2 sum(degree_, 1.0);
    Poly2 power(degree_, 1.0);
    for (int k = 1; k <= degree_; ++k) {
      power = power * r;
      sum += power;
    }
    sum *= 1.0 / c0;
    return sum;
  }

  friend Poly2 sqrt(const Poly2& p) {
    const double c0 = p.c_[0];
    if (!(c0 > 0.0)) throw NumericalError("Poly2 sqrt: non-positive constant term");
    Poly2 r = p;
    r.c_[0] = 0.0;
    r *= 1.0 / c0;  // sqrt(p) = sqrt(c0) * sqrt(1 + r)
    Poly2 sum(p.degree_, 1.0);
    Poly2 power(p.degree_, 1.0);
    double binom = 1.0;  // binomial(1/2, k)
    for (int k = 1; k <= p.degree_; ++k) {
      binom *= (0.5 - (k - 1)) / k;
      power = power * r;
      Poly2 t = power;
      t *= binom;
      sum += t;
    }
    sum *= std::sqrt(c0);
    return sum;
  }

  friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
  friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
  friend Poly2 operator+(Poly2 a, double s) { return a += s; }
  friend Poly2 operator+(double s, Poly2 a) { return a += s; }
  friend Poly2 operator-(Poly2 a, double s) { return a += -s; }
  friend Poly2 operator-(double s, const Poly2& a) { return (-a) += s; }
  friend Poly2 operator*(Poly2 a, double s) { return a *= s; }
  friend Poly2 operator*(double s, Poly2 a) { return a *= s; }
  friend Poly2 operator/(const Poly2& a, const Poly2& b) { return a * b.reciprocal(); }
  friend Poly2 operator/(Poly2 a, double s) { return a *= 1.0 / s; }
  friend Poly2 operator/(double s, const Poly2& a) { return a.reciprocal() * s; }

 private:
  void check([[maybe_unused]] const Poly2& o) const { assert(o.degree_ == degree_); }

  int degree_;
  std::vector<double> c_;
};

}  // namespace steiner
