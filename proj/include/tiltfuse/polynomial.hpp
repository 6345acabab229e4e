#pragma once

#include <cmath>
#include <initializer_list>
#include <vector>

#include "tiltfuse/error.hpp"

namespace tiltfuse {

/// Zero-intercept polynomial S(p) = c1*p + c2*p^2 + ... + cn*p^n used for the
/// accelerometer scale-factor error. No constant term; the bias covers it.
class ScalePolynomial {
 public:
  ScalePolynomial() = default;
  ScalePolynomial(std::initializer_list<double> c) : coeffs_(c) {}
  explicit ScalePolynomial(std::vector<double> c) : coeffs_(std::move(c)) {}

  static ScalePolynomial zero(std::size_t degree = 5) {
    return ScalePolynomial(std::vector<double>(degree, 0.0));
  }

  std::size_t degree() const { return coeffs_.size(); }
  const std::vector<double>& coefficients() const { return coeffs_; }
  std::vector<double>& coefficients() { return coeffs_; }
  double coefficient(std::size_t power) const {
    return power >= 1 && power <= coeffs_.size() ? coeffs_[power - 1] : 0.0;
  }

  bool is_zero() const {
    for (double c : coeffs_)
      if (c != 0.0) return false;
    return true;
  }

  double operator()(double p) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = (acc + *it) * p;
    return acc;
  }

  double derivative(double p) const {
    double acc = 0.0;
    for (std::size_t i = coeffs_.size(); i >= 1; --i)
      acc = acc * p + static_cast<double>(i) * coeffs_[i - 1];
    return acc;
  }

  /// Solves p - S(p) = target for p, i.e. inverts the correction map. Newton
  /// from p = target, falling back to bisection on an expanding bracket.
  double invert_correction(double target) const {
    if (is_zero()) return target;
    auto h = [&](double p) { return p - (*this)(p) - target; };
    const double tol = 1e-13 * (1.0 + std::fabs(target));

    double p = target;
    for (int it = 0; it < 60; ++it) {
      const double hp = h(p);
      if (std::fabs(hp) <= tol) return p;
      const double slope = 1.0 - derivative(p);
      if (!(slope > 1e-6)) break;
      const double next = p - hp / slope;
      if (!std::isfinite(next)) break;
      p = next;
    }

    double lo = target, hi = target;
    double w = 0.5 * (1.0 + std::fabs(target));
    for (int it = 0; it < 60; ++it) {
      lo = target - w;
      hi = target + w;
      if (h(lo) * h(hi) <= 0.0) break;
      w *= 2.0;
    }
    double hlo = h(lo);
    if (hlo * h(hi) > 0.0)
      throw NumericError("scale-factor correction is not invertible at " + std::to_string(target));
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double hm = h(mid);
      if ((hm <= 0.0) == (hlo <= 0.0)) {
        lo = mid;
        hlo = hm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  friend bool operator==(const ScalePolynomial&, const ScalePolynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

// Published degree-5 scale-factor fits of the two accelerometer axes.
inline ScalePolynomial published_scale_poly_x() {
  return {0.04537, -0.00576, -0.00143, 0.00005, 0.00001};
}
inline ScalePolynomial published_scale_poly_y() {
  return {0.12723, -0.05823, 0.00930, -0.00068, 0.00002};
}

}  // namespace tiltfuse
