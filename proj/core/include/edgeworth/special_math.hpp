#pragma once

// Closed-form building blocks shared by every expansion formula: the standard
// normal density and distribution function, probabilists' Hermite polynomials
// He_0..He_4, and the Gaussian interval moments
//
//   M_k(a, b) = \int_a^b z^k phi(z) dz,   k = 0..4.

namespace edgeworth {

inline constexpr int kMaxHermiteOrder = 4;
inline constexpr int kMaxMomentOrder = 4;

/// Closed interval in standardized coordinates. Both ends finite, lo <= hi.
class Interval {
 public:
  Interval(double lo, double hi);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }

 private:
  double lo_;
  double hi_;
};

double normal_pdf(double z);

/// Phi(z) = erfc(-z / sqrt 2) / 2, accurate in both tails.
double normal_cdf(double z);

/// He_n(z) for 0 <= n <= 4.
double hermite_he(int n, double z);

/// Antiderivative of z^k phi(z) used by gaussian_interval_moment:
///   k=0: Phi            k=1: -phi           k=2: Phi - z phi
///   k=3: -(z^2+2) phi   k=4: 3 Phi - (z^3 + 3z) phi
double gaussian_moment_antiderivative(int k, double z);

/// M_k over the interval, evaluated as antiderivative(hi) - antiderivative(lo).
double gaussian_interval_moment(int k, const Interval& iv);

}  // namespace edgeworth
