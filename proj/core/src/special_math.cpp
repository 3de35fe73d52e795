#include "edgeworth/special_math.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "edgeworth/error.hpp"

namespace edgeworth {

namespace {

void require_finite(double z, const char* what) {
  if (!std::isfinite(z)) {
    throw Error(ErrorKind::Domain, std::string(what) + ": argument is not finite");
  }
}

}  // namespace

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::UnsupportedOrder: return "unsupported order";
    case ErrorKind::InsufficientSample: return "insufficient sample";
    case ErrorKind::ZeroVariance: return "zero variance";
    case ErrorKind::InvalidMargin: return "invalid margin";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::UnsupportedFamily: return "unsupported family";
    case ErrorKind::UndefinedRelativeError: return "undefined relative error";
    case ErrorKind::Parse: return "parse error";
  }
  return "unknown error";
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorKind::Domain, "interval endpoints must be finite");
  }
  if (lo > hi) {
    throw Error(ErrorKind::Domain, "interval requires lo <= hi");
  }
}

double normal_pdf(double z) {
  require_finite(z, "normal_pdf");
  constexpr double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
  return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

double normal_cdf(double z) {
  require_finite(z, "normal_cdf");
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double hermite_he(int n, double z) {
  const double z2 = z * z;
  switch (n) {
    case 0: return 1.0;
    case 1: return z;
    case 2: return z2 - 1.0;
    case 3: return z * (z2 - 3.0);
    case 4: return (z2 - 6.0) * z2 + 3.0;
    default:
      throw Error(ErrorKind::UnsupportedOrder,
                  "hermite_he: order " + std::to_string(n) + " outside 0..4");
  }
}

double gaussian_moment_antiderivative(int k, double z) {
  if (k < 0 || k > kMaxMomentOrder) {
    throw Error(ErrorKind::UnsupportedOrder,
                "gaussian moment: order " + std::to_string(k) + " outside 0..4");
  }
  const double pdf = normal_pdf(z);
  switch (k) {
    case 0: return normal_cdf(z);
    case 1: return -pdf;
    case 2: return normal_cdf(z) - z * pdf;
    case 3: return -(z * z + 2.0) * pdf;
    default: return 3.0 * normal_cdf(z) - z * (z * z + 3.0) * pdf;
  }
}

double gaussian_interval_moment(int k, const Interval& iv) {
  return gaussian_moment_antiderivative(k, iv.hi()) -
         gaussian_moment_antiderivative(k, iv.lo());
}

}  // namespace edgeworth
