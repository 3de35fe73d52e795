#pragma once

// Ground truth that shares no code path with the closed forms: adaptive
// quadrature, Monte-Carlo window estimators, and log-log error-scaling fits.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "edgeworth/cumulants.hpp"

namespace edgeworth {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

inline constexpr double kDefaultQuadratureTolerance = 1e-10;
inline constexpr int kMaxQuadratureDepth = 60;
/// Improper integrals over a Gaussian-like density are truncated at mean +- 12 sigma.
inline constexpr double kTruncationSigmas = 12.0;

/// Adaptive Simpson with Richardson extrapolation. hi < lo integrates in the
/// reverse orientation and negates. Throws NonConvergenceError (with the best
/// estimate) if any branch needs more than kMaxQuadratureDepth halvings.
QuadratureResult quadrature(const std::function<double(double)>& integrand, double lo,
                            double hi, double tol = kDefaultQuadratureTolerance);

struct McEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

/// Mean of 1{0 < x < alpha} (alpha - x) with plug-in standard error.
McEstimate mc_semi_hard_loss(const DeltaSample& sample, double alpha);
/// Mean of 1{0 < x < alpha} with plug-in standard error.
McEstimate mc_semi_hard_probability(const DeltaSample& sample, double alpha);

struct ScalingPoint {
  std::uint64_t n = 0;
  double error = 0.0;
};

/// Least squares of log(error) on log(n): error ~ exp(intercept) * n^slope.
struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<ScalingPoint> points;

  /// exp(intercept): the constant C in error ~ C / n when slope is -1.
  double c_estimate() const;
};

/// Needs at least 3 points with distinct n; errors must be positive.
ScalingFit error_scaling_fit(std::span<const ScalingPoint> points);

}  // namespace edgeworth
