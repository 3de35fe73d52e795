#include "edgeworth/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "edgeworth/error.hpp"

namespace edgeworth {

namespace {

constexpr int kMinQuadratureDepth = 5;

class AdaptiveSimpson {
 public:
  explicit AdaptiveSimpson(const std::function<double(double)>& f) : f_(f) {}

  double eval(double x) {
    ++evaluations_;
    const double y = f_(x);
    if (!std::isfinite(y)) {
      throw Error(ErrorKind::Domain,
                  "quadrature: integrand is not finite at x = " + std::to_string(x));
    }
    return y;
  }

  // Integrates over [a, b] given f(a), f(m), f(b) and the whole-panel Simpson value.
  double refine(double a, double b, double fa, double fm, double fb, double whole, double tol,
                int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() *
                            (std::abs(left) + std::abs(right));

    if (depth >= kMinQuadratureDepth &&
        (std::abs(diff) <= 15.0 * tol || std::abs(diff) <= roundoff)) {
      error_ += std::abs(diff) / 15.0;
      return left + right + diff / 15.0;
    }
    if (depth >= kMaxQuadratureDepth) {
      converged_ = false;
      error_ += std::abs(diff) / 15.0;
      return left + right + diff / 15.0;
    }
    return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }

  std::size_t evaluations() const noexcept { return evaluations_; }
  double error() const noexcept { return error_; }
  bool converged() const noexcept { return converged_; }

 private:
  const std::function<double(double)>& f_;
  std::size_t evaluations_ = 0;
  double error_ = 0.0;
  bool converged_ = true;
};

void require_margin(double alpha) {
  if (!std::isfinite(alpha) || !(alpha > 0.0)) {
    throw Error(ErrorKind::InvalidMargin, "margin alpha must be positive and finite");
  }
}

template <typename Weight>
McEstimate window_mean(const DeltaSample& sample, double alpha, Weight weight) {
  require_margin(alpha);
  if (sample.values.empty()) {
    throw Error(ErrorKind::InsufficientSample, "Monte-Carlo estimate needs a non-empty sample");
  }
  MomentAccumulator acc;
  for (double x : sample.values) acc.add((x > 0.0 && x < alpha) ? weight(x) : 0.0);
  const auto n = static_cast<double>(acc.count());
  const double plugin_variance = acc.m2_sum() / n;
  return {acc.mean(), std::sqrt(plugin_variance / n)};
}

}  // namespace

QuadratureResult quadrature(const std::function<double(double)>& integrand, double lo,
                            double hi, double tol) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorKind::Domain, "quadrature: limits must be finite");
  }
  if (!std::isfinite(tol) || !(tol > 0.0)) {
    throw Error(ErrorKind::Domain, "quadrature: tolerance must be positive");
  }
  if (hi < lo) {
    QuadratureResult r = quadrature(integrand, hi, lo, tol);
    r.value = -r.value;
    return r;
  }
  if (lo == hi) return {0.0, 0.0, 0};

  AdaptiveSimpson simpson(integrand);
  const double fa = simpson.eval(lo);
  const double fb = simpson.eval(hi);
  const double fm = simpson.eval(0.5 * (lo + hi));
  const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
  const double value = simpson.refine(lo, hi, fa, fm, fb, whole, tol, 0);

  if (!simpson.converged()) {
    throw NonConvergenceError("quadrature: subdivision depth limit of " +
                                  std::to_string(kMaxQuadratureDepth) + " exceeded",
                              value, simpson.error());
  }
  return {value, simpson.error(), simpson.evaluations()};
}

McEstimate mc_semi_hard_loss(const DeltaSample& sample, double alpha) {
  return window_mean(sample, alpha, [alpha](double x) { return alpha - x; });
}

McEstimate mc_semi_hard_probability(const DeltaSample& sample, double alpha) {
  return window_mean(sample, alpha, [](double) { return 1.0; });
}

double ScalingFit::c_estimate() const { return std::exp(intercept); }

ScalingFit error_scaling_fit(std::span<const ScalingPoint> points) {
  if (points.size() < 3) {
    throw Error(ErrorKind::InsufficientSample, "scaling fit needs at least 3 points");
  }
  for (const auto& p : points) {
    if (p.n < 1) throw Error(ErrorKind::Domain, "scaling fit: n must be positive");
    if (!std::isfinite(p.error) || !(p.error > 0.0)) {
      throw Error(ErrorKind::Domain, "scaling fit: errors must be positive and finite");
    }
  }

  const auto count = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    mx += std::log(static_cast<double>(p.n));
    my += std::log(p.error);
  }
  mx /= count;
  my /= count;

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(static_cast<double>(p.n)) - mx;
    const double dy = std::log(p.error) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) {
    throw Error(ErrorKind::Domain, "scaling fit: n values must not all be equal");
  }

  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  // A constant error series is fitted exactly by a zero slope.
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  fit.points.assign(points.begin(), points.end());
  return fit;
}

}  // namespace edgeworth
