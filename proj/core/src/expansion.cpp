#include "edgeworth/expansion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "edgeworth/error.hpp"
#include "edgeworth/special_math.hpp"

namespace edgeworth {

namespace {

void require_margin(double alpha) {
  if (!std::isfinite(alpha) || !(alpha > 0.0)) {
    throw Error(ErrorKind::InvalidMargin, "margin alpha must be positive and finite");
  }
}

/// +1 when the He_3 density term is added, -1 when subtracted.
double he3_sign(Convention c) noexcept {
  return c == Convention::CdfConsistent ? 1.0 : -1.0;
}

struct Window {
  double z0;
  double za;
};

Window window(const EdgeworthModel& model, double alpha) {
  return {model.standardize(0.0), model.standardize(alpha)};
}

/// [phi(z) He_2(z)] evaluated between the window ends.
double phi_he2_difference(const Window& w) {
  return normal_pdf(w.za) * hermite_he(2, w.za) - normal_pdf(w.z0) * hermite_he(2, w.z0);
}

}  // namespace

std::string_view to_string(Convention c) noexcept {
  return c == Convention::CdfConsistent ? "cdf-consistent" : "subtractive-he3";
}

Convention parse_convention(std::string_view text) {
  if (text == "cdf-consistent") return Convention::CdfConsistent;
  if (text == "subtractive-he3") return Convention::SubtractiveHe3;
  throw Error(ErrorKind::Parse, "unknown convention '" + std::string(text) +
                                    "' (expected cdf-consistent or subtractive-he3)");
}

EdgeworthModel::EdgeworthModel(double mean, double sigma, double skewness,
                               std::uint64_t n_eff, Convention convention)
    : mean_(mean), sigma_(sigma), skewness_(skewness), n_eff_(n_eff), convention_(convention) {
  if (!std::isfinite(mean) || !std::isfinite(sigma) || !std::isfinite(skewness)) {
    throw Error(ErrorKind::Domain, "model parameters must be finite");
  }
  if (!(sigma > 0.0)) {
    throw Error(ErrorKind::ZeroVariance, "model sigma must be positive");
  }
  if (n_eff < 1) {
    throw Error(ErrorKind::Domain, "model n_eff must be at least 1");
  }
}

EdgeworthModel EdgeworthModel::from_summary(const CumulantSummary& summary,
                                            std::uint64_t n_eff, Convention convention) {
  if (!(summary.variance > 0.0)) {
    throw Error(ErrorKind::ZeroVariance, "summary variance must be positive");
  }
  return {summary.mean, std::sqrt(summary.variance), summary.skewness, n_eff, convention};
}

double EdgeworthModel::correction_scale() const noexcept {
  return skewness_ / (6.0 * std::sqrt(static_cast<double>(n_eff_)));
}

EdgeworthModel EdgeworthModel::with_n_eff(std::uint64_t n_eff) const {
  return {mean_, sigma_, skewness_, n_eff, convention_};
}

EdgeworthModel EdgeworthModel::with_convention(Convention convention) const {
  return {mean_, sigma_, skewness_, n_eff_, convention};
}

double cdf_expansion(const EdgeworthModel& model, double z) {
  return normal_cdf(z) - normal_pdf(z) * model.correction_scale() * hermite_he(2, z);
}

double density_expansion(const EdgeworthModel& model, double t) {
  const double z = model.standardize(t);
  const double c = he3_sign(model.convention()) * model.correction_scale();
  return normal_pdf(z) * (1.0 + c * hermite_he(3, z)) / model.sigma();
}

bool density_negative_on_window(const EdgeworthModel& model, double alpha) {
  require_margin(alpha);
  const auto [z0, za] = window(model, alpha);
  const double c = he3_sign(model.convention()) * model.correction_scale();
  // 1 + c He_3 is a cubic with turning points at z = +-1.
  std::array<double, 4> candidates{z0, za, -1.0, 1.0};
  double lowest = std::numeric_limits<double>::infinity();
  for (double z : candidates) {
    if (z < z0 || z > za) continue;
    lowest = std::min(lowest, 1.0 + c * hermite_he(3, z));
  }
  return lowest < 0.0;
}

double semi_hard_probability(const EdgeworthModel& model, double alpha) {
  require_margin(alpha);
  const Window w = window(model, alpha);
  return (normal_cdf(w.za) - normal_cdf(w.z0)) - model.correction_scale() * phi_he2_difference(w);
}

double loss_leading(const EdgeworthModel& model, double alpha) {
  require_margin(alpha);
  const Window w = window(model, alpha);
  return (alpha - model.mean()) * (normal_cdf(w.za) - normal_cdf(w.z0)) +
         model.sigma() * (normal_pdf(w.za) - normal_pdf(w.z0));
}

double loss_correction(const EdgeworthModel& model, double alpha) {
  require_margin(alpha);
  const Window w = window(model, alpha);
  const double pa = normal_pdf(w.za);
  const double p0 = normal_pdf(w.z0);
  // J1 = [-(z^2 - 1) phi], J2 = [-z^3 phi] between the window ends.
  const double j1 = -phi_he2_difference(w);
  const double j2 = -(w.za * w.za * w.za * pa - w.z0 * w.z0 * w.z0 * p0);
  const double i1 = (alpha - model.mean()) * j1 - model.sigma() * j2;
  return he3_sign(model.convention()) * (model.skewness() / 6.0) * i1;
}

LossExpansion loss_expansion(const EdgeworthModel& model, double alpha) {
  LossExpansion out;
  out.alpha = alpha;
  out.leading = loss_leading(model, alpha);
  out.correction = loss_correction(model, alpha);
  out.total = out.leading + out.correction / std::sqrt(static_cast<double>(model.n_eff()));
  out.density_negative = density_negative_on_window(model, alpha);
  return out;
}

double margin_sensitivity(const EdgeworthModel& model, double alpha) {
  require_margin(alpha);
  if (model.convention() == Convention::CdfConsistent) {
    return semi_hard_probability(model, alpha);
  }
  const Window w = window(model, alpha);
  return (normal_cdf(w.za) - normal_cdf(w.z0)) + model.correction_scale() * phi_he2_difference(w);
}

std::uint64_t recommend_batch_size(const EdgeworthModel& model, double alpha, double epsilon,
                                   double c_estimate) {
  if (!std::isfinite(epsilon) || !(epsilon > 0.0)) {
    throw Error(ErrorKind::Domain, "epsilon must be positive and finite");
  }
  if (!std::isfinite(c_estimate) || !(c_estimate > 0.0)) {
    throw Error(ErrorKind::Domain, "C estimate must be positive and finite");
  }
  const double loss = loss_expansion(model, alpha).total;
  if (!(loss > 0.0)) {
    throw Error(ErrorKind::UndefinedRelativeError,
                "expanded loss is not positive at this margin; relative error is undefined");
  }
  const double budget = epsilon * loss;
  const double ratio = c_estimate / budget;
  if (!(ratio < 9.0e18)) {
    throw Error(ErrorKind::Domain, "recommended batch size overflows");
  }
  // Accept N when C/N <= budget up to a few ulps, so exact ratios such as
  // 2.5 / 0.025 are not pushed to the next integer by rounding.
  auto satisfies = [&](double n) { return c_estimate / n <= budget * (1.0 + 1e-12); };
  auto n = static_cast<std::uint64_t>(std::max(1.0, std::ceil(ratio)));
  while (n > 1 && satisfies(static_cast<double>(n - 1))) --n;
  while (!satisfies(static_cast<double>(n))) ++n;
  return n;
}

}  // namespace edgeworth
