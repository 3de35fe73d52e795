#pragma once

// First-order Edgeworth analysis of the semi-hard triplet loss
//
//   L_semi(alpha) = \int_0^alpha (alpha - t) f(t) dt
//               = L0(alpha) + L1(alpha) / sqrt(N) + O(1/N),
//
// where f is approximated by the one-term Edgeworth density of Delta with
// mean mu, standard deviation sigma and skewness gamma3. All formulas work in
// the standardized window [zeta_0, zeta_alpha] = [-mu/sigma, (alpha-mu)/sigma].

#include <cstdint>
#include <string_view>

#include "edgeworth/cumulants.hpp"

namespace edgeworth {

/// Sign of the He_3 term in the one-term Edgeworth density.
///
/// CdfConsistent: f = phi(z) [1 + c He_3(z)] / sigma, the exact derivative of
///   the CDF expansion Phi(z) - c phi(z) He_2(z), with c = gamma3 / (6 sqrt N).
/// SubtractiveHe3: f = phi(z) [1 - c He_3(z)] / sigma, the density from which
///   the classical closed form of L1 is obtained. L1 flips sign between the two.
enum class Convention { CdfConsistent, SubtractiveHe3 };

std::string_view to_string(Convention c) noexcept;
/// Accepts "cdf-consistent" and "subtractive-he3"; throws Parse otherwise.
Convention parse_convention(std::string_view text);

/// Immutable expansion parameters. sigma > 0, n_eff >= 1, all finite.
class EdgeworthModel {
 public:
  EdgeworthModel(double mean, double sigma, double skewness, std::uint64_t n_eff,
                 Convention convention = Convention::CdfConsistent);

  static EdgeworthModel from_summary(const CumulantSummary& summary, std::uint64_t n_eff,
                                     Convention convention = Convention::CdfConsistent);

  double mean() const noexcept { return mean_; }
  double sigma() const noexcept { return sigma_; }
  double skewness() const noexcept { return skewness_; }
  std::uint64_t n_eff() const noexcept { return n_eff_; }
  Convention convention() const noexcept { return convention_; }

  /// gamma3 / (6 sqrt N), the coefficient of the first-order correction.
  double correction_scale() const noexcept;
  double standardize(double t) const noexcept { return (t - mean_) / sigma_; }

  EdgeworthModel with_n_eff(std::uint64_t n_eff) const;
  EdgeworthModel with_convention(Convention convention) const;

 private:
  double mean_;
  double sigma_;
  double skewness_;
  std::uint64_t n_eff_;
  Convention convention_;
};

struct LossExpansion {
  double leading = 0.0;
  double correction = 0.0;
  double total = 0.0;
  double alpha = 0.0;
  /// The Edgeworth density dips below zero somewhere on [0, alpha]. Values
  /// are still reported unclamped.
  bool density_negative = false;
};

/// Phi(z) - phi(z) gamma3/(6 sqrt N) He_2(z). Not clamped to [0, 1].
double cdf_expansion(const EdgeworthModel& model, double z);

/// One-term Edgeworth density of Delta at t (Delta units), sign per convention.
double density_expansion(const EdgeworthModel& model, double t);

/// True when density_expansion < 0 somewhere on [0, alpha].
bool density_negative_on_window(const EdgeworthModel& model, double alpha);

/// P(0 < Delta < alpha) ~ [Phi(z_a) - Phi(z_0)]
///                       - gamma3/(6 sqrt N) [phi(z_a) He_2(z_a) - phi(z_0) He_2(z_0)].
/// Independent of the model's convention.
double semi_hard_probability(const EdgeworthModel& model, double alpha);

/// L0 = (alpha - mu)[Phi(z_a) - Phi(z_0)] + sigma [phi(z_a) - phi(z_0)].
double loss_leading(const EdgeworthModel& model, double alpha);

/// L1 = -/+ gamma3/6 { (alpha - mu) J1 - sigma J2 } with
///   J1 = \int (z^3 - 3z) phi,  J2 = \int z (z^3 - 3z) phi  over the window.
/// SubtractiveHe3 gives the classical closed form; CdfConsistent its negation.
double loss_correction(const EdgeworthModel& model, double alpha);

LossExpansion loss_expansion(const EdgeworthModel& model, double alpha);

/// d L / d alpha: the window mass of density_expansion over (0, alpha).
/// Equal to semi_hard_probability under CdfConsistent.
double margin_sensitivity(const EdgeworthModel& model, double alpha);

/// Smallest N with c_estimate / N <= epsilon * L(model, alpha).total.
/// Throws UndefinedRelativeError when the loss is not positive.
std::uint64_t recommend_batch_size(const EdgeworthModel& model, double alpha, double epsilon,
                                   double c_estimate);

}  // namespace edgeworth
