#pragma once

// Reference laws with closed-form cumulants and densities, and a two-cluster
// triplet simulator. These are the ground-truth generators for validating the
// expansion.

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>

#include "edgeworth/cumulants.hpp"

namespace edgeworth {

struct NormalLaw {
  double mean;
  double sigma;
};

/// shift + Gamma(shape, scale).
struct ShiftedGammaLaw {
  double shape;
  double scale;
  double shift;
};

/// w N(mean1, sigma1^2) + (1 - w) N(mean2, sigma2^2).
struct NormalMixtureLaw {
  double weight;
  double mean1;
  double sigma1;
  double mean2;
  double sigma2;
};

enum class Family { Normal, ShiftedGamma, NormalMixture };

std::string_view to_string(Family family) noexcept;

class ReferenceDistribution {
 public:
  using Law = std::variant<NormalLaw, ShiftedGammaLaw, NormalMixtureLaw>;

  static ReferenceDistribution normal(double mean, double sigma);
  static ReferenceDistribution shifted_gamma(double shape, double scale, double shift = 0.0);
  static ReferenceDistribution normal_mixture(double weight, double mean1, double sigma1,
                                              double mean2, double sigma2);

  Family family() const noexcept;
  const Law& law() const noexcept { return law_; }

  double mean() const noexcept;
  double variance() const noexcept;
  double kappa3() const noexcept;
  double skewness() const noexcept;

  /// e.g. "ShiftedGamma(shape=4, scale=1, shift=0)".
  std::string describe() const;

 private:
  explicit ReferenceDistribution(Law law) : law_(law) {}
  Law law_;
};

/// Closed-form density; 0 below a gamma shift.
double exact_density(const ReferenceDistribution& dist, double t);
double exact_cdf(const ReferenceDistribution& dist, double t);

/// n i.i.d. draws, deterministic for a fixed seed and independent of `threads`.
DeltaSample sample(const ReferenceDistribution& dist, std::size_t n, std::uint64_t seed,
                   unsigned threads = 1);

/// Exact law of the mean of n_batch i.i.d. copies. Normal and shifted gamma
/// are closed under averaging; mixtures throw UnsupportedFamily.
ReferenceDistribution batch_mean_law(const ReferenceDistribution& dist, std::uint64_t n_batch);

/// Exact law of mu + sqrt(n) (mean_n - mu): the batch mean rescaled to the
/// original mean and variance. Its skewness is gamma3 / sqrt(n), which is the
/// regime the one-term expansion with n_eff = n describes.
ReferenceDistribution standardized_batch_law(const ReferenceDistribution& dist,
                                             std::uint64_t n_batch);

enum class DistanceKind { Euclidean, SquaredEuclidean };

std::string_view to_string(DistanceKind kind) noexcept;
/// "euclidean" or "squared-euclidean".
DistanceKind parse_distance(std::string_view text);

struct ClusterTripletConfig {
  std::size_t dimension = 8;
  double center_separation = 2.0;
  double within_sigma = 1.0;
  DistanceKind distance = DistanceKind::Euclidean;
  std::size_t n_triplets = 100000;
  std::uint64_t seed = 42;
};

/// Anchors and positives from N(0, s^2 I); negatives from N(c, s^2 I) with
/// |c| = center_separation along the first axis. Returns
/// Delta_i = d(a_i, n_i) - d(a_i, p_i).
DeltaSample simulate_triplets(const ClusterTripletConfig& config, unsigned threads = 1);

}  // namespace edgeworth
