#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace edgeworth {

/// i.i.d. draws of the distance difference
///   Delta = d(f(x_a), f(x_n)) - d(f(x_a), f(x_p)).
struct DeltaSample {
  std::vector<double> values;
  std::string source_tag;
  std::optional<std::uint64_t> seed;
};

/// Estimated law of Delta: mean, unbiased k-statistics k2 and k3, and the
/// skewness k3 / k2^{3/2}.
struct CumulantSummary {
  double mean = 0.0;
  double variance = 0.0;
  double kappa3 = 0.0;
  double skewness = 0.0;
  std::size_t n_samples = 0;
};

inline constexpr std::size_t kMinCumulantSamples = 4;

/// Single-pass central-moment accumulator (Welford/Pébay update).
/// Partial accumulators over disjoint chunks merge into the same result up to
/// rounding, so estimation can be split across threads.
class MomentAccumulator {
 public:
  void add(double x) noexcept;
  void add(std::span<const double> xs) noexcept;
  void merge(const MomentAccumulator& other) noexcept;

  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Sum of squared / cubed deviations from the running mean.
  double m2_sum() const noexcept { return m2_; }
  double m3_sum() const noexcept { return m3_; }

  /// k2 = n/(n-1) m2 and k3 = n^2/((n-1)(n-2)) m3, m_j the central moments.
  double k2() const noexcept;
  double k3() const noexcept;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
};

/// Throws InsufficientSample (n < 4), Domain (non-finite value) or
/// ZeroVariance (all values equal).
CumulantSummary estimate_cumulants(const DeltaSample& sample);

/// Chunked estimation: the input is split into `chunks` contiguous pieces,
/// accumulated independently (in parallel when `threads` > 1) and merged in
/// chunk order.
CumulantSummary estimate_cumulants(std::span<const double> values,
                                   std::size_t chunks, unsigned threads = 1);

double standardize(double x, const CumulantSummary& summary);
double unstandardize(double z, const CumulantSummary& summary);

}  // namespace edgeworth
