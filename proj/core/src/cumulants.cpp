#include "edgeworth/cumulants.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "edgeworth/error.hpp"

namespace edgeworth {

void MomentAccumulator::add(double x) noexcept {
  const auto n1 = static_cast<double>(n_);
  ++n_;
  const auto n = static_cast<double>(n_);
  const double delta = x - mean_;
  const double delta_n = delta / n;
  const double term1 = delta * delta_n * n1;
  mean_ += delta_n;
  m3_ += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2_;
  m2_ += term1;
}

void MomentAccumulator::add(std::span<const double> xs) noexcept {
  for (double x : xs) add(x);
}

void MomentAccumulator::merge(const MomentAccumulator& other) noexcept {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const auto na = static_cast<double>(n_);
  const auto nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  const double delta2 = delta * delta;

  const double m3 = m3_ + other.m3_ + delta * delta2 * na * nb * (na - nb) / (n * n) +
                    3.0 * delta * (na * other.m2_ - nb * m2_) / n;
  const double m2 = m2_ + other.m2_ + delta2 * na * nb / n;

  mean_ += delta * nb / n;
  m2_ = m2;
  m3_ = m3;
  n_ += other.n_;
}

double MomentAccumulator::k2() const noexcept {
  const auto n = static_cast<double>(n_);
  return m2_ / (n - 1.0);
}

double MomentAccumulator::k3() const noexcept {
  const auto n = static_cast<double>(n_);
  return n * m3_ / ((n - 1.0) * (n - 2.0));
}

namespace {

void check_values(std::span<const double> values) {
  if (values.size() < kMinCumulantSamples) {
    throw Error(ErrorKind::InsufficientSample,
                "cumulant estimation needs at least 4 values, got " +
                    std::to_string(values.size()));
  }
  const auto bad = std::find_if(values.begin(), values.end(),
                                [](double v) { return !std::isfinite(v); });
  if (bad != values.end()) {
    throw Error(ErrorKind::Domain,
                "non-finite value at index " +
                    std::to_string(std::distance(values.begin(), bad)));
  }
}

CumulantSummary summarize(const MomentAccumulator& acc, std::span<const double> values) {
  // An all-equal sample can leave m2 at a few ulps above zero; check directly.
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi || !(acc.m2_sum() > 0.0)) {
    throw Error(ErrorKind::ZeroVariance, "sample has zero variance");
  }
  CumulantSummary s;
  s.mean = acc.mean();
  s.variance = acc.k2();
  s.kappa3 = acc.k3();
  s.skewness = s.kappa3 / std::pow(s.variance, 1.5);
  s.n_samples = acc.count();
  return s;
}

}  // namespace

CumulantSummary estimate_cumulants(const DeltaSample& sample) {
  return estimate_cumulants(sample.values, 1, 1);
}

CumulantSummary estimate_cumulants(std::span<const double> values, std::size_t chunks,
                                   unsigned threads) {
  check_values(values);
  chunks = std::clamp<std::size_t>(chunks, 1, values.size());

  std::vector<MomentAccumulator> partial(chunks);
  const std::size_t base = values.size() / chunks;
  const std::size_t extra = values.size() % chunks;
  auto chunk_span = [&](std::size_t c) {
    const std::size_t begin = c * base + std::min(c, extra);
    const std::size_t len = base + (c < extra ? 1 : 0);
    return values.subspan(begin, len);
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
  if (threads == 1) {
    for (std::size_t c = 0; c < chunks; ++c) partial[c].add(chunk_span(c));
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t c = t; c < chunks; c += threads) partial[c].add(chunk_span(c));
      });
    }
  }

  MomentAccumulator total;
  for (const auto& p : partial) total.merge(p);
  return summarize(total, values);
}

double standardize(double x, const CumulantSummary& summary) {
  if (!(summary.variance > 0.0)) {
    throw Error(ErrorKind::ZeroVariance, "standardize: variance must be positive");
  }
  return (x - summary.mean) / std::sqrt(summary.variance);
}

double unstandardize(double z, const CumulantSummary& summary) {
  if (!(summary.variance > 0.0)) {
    throw Error(ErrorKind::ZeroVariance, "unstandardize: variance must be positive");
  }
  return summary.mean + z * std::sqrt(summary.variance);
}

}  // namespace edgeworth
