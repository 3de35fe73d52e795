#include "edgeworth/distributions.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "edgeworth/error.hpp"
#include "edgeworth/random.hpp"
#include "edgeworth/special_math.hpp"

namespace edgeworth {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::Domain, what);
}

bool finite_all(std::initializer_list<double> xs) {
  for (double x : xs) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

struct MixtureMoments {
  double mean;
  double kappa2;
  double kappa3;
};

MixtureMoments mixture_moments(const NormalMixtureLaw& m) {
  const double w1 = m.weight;
  const double w2 = 1.0 - m.weight;
  const double mean = w1 * m.mean1 + w2 * m.mean2;
  const double d1 = m.mean1 - mean;
  const double d2 = m.mean2 - mean;
  const double s1 = m.sigma1 * m.sigma1;
  const double s2 = m.sigma2 * m.sigma2;
  return {mean, w1 * (s1 + d1 * d1) + w2 * (s2 + d2 * d2),
          w1 * d1 * (d1 * d1 + 3.0 * s1) + w2 * d2 * (d2 * d2 + 3.0 * s2)};
}

}  // namespace

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::Normal: return "normal";
    case Family::ShiftedGamma: return "gamma";
    case Family::NormalMixture: return "mixture";
  }
  return "unknown";
}

ReferenceDistribution ReferenceDistribution::normal(double mean, double sigma) {
  require(finite_all({mean, sigma}), "normal: parameters must be finite");
  require(sigma > 0.0, "normal: sigma must be positive");
  return ReferenceDistribution(NormalLaw{mean, sigma});
}

ReferenceDistribution ReferenceDistribution::shifted_gamma(double shape, double scale,
                                                           double shift) {
  require(finite_all({shape, scale, shift}), "gamma: parameters must be finite");
  require(shape > 0.0, "gamma: shape must be positive");
  require(scale > 0.0, "gamma: scale must be positive");
  return ReferenceDistribution(ShiftedGammaLaw{shape, scale, shift});
}

ReferenceDistribution ReferenceDistribution::normal_mixture(double weight, double mean1,
                                                            double sigma1, double mean2,
                                                            double sigma2) {
  require(finite_all({weight, mean1, sigma1, mean2, sigma2}),
          "mixture: parameters must be finite");
  require(weight > 0.0 && weight < 1.0, "mixture: weight must lie in (0, 1)");
  require(sigma1 > 0.0 && sigma2 > 0.0, "mixture: component sigmas must be positive");
  return ReferenceDistribution(NormalMixtureLaw{weight, mean1, sigma1, mean2, sigma2});
}

Family ReferenceDistribution::family() const noexcept {
  return static_cast<Family>(law_.index());
}

double ReferenceDistribution::mean() const noexcept {
  return std::visit(overloaded{
                        [](const NormalLaw& n) { return n.mean; },
                        [](const ShiftedGammaLaw& g) { return g.shift + g.shape * g.scale; },
                        [](const NormalMixtureLaw& m) { return mixture_moments(m).mean; },
                    },
                    law_);
}

double ReferenceDistribution::variance() const noexcept {
  return std::visit(overloaded{
                        [](const NormalLaw& n) { return n.sigma * n.sigma; },
                        [](const ShiftedGammaLaw& g) { return g.shape * g.scale * g.scale; },
                        [](const NormalMixtureLaw& m) { return mixture_moments(m).kappa2; },
                    },
                    law_);
}

double ReferenceDistribution::kappa3() const noexcept {
  return std::visit(overloaded{
                        [](const NormalLaw&) { return 0.0; },
                        [](const ShiftedGammaLaw& g) {
                          return 2.0 * g.shape * g.scale * g.scale * g.scale;
                        },
                        [](const NormalMixtureLaw& m) { return mixture_moments(m).kappa3; },
                    },
                    law_);
}

double ReferenceDistribution::skewness() const noexcept {
  if (const auto* g = std::get_if<ShiftedGammaLaw>(&law_)) return 2.0 / std::sqrt(g->shape);
  return kappa3() / std::pow(variance(), 1.5);
}

std::string ReferenceDistribution::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const NormalLaw& n) {
                   os << "Normal(mean=" << n.mean << ", sigma=" << n.sigma << ")";
                 },
                 [&](const ShiftedGammaLaw& g) {
                   os << "ShiftedGamma(shape=" << g.shape << ", scale=" << g.scale
                      << ", shift=" << g.shift << ")";
                 },
                 [&](const NormalMixtureLaw& m) {
                   os << "NormalMixture(w=" << m.weight << ", mean1=" << m.mean1
                      << ", sigma1=" << m.sigma1 << ", mean2=" << m.mean2
                      << ", sigma2=" << m.sigma2 << ")";
                 },
             },
             law_);
  return os.str();
}

double exact_density(const ReferenceDistribution& dist, double t) {
  require(std::isfinite(t), "exact_density: argument must be finite");
  return std::visit(
      overloaded{
          [t](const NormalLaw& n) { return normal_pdf((t - n.mean) / n.sigma) / n.sigma; },
          [t](const ShiftedGammaLaw& g) {
            const double x = (t - g.shift) / g.scale;
            if (x < 0.0) return 0.0;
            if (x == 0.0) {
              if (g.shape == 1.0) return 1.0 / g.scale;
              return g.shape > 1.0 ? 0.0 : HUGE_VAL;
            }
            return boost::math::gamma_p_derivative(g.shape, x) / g.scale;
          },
          [t](const NormalMixtureLaw& m) {
            return m.weight * normal_pdf((t - m.mean1) / m.sigma1) / m.sigma1 +
                   (1.0 - m.weight) * normal_pdf((t - m.mean2) / m.sigma2) / m.sigma2;
          },
      },
      dist.law());
}

double exact_cdf(const ReferenceDistribution& dist, double t) {
  require(std::isfinite(t), "exact_cdf: argument must be finite");
  return std::visit(
      overloaded{
          [t](const NormalLaw& n) { return normal_cdf((t - n.mean) / n.sigma); },
          [t](const ShiftedGammaLaw& g) {
            const double x = (t - g.shift) / g.scale;
            return x <= 0.0 ? 0.0 : boost::math::gamma_p(g.shape, x);
          },
          [t](const NormalMixtureLaw& m) {
            return m.weight * normal_cdf((t - m.mean1) / m.sigma1) +
                   (1.0 - m.weight) * normal_cdf((t - m.mean2) / m.sigma2);
          },
      },
      dist.law());
}

DeltaSample sample(const ReferenceDistribution& dist, std::size_t n, std::uint64_t seed,
                   unsigned threads) {
  if (n < 1) throw Error(ErrorKind::InsufficientSample, "sample: n must be at least 1");
  DeltaSample out;
  out.values.resize(n);
  out.source_tag = dist.describe();
  out.seed = seed;

  for_each_chunk(n, threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto engine = make_stream(seed, chunk);
    std::visit(overloaded{
                   [&](const NormalLaw& law) {
                     std::normal_distribution<double> draw(law.mean, law.sigma);
                     for (std::size_t i = begin; i < end; ++i) out.values[i] = draw(engine);
                   },
                   [&](const ShiftedGammaLaw& law) {
                     std::gamma_distribution<double> draw(law.shape, law.scale);
                     for (std::size_t i = begin; i < end; ++i)
                       out.values[i] = law.shift + draw(engine);
                   },
                   [&](const NormalMixtureLaw& law) {
                     std::bernoulli_distribution first(law.weight);
                     std::normal_distribution<double> unit;
                     for (std::size_t i = begin; i < end; ++i) {
                       const bool c1 = first(engine);
                       const double z = unit(engine);
                       out.values[i] = c1 ? law.mean1 + law.sigma1 * z : law.mean2 + law.sigma2 * z;
                     }
                   },
               },
               dist.law());
  });
  return out;
}

ReferenceDistribution batch_mean_law(const ReferenceDistribution& dist, std::uint64_t n_batch) {
  require(n_batch >= 1, "batch_mean_law: batch size must be at least 1");
  const auto n = static_cast<double>(n_batch);
  return std::visit(
      overloaded{
          [n](const NormalLaw& law) {
            return ReferenceDistribution::normal(law.mean, law.sigma / std::sqrt(n));
          },
          [n](const ShiftedGammaLaw& law) {
            return ReferenceDistribution::shifted_gamma(n * law.shape, law.scale / n, law.shift);
          },
          [](const NormalMixtureLaw&) -> ReferenceDistribution {
            throw Error(ErrorKind::UnsupportedFamily,
                        "batch mean of a normal mixture has no closed form");
          },
      },
      dist.law());
}

ReferenceDistribution standardized_batch_law(const ReferenceDistribution& dist,
                                             std::uint64_t n_batch) {
  require(n_batch >= 1, "standardized_batch_law: batch size must be at least 1");
  const auto n = static_cast<double>(n_batch);
  const double root_n = std::sqrt(n);
  return std::visit(
      overloaded{
          [](const NormalLaw& law) { return ReferenceDistribution::normal(law.mean, law.sigma); },
          [&](const ShiftedGammaLaw& law) {
            // mu + sqrt(n)(shift + Gamma(nk, theta/n) - mu)
            //   = (mu - sqrt(n) k theta) + Gamma(nk, theta/sqrt(n)).
            const double mean = law.shift + law.shape * law.scale;
            return ReferenceDistribution::shifted_gamma(
                n * law.shape, law.scale / root_n, mean - root_n * law.shape * law.scale);
          },
          [](const NormalMixtureLaw&) -> ReferenceDistribution {
            throw Error(ErrorKind::UnsupportedFamily,
                        "batch mean of a normal mixture has no closed form");
          },
      },
      dist.law());
}

std::string_view to_string(DistanceKind kind) noexcept {
  return kind == DistanceKind::Euclidean ? "euclidean" : "squared-euclidean";
}

DistanceKind parse_distance(std::string_view text) {
  if (text == "euclidean") return DistanceKind::Euclidean;
  if (text == "squared-euclidean" || text == "squared") return DistanceKind::SquaredEuclidean;
  throw Error(ErrorKind::Parse, "unknown distance '" + std::string(text) +
                                    "' (expected euclidean or squared-euclidean)");
}

DeltaSample simulate_triplets(const ClusterTripletConfig& config, unsigned threads) {
  require(config.dimension >= 1, "simulate: dimension must be at least 1");
  require(config.n_triplets >= kMinCumulantSamples, "simulate: need at least 4 triplets");
  require(std::isfinite(config.center_separation) && config.center_separation >= 0.0,
          "simulate: center separation must be finite and non-negative");
  require(std::isfinite(config.within_sigma) && config.within_sigma > 0.0,
          "simulate: within-cluster sigma must be positive");

  DeltaSample out;
  out.values.resize(config.n_triplets);
  out.seed = config.seed;
  {
    std::ostringstream tag;
    tag.precision(17);
    tag << "clusters(dimension=" << config.dimension
        << ", separation=" << config.center_separation << ", within_sigma=" << config.within_sigma
        << ", distance=" << to_string(config.distance) << ")";
    out.source_tag = tag.str();
  }

  const std::size_t d = config.dimension;
  for_each_chunk(config.n_triplets, threads,
                 [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                   auto engine = make_stream(config.seed, chunk);
                   std::normal_distribution<double> noise(0.0, config.within_sigma);
                   std::vector<double> anchor(d), positive(d), negative(d);
                   for (std::size_t i = begin; i < end; ++i) {
                     for (auto& x : anchor) x = noise(engine);
                     for (auto& x : positive) x = noise(engine);
                     for (auto& x : negative) x = noise(engine);
                     negative[0] += config.center_separation;

                     double to_neg = 0.0, to_pos = 0.0;
                     for (std::size_t k = 0; k < d; ++k) {
                       const double dn = anchor[k] - negative[k];
                       const double dp = anchor[k] - positive[k];
                       to_neg += dn * dn;
                       to_pos += dp * dp;
                     }
                     out.values[i] = config.distance == DistanceKind::Euclidean
                                         ? std::sqrt(to_neg) - std::sqrt(to_pos)
                                         : to_neg - to_pos;
                   }
                 });
  return out;
}

}  // namespace edgeworth
