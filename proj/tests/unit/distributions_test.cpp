#include "edgeworth/distributions.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "bootstrap.hpp"
#include "edgeworth/error.hpp"
#include "edgeworth/oracle.hpp"
#include "edgeworth/special_math.hpp"

namespace edgeworth {
namespace {

using testing::bootstrap_cumulant_se;
using testing::ks_critical;
using testing::ks_statistic;

TEST(ReferenceDistribution, ClosedFormCumulants) {
  const auto g = ReferenceDistribution::shifted_gamma(4.0, 1.5, -2.0);
  EXPECT_DOUBLE_EQ(g.mean(), -2.0 + 6.0);
  EXPECT_DOUBLE_EQ(g.variance(), 4.0 * 2.25);
  EXPECT_DOUBLE_EQ(g.kappa3(), 2.0 * 4.0 * 3.375);
  EXPECT_DOUBLE_EQ(g.skewness(), 1.0);

  const auto n = ReferenceDistribution::normal(1.0, 2.0);
  EXPECT_EQ(n.kappa3(), 0.0);
  EXPECT_EQ(n.skewness(), 0.0);

  // w = 0.3 of N(0,1) and 0.7 of N(2, 0.5^2): raw-moment composition by hand.
  const auto m = ReferenceDistribution::normal_mixture(0.3, 0.0, 1.0, 2.0, 0.5);
  const double e1 = 0.3 * 0.0 + 0.7 * 2.0;
  const double e2 = 0.3 * 1.0 + 0.7 * (4.0 + 0.25);
  const double e3 = 0.3 * 0.0 + 0.7 * (8.0 + 3.0 * 2.0 * 0.25);
  EXPECT_NEAR(m.mean(), e1, 1e-15);
  EXPECT_NEAR(m.variance(), e2 - e1 * e1, 1e-14);
  EXPECT_NEAR(m.kappa3(), e3 - 3.0 * e1 * e2 + 2.0 * e1 * e1 * e1, 1e-13);
}

TEST(ReferenceDistribution, RejectsInvalidParameters) {
  EXPECT_THROW(ReferenceDistribution::normal(0.0, 0.0), Error);
  EXPECT_THROW(ReferenceDistribution::shifted_gamma(0.0, 1.0), Error);
  EXPECT_THROW(ReferenceDistribution::shifted_gamma(1.0, -1.0), Error);
  EXPECT_THROW(ReferenceDistribution::normal_mixture(1.0, 0, 1, 0, 1), Error);
  EXPECT_THROW(ReferenceDistribution::normal_mixture(0.5, 0, 1, 0, 0), Error);
}

TEST(ExactDensity, Examples) {
  EXPECT_NEAR(exact_density(ReferenceDistribution::normal(0.0, 1.0), 0.0), 0.3989422804, 1e-10);
  const auto expo = ReferenceDistribution::shifted_gamma(1.0, 1.0, 0.0);
  EXPECT_NEAR(exact_density(expo, 1e-15), 1.0, 1e-14);
  EXPECT_EQ(exact_density(expo, -0.5), 0.0);
  EXPECT_EQ(exact_cdf(expo, -0.5), 0.0);

  const auto almost = ReferenceDistribution::normal_mixture(1.0 - 1e-12, 0.4, 1.3, 5.0, 0.2);
  const auto pure = ReferenceDistribution::normal(0.4, 1.3);
  for (double t : {-3.0, 0.0, 0.4, 2.0, 5.0}) {
    EXPECT_NEAR(exact_density(almost, t), exact_density(pure, t), 1e-11);
    EXPECT_NEAR(exact_cdf(almost, t), exact_cdf(pure, t), 1e-11);
  }
  EXPECT_NEAR(almost.mean(), 0.4, 1e-10);
  EXPECT_NEAR(almost.variance(), 1.69, 1e-10);
}

TEST(ExactDensity, IntegratesToOne) {
  const std::vector<ReferenceDistribution> laws{
      ReferenceDistribution::normal(-1.0, 0.3),
      ReferenceDistribution::shifted_gamma(4.0, 1.0, 0.0),
      ReferenceDistribution::shifted_gamma(100.0, 0.04, -2.0),
      ReferenceDistribution::normal_mixture(0.25, -1.0, 0.5, 2.0, 1.5),
  };
  for (const auto& d : laws) {
    // Truncate where the tail mass is below 1e-14.
    double lo = d.mean() - 10.0 * std::sqrt(d.variance());
    double hi = d.mean() + 10.0 * std::sqrt(d.variance());
    while (exact_cdf(d, lo) > 1e-14) lo -= std::sqrt(d.variance());
    while (1.0 - exact_cdf(d, hi) > 1e-14) hi += std::sqrt(d.variance());
    if (d.family() == Family::ShiftedGamma) {
      lo = std::max(lo, std::get<ShiftedGammaLaw>(d.law()).shift);
    }
    const double mass =
        quadrature([&](double t) { return exact_density(d, t); }, lo, hi, 1e-12).value;
    EXPECT_NEAR(mass, 1.0, 1e-9) << d.describe();
  }
}

TEST(Sample, DeterministicAndThreadIndependent) {
  const auto d = ReferenceDistribution::normal_mixture(0.4, -1.0, 1.0, 1.0, 0.5);
  const auto a = sample(d, 50000, 123);
  const auto b = sample(d, 50000, 123);
  const auto c = sample(d, 50000, 123, 4);
  const auto other = sample(d, 50000, 124);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.values, c.values);
  EXPECT_NE(a.values, other.values);
  EXPECT_EQ(a.seed, 123u);
  EXPECT_THROW(sample(d, 0, 1), Error);
}

TEST(Sample, GammaMeanAndNormalSkewness) {
  const auto g = sample(ReferenceDistribution::shifted_gamma(4.0, 1.0, 0.0), 1000000, 31);
  const auto sg = estimate_cumulants(g);
  EXPECT_LT(std::abs(sg.mean - 4.0), 3.0 * std::sqrt(4.0 / 1e6));

  const auto n = sample(ReferenceDistribution::normal(0.0, 1.0), 1000000, 32);
  EXPECT_LT(std::abs(estimate_cumulants(n).skewness), 3.0 * std::sqrt(6.0 / 1e6));
}

TEST(Sample, CumulantsMatchWithinBootstrapBands) {
  const std::vector<ReferenceDistribution> laws{
      ReferenceDistribution::normal(1.0, 2.0),
      ReferenceDistribution::shifted_gamma(4.0, 1.0, -1.0),
      ReferenceDistribution::normal_mixture(0.3, 0.0, 1.0, 2.0, 0.5),
  };
  std::uint64_t seed = 900;
  for (const auto& d : laws) {
    const auto s = sample(d, 1000000, seed++);
    const auto est = estimate_cumulants(s);
    const auto se = bootstrap_cumulant_se(s.values, 200, seed++);
    EXPECT_LT(std::abs(est.mean - d.mean()), 4.0 * se.mean) << d.describe();
    EXPECT_LT(std::abs(est.variance - d.variance()), 4.0 * se.variance) << d.describe();
    EXPECT_LT(std::abs(est.kappa3 - d.kappa3()), 4.0 * se.kappa3) << d.describe();
  }
}

TEST(BatchMeanLaw, Examples) {
  const auto n = batch_mean_law(ReferenceDistribution::normal(1.5, 2.0), 16);
  EXPECT_DOUBLE_EQ(std::get<NormalLaw>(n.law()).sigma, 0.5);
  EXPECT_DOUBLE_EQ(n.mean(), 1.5);

  const auto g = batch_mean_law(ReferenceDistribution::shifted_gamma(4.0, 1.0), 25);
  const auto& law = std::get<ShiftedGammaLaw>(g.law());
  EXPECT_DOUBLE_EQ(law.shape, 100.0);
  EXPECT_DOUBLE_EQ(law.scale, 1.0 / 25.0);
  EXPECT_DOUBLE_EQ(g.skewness(), 0.2);

  const auto base = ReferenceDistribution::shifted_gamma(2.5, 0.7, -1.0);
  const auto same = batch_mean_law(base, 1);
  EXPECT_EQ(same.describe(), base.describe());

  try {
    batch_mean_law(ReferenceDistribution::normal_mixture(0.5, 0, 1, 1, 1), 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedFamily);
  }
}

TEST(BatchMeanLaw, KolmogorovSmirnovAgainstSimulatedMeans) {
  const auto base = ReferenceDistribution::shifted_gamma(4.0, 1.0, -1.0);
  constexpr std::size_t batch = 10, batches = 100000;
  const auto draws = sample(base, batch * batches, 555);
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < batch; ++i) sum += draws.values[b * batch + i];
    means[b] = sum / batch;
  }
  const auto law = batch_mean_law(base, batch);
  const double d = ks_statistic(means, [&](double t) { return exact_cdf(law, t); });
  EXPECT_LT(d, ks_critical(1e-3, batches));

  // The rescaled law is the same draws mapped through mu + sqrt(n)(mean - mu).
  const auto rescaled = standardized_batch_law(base, batch);
  const double mu = base.mean();
  for (auto& m : means) m = mu + std::sqrt(double(batch)) * (m - mu);
  const double d2 = ks_statistic(means, [&](double t) { return exact_cdf(rescaled, t); });
  EXPECT_LT(d2, ks_critical(1e-3, batches));
}

TEST(StandardizedBatchLaw, KeepsMeanAndVarianceShrinksSkew) {
  const auto base = ReferenceDistribution::shifted_gamma(4.0, 1.0);
  for (std::uint64_t n : {1u, 4u, 32u, 128u}) {
    const auto law = standardized_batch_law(base, n);
    EXPECT_NEAR(law.mean(), 4.0, 1e-12);
    EXPECT_NEAR(law.variance(), 4.0, 1e-12);
    EXPECT_NEAR(law.skewness(), 1.0 / std::sqrt(double(n)), 1e-14);
  }
  const auto normal = ReferenceDistribution::normal(0.3, 0.9);
  EXPECT_EQ(standardized_batch_law(normal, 50).describe(), normal.describe());
  EXPECT_THROW(standardized_batch_law(ReferenceDistribution::normal_mixture(0.5, 0, 1, 1, 1), 2),
               Error);
}

TEST(SimulateTriplets, ExchangeableWhenClustersCoincide) {
  ClusterTripletConfig cfg;
  cfg.dimension = 8;
  cfg.center_separation = 0.0;
  cfg.n_triplets = 200000;
  cfg.seed = 8;
  const auto s = simulate_triplets(cfg);
  const auto est = estimate_cumulants(s);
  EXPECT_LT(std::abs(est.mean), 4.0 * std::sqrt(est.variance / cfg.n_triplets));
}

TEST(SimulateTriplets, FarSeparationMakesAllTripletsEasy) {
  ClusterTripletConfig cfg;
  cfg.dimension = 8;
  cfg.center_separation = 100.0;
  cfg.within_sigma = 1.0;
  cfg.n_triplets = 20000;
  const auto s = simulate_triplets(cfg);
  for (double v : s.values) ASSERT_GT(v, 0.0);
  EXPECT_EQ(mc_semi_hard_probability(s, 1.0).value, 0.0);
}

TEST(SimulateTriplets, SquaredDistanceIsMoreSkewed) {
  ClusterTripletConfig cfg;
  cfg.n_triplets = 200000;
  const auto euclid = estimate_cumulants(simulate_triplets(cfg));
  cfg.distance = DistanceKind::SquaredEuclidean;
  const auto squared = estimate_cumulants(simulate_triplets(cfg));
  EXPECT_GT(std::abs(squared.skewness), std::abs(euclid.skewness));
}

TEST(SimulateTriplets, DeterministicAndValidated) {
  ClusterTripletConfig cfg;
  cfg.n_triplets = 30000;
  cfg.seed = 99;
  EXPECT_EQ(simulate_triplets(cfg).values, simulate_triplets(cfg).values);
  EXPECT_EQ(simulate_triplets(cfg).values, simulate_triplets(cfg, 3).values);

  auto bad = cfg;
  bad.n_triplets = 3;
  EXPECT_THROW(simulate_triplets(bad), Error);
  bad = cfg;
  bad.dimension = 0;
  EXPECT_THROW(simulate_triplets(bad), Error);
  bad = cfg;
  bad.within_sigma = 0.0;
  EXPECT_THROW(simulate_triplets(bad), Error);
  EXPECT_EQ(parse_distance("squared-euclidean"), DistanceKind::SquaredEuclidean);
  EXPECT_THROW(parse_distance("manhattan"), Error);
}

}  // namespace
}  // namespace edgeworth
