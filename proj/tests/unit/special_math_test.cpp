#include "edgeworth/special_math.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "edgeworth/error.hpp"
#include "reference_quadrature.hpp"

namespace edgeworth {
namespace {

using testing::GaussLegendre;
using testing::reference_phi;

TEST(NormalPdf, KnownValues) {
  EXPECT_DOUBLE_EQ(normal_pdf(0.0), 0.3989422804014327);
  EXPECT_NEAR(normal_pdf(1.0), 0.24197072451914337, 1e-17);
  EXPECT_EQ(normal_pdf(-1.0), normal_pdf(1.0));
  EXPECT_GT(normal_pdf(30.0), 0.0);
}

TEST(NormalPdf, RejectsNonFinite) {
  EXPECT_THROW(normal_pdf(std::numeric_limits<double>::quiet_NaN()), Error);
  EXPECT_THROW(normal_pdf(std::numeric_limits<double>::infinity()), Error);
}

TEST(NormalCdf, KnownValues) {
  EXPECT_EQ(normal_cdf(0.0), 0.5);
  EXPECT_NEAR(normal_cdf(10.0), 1.0, 1e-15);
  // Value frozen from high-precision quadrature of phi over (-inf, 1].
  EXPECT_NEAR(normal_cdf(1.0), 0.8413447460685429, 1e-16);
  EXPECT_THROW(normal_cdf(-std::numeric_limits<double>::infinity()), Error);
}

TEST(NormalCdf, SymmetricAndMonotone) {
  double previous = 0.0;
  for (double z = -9.0; z <= 9.0; z += 0.01) {
    const double p = normal_cdf(z);
    EXPECT_GE(p, previous);
    EXPECT_NEAR(p + normal_cdf(-z), 1.0, 1e-15);
    previous = p;
  }
}

TEST(NormalCdf, MatchesReferenceQuadrature) {
  const GaussLegendre gl;
  for (double z : {-6.0, -2.5, -1.0, 0.3, 1.7, 4.0}) {
    const long double ref = gl.integrate(reference_phi, -40.0L, z, 256);
    EXPECT_NEAR(normal_cdf(z), static_cast<double>(ref), 1e-15) << "z=" << z;
  }
}

TEST(HermiteHe, LowOrders) {
  EXPECT_EQ(hermite_he(2, 0.0), -1.0);
  EXPECT_EQ(hermite_he(3, 0.0), 0.0);
  EXPECT_EQ(hermite_he(3, 2.0), 2.0);
  EXPECT_EQ(hermite_he(0, 5.0), 1.0);
  EXPECT_EQ(hermite_he(1, -3.0), -3.0);
  EXPECT_EQ(hermite_he(4, 1.0), -2.0);
}

TEST(HermiteHe, ThreeTermRecurrence) {
  // He_{n+1}(z) = z He_n(z) - n He_{n-1}(z)
  for (double z = -3.0; z <= 3.0; z += 0.25) {
    for (int n = 1; n < 4; ++n) {
      EXPECT_NEAR(hermite_he(n + 1, z), z * hermite_he(n, z) - n * hermite_he(n - 1, z), 1e-12);
    }
  }
}

TEST(HermiteHe, RejectsUnsupportedOrder) {
  try {
    hermite_he(5, 0.0);
    FAIL() << "expected throw";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedOrder);
  }
  EXPECT_THROW(hermite_he(-1, 0.0), Error);
}

TEST(Interval, Validates) {
  EXPECT_THROW(Interval(1.0, 0.0), Error);
  EXPECT_THROW(Interval(0.0, std::numeric_limits<double>::infinity()), Error);
  EXPECT_NO_THROW(Interval(2.0, 2.0));
}

TEST(GaussianIntervalMoment, FrozenExamples) {
  // Frozen from 40-digit quadrature.
  EXPECT_NEAR(gaussian_interval_moment(0, {-1.0, 1.0}), 0.6826894921370859, 1e-15);
  EXPECT_NEAR(gaussian_interval_moment(3, {0.0, 1.0}), 0.0719723872454353, 1e-15);
  for (double a : {0.1, 1.0, 3.7}) {
    EXPECT_NEAR(gaussian_interval_moment(1, {-a, a}), 0.0, 1e-17);
  }
}

TEST(GaussianIntervalMoment, ZeroOnDegenerateInterval) {
  for (int k = 0; k <= 4; ++k) EXPECT_EQ(gaussian_interval_moment(k, {0.7, 0.7}), 0.0);
}

TEST(GaussianIntervalMoment, RejectsHighOrder) {
  EXPECT_THROW(gaussian_interval_moment(5, {0.0, 1.0}), Error);
}

TEST(GaussianIntervalMoment, AgreesWithQuadratureOnRandomIntervals) {
  const GaussLegendre gl;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (int trial = 0; trial < 1000; ++trial) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    for (int k = 0; k <= 4; ++k) {
      const long double ref = gl.integrate(
          [k](long double z) { return std::pow(z, k) * reference_phi(z); }, a, b, 32);
      ASSERT_NEAR(gaussian_interval_moment(k, {a, b}), static_cast<double>(ref), 1e-12)
          << "k=" << k << " [" << a << ", " << b << "]";
    }
  }
}

TEST(GaussianIntervalMoment, Additive) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (int trial = 0; trial < 500; ++trial) {
    double p[3] = {u(rng), u(rng), u(rng)};
    std::sort(p, p + 3);
    for (int k = 0; k <= 4; ++k) {
      const double whole = gaussian_interval_moment(k, {p[0], p[2]});
      const double parts =
          gaussian_interval_moment(k, {p[0], p[1]}) + gaussian_interval_moment(k, {p[1], p[2]});
      EXPECT_NEAR(whole, parts, 1e-13);
    }
  }
}

TEST(GaussianIntervalMoment, ZerothMomentIsCdf) {
  for (double z = -10.0; z <= 10.0; z += 0.125) {
    EXPECT_NEAR(gaussian_interval_moment(0, {-30.0, z}), normal_cdf(z), 1e-14);
  }
}

TEST(GaussianIntervalMoment, AntiderivativeDifferentiates) {
  constexpr double h = 1e-5;
  for (double z = -5.0; z <= 5.0; z += 0.1) {
    for (int k = 0; k <= 4; ++k) {
      const double fd = (gaussian_moment_antiderivative(k, z + h) -
                         gaussian_moment_antiderivative(k, z - h)) /
                        (2.0 * h);
      EXPECT_NEAR(fd, std::pow(z, k) * normal_pdf(z), 1e-8) << "k=" << k << " z=" << z;
    }
  }
}

}  // namespace
}  // namespace edgeworth
