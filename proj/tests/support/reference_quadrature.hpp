#pragma once

// Test-only composite Gauss-Legendre rule in long double. Shares nothing with
// the library's adaptive Simpson, so it can check both the closed forms and
// the library quadrature itself.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

namespace edgeworth::testing {

class GaussLegendre {
 public:
  explicit GaussLegendre(std::size_t order = 20) : nodes_(order), weights_(order) {
    const auto n = static_cast<long double>(order);
    for (std::size_t i = 0; i < order; ++i) {
      long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
      long double dp = 0.0L;
      for (int iter = 0; iter < 100; ++iter) {
        long double p0 = 1.0L, p1 = x;
        for (std::size_t k = 2; k <= order; ++k) {
          const long double pk = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0L);
        const long double step = p1 / dp;
        x -= step;
        if (std::fabs(step) < 1e-19L) break;
      }
      nodes_[i] = x;
      weights_[i] = 2.0L / ((1.0L - x * x) * dp * dp);
    }
  }

  template <typename F>
  long double integrate(F&& f, long double lo, long double hi, std::size_t panels = 64) const {
    long double total = 0.0L;
    const long double width = (hi - lo) / panels;
    for (std::size_t p = 0; p < panels; ++p) {
      const long double a = lo + width * p;
      const long double half = 0.5L * width;
      const long double mid = a + half;
      long double s = 0.0L;
      for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(mid + half * nodes_[i]);
      total += half * s;
    }
    return total;
  }

 private:
  std::vector<long double> nodes_;
  std::vector<long double> weights_;
};

inline long double reference_phi(long double z) {
  return std::exp(-0.5L * z * z) / std::sqrt(2.0L * std::numbers::pi_v<long double>);
}

}  // namespace edgeworth::testing
