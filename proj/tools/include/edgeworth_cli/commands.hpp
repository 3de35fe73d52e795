#pragma once

// Subcommands of the `edgeworth` tool. Each has a library entry point that
// returns a value (used by tests) and is wired into `run`, which handles
// argument parsing, output formats and exit codes:
//   0 success, 1 usage error, 2 data or domain error.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "edgeworth/distributions.hpp"
#include "edgeworth/expansion.hpp"
#include "edgeworth/oracle.hpp"
#include "edgeworth_cli/report.hpp"

namespace edgeworth::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

inline constexpr std::uint64_t kDefaultSeed = 42;
/// Margin used by `validate` when none is given: one sigma below the gamma
/// reference mean, where the O(1/N) remainder is cleanly visible.
inline constexpr double kDefaultValidateAlpha = 2.0;

std::string tool_version();

/// Invalid command-line input detected after parsing (exit code 1).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelParams {
  double mean = 0.0;
  double sigma = 1.0;
  double skewness = 0.0;
  Convention convention = Convention::CdfConsistent;
};

struct ExpandOptions {
  ModelParams model;
  std::vector<double> alphas;
  std::vector<std::uint64_t> n_grid;
  bool with_oracle = false;
  double tol = kDefaultQuadratureTolerance;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
  std::string model_source = "flags";
};

/// One row per (alpha, N). With `with_oracle`, oracle_value is the quadrature
/// of (alpha - t) density_expansion(t) over [0, alpha].
SweepReport expand(const ExpandOptions& options);

struct ValidateOptions {
  ReferenceDistribution reference = ReferenceDistribution::shifted_gamma(4.0, 1.0);
  double alpha = kDefaultValidateAlpha;
  std::vector<std::uint64_t> n_grid{4, 8, 16, 32, 64, 128};
  Convention convention = Convention::CdfConsistent;
  double tol = kDefaultQuadratureTolerance;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
};

struct ValidationResult {
  SweepReport report;
  std::optional<ScalingFit> fit;
  /// Why the fit is absent (e.g. errors at the quadrature floor).
  std::string fit_status;
};

/// For each N: exact loss by quadrature of the density of mu + sqrt(N)(mean_N - mu),
/// the two-term expansion with n_eff = N, and their absolute difference; then
/// a log-log fit of error against N.
ValidationResult validate(const ValidateOptions& options);

struct Recommendation {
  std::uint64_t batch_size = 0;
  double c_estimate = 0.0;
  std::string c_source;
  double loss_total = 0.0;
  bool correction_free = false;
};

Recommendation recommend(const EdgeworthModel& model, double alpha, double epsilon,
                         double c_estimate, std::string c_source);

/// Reads the C estimate recorded by `validate` (metadata key fit.c_estimate).
double c_estimate_from_report(const SweepReport& report);

/// Entry point; `args` excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace edgeworth::cli
