#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace edgeworth::cli {

struct SweepRow {
  double alpha = 0.0;
  std::uint64_t n_eff = 1;
  double leading = 0.0;
  double correction = 0.0;
  double total = 0.0;
  double p_sh = 0.0;
  double sensitivity = 0.0;
  std::optional<double> oracle_value;
  std::optional<double> abs_error;
};

/// Grid of expansion values with optional oracle columns. Metadata entries
/// are ordered key/value pairs written as `# key=value` lines.
struct SweepReport {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<SweepRow> rows;

  void add_metadata(std::string key, std::string value);
  const std::string* find_metadata(const std::string& key) const;
  /// Orders rows by (alpha, n_eff).
  void sort_rows();
};

inline constexpr const char* kSweepHeader =
    "alpha,n_eff,leading,correction,total,p_sh,sensitivity,oracle_value,abs_error";

/// Shortest-unambiguous is not used: every value is printed with 17
/// significant digits so re-parsing is exact.
std::string format_double(double value);
/// Strict parse of a whole token; throws edgeworth::Error(Parse) on failure.
double parse_double(const std::string& token);
std::uint64_t parse_count(const std::string& token);

void write_csv(const SweepReport& report, std::ostream& os);
SweepReport read_csv(std::istream& is);

void write_json(const SweepReport& report, std::ostream& os);

}  // namespace edgeworth::cli
