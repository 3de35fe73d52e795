#include "edgeworth_cli/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <tuple>

#include "edgeworth/error.hpp"

namespace edgeworth::cli {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string{};
}

std::optional<double> parse_optional(const std::string& token) {
  if (token.empty()) return std::nullopt;
  return parse_double(token);
}

}  // namespace

void SweepReport::add_metadata(std::string key, std::string value) {
  metadata.emplace_back(std::move(key), std::move(value));
}

const std::string* SweepReport::find_metadata(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return &v;
  }
  return nullptr;
}

void SweepReport::sort_rows() {
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.alpha, a.n_eff) < std::tie(b.alpha, b.n_eff);
  });
}

std::string format_double(double value) {
  if (value == 0.0) value = 0.0;  // no "-0" in reports
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

double parse_double(const std::string& token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last || first == last) {
    throw Error(ErrorKind::Parse, "cannot parse '" + token + "' as a number");
  }
  return value;
}

std::uint64_t parse_count(const std::string& token) {
  std::uint64_t value = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size() || token.empty()) {
    throw Error(ErrorKind::Parse, "cannot parse '" + token + "' as a count");
  }
  return value;
}

void write_csv(const SweepReport& report, std::ostream& os) {
  for (const auto& [key, value] : report.metadata) os << "# " << key << '=' << value << '\n';
  os << kSweepHeader << '\n';
  for (const auto& r : report.rows) {
    os << format_double(r.alpha) << ',' << r.n_eff << ',' << format_double(r.leading) << ','
       << format_double(r.correction) << ',' << format_double(r.total) << ','
       << format_double(r.p_sh) << ',' << format_double(r.sensitivity) << ','
       << format_optional(r.oracle_value) << ',' << format_optional(r.abs_error) << '\n';
  }
}

SweepReport read_csv(std::istream& is) {
  SweepReport report;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto where = [&] { return "report line " + std::to_string(line_no) + ": "; };
    if (line.front() == '#') {
      if (header_seen) throw Error(ErrorKind::Parse, where() + "metadata after header");
      const auto body = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
      const auto eq = body.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::Parse, where() + "metadata needs key=value");
      report.add_metadata(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    if (!header_seen) {
      if (line != kSweepHeader) throw Error(ErrorKind::Parse, where() + "unexpected header");
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 9) {
      throw Error(ErrorKind::Parse, where() + "expected 9 fields, got " + std::to_string(f.size()));
    }
    try {
      SweepRow r;
      r.alpha = parse_double(f[0]);
      r.n_eff = parse_count(f[1]);
      r.leading = parse_double(f[2]);
      r.correction = parse_double(f[3]);
      r.total = parse_double(f[4]);
      r.p_sh = parse_double(f[5]);
      r.sensitivity = parse_double(f[6]);
      r.oracle_value = parse_optional(f[7]);
      r.abs_error = parse_optional(f[8]);
      if (r.oracle_value.has_value() != r.abs_error.has_value()) {
        throw Error(ErrorKind::Parse, "abs_error must be present exactly when oracle_value is");
      }
      report.rows.push_back(r);
    } catch (const Error& e) {
      throw Error(ErrorKind::Parse, where() + e.what());
    }
  }
  if (!header_seen) throw Error(ErrorKind::Parse, "report has no header row");
  return report;
}

void write_json(const SweepReport& report, std::ostream& os) {
  nlohmann::ordered_json doc;
  doc["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.metadata) doc["metadata"][key] = value;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["alpha"] = r.alpha;
    row["n_eff"] = r.n_eff;
    row["leading"] = r.leading;
    row["correction"] = r.correction;
    row["total"] = r.total;
    row["p_sh"] = r.p_sh;
    row["sensitivity"] = r.sensitivity;
    row["oracle_value"] = r.oracle_value ? nlohmann::ordered_json(*r.oracle_value) : nullptr;
    row["abs_error"] = r.abs_error ? nlohmann::ordered_json(*r.abs_error) : nullptr;
    doc["rows"].push_back(std::move(row));
  }
  os << doc.dump(2) << '\n';
}

}  // namespace edgeworth::cli
