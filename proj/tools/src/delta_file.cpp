#include "edgeworth_cli/delta_file.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "edgeworth/error.hpp"
#include "edgeworth_cli/report.hpp"

namespace edgeworth::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

DeltaSample read_delta_stream(std::istream& is, const std::string& source_tag) {
  DeltaSample sample;
  sample.source_tag = source_tag;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string token = trim(line);
    if (token.empty()) continue;
    try {
      sample.values.push_back(parse_double(token));
    } catch (const Error&) {
      throw Error(ErrorKind::Parse, source_tag + ":" + std::to_string(line_no) +
                                        ": cannot parse '" + token + "' as a number");
    }
  }
  return sample;
}

DeltaSample read_delta_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path + "' for reading");
  return read_delta_stream(in, path);
}

void write_delta_stream(const DeltaSample& sample, std::ostream& os) {
  os << "# source=" << sample.source_tag << '\n';
  if (sample.seed) os << "# seed=" << *sample.seed << '\n';
  os << "# n=" << sample.values.size() << '\n';
  for (double v : sample.values) os << format_double(v) << '\n';
}

}  // namespace edgeworth::cli
