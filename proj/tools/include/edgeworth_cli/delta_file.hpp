#pragma once

#include <iosfwd>
#include <string>

#include "edgeworth/cumulants.hpp"

namespace edgeworth::cli {

/// One decimal value per line; blank lines and anything after '#' ignored.
/// Parse failures name the 1-based line number.
DeltaSample read_delta_file(const std::string& path);
DeltaSample read_delta_stream(std::istream& is, const std::string& source_tag);

/// Writes `# key=value` provenance lines, then one 17-digit value per line.
void write_delta_stream(const DeltaSample& sample, std::ostream& os);

}  // namespace edgeworth::cli
