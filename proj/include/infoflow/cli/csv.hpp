#pragma once

// CSV documents: optional "# " metadata lines, a header row, data rows.
// UTF-8, LF line endings, no trailing delimiter. Numbers are written as the
// shortest decimal that reads back to the same double.

#include <iosfwd>
#include <string>
#include <vector>

namespace infoflow::cli {

struct CsvTable {
  std::vector<std::string> metadata;  // without the leading "# "
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Shortest round-trip decimal. Throws std::domain_error for NaN or infinity.
std::string format_double(double x);

/// Parses a cell written by format_double.
double parse_double(const std::string& cell);

void write_csv(std::ostream& out, const CsvTable& table);
std::string to_csv(const CsvTable& table);

/// Inverse of write_csv. Throws std::runtime_error on CR characters, ragged
/// rows or a missing header.
CsvTable read_csv(std::istream& in);
CsvTable parse_csv(const std::string& text);

}  // namespace infoflow::cli
