#include "infoflow/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace infoflow::cli {
namespace {

bool needs_quotes(const std::string& cell) { return cell.find_first_of(",\"\n") != std::string::npos; }

void write_cell(std::ostream& out, const std::string& cell) {
  if (!needs_quotes(cell)) {
    out << cell;
    return;
  }
  out << '"';
  for (char c : cell) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

void write_row(std::ostream& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    write_cell(out, row[i]);
  }
  out << '\n';
}

std::vector<std::string> split_row(const std::string& line, std::size_t line_no) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"' && cell.empty()) {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  if (quoted) throw std::runtime_error("csv line " + std::to_string(line_no) + ": unterminated quote");
  cells.push_back(std::move(cell));
  return cells;
}

}  // namespace

std::string format_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("non-finite value cannot be written");
  if (x == 0.0) return "0";  // also folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& cell) {
  double x = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), x);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    throw std::runtime_error("not a number: '" + cell + "'");
  }
  return x;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  for (const auto& m : table.metadata) out << "# " << m << '\n';
  write_row(out, table.header);
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw std::logic_error("csv row width differs from header");
    write_row(out, row);
  }
}

std::string to_csv(const CsvTable& table) {
  std::ostringstream out;
  write_csv(out, table);
  return out.str();
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find('\r') != std::string::npos) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": CR line ending");
    }
    if (!have_header && line.rfind("# ", 0) == 0) {
      table.metadata.push_back(line.substr(2));
      continue;
    }
    auto cells = split_row(line, line_no);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected " +
                               std::to_string(table.header.size()) + " fields");
    }
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) throw std::runtime_error("csv: missing header row");
  return table;
}

CsvTable parse_csv(const std::string& text) {
  std::istringstream in(text);
  return read_csv(in);
}

}  // namespace infoflow::cli
