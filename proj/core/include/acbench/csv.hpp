#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace acbench {

/// Quotes a field when it contains a comma, quote or line break.
std::string csv_escape(std::string_view field);

/// Splits one CSV record, honouring double-quoted fields with "" escapes.
std::vector<std::string> parse_csv_line(std::string_view line);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws FormatError if absent.
  std::size_t column(std::string_view name) const;
};

/// Reads a headed CSV file. Blank lines and lines starting with '#' are
/// skipped. Throws FormatError on ragged rows.
CsvTable read_csv(std::istream& in, const std::string& name = "<stream>");
CsvTable read_csv(const std::filesystem::path& path);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

/// Shortest round-trip decimal representation.
std::string format_exact(double v);
/// Fixed number of decimals.
std::string format_fixed(double v, int decimals);

}  // namespace acbench
