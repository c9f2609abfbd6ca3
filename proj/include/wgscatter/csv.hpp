#pragma once

// Comma-separated output with '#'-prefixed metadata lines. Doubles are
// written with 17 significant digits so every value round-trips.

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace wgscatter {

using CsvCell = std::variant<double, long long, std::string>;

class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_meta(std::string key, std::string value);
  void add_meta(std::string key, double value);
  void add_row(std::vector<CsvCell> row);

  [[nodiscard]] const std::vector<std::string> &columns() const { return columns_; }
  [[nodiscard]] std::size_t rows() const { return rows_.size(); }

  void write(std::ostream &out) const;

private:
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::string> columns_;
  std::vector<std::vector<CsvCell>> rows_;
};

std::string format_double(double v);

/// Writes to path, or to stdout when path is empty. Throws std::runtime_error
/// on I/O failure.
void write_text(const std::string &path, const std::string &text);

} // namespace wgscatter
