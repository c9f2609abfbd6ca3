#include "wgscatter/csv.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace wgscatter {

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_meta(std::string key, std::string value) {
  meta_.emplace_back(std::move(key), std::move(value));
}

void CsvTable::add_meta(std::string key, double value) {
  meta_.emplace_back(std::move(key), format_double(value));
}

void CsvTable::add_row(std::vector<CsvCell> row) {
  if (row.size() != columns_.size())
    throw std::logic_error("CSV row width does not match the header");
  rows_.push_back(std::move(row));
}

std::string format_double(double v) {
  char buf[40];
  if (v == 0.0)
    v = 0.0; // no "-0"
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void CsvTable::write(std::ostream &out) const {
  for (const auto &[k, v] : meta_)
    out << "# " << k << " = " << v << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i)
    out << (i ? "," : "") << columns_[i];
  out << '\n';
  for (const auto &row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i)
        out << ',';
      std::visit(
          [&](const auto &cell) {
            using T = std::decay_t<decltype(cell)>;
            if constexpr (std::is_same_v<T, double>)
              out << format_double(cell);
            else
              out << cell;
          },
          row[i]);
    }
    out << '\n';
  }
}

void write_text(const std::string &path, const std::string &text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout)
      throw std::runtime_error("failed writing to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out)
    throw std::runtime_error("failed writing '" + path + "'");
}

} // namespace wgscatter
