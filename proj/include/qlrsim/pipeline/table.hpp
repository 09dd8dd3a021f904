#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qlrsim::pipeline {

/// Empty cells (std::monostate) are written as nothing between the commas.
using Cell = std::variant<std::monostate, std::string, double, std::int64_t, bool>;

/// 12 significant digits, shortest form; "nan"/"inf"/"-inf" for non-finite.
std::string format_number(double x);
std::string format_cell(const Cell& c);

/// One CSV artifact. Column names carry their unit as a suffix
/// (e.g. excitation_energy_hartree); unitless columns have none.
class Table {
 public:
  Table() = default;
  Table(std::string name, std::vector<std::string> columns);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  /// Throws std::invalid_argument if the row width differs from the header.
  void add(std::vector<Cell> row);
  /// Appends all rows of `other`, which must have the same columns.
  void append(const Table& other);
  /// Index of a column, throws std::out_of_range if absent.
  std::size_t column(const std::string& name) const;

  void write(std::ostream& out) const;
  void write_file(const std::string& path) const;

 private:
  std::string name_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// Parses a CSV written by Table::write back into strings (header first).
std::vector<std::vector<std::string>> read_csv(std::istream& in);

}  // namespace qlrsim::pipeline
