#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "saddlegkb/io.hpp"

namespace saddlegkb::cli {

// Result table printed for humans and written as CSV or JSON.
class Table {
 public:
  using Cell = std::variant<std::monostate, std::string, double, std::size_t>;

  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row);
  void print(std::ostream& out) const;
  void write(const std::filesystem::path& path, HistoryFormat format) const;

  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

std::string format_number(double v);

}  // namespace saddlegkb::cli
