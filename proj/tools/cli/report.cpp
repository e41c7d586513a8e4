#include "cli/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <ostream>

#include "saddlegkb/error.hpp"

namespace saddlegkb::cli {

namespace {

std::string full_precision(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string display(const Table::Cell& c) {
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  if (std::holds_alternative<double>(c)) return format_number(std::get<double>(c));
  if (std::holds_alternative<std::size_t>(c)) return std::to_string(std::get<std::size_t>(c));
  return "-";
}

std::string csv_field(const Table::Cell& c) {
  if (std::holds_alternative<double>(c)) return full_precision(std::get<double>(c));
  if (std::holds_alternative<std::size_t>(c)) return std::to_string(std::get<std::size_t>(c));
  if (!std::holds_alternative<std::string>(c)) return {};
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

void Table::add_row(std::vector<Cell> row) {
  row.resize(columns_.size());
  rows_.push_back(std::move(row));
}

void Table::print(std::ostream& out) const {
  std::vector<std::size_t> width(columns_.size());
  for (std::size_t c = 0; c < columns_.size(); ++c) width[c] = columns_[c].size();
  for (const auto& row : rows_) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], display(row[c]).size());
  }
  auto line = [&](auto get) {
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      out << (c == 0 ? "" : "  ") << std::setw(static_cast<int>(width[c])) << get(c);
    }
    out << '\n';
  };
  line([&](std::size_t c) { return columns_[c]; });
  for (const auto& row : rows_) line([&](std::size_t c) { return display(row[c]); });
}

void Table::write(const std::filesystem::path& path, HistoryFormat format) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  if (format == HistoryFormat::Csv) {
    for (std::size_t c = 0; c < columns_.size(); ++c) out << (c ? "," : "") << columns_[c];
    out << '\n';
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_field(row[c]);
      out << '\n';
    }
  } else {
    auto doc = nlohmann::ordered_json::array();
    for (const auto& row : rows_) {
      nlohmann::ordered_json j;
      for (std::size_t c = 0; c < row.size(); ++c) {
        const auto& cell = row[c];
        if (std::holds_alternative<std::string>(cell)) {
          j[columns_[c]] = std::get<std::string>(cell);
        } else if (std::holds_alternative<double>(cell)) {
          j[columns_[c]] = std::get<double>(cell);
        } else if (std::holds_alternative<std::size_t>(cell)) {
          j[columns_[c]] = std::get<std::size_t>(cell);
        } else {
          j[columns_[c]] = nullptr;
        }
      }
      doc.push_back(std::move(j));
    }
    out << doc.dump(2) << '\n';
  }
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

}  // namespace saddlegkb::cli
