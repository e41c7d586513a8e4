#include <fstream>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "saddlegkb/error.hpp"
#include "saddlegkb/io.hpp"
#include "text.hpp"

namespace saddlegkb {

namespace {

constexpr const char* kCsvHeader = "k,zeta,xi,Xi,residual_proxy,true_error,ms";

std::string cell(const std::optional<double>& v) { return v ? text::format_17(*v) : std::string(); }

std::optional<double> read_cell(std::string_view s, std::size_t line, const char* column) {
  s = text::trim(s);
  if (s.empty()) return std::nullopt;
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  const auto v = text::parse_double(s);
  if (!v) throw ParseError(line, std::string("bad ") + column + " value '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto c = line.find(',', pos);
    out.push_back(line.substr(pos, c == std::string_view::npos ? std::string_view::npos : c - pos));
    if (c == std::string_view::npos) break;
    pos = c + 1;
  }
  return out;
}

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::optional<double> json_optional(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

HistoryFormat parse_history_format(std::string_view t) {
  if (t == "csv") return HistoryFormat::Csv;
  if (t == "json") return HistoryFormat::Json;
  throw Error(ErrorCode::InvalidConfig, "unknown format '" + std::string(t) + "' (csv or json)");
}

std::string_view to_string(HistoryFormat f) noexcept { return f == HistoryFormat::Csv ? "csv" : "json"; }

std::string_view extension(HistoryFormat f) noexcept { return f == HistoryFormat::Csv ? ".csv" : ".json"; }

void write_history(const ConvergenceHistory& h, std::ostream& out, HistoryFormat format) {
  if (format == HistoryFormat::Csv) {
    out << kCsvHeader << '\n';
    for (const auto& r : h.records) {
      out << r.k << ',' << text::format_17(r.zeta) << ',' << cell(r.xi) << ',' << cell(r.Xi) << ','
          << cell(r.residual_proxy) << ',' << cell(r.true_error) << ',' << text::format_17(r.ms) << '\n';
    }
    return;
  }
  nlohmann::ordered_json doc;
  auto records = nlohmann::ordered_json::array();
  for (const auto& r : h.records) {
    nlohmann::ordered_json j;
    j["k"] = r.k;
    j["zeta"] = r.zeta;
    j["xi"] = optional_json(r.xi);
    j["Xi"] = optional_json(r.Xi);
    j["residual_proxy"] = optional_json(r.residual_proxy);
    j["true_error"] = optional_json(r.true_error);
    j["ms"] = r.ms;
    records.push_back(std::move(j));
  }
  doc["records"] = std::move(records);
  if (h.stop_iteration) doc["stop_iteration"] = *h.stop_iteration;
  if (h.certified_iteration) doc["certified_iteration"] = *h.certified_iteration;
  out << doc.dump(2) << '\n';
}

void write_history(const ConvergenceHistory& h, const std::filesystem::path& path, HistoryFormat format) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  write_history(h, out, format);
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

ConvergenceHistory parse_history(std::istream& in, HistoryFormat format) {
  ConvergenceHistory h;
  if (format == HistoryFormat::Csv) {
    std::string line;
    std::size_t number = 0;
    if (!std::getline(in, line)) throw ParseError(1, "missing CSV header");
    ++number;
    if (text::trim(line) != kCsvHeader) throw ParseError(1, "unexpected CSV header");
    while (std::getline(in, line)) {
      ++number;
      if (text::trim(line).empty()) continue;
      const auto cells = split_commas(line);
      if (cells.size() != 7) throw ParseError(number, "expected 7 columns");
      IterationRecord r;
      const auto k = text::parse_int(text::trim(cells[0]));
      if (!k) throw ParseError(number, "bad k");
      r.k = *k;
      const auto zeta = read_cell(cells[1], number, "zeta");
      const auto ms = read_cell(cells[6], number, "ms");
      if (!zeta || !ms) throw ParseError(number, "zeta and ms are required");
      r.zeta = *zeta;
      r.xi = read_cell(cells[2], number, "xi");
      r.Xi = read_cell(cells[3], number, "Xi");
      r.residual_proxy = read_cell(cells[4], number, "residual_proxy");
      r.true_error = read_cell(cells[5], number, "true_error");
      r.ms = *ms;
      h.records.push_back(r);
    }
    return h;
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
    for (const auto& j : doc.at("records")) {
      IterationRecord r;
      r.k = j.at("k").get<std::size_t>();
      r.zeta = j.at("zeta").get<double>();
      r.xi = json_optional(j, "xi");
      r.Xi = json_optional(j, "Xi");
      r.residual_proxy = json_optional(j, "residual_proxy");
      r.true_error = json_optional(j, "true_error");
      r.ms = j.at("ms").get<double>();
      h.records.push_back(r);
    }
    if (doc.contains("stop_iteration")) h.stop_iteration = doc.at("stop_iteration").get<std::size_t>();
    if (doc.contains("certified_iteration")) {
      h.certified_iteration = doc.at("certified_iteration").get<std::size_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("history JSON: ") + e.what());
  }
  return h;
}

ConvergenceHistory read_history(const std::filesystem::path& path, HistoryFormat format) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for reading");
  try {
    return parse_history(in, format);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.reason(), path.string());
  }
}

}  // namespace saddlegkb
