#include "addbasis/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "addbasis/error.hpp"

namespace addbasis {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc{}) throw InputError("cannot format double");
  return std::string(buffer, end);
}

std::vector<double>& VerificationReport::add_column(const std::string& name) {
  columns.push_back({name, {}});
  columns.back().values.reserve(grid.size());
  return columns.back().values;
}

const std::vector<double>* VerificationReport::column(const std::string& name) const {
  for (const auto& c : columns) {
    if (c.name == name) return &c.values;
  }
  return nullptr;
}

namespace {

// JSON has no NaN or infinity; those become null.
nlohmann::json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json out;
  out["claim"] = report.claim;
  out["subject"] = report.subject;
  out["proxy"] = report.proxy;
  out["tolerance"] = number_or_null(report.tolerance);
  out["passed"] = report.passed;
  out["witness"] = report.witness ? number_or_null(*report.witness) : nlohmann::json(nullptr);
  if (!report.note.empty()) out["note"] = report.note;
  auto& grid = out["grid"] = nlohmann::json::array();
  for (double x : report.grid) grid.push_back(number_or_null(x));
  auto& values = out["values"] = nlohmann::json::object();
  for (const auto& c : report.columns) {
    auto& col = values[c.name] = nlohmann::json::array();
    for (double v : c.values) col.push_back(number_or_null(v));
  }
  return out;
}

void write_csv_rows(std::ostream& out, const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& columns) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  std::size_t rows = 0;
  for (const auto& c : columns) rows = std::max(rows, c.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out << ',';
      if (r < columns[i].size()) out << format_double(columns[i][r]);
    }
    out << '\n';
  }
}

void write_csv(std::ostream& out, const VerificationReport& report) {
  std::vector<std::string> header{"x"};
  std::vector<std::vector<double>> columns{report.grid};
  for (const auto& c : report.columns) {
    header.push_back(c.name);
    columns.push_back(c.values);
  }
  write_csv_rows(out, header, columns);
}

}  // namespace addbasis
