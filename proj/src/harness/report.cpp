// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "rieszlab/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "rieszlab/error.hpp"

namespace rieszlab::harness {

Json jnum(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header.size()) throw std::logic_error("CSV row width does not match header of " + file);
  rows.push_back(std::move(row));
}

std::string CsvTable::render() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

double spread(std::span<const double> values) {
  if (values.empty()) return 1.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*hi == 0.0) return 1.0;
  if (*lo <= 0.0) return std::numeric_limits<double>::infinity();
  return *hi / *lo;
}

std::string classify_series(std::span<const double> values, double bounded_ratio, double trend_ratio) {
  if (values.empty() || std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; })) {
    return "vacuous";
  }
  const std::size_t n = values.size();
  if (n >= 4) {
    bool increasing = true;
    for (std::size_t i = n - 3; i < n; ++i) increasing = increasing && values[i] > values[i - 1];
    if (increasing && values.front() > 0.0 && values.back() / values.front() >= trend_ratio) {
      return "unbounded-trend";
    }
  }
  if (spread(values) < bounded_ratio) return "bounded";
  return "inconclusive";
}

void write_outputs(const std::filesystem::path& dir, const ExperimentResult& result) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir.string() + ": " + ec.message());
  auto write = [&dir](const std::string& name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw InputError("cannot write " + (dir / name).string());
    out << text;
  };
  write("report.json", result.report.dump(2) + "\n");
  for (const auto& t : result.tables) write(t.file, t.render());
}

int verdict_exit_code(const ExperimentResult& result, const std::optional<std::string>& expect) {
  if (!result.checks_pass) return 1;
  if (expect && *expect != result.verdict) return 1;
  return 0;
}

}  // namespace rieszlab::harness
