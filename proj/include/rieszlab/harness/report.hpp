// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace rieszlab::harness {

using Json = nlohmann::ordered_json;

// Numbers for reports: non-finite values become the strings "inf", "-inf",
// "nan" (JSON has no literal for them).
Json jnum(double v);
// Shortest round-trip decimal, "%.17g".
std::string fmt_num(double v);

struct CsvTable {
  std::string file;  // e.g. "series.csv"
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::string render() const;
};

struct ExperimentResult {
  std::string experiment;
  std::string verdict;
  bool checks_pass = true;  // internal cross-checks (invariance, identities)
  Json report;
  std::vector<CsvTable> tables;
};

// vacuous: no data or all zero.  unbounded-trend: at least 4 values, the last
// 4 strictly increasing, and last/first >= trend_ratio.  bounded: max/min <
// bounded_ratio.  Anything else is inconclusive.
std::string classify_series(std::span<const double> values, double bounded_ratio, double trend_ratio);

// max/min over the series (inf if some entry is 0 and another is not).
double spread(std::span<const double> values);

void write_outputs(const std::filesystem::path& dir, const ExperimentResult& result);

// 0 when the verdict matches `expect` (or no expectation is set) and the
// internal checks passed, 1 otherwise.
int verdict_exit_code(const ExperimentResult& result, const std::optional<std::string>& expect);

}  // namespace rieszlab::harness
