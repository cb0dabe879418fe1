// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

// Helpers shared by the experiment drivers.

#pragma once

#include <string>
#include <vector>

#include "rieszlab/error.hpp"
#include "rieszlab/harness/experiments.hpp"
#include "rieszlab/simd/dispatch.hpp"

namespace rieszlab::harness::detail {

struct RefinementSummary {
  std::string verdict;
  std::vector<double> drift;  // per scale: max/min over resolutions
  std::vector<double> trend;  // finest resolution, per scale
};

// S[i][j]: sup-type constant at resolution i and field scale j.
inline RefinementSummary refinement_verdict(const std::vector<std::vector<double>>& S, double drift_tol) {
  RefinementSummary out;
  bool any = false;
  for (const auto& row : S) {
    for (double v : row) any = any || v != 0.0;
  }
  if (S.empty() || !any) {
    out.verdict = "vacuous";
    return out;
  }
  out.trend = S.back();
  for (std::size_t j = 0; j < S.front().size(); ++j) {
    std::vector<double> col;
    for (const auto& row : S) col.push_back(row[j]);
    out.drift.push_back(spread(col));
  }
  if (out.trend.size() >= 4 && classify_series(out.trend, 2.0, 2.0) == "unbounded-trend") {
    out.verdict = "unbounded-trend";
    return out;
  }
  bool stable = true;
  for (double d : out.drift) stable = stable && d < 1.0 + drift_tol;
  if (out.trend.size() >= 2) stable = stable && spread(out.trend) < 2.0;
  out.verdict = stable ? "bounded" : "inconclusive";
  return out;
}

inline Json summary_json(const RefinementSummary& s) {
  Json drift = Json::array();
  for (double d : s.drift) drift.push_back(jnum(d));
  Json trend = Json::array();
  for (double t : s.trend) trend.push_back(jnum(t));
  return Json{{"drift_per_scale", drift}, {"finest_by_scale", trend}};
}

// Common report envelope: parameters, hypothesis checks, verdict.
inline void finish(const Config& c, ExperimentResult& res, Json body, std::vector<std::string> warnings = {},
                   std::vector<std::string> notes = {}) {
  Json r{{"experiment", res.experiment}, {"parameters", parameter_block(c)}};
  r["prechecks"] = prechecks(c, warnings);
  for (auto it = body.begin(); it != body.end(); ++it) r[it.key()] = it.value();
  r["verdict"] = res.verdict;
  r["checks_pass"] = res.checks_pass;
  r["expect"] = c.expect ? Json(*c.expect) : Json(nullptr);
  r["warnings"] = warnings;
  r["notes"] = notes;
  r["simd_isa"] = std::string(simd::isa_name(simd::active_isa()));
  res.report = std::move(r);
}

inline void require_refinement(const Config& c, const char* what) {
  if (c.grid.resolutions.size() < 2) {
    throw InputError(std::string(what) + ": grid.resolutions needs at least two entries");
  }
}

}  // namespace rieszlab::harness::detail
