// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

// Hypothesis checks on (phi, h, delta, H, p): the kernel control and doubling
// constants, the dyadic h-series, the compatibility sup, the Orlicz doubling
// constant and dyadic summability of H.

#include <cmath>
#include <optional>

#include "rieszlab/error.hpp"
#include "rieszlab/harness/experiments.hpp"
#include "rieszlab/kernels.hpp"
#include "rieszlab/simd/dispatch.hpp"

namespace rieszlab::harness {
namespace {

Json sup_json(const SupEstimate& s) {
  return Json{{"value", jnum(s.value)}, {"argmax", jnum(s.argmax)}, {"unbounded", s.unbounded}};
}

std::pair<double, double> alpha_beta(const KernelBlock& k) {
  if (k.family == "identity") return {1.0, 0.0};
  if (k.family == "power") return {k.alpha, 0.0};
  return {k.alpha, k.beta};
}

struct CompatResult {
  std::optional<kernels::SumCondition> value;
  std::string error;
};

CompatResult compatibility(const orlicz::OrliczFunction& H, const KernelBlock& k, int n, double p,
                           std::span<const double> grid) {
  CompatResult out;
  try {
    const auto phi = make_phi(k, n);
    out.value = kernels::sum_condition_sup(H, phi, make_h(k, n), kernels::DeltaMap::exponent(p, n), p, n, grid);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

Json compat_json(const CompatResult& r) {
  if (!r.value) return Json{{"error", r.error}};
  const auto& v = *r.value;
  return Json{{"sup", jnum(v.value)},   {"argmax", jnum(v.argmax)},       {"unbounded", v.unbounded},
              {"extensions", v.extensions}, {"t_lo", jnum(v.lo)}, {"t_hi", jnum(v.hi)}};
}

}  // namespace

Json parameter_block(const Config& c) {
  const auto [alpha, beta] = alpha_beta(c.kernel);
  Json seeds = Json::array();
  for (int s = 0; s < c.fields.random_count; ++s) seeds.push_back(c.seed + static_cast<std::uint64_t>(s));
  Json res = Json::array();
  for (int r : c.grid.resolutions) res.push_back(r);
  return Json{{"n", c.n},
              {"p", c.p},
              {"alpha", alpha},
              {"beta", beta},
              {"epsilon", c.orlicz.epsilon},
              {"delta_sharp", c.orlicz.delta_sharp},
              {"m", c.orlicz.m},
              {"phi", make_phi(c).describe()},
              {"H", make_H(c).describe()},
              {"delta_map", make_delta(c).describe()},
              {"h", c.kernel.h},
              {"domain", c.domain.type},
              {"singular_rule", potentials::rule_name(c.grid.singular_rule)},
              {"resolutions", res},
              {"seed", c.seed},
              {"random_seeds", seeds}};
}

Json prechecks(const Config& c, std::vector<std::string>& warnings) {
  const auto grid = log_grid(c.sweep.t_min, c.sweep.t_max, static_cast<std::size_t>(c.sweep.t_points));
  const auto phi = make_phi(c);
  const auto H = make_H(c);
  const auto [alpha, beta] = alpha_beta(c.kernel);
  Json out;

  out["phi_control"] = sup_json(kernels::varphi_control_estimate(phi, grid));
  out["phi_doubling"] = sup_json(kernels::phi_delta2_estimate(phi, grid));
  const auto hs = kernels::h_series(phi, c.n, 1.0, c.kernel.series_terms);
  out["h_series_at_1"] = Json{{"partial", jnum(hs.partial)},
                              {"tail_bound", jnum(hs.tail_bound)},
                              {"diverges", hs.diverges},
                              {"terms", hs.terms}};
  if (hs.diverges) warnings.push_back("the dyadic h-series diverges for this kernel");
  try {
    out["p_max"] = jnum(kernels::admissible_p_max(alpha, c.n));
    if (!(c.p < kernels::admissible_p_max(alpha, c.n))) {
      warnings.push_back("p is at or beyond the admissible frontier n/(n - alpha(n-1))");
    }
  } catch (const InputError& e) {
    out["p_max"] = nullptr;
    warnings.push_back(e.what());
  }
  const auto compat = compatibility(H, c.kernel, c.n, c.p, grid);
  out["compatibility"] = compat_json(compat);
  if (!compat.value) {
    warnings.push_back("compatibility sup could not be evaluated: " + compat.error);
  } else if (compat.value->unbounded) {
    warnings.push_back("compatibility sup H(h(delta)t + phi(delta)^(1-n) delta^(n(1-1/p)))/t^p appears unbounded");
  }
  try {
    out["orlicz_doubling"] = sup_json(orlicz::delta2_estimate(H, grid));
  } catch (const std::exception& e) {
    out["orlicz_doubling"] = Json{{"error", e.what()}};
  }
  const auto tail = orlicz::h_tail_summable(H);
  out["dyadic_tail"] = Json{{"partial", jnum(tail.partial)},
                            {"last_block", jnum(tail.last_block)},
                            {"converged", tail.converged}};
  if (c.p == 1.0 && !tail.converged) warnings.push_back("sum_j H(2^-j) does not appear to converge");
  const auto nf = orlicz::n_function_check(H, grid);
  Json failed = Json::array();
  for (std::size_t i = 0; i < nf.properties.size(); ++i) {
    if (!nf.properties[i].pass) failed.push_back(static_cast<int>(i + 1));
  }
  out["n_function"] = Json{{"all_pass", nf.all_pass()},
                           {"failed_properties", failed},
                           {"low_slope", jnum(nf.low_slope)},
                           {"high_slope", jnum(nf.high_slope)}};
  return out;
}

ExperimentResult run_conditions(const Config& c) {
  ExperimentResult res;
  res.experiment = "conditions";
  const auto grid = log_grid(c.sweep.t_min, c.sweep.t_max, static_cast<std::size_t>(c.sweep.t_points));
  const auto [alpha0, beta0] = alpha_beta(c.kernel);
  const auto alphas = c.sweep.alphas.empty() ? std::vector<double>{alpha0} : c.sweep.alphas;
  const auto betas = c.sweep.betas.empty() ? std::vector<double>{beta0} : c.sweep.betas;
  const auto ps = c.sweep.ps.empty() ? std::vector<double>{c.p} : c.sweep.ps;

  CsvTable table{"conditions.csv",
                 {"experiment", "n", "alpha", "beta", "p", "p_max", "c_phi", "phi_doubling", "h_series_t1",
                  "h_diverges", "compat_sup", "compat_unbounded", "orlicz_doubling", "dyadic_tail_converged",
                  "status"},
                 {}};
  CsvTable frontier{"frontier.csv", {"experiment", "n", "alpha", "beta", "p_max"}, {}};
  Json cells = Json::array();
  std::size_t evaluated = 0;
  bool flagged = false;

  for (double alpha : alphas) {
    for (double beta : betas) {
      KernelBlock k = c.kernel;
      k.preset.clear();
      k.hedberg_a.reset();
      k.family = (alpha == 1.0 && beta == 0.0) ? "identity" : (beta == 0.0 ? "power" : "power-over-log");
      k.alpha = alpha;
      k.beta = beta;
      if (k.h == "closed") k.h = "auto";
      const auto phi = make_phi(k, c.n);
      const auto cphi = kernels::varphi_control_estimate(phi, grid);
      const auto pd2 = kernels::phi_delta2_estimate(phi, grid);
      const auto hs = kernels::h_series(phi, c.n, 1.0, k.series_terms);
      std::optional<double> pmax;
      try {
        pmax = kernels::admissible_p_max(alpha, c.n);
      } catch (const InputError&) {
      }
      frontier.add({"conditions", std::to_string(c.n), fmt_num(alpha), fmt_num(beta),
                    pmax ? fmt_num(*pmax) : std::string("none")});
      for (double p : ps) {
        Json cell{{"alpha", alpha}, {"beta", beta}, {"p", p}, {"p_max", pmax ? jnum(*pmax) : Json(nullptr)}};
        cell["phi_control"] = sup_json(cphi);
        cell["phi_doubling"] = sup_json(pd2);
        cell["h_series_at_1"] = Json{{"partial", jnum(hs.partial)}, {"diverges", hs.diverges}, {"terms", hs.terms}};
        const bool below_frontier = pmax && p >= 1.0 && p < *pmax;
        std::string status = "inadmissible";
        std::string compat_sup = "";
        std::string compat_unb = "";
        std::string od = "";
        std::string tail_conv = "";
        bool cell_flag = hs.diverges;
        std::optional<orlicz::OrliczFunction> H;
        try {
          H = make_H(c.orlicz, k, c.n, p);
        } catch (const InputError& e) {
          cell["orlicz_error"] = e.what();
        }
        if (H) {
          cell["H"] = H->describe();
          try {
            const auto d2 = orlicz::delta2_estimate(*H, grid);
            cell["orlicz_doubling"] = sup_json(d2);
            od = d2.unbounded ? "unbounded" : fmt_num(d2.value);
          } catch (const std::exception& e) {
            cell["orlicz_doubling"] = Json{{"error", e.what()}};
            od = "error";
          }
          const auto tail = orlicz::h_tail_summable(*H);
          cell["dyadic_tail_converged"] = tail.converged;
          tail_conv = tail.converged ? "true" : "false";
          if (!hs.diverges && p >= 1.0) {
            const auto compat = compatibility(*H, k, c.n, p, grid);
            cell["compatibility"] = compat_json(compat);
            if (compat.value) {
              compat_sup = fmt_num(compat.value->value);
              compat_unb = compat.value->unbounded ? "true" : "false";
              cell_flag = cell_flag || compat.value->unbounded;
            } else {
              compat_sup = "error";
            }
          }
          ++evaluated;
        }
        if (below_frontier && !cell_flag && compat_unb == "false") status = "admissible";
        flagged = flagged || cell_flag;
        cell["status"] = status;
        cells.push_back(cell);
        table.add({"conditions", std::to_string(c.n), fmt_num(alpha), fmt_num(beta), fmt_num(p),
                   pmax ? fmt_num(*pmax) : std::string("none"), cphi.unbounded ? "unbounded" : fmt_num(cphi.value),
                   pd2.unbounded ? "unbounded" : fmt_num(pd2.value), fmt_num(hs.partial),
                   hs.diverges ? "true" : "false", compat_sup, compat_unb, od, tail_conv, status});
      }
    }
  }

  res.verdict = evaluated == 0 ? "vacuous" : (flagged ? "unbounded-trend" : "bounded");
  std::vector<std::string> warnings;
  res.report = Json{{"experiment", res.experiment}, {"parameters", parameter_block(c)}};
  res.report["prechecks"] = prechecks(c, warnings);
  res.report["cells"] = cells;
  res.report["verdict"] = res.verdict;
  res.report["expect"] = c.expect ? Json(*c.expect) : Json(nullptr);
  res.report["warnings"] = warnings;
  res.report["simd_isa"] = std::string(simd::isa_name(simd::active_isa()));
  res.tables = {table, frontier};
  return res;
}

}  // namespace rieszlab::harness
