// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "rieszlab/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "rieszlab/error.hpp"

namespace rieszlab::harness {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw InputError(where + ": expected a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!ok.count(it.key())) throw InputError(where + ": unknown key '" + it.key() + "'");
  }
}

double num(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw InputError(where + "." + key + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw InputError(where + "." + key + ": must be finite");
  return d;
}

int integer(const json& obj, const char* key, int fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw InputError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

std::string str(const json& obj, const char* key, const std::string& fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw InputError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& obj, const char* key, std::vector<double> fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_array()) throw InputError(where + "." + key + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw InputError(where + "." + key + ": expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Point point(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() < 2 || v.size() > 3) throw InputError(where + ": expected 2 or 3 coordinates");
  Point p{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw InputError(where + ": coordinates must be numbers");
    p[i] = v[i].get<double>();
  }
  return p;
}

// "name(a, b)" -> arguments; empty when there are no parentheses.
std::vector<double> preset_args(const std::string& s, const std::string& name) {
  const auto open = s.find('(');
  if (open == std::string::npos) return {};
  if (s.back() != ')') throw InputError("kernel preset '" + s + "': missing ')'");
  std::vector<double> args;
  std::stringstream in(s.substr(open + 1, s.size() - open - 2));
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      args.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("kernel preset '" + name + "': bad argument '" + item + "'");
    }
  }
  return args;
}

void apply_preset(KernelBlock& k, int n) {
  if (k.preset.empty()) return;
  const std::string name = k.preset.substr(0, k.preset.find('('));
  const auto args = preset_args(k.preset, name);
  if (name == "classical") {
    if (!args.empty()) throw InputError("kernel preset 'classical' takes no arguments");
    k.family = "identity";
    k.alpha = 1.0;
    k.beta = 0.0;
    k.hedberg_a = 1.0;
  } else if (name == "hedberg") {
    if (args.size() != 1) throw InputError("kernel preset 'hedberg(a)' takes one argument");
    const double a = args[0];
    if (!(a > 0.0 && a <= 1.0)) throw InputError("kernel preset 'hedberg(a)': a must lie in (0, 1]");
    k.hedberg_a = a;
    k.alpha = (n - a) / (n - 1.0);
    k.beta = 0.0;
    k.family = a == 1.0 ? "identity" : "power";
  } else if (name == "log-john") {
    if (args.size() != 2) throw InputError("kernel preset 'log-john(alpha,beta)' takes two arguments");
    k.family = "power-over-log";
    k.alpha = args[0];
    k.beta = args[1];
  } else {
    throw InputError("unknown kernel preset '" + k.preset + "'");
  }
}

}  // namespace

SharpExponents sharp_exponents(int n, double p, double alpha, double beta, double eps, double delta_sharp) {
  const double denom = alpha * p * (n - 1) + n * (1.0 - p);
  if (!(denom > 0.0)) {
    throw InputError("sharp-log exponents: p is at or beyond the admissible frontier n/(n - alpha(n-1))");
  }
  return SharpExponents{n * p / denom + eps, beta * (n - 1) - delta_sharp};
}

Config parse_config(const json& j) {
  check_keys(j, "config", {"n", "p", "seed", "expect", "kernel", "orlicz", "domain", "grid", "fields", "sweep"});
  Config c;
  c.source = nlohmann::ordered_json::parse(j.dump());
  c.n = integer(j, "n", c.n, "config");
  if (c.n != 2 && c.n != 3) throw InputError("config.n must be 2 or 3");
  c.p = num(j, "p", c.p, "config");
  if (!(c.p >= 1.0 && c.p < c.n)) throw InputError("config.p must satisfy 1 <= p < n");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw InputError("config.seed: expected a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("expect")) c.expect = str(j, "expect", "", "config");

  if (j.contains("kernel")) {
    const auto& k = j["kernel"];
    check_keys(k, "kernel", {"preset", "family", "alpha", "beta", "h", "series_terms"});
    c.kernel.preset = str(k, "preset", "", "kernel");
    c.kernel.family = str(k, "family", c.kernel.family, "kernel");
    c.kernel.alpha = num(k, "alpha", c.kernel.alpha, "kernel");
    c.kernel.beta = num(k, "beta", c.kernel.beta, "kernel");
    c.kernel.h = str(k, "h", c.kernel.h, "kernel");
    c.kernel.series_terms = integer(k, "series_terms", c.kernel.series_terms, "kernel");
  }
  apply_preset(c.kernel, c.n);
  if (c.kernel.h != "auto" && c.kernel.h != "closed" && c.kernel.h != "series") {
    throw InputError("kernel.h must be auto, closed or series");
  }
  (void)make_phi(c.kernel, c.n);

  if (j.contains("orlicz")) {
    const auto& o = j["orlicz"];
    check_keys(o, "orlicz",
               {"family", "exponent", "q", "gamma", "m", "coefficient", "epsilon", "delta_sharp"});
    c.orlicz.family = str(o, "family", c.orlicz.family, "orlicz");
    c.orlicz.exponent = num(o, "exponent", c.orlicz.exponent, "orlicz");
    c.orlicz.q = num(o, "q", c.orlicz.q, "orlicz");
    c.orlicz.gamma = num(o, "gamma", c.orlicz.gamma, "orlicz");
    c.orlicz.m = num(o, "m", c.orlicz.m, "orlicz");
    c.orlicz.coefficient = num(o, "coefficient", c.orlicz.coefficient, "orlicz");
    c.orlicz.epsilon = num(o, "epsilon", c.orlicz.epsilon, "orlicz");
    c.orlicz.delta_sharp = num(o, "delta_sharp", c.orlicz.delta_sharp, "orlicz");
    if (c.orlicz.epsilon < 0.0 || c.orlicz.delta_sharp < 0.0) {
      throw InputError("orlicz.epsilon and orlicz.delta_sharp must be >= 0");
    }
  }
  (void)make_H(c);

  if (j.contains("domain")) {
    const auto& d = j["domain"];
    check_keys(d, "domain", {"type", "center", "radius", "lo", "hi", "r0", "ratio", "first_index", "count"});
    c.domain.type = str(d, "type", c.domain.type, "domain");
    if (d.contains("center")) c.domain.center = point(d["center"], "domain.center");
    c.domain.radius = num(d, "radius", c.domain.radius, "domain");
    if (d.contains("lo")) c.domain.lo = point(d["lo"], "domain.lo");
    if (d.contains("hi")) c.domain.hi = point(d["hi"], "domain.hi");
    c.domain.r0 = num(d, "r0", c.domain.r0, "domain");
    c.domain.ratio = num(d, "ratio", c.domain.ratio, "domain");
    c.domain.first_index = integer(d, "first_index", c.domain.first_index, "domain");
    c.domain.count = integer(d, "count", c.domain.count, "domain");
  }
  (void)make_domain(c);

  if (j.contains("grid")) {
    const auto& g = j["grid"];
    check_keys(g, "grid", {"resolutions", "singular_rule", "radii"});
    if (g.contains("resolutions")) {
      c.grid.resolutions.clear();
      for (double r : numbers(g, "resolutions", {}, "grid")) {
        if (r != std::floor(r) || r < 8 || r > 4096) throw InputError("grid.resolutions: integers in [8, 4096]");
        c.grid.resolutions.push_back(static_cast<int>(r));
      }
      if (c.grid.resolutions.empty()) throw InputError("grid.resolutions must not be empty");
    }
    const std::string rule = str(g, "singular_rule", "exclude-self-cell", "grid");
    if (rule == "exclude-self-cell") {
      c.grid.singular_rule = potentials::SingularRule::ExcludeSelfCell;
    } else if (rule == "cap-at-half-cell") {
      c.grid.singular_rule = potentials::SingularRule::CapAtHalfCell;
    } else {
      throw InputError("grid.singular_rule must be exclude-self-cell or cap-at-half-cell");
    }
    c.grid.radii = numbers(g, "radii", {}, "grid");
  }

  if (j.contains("fields")) {
    const auto& f = j["fields"];
    check_keys(f, "fields", {"families", "random_count", "value"});
    if (f.contains("families")) {
      if (!f["families"].is_array()) throw InputError("fields.families: expected an array of names");
      c.fields.families.clear();
      for (const auto& e : f["families"]) {
        if (!e.is_string()) throw InputError("fields.families: expected an array of names");
        const auto name = e.get<std::string>();
        static const std::set<std::string> known{"indicator", "gaussian", "random", "trig", "unit-ball", "constant"};
        if (!known.count(name)) throw InputError("fields.families: unknown family '" + name + "'");
        c.fields.families.push_back(name);
      }
    }
    c.fields.random_count = integer(f, "random_count", c.fields.random_count, "fields");
    if (c.fields.random_count < 0) throw InputError("fields.random_count must be >= 0");
    c.fields.value = num(f, "value", c.fields.value, "fields");
  }

  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    check_keys(s, "sweep",
               {"alphas", "betas", "ps", "t_min", "t_max", "t_points", "deltas", "ladder", "scales", "k_max",
                "grid_k_max", "grid_resolution", "points", "reference", "tolerance", "pairs", "drift"});
    auto& w = c.sweep;
    w.alphas = numbers(s, "alphas", w.alphas, "sweep");
    w.betas = numbers(s, "betas", w.betas, "sweep");
    w.ps = numbers(s, "ps", w.ps, "sweep");
    w.t_min = num(s, "t_min", w.t_min, "sweep");
    w.t_max = num(s, "t_max", w.t_max, "sweep");
    w.t_points = integer(s, "t_points", w.t_points, "sweep");
    w.deltas = numbers(s, "deltas", w.deltas, "sweep");
    w.ladder = numbers(s, "ladder", w.ladder, "sweep");
    w.scales = numbers(s, "scales", w.scales, "sweep");
    w.k_max = integer(s, "k_max", w.k_max, "sweep");
    w.grid_k_max = integer(s, "grid_k_max", w.grid_k_max, "sweep");
    w.grid_resolution = integer(s, "grid_resolution", w.grid_resolution, "sweep");
    if (s.contains("points")) {
      if (!s["points"].is_array()) throw InputError("sweep.points: expected an array of points");
      for (const auto& e : s["points"]) w.points.push_back(point(e, "sweep.points"));
    }
    if (s.contains("reference")) w.reference = num(s, "reference", 0.0, "sweep");
    w.tolerance = num(s, "tolerance", w.tolerance, "sweep");
    w.pairs = integer(s, "pairs", w.pairs, "sweep");
    w.drift = num(s, "drift", w.drift, "sweep");
    if (!(w.t_min > 0.0 && w.t_max > w.t_min) || w.t_points < 3) throw InputError("sweep: bad t range");
    if (w.ladder.empty() || w.scales.empty()) throw InputError("sweep: ladder and scales must not be empty");
    for (double a : w.ladder) {
      if (!(a > 0.0)) throw InputError("sweep.ladder: entries must be positive");
    }
    for (double a : w.scales) {
      if (!(a > 0.0)) throw InputError("sweep.scales: entries must be positive");
    }
    for (double d : w.deltas) {
      if (!(d > 0.0)) throw InputError("sweep.deltas: entries must be positive");
    }
    if (w.k_max < 2 || w.grid_k_max < 0 || w.grid_resolution < 8 || w.pairs < 0 || !(w.drift > 0.0)) {
      throw InputError("sweep: k_max >= 2, grid_k_max >= 0, grid_resolution >= 8, pairs >= 0, drift > 0");
    }
  }
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

kernels::PhiKernel make_phi(const KernelBlock& k, int) {
  if (k.family == "identity") return kernels::PhiKernel::identity();
  if (k.family == "power") return kernels::PhiKernel::power(k.alpha);
  if (k.family == "power-over-log") return kernels::PhiKernel::power_over_log(k.alpha, k.beta);
  throw InputError("kernel.family must be identity, power or power-over-log");
}

kernels::PhiKernel make_phi(const Config& c) { return make_phi(c.kernel, c.n); }

namespace {

std::pair<double, double> kernel_alpha_beta(const KernelBlock& k) {
  if (k.family == "identity") return {1.0, 0.0};
  if (k.family == "power") return {k.alpha, 0.0};
  return {k.alpha, k.beta};
}

}  // namespace

orlicz::OrliczFunction make_H(const OrliczBlock& o, const KernelBlock& k, int n, double p) {
  using orlicz::OrliczFunction;
  if (o.family == "power") return OrliczFunction(orlicz::Power{o.exponent}, o.coefficient);
  if (o.family == "llogl") return OrliczFunction(orlicz::LLogL{}, o.coefficient);
  if (o.family == "exp-minus-one") return OrliczFunction(orlicz::ExpMinusOne{}, o.coefficient);
  if (o.family == "power-over-log") return OrliczFunction(orlicz::PowerOverLog{o.q, o.gamma, o.m}, o.coefficient);
  if (o.family == "sharp-log") {
    const auto [alpha, beta] = kernel_alpha_beta(k);
    const auto e = sharp_exponents(n, p, alpha, beta, o.epsilon, o.delta_sharp);
    return OrliczFunction(orlicz::PowerOverLog{e.q, e.gamma, o.m}, o.coefficient);
  }
  if (o.family == "hedberg") {
    double a = 0.0;
    if (k.hedberg_a) {
      a = *k.hedberg_a;
    } else if (k.family == "identity" || k.family == "power") {
      a = n - kernel_alpha_beta(k).first * (n - 1);
    } else {
      throw InputError("orlicz.family 'hedberg' needs a pure power kernel");
    }
    if (!(a > 0.0) || !(a * p < n)) throw InputError("orlicz.family 'hedberg' needs 0 < a and a p < n");
    const double expo = n * p / (n - a * p);
    return OrliczFunction(orlicz::Power{expo}, o.coefficient * (n - a * p) / (n * p));
  }
  throw InputError("orlicz.family must be power, llogl, power-over-log, exp-minus-one, sharp-log or hedberg");
}

orlicz::OrliczFunction make_H(const Config& c) { return make_H(c.orlicz, c.kernel, c.n, c.p); }

ScalarMap make_h(const KernelBlock& k, int n) {
  const auto [alpha, beta] = kernel_alpha_beta(k);
  const bool closed_ok = alpha >= 1.0 && alpha * (n - 1) < n;
  if (k.h == "closed" || (k.h == "auto" && closed_ok)) {
    if (!closed_ok) throw InputError("kernel.h = closed needs alpha in [1, 1 + 1/(n-1))");
    return [alpha, beta, n](double t) { return kernels::closed_form_h(alpha, beta, n, t); };
  }
  const auto phi = make_phi(k, n);
  const int K = k.series_terms;
  return [phi, n, K](double t) {
    const auto s = kernels::h_series(phi, n, t, K);
    return s.partial + s.tail_bound;
  };
}

kernels::DeltaMap make_delta(const Config& c) { return kernels::DeltaMap::exponent(c.p, c.n); }

domains::MushroomSpec make_mushroom(const Config& c) {
  domains::MushroomSpec s;
  s.dim = c.n;
  s.phi = make_phi(c);
  s.radii = domains::RadiusSequence{c.domain.r0, c.domain.ratio};
  s.first_index = c.domain.first_index;
  s.count = c.domain.count;
  return s;
}

DomainGeometry make_domain(const Config& c) {
  const auto& d = c.domain;
  if (d.type == "unit-cube") return domains::unit_cube(c.n);
  if (d.type == "box") return domains::box_domain(c.n, Box{d.lo, d.hi});
  if (d.type == "ball") return domains::ball_domain(c.n, d.center, d.radius);
  if (d.type == "mushroom") return domains::mushroom_build(make_mushroom(c));
  throw InputError("domain.type must be unit-cube, box, ball or mushroom");
}

potentials::PotentialOptions make_potential_options(const Config& c) {
  potentials::PotentialOptions o;
  o.singular_rule = c.grid.singular_rule;
  o.radii = c.grid.radii;
  return o;
}

}  // namespace rieszlab::harness
