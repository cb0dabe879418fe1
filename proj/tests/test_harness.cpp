// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rieszlab/error.hpp"
#include "rieszlab/harness/config.hpp"
#include "rieszlab/harness/experiments.hpp"
#include "rieszlab/harness/families.hpp"
#include "rieszlab/harness/report.hpp"

using namespace rieszlab;
using namespace rieszlab::harness;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

Config cfg(const char* text) { return parse_config(json::parse(text)); }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rieszlab_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RIESZLAB_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config defaults") {
  const Config c = cfg("{}");
  CHECK(c.n == 2);
  CHECK(c.p == 1.5);
  CHECK(c.seed == 1);
  CHECK_FALSE(c.expect.has_value());
  CHECK(c.grid.resolutions == std::vector<int>{64, 128});
  CHECK(c.sweep.ladder == std::vector<double>{1, 2, 4, 8});
  CHECK(c.sweep.t_points == 97);
}

TEST_CASE("unknown keys are rejected at every level") {
  for (const char* text : {R"J({"bogus": 1})J", R"J({"kernel": {"alhpa": 1}})J", R"J({"orlicz": {"eps": 0.5}})J",
                           R"J({"domain": {"kind": "ball"}})J", R"J({"grid": {"res": [8]}})J",
                           R"J({"fields": {"family": ["random"]}})J", R"J({"sweep": {"ladders": [1, 2]}})J"}) {
    CAPTURE(text);
    CHECK_THROWS_AS(cfg(text), InputError);
  }
}

TEST_CASE("malformed values are rejected") {
  for (const char* text :
       {R"J({"n": 4})J", R"J({"n": 2, "p": 2})J", R"J({"p": 0.5})J", R"J({"seed": -3})J", R"J({"kernel": {"alpha": "x"}})J",
        R"J({"kernel": {"preset": "hedberg(2)"}})J", R"J({"kernel": {"preset": "log-john(1.2)"}})J",
        R"J({"kernel": {"preset": "warp(1)"}})J", R"J({"kernel": {"h": "guess"}})J", R"J({"grid": {"resolutions": [4]}})J",
        R"J({"grid": {"singular_rule": "drop"}})J", R"J({"fields": {"families": ["noise"]}})J",
        R"J({"orlicz": {"family": "sharp-log", "epsilon": -1}})J", R"J({"domain": {"type": "torus"}})J",
        R"J({"sweep": {"ladder": []}})J"}) {
    CAPTURE(text);
    CHECK_THROWS_AS(cfg(text), InputError);
  }
}

TEST_CASE("kernel presets") {
  SUBCASE("classical") {
    const Config c = cfg(R"J({"kernel": {"preset": "classical"}, "orlicz": {"family": "hedberg"}})J");
    CHECK(make_phi(c)(0.3) == 0.3);
    // H = (n - p) / (n p) t^(np/(n-p)) = 1/6 t^6 at n = 2, p = 1.5
    CHECK(make_H(c)(2.0) == doctest::Approx(64.0 / 6.0).epsilon(1e-14));
    CHECK(make_h(c.kernel, c.n)(0.7) == doctest::Approx(0.7).epsilon(1e-15));
  }
  SUBCASE("hedberg") {
    const Config c = cfg(R"J({"kernel": {"preset": "hedberg(0.5)"}, "orlicz": {"family": "hedberg"}})J");
    CHECK(make_phi(c)(4.0) == doctest::Approx(std::pow(4.0, 1.5)).epsilon(1e-14));
    const double expo = 2 * 1.5 / (2 - 0.75);
    CHECK(make_H(c)(2.0) == doctest::Approx((2 - 0.75) / 3.0 * std::pow(2.0, expo)).epsilon(1e-14));
  }
  SUBCASE("log-john with the sharp Orlicz exponents") {
    const Config c = cfg(R"J({"n": 2, "p": 1, "kernel": {"preset": "log-john(1.2,1)"}, "orlicz": {"family": "sharp-log"}})J");
    const auto e = sharp_exponents(2, 1.0, 1.2, 1.0, 0.0, 0.0);
    CHECK(e.q == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK(e.gamma == 1.0);
    const double t = 3.0;
    CHECK(make_H(c)(t) == doctest::Approx(std::pow(t / std::log(std::numbers::e + t), 5.0 / 3.0)).epsilon(1e-14));
    const auto inflated = sharp_exponents(2, 1.0, 1.2, 1.0, 0.5, 0.25);
    CHECK(inflated.q == doctest::Approx(5.0 / 3.0 + 0.5));
    CHECK(inflated.gamma == 0.75);
    // h: closed form when alpha is admissible, series otherwise
    CHECK(make_h(c.kernel, 2)(0.5) == doctest::Approx(kernels::closed_form_h(1.2, 1.0, 2, 0.5)));
  }
  SUBCASE("sharp-log exponents past the frontier") {
    CHECK_THROWS_AS(sharp_exponents(2, 2.5, 1.2, 0.0, 0.0, 0.0), InputError);
    CHECK(sharp_exponents(3, 1.5, 1.0, 0.0, 0.0, 0.0).q == doctest::Approx(3.0));
  }
}

TEST_CASE("series classification") {
  const std::vector<double> flat{1.0, 1.1, 1.05, 1.2};
  const std::vector<double> rising{1.0, 2.0, 4.0, 8.0};
  const std::vector<double> mild{1.0, 1.2, 1.5, 1.9};
  const std::vector<double> wobble{1.0, 5.0, 1.0, 5.0};
  const std::vector<double> zeros{0.0, 0.0};
  CHECK(classify_series(flat, 2.0, 2.0) == "bounded");
  CHECK(classify_series(rising, 2.0, 2.0) == "unbounded-trend");
  CHECK(classify_series(mild, 2.0, 2.0) == "bounded");
  CHECK(classify_series(mild, 1.5, 1.5) == "unbounded-trend");
  CHECK(classify_series(wobble, 2.0, 2.0) == "inconclusive");
  CHECK(classify_series(zeros, 2.0, 2.0) == "vacuous");
  CHECK(classify_series(std::vector<double>{}, 2.0, 2.0) == "vacuous");
  // three values are never enough for a trend
  CHECK(classify_series(std::vector<double>{1.0, 4.0, 16.0}, 2.0, 2.0) == "inconclusive");
  CHECK(spread(rising) == 8.0);
  CHECK(std::isinf(spread(std::vector<double>{0.0, 1.0})));
}

TEST_CASE("report helpers") {
  CHECK(fmt_num(0.1) == "0.10000000000000001");
  CHECK(jnum(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(jnum(2.5) == 2.5);
  CsvTable t{"x.csv", {"a", "b"}, {}};
  t.add({"1", "2"});
  CHECK(t.render() == "a,b\n1,2\n");
  CHECK_THROWS(t.add({"1"}));
  ExperimentResult r{"demo", "bounded", true, Json::object(), {}};
  CHECK(verdict_exit_code(r, std::nullopt) == 0);
  CHECK(verdict_exit_code(r, std::string("bounded")) == 0);
  CHECK(verdict_exit_code(r, std::string("unbounded-trend")) == 1);
  r.checks_pass = false;
  CHECK(verdict_exit_code(r, std::string("bounded")) == 1);
}

TEST_CASE("field families") {
  const Config c = cfg(R"J({"fields": {"families": ["indicator", "gaussian", "random", "trig"], "random_count": 2}})J");
  const auto dom = make_domain(c);
  const auto fam = density_family(c, dom);
  CHECK(fam.size() == 3 + 2 + 2 + 2);
  const auto d = discretize(dom, 32);
  for (const auto& spec : fam) {
    CAPTURE(spec.id);
    const auto f = sample_field(d, spec);
    double lo = 0.0;
    for (double v : f.values) lo = std::min(lo, v);
    CHECK(lo >= 0.0);
    CHECK(f.max_abs() > 0.0);
    // deterministic in the seed
    CHECK(sample_field(d, spec).values == f.values);
  }
  // concentration keeps the Lp norm for a member well inside the domain
  const auto ball = placement_ball(dom);
  FieldSpec bump{"bump", [&](const Point& x) {
                   const double r2 = std::pow(x[0] - ball.center[0], 2) + std::pow(x[1] - ball.center[1], 2);
                   return std::exp(-40 * r2);
                 }};
  const auto fine = discretize(dom, 256);
  const double n1 = lp_norm(sample_field(fine, bump, 1.0, 1.5, ball.center), 1.5);
  const double n2 = lp_norm(sample_field(fine, bump, 2.0, 1.5, ball.center), 1.5);
  CHECK(n2 == doctest::Approx(n1).epsilon(0.01));
  CHECK(smooth_family(dom).size() == 4);
}

TEST_CASE("zero fields are vacuous") {
  const Config c = cfg(R"J({"n": 2, "p": 1.5, "kernel": {"preset": "classical"}, "orlicz": {"family": "hedberg"},
      "grid": {"resolutions": [16, 24]}, "fields": {"families": ["constant"], "value": 0}})J");
  CHECK(run_pointwise(c).verdict == "vacuous");
  const auto b = run_bound(c);
  CHECK(b.verdict == "vacuous");
}

TEST_CASE("constant fields give zero oscillation") {
  const Config c = cfg(R"J({"n": 2, "p": 1.5, "kernel": {"preset": "classical"}, "orlicz": {"family": "hedberg"}})J");
  const auto dom = make_domain(c);
  const auto ball = *dom.reference_ball;
  const auto d = discretize(dom, 32);
  const auto u = GridField::sample(d, [](const Point&) { return 2.5; });
  const double uB = ball_average(u, ball.center, ball.radius);
  CHECK(uB == 2.5);
  const auto H = make_H(c);
  double integral = 0.0;
  for (double v : subtract_constant(u, uB).values) integral += H(std::abs(v));
  CHECK(integral == 0.0);
  CHECK(gradient_magnitude(u).max_abs() == 0.0);
}

TEST_CASE("conditions sweep rows") {
  const Config c = cfg(R"J({"n": 2, "p": 1.5, "kernel": {"preset": "log-john(1.2,1)"}, "orlicz": {"family": "sharp-log"},
      "sweep": {"alphas": [1, 1.2, 2], "betas": [0], "ps": [1.25, 1.5, 1.9, 2.2]}})J");
  const auto r = run_conditions(c);
  int classical_ok = 0;
  bool diverges_at_two = false;
  for (const auto& cell : r.report["cells"]) {
    const double alpha = cell["alpha"].get<double>();
    const double p = cell["p"].get<double>();
    if (alpha == 1.0 && p < 2.0) classical_ok += cell["status"] == "admissible";
    if (alpha == 1.0 && p > 2.0) CHECK(cell["status"] == "inadmissible");
    if (alpha == 1.2) CHECK(cell["p_max"].get<double>() == doctest::Approx(2.5));
    if (alpha == 2.0) {
      diverges_at_two = cell["h_series_at_1"]["diverges"].get<bool>();
      CHECK(cell["status"] == "inadmissible");
    }
  }
  CHECK(classical_ok == 3);
  CHECK(diverges_at_two);
  CHECK(r.verdict == "unbounded-trend");
}

TEST_CASE("sharpness rejects unresolved scales") {
  const Config c = cfg(R"J({"n": 2, "p": 1, "kernel": {"preset": "log-john(1.2,1)"}, "orlicz": {"family": "sharp-log"},
      "grid": {"resolutions": [32]}, "sweep": {"ladder": [1, 64]}})J");
  CHECK_THROWS_AS(sharpness_ladder(c), InputError);
}

TEST_CASE("reports embed prechecks and parameters") {
  const Config c = cfg(R"J({"n": 2, "p": 1.5, "kernel": {"preset": "classical"}, "orlicz": {"family": "hedberg"},
      "grid": {"resolutions": [16, 24]}})J");
  const auto r = run_pointwise(c);
  for (const char* key : {"phi_control", "phi_doubling", "h_series_at_1", "compatibility", "orlicz_doubling",
                          "dyadic_tail", "n_function"}) {
    CHECK(r.report["prechecks"].contains(key));
  }
  CHECK(r.report["parameters"]["n"] == 2);
  CHECK(r.report["parameters"]["m"].get<double>() == doctest::Approx(std::numbers::e));
  CHECK(r.report["experiment"] == "pointwise");
  CHECK_THROWS_AS(run_experiment("nonsense", c), InputError);
  CHECK(experiment_names().size() == 9);
}

TEST_CASE("command line exit codes") {
  const std::string configs = RIESZLAB_CONFIGS;
  const fs::path out = scratch("cli");
  CHECK(run_cli("conditions --config " + configs + "/conditions_sharp.json --out " + out.string()) == 0);
  CHECK(fs::exists(out / "report.json"));
  CHECK(fs::exists(out / "conditions.csv"));
  const auto report = json::parse(slurp(out / "report.json"));
  CHECK(report["verdict"] == "bounded");

  // same config, contradicting expectation
  json j = json::parse(slurp(configs + "/conditions_sharp.json"));
  j["expect"] = "unbounded-trend";
  const fs::path flipped = out / "flipped.json";
  std::ofstream(flipped) << j.dump();
  CHECK(run_cli("conditions --config " + flipped.string() + " --out " + (out / "b").string()) == 1);

  j["typo"] = 1;
  const fs::path typo = out / "typo.json";
  std::ofstream(typo) << j.dump();
  CHECK(run_cli("conditions --config " + typo.string() + " --out " + (out / "c").string()) == 2);

  const fs::path broken = out / "broken.json";
  std::ofstream(broken) << "{ not json";
  CHECK(run_cli("conditions --config " + broken.string() + " --out " + (out / "d").string()) == 2);
  CHECK(run_cli("conditions --config " + (out / "missing.json").string() + " --out " + (out / "e").string()) == 2);
  CHECK(run_cli("teleport --config " + flipped.string() + " --out " + (out / "f").string()) == 2);
  CHECK(run_cli("conditions --out " + (out / "g").string()) == 2);
  fs::remove_all(out);
}

TEST_CASE("command line output is byte identical across runs") {
  const std::string configs = RIESZLAB_CONFIGS;
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  const std::string cfgp = configs + "/maximal_identities.json";
  REQUIRE(run_cli("maximal --config " + cfgp + " --out " + a.string()) == 0);
  REQUIRE(run_cli("maximal --config " + cfgp + " --out " + b.string()) == 0);
  int files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    ++files;
  }
  CHECK(files >= 2);
  fs::remove_all(a);
  fs::remove_all(b);
}
