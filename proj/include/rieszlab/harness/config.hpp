// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rieszlab/domains.hpp"
#include "rieszlab/grid.hpp"
#include "rieszlab/kernels.hpp"
#include "rieszlab/orlicz.hpp"
#include "rieszlab/potentials.hpp"

namespace rieszlab::harness {

// Kernel block.  `preset` ("classical", "hedberg(a)", "log-john(alpha,beta)")
// overrides family/alpha/beta.
struct KernelBlock {
  std::string preset;
  std::string family = "identity";  // identity | power | power-over-log
  double alpha = 1.0;
  double beta = 0.0;
  std::string h = "auto";  // auto | closed | series
  int series_terms = 512;
  // Set by the hedberg/classical presets: phi = t^((n-a)/(n-1)).
  std::optional<double> hedberg_a;
};

struct OrliczBlock {
  // power | llogl | power-over-log | exp-minus-one | sharp-log | hedberg
  std::string family = "power";
  double exponent = 2.0;  // power
  double q = 2.0;         // power-over-log
  double gamma = 0.0;
  double m = std::numbers::e;
  double coefficient = 1.0;
  double epsilon = 0.0;      // sharp-log: q inflation
  double delta_sharp = 0.0;  // sharp-log: gamma deflation
};

struct DomainBlock {
  std::string type = "unit-cube";  // unit-cube | box | ball | mushroom
  Point center{};
  double radius = 1.0;
  Point lo{};
  Point hi{1.0, 1.0, 1.0};
  double r0 = 1.0;
  double ratio = 0.5;
  int first_index = 1;
  int count = 1;
};

struct GridBlock {
  std::vector<int> resolutions{64, 128};
  potentials::SingularRule singular_rule = potentials::SingularRule::ExcludeSelfCell;
  std::vector<double> radii;
};

struct FieldsBlock {
  // indicator | gaussian | random | trig | unit-ball | constant
  std::vector<std::string> families{"indicator", "gaussian", "random", "trig"};
  int random_count = 3;
  double value = 1.0;  // constant family
};

struct SweepBlock {
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<double> ps;
  double t_min = 1e-8;
  double t_max = 1e8;
  int t_points = 97;
  std::vector<double> deltas{0.25, 0.5, 1.0};
  std::vector<double> ladder{1.0, 2.0, 4.0, 8.0};
  std::vector<double> scales{1.0};
  int k_max = 30;
  int grid_k_max = 4;
  int grid_resolution = 512;
  std::vector<Point> points;
  std::optional<double> reference;
  double tolerance = 0.02;
  int pairs = 20;
  double drift = 0.25;
};

struct Config {
  int n = 2;
  double p = 1.5;
  std::uint64_t seed = 1;
  std::optional<std::string> expect;
  KernelBlock kernel;
  OrliczBlock orlicz;
  DomainBlock domain;
  GridBlock grid;
  FieldsBlock fields;
  SweepBlock sweep;
  nlohmann::ordered_json source;  // the config as given
};

// Throws InputError on malformed input or unknown keys.
Config parse_config(const nlohmann::json& j);
Config load_config(const std::filesystem::path& path);

// Resolved objects.
kernels::PhiKernel make_phi(const Config& c);
kernels::PhiKernel make_phi(const KernelBlock& k, int n);
orlicz::OrliczFunction make_H(const Config& c);
orlicz::OrliczFunction make_H(const OrliczBlock& o, const KernelBlock& k, int n, double p);
// h for condition (3): closed form when the kernel admits one, else the
// series value plus its tail bound.
ScalarMap make_h(const KernelBlock& k, int n);
kernels::DeltaMap make_delta(const Config& c);
DomainGeometry make_domain(const Config& c);
domains::MushroomSpec make_mushroom(const Config& c);
potentials::PotentialOptions make_potential_options(const Config& c);

// Exponents of the sharp Orlicz function for phi = t^alpha log^-beta:
// q = np / (alpha p (n-1) + n (1-p)) + eps, gamma = beta (n-1) - delta.
struct SharpExponents {
  double q;
  double gamma;
};
SharpExponents sharp_exponents(int n, double p, double alpha, double beta, double eps, double delta_sharp);

}  // namespace rieszlab::harness
