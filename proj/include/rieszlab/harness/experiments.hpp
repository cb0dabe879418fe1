// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "rieszlab/grid.hpp"
#include "rieszlab/harness/config.hpp"
#include "rieszlab/harness/report.hpp"

namespace rieszlab::harness {

const std::vector<std::string>& experiment_names();

// Dispatches by subcommand name; throws InputError for unknown names.
ExperimentResult run_experiment(const std::string& name, const Config& c);

ExperimentResult run_conditions(const Config& c);
ExperimentResult run_pointwise(const Config& c);
ExperimentResult run_bound(const Config& c);
ExperimentResult run_representation(const Config& c);
ExperimentResult run_embedding(const Config& c);
ExperimentResult run_mushroom(const Config& c);
ExperimentResult run_sharpness(const Config& c);
ExperimentResult run_potential(const Config& c);
ExperimentResult run_maximal(const Config& c);

// Hypothesis checks for the configured phi, H, p, n, embedded in every report.
Json prechecks(const Config& c, std::vector<std::string>& warnings);

// Parameter block shared by all reports.
Json parameter_block(const Config& c);

// Scaling family f_A = A^(n/p) chi_B(0, 2/A) on the sharpness grid, with the
// potentials computed once so several Orlicz functions can be evaluated.
struct SharpnessLadder {
  std::vector<double> A;
  std::vector<double> norm;    // ||f_A||_p on the grid
  std::vector<GridField> potential;
  double cellvol = 0.0;
};
SharpnessLadder sharpness_ladder(const Config& c);
std::vector<double> sharpness_J(const SharpnessLadder& ladder, const orlicz::OrliczFunction& H);

}  // namespace rieszlab::harness
