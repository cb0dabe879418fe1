// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "rieszlab/harness/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "rieszlab/domains.hpp"
#include "rieszlab/error.hpp"
#include "rieszlab/harness/families.hpp"
#include "rieszlab/numeric.hpp"
#include "rieszlab/potentials.hpp"

namespace rieszlab::harness {

using detail::finish;
using detail::refinement_verdict;
using detail::summary_json;

namespace {

const char* kFdNote = "gradients are finite differences of fields smooth enough on the grid";

Discretization discretize_for(const Config& c, const DomainGeometry& dom, int res) {
  if (c.domain.type == "mushroom") return domains::mushroom_discretize(make_mushroom(c), res, c.domain.first_index);
  return discretize(dom, res);
}

Json point_json(const Point& x, int dim) {
  Json a = Json::array();
  for (int i = 0; i < dim; ++i) a.push_back(x[i]);
  return a;
}

std::vector<std::string> point_cells(const Point& x) {
  return {fmt_num(x[0]), fmt_num(x[1]), fmt_num(x[2])};
}

CsvTable field_table(const std::string& file, const std::string& experiment, const GridField& u) {
  CsvTable t{file, {"experiment", "index", "x1", "x2", "x3", "value"}, {}};
  for (std::size_t i = 0; i < u.grid.size(); ++i) {
    if (!u.mask[i]) continue;
    const Point x = u.grid.center(i);
    t.add({experiment, std::to_string(i), fmt_num(x[0]), fmt_num(x[1]), fmt_num(x[2]), fmt_num(u.values[i])});
  }
  return t;
}

struct PointSup {
  double value = 0.0;
  Point at{};
};

std::vector<FieldSpec> required_density(const Config& c, const DomainGeometry& dom) {
  auto fam = density_family(c, dom);
  if (fam.empty()) throw InputError("fields.families selects no field");
  return fam;
}

double grid_window_average(const GridField& f) {
  double acc = 0.0;
  for (double v : f.values) acc += std::fabs(v);
  return acc / static_cast<double>(f.grid.size());
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"conditions", "pointwise", "bound",     "representation", "embedding",
                                              "mushroom",   "sharpness", "potential", "maximal"};
  return names;
}

ExperimentResult run_experiment(const std::string& name, const Config& c) {
  if (name == "conditions") return run_conditions(c);
  if (name == "pointwise") return run_pointwise(c);
  if (name == "bound") return run_bound(c);
  if (name == "representation") return run_representation(c);
  if (name == "embedding") return run_embedding(c);
  if (name == "mushroom") return run_mushroom(c);
  if (name == "sharpness") return run_sharpness(c);
  if (name == "potential") return run_potential(c);
  if (name == "maximal") return run_maximal(c);
  throw InputError("unknown subcommand '" + name + "'");
}

ExperimentResult run_pointwise(const Config& c) {
  detail::require_refinement(c, "pointwise");
  ExperimentResult res;
  res.experiment = "pointwise";
  const auto dom = make_domain(c);
  const auto phi = make_phi(c);
  const auto H = make_H(c);
  const auto opts = make_potential_options(c);
  const auto family = required_density(c, dom);
  const Point center = placement_ball(dom).center;

  CsvTable t{"pointwise.csv",
             {"experiment", "resolution", "scale", "field", "sup_ratio", "argmax_x1", "argmax_x2", "argmax_x3"},
             {}};
  std::vector<std::vector<double>> S;
  Json rows = Json::array();
  std::vector<std::string> notes;
  for (int r : c.grid.resolutions) {
    const auto disc = discretize_for(c, dom, r);
    const potentials::RieszOperator op(disc.grid, phi, opts.singular_rule);
    std::vector<double> per_scale;
    for (double A : c.sweep.scales) {
      double best = 0.0;
      for (const auto& spec : family) {
        GridField f = sample_field(disc, spec, A, c.p, center);
        const double nrm = lp_norm(f, c.p);
        if (nrm == 0.0) {
          notes.push_back(spec.id + " vanishes on the grid at resolution " + std::to_string(r));
          continue;
        }
        f = f.scaled(1.0 / nrm);
        const GridField I = op.apply(f);
        const GridField M = potentials::MaximalOperator(f, opts).field();
        PointSup sup;
        for (std::size_t i = 0; i < f.grid.size(); ++i) {
          if (!f.mask[i] || !(M.values[i] > 0.0)) continue;
          const double ratio = H(I.values[i]) / std::pow(M.values[i], c.p);
          if (ratio > sup.value) sup = {ratio, f.grid.center(i)};
        }
        best = std::max(best, sup.value);
        auto row = std::vector<std::string>{"pointwise", std::to_string(r), fmt_num(A), spec.id, fmt_num(sup.value)};
        for (auto& s : point_cells(sup.at)) row.push_back(s);
        t.add(row);
        rows.push_back(Json{{"resolution", r}, {"scale", A}, {"field", spec.id}, {"sup_ratio", jnum(sup.value)},
                            {"argmax", point_json(sup.at, c.n)}});
      }
      per_scale.push_back(best);
    }
    S.push_back(per_scale);
  }
  const auto summary = refinement_verdict(S, c.sweep.drift);
  res.verdict = summary.verdict;
  double constant = 0.0;
  for (double v : S.back()) constant = std::max(constant, v);
  finish(c, res,
         Json{{"constant", jnum(constant)}, {"refinement", summary_json(summary)}, {"series", rows}}, {},
         notes);
  res.tables.push_back(t);
  return res;
}

ExperimentResult run_bound(const Config& c) {
  detail::require_refinement(c, "bound");
  ExperimentResult res;
  res.experiment = "bound";
  const auto dom = make_domain(c);
  const auto phi = make_phi(c);
  const auto H = make_H(c);
  const auto opts = make_potential_options(c);
  const auto family = required_density(c, dom);
  const Point center = placement_ball(dom).center;
  const bool llogl = c.p == 1.0;

  CsvTable t{"bound.csv",
             {"experiment", "resolution", "scale", "field", "integral", "input_norm", "norm_ratio"},
             {}};
  std::vector<std::vector<double>> S;
  Json rows = Json::array();
  double worst_ratio = 0.0;
  for (int r : c.grid.resolutions) {
    const auto disc = discretize_for(c, dom, r);
    const potentials::RieszOperator op(disc.grid, phi, opts.singular_rule);
    std::vector<double> per_scale;
    for (double A : c.sweep.scales) {
      double best = 0.0;
      for (const auto& spec : family) {
        const GridField raw = sample_field(disc, spec, A, c.p, center);
        const double nrm = llogl ? llogl_norm(raw) : lp_norm(raw, c.p);
        if (nrm == 0.0) continue;
        const GridField f = raw.scaled(1.0 / nrm);
        const GridField I = op.apply(f);
        double integral = 0.0;
        for (std::size_t i = 0; i < I.values.size(); ++i) {
          if (I.mask[i]) integral += H(I.values[i]);
        }
        integral *= I.grid.cellvol();
        // Operator norm estimate on the raw field: ||I raw||_H / ||raw||.
        const double ratio = orlicz::luxemburg_norm(I.scaled(nrm), H).value / nrm;
        worst_ratio = std::max(worst_ratio, ratio);
        best = std::max(best, integral);
        t.add({"bound", std::to_string(r), fmt_num(A), spec.id, fmt_num(integral), fmt_num(nrm), fmt_num(ratio)});
        rows.push_back(Json{{"resolution", r}, {"scale", A}, {"field", spec.id}, {"integral", jnum(integral)},
                            {"input_norm", jnum(nrm)}, {"norm_ratio", jnum(ratio)}});
      }
      per_scale.push_back(best);
    }
    S.push_back(per_scale);
  }
  const auto summary = refinement_verdict(S, c.sweep.drift);
  res.verdict = summary.verdict;
  double constant = 0.0;
  for (double v : S.back()) constant = std::max(constant, v);
  finish(c, res,
         Json{{"constant", jnum(constant)},
              {"normalization", llogl ? "LlogL Luxemburg norm" : "Lp norm"},
              {"max_norm_ratio", jnum(worst_ratio)},
              {"refinement", summary_json(summary)},
              {"series", rows}},
         {}, {"domain is a bounded grid window; unbounded open sets are not representable"});
  res.tables.push_back(t);
  return res;
}

ExperimentResult run_representation(const Config& c) {
  detail::require_refinement(c, "representation");
  ExperimentResult res;
  res.experiment = "representation";
  const auto dom = make_domain(c);
  if (!dom.reference_ball) throw InputError("representation: the domain needs a reference ball");
  const auto ball = *dom.reference_ball;
  const auto phi = make_phi(c);
  const auto opts = make_potential_options(c);
  const auto family = smooth_family(dom);

  CsvTable t{"representation.csv", {"experiment", "resolution", "field", "sup_ratio", "u_ball"}, {}};
  std::vector<std::vector<double>> S;
  Json rows = Json::array();
  for (int r : c.grid.resolutions) {
    const auto disc = discretize_for(c, dom, r);
    const potentials::RieszOperator op(disc.grid, phi, opts.singular_rule);
    struct Member {
      std::string id;
      GridField u;
      GridField grad;
    };
    std::vector<Member> members;
    for (const auto& spec : family) {
      GridField u = GridField::sample(disc, spec.fn);
      GridField g = gradient_magnitude(u);
      members.push_back({spec.id, std::move(u), std::move(g)});
    }
    if (c.domain.type == "mushroom") {
      auto ce = domains::counterexample_field(make_mushroom(c), disc, c.domain.first_index, c.p);
      members.push_back({"counterexample-" + std::to_string(c.domain.first_index), ce.u, ce.grad});
    }
    double best = 0.0;
    for (const auto& m : members) {
      if (m.grad.max_abs() == 0.0) continue;
      const double uB = ball_average(m.u, ball.center, ball.radius);
      const GridField I = op.apply(m.grad);
      double sup = 0.0;
      for (std::size_t i = 0; i < I.values.size(); ++i) {
        if (I.mask[i] && I.values[i] > 0.0) sup = std::max(sup, std::fabs(m.u.values[i] - uB) / I.values[i]);
      }
      best = std::max(best, sup);
      t.add({"representation", std::to_string(r), m.id, fmt_num(sup), fmt_num(uB)});
      rows.push_back(Json{{"resolution", r}, {"field", m.id}, {"sup_ratio", jnum(sup)}, {"u_ball", jnum(uB)}});
    }
    S.push_back({best});
  }
  const auto summary = refinement_verdict(S, c.sweep.drift);
  res.verdict = summary.verdict;
  finish(c, res,
         Json{{"constant", jnum(S.back()[0])},
              {"reference_ball", Json{{"center", point_json(ball.center, c.n)}, {"radius", ball.radius}}},
              {"refinement", summary_json(summary)},
              {"series", rows}},
         {}, {kFdNote});
  res.tables.push_back(t);
  return res;
}

ExperimentResult run_embedding(const Config& c) {
  detail::require_refinement(c, "embedding");
  ExperimentResult res;
  res.experiment = "embedding";
  const auto dom = make_domain(c);
  if (!dom.reference_ball) throw InputError("embedding: the domain needs a reference ball");
  const auto ball = *dom.reference_ball;
  const auto H = make_H(c);
  if (c.p == 1.0 && !orlicz::h_tail_summable(H).converged) {
    throw InputError("embedding with p = 1 needs sum_j H(2^-j) to converge");
  }
  const auto family = smooth_family(dom);

  CsvTable t{"embedding.csv", {"experiment", "resolution", "field", "integral", "norm_ratio"}, {}};
  std::vector<std::vector<double>> S_int;
  std::vector<std::vector<double>> S_ratio;
  Json rows = Json::array();
  for (int r : c.grid.resolutions) {
    const auto disc = discretize_for(c, dom, r);
    double best_int = 0.0;
    double best_ratio = 0.0;
    for (const auto& spec : family) {
      GridField u = GridField::sample(disc, spec.fn);
      const double gn = lp_norm(gradient_magnitude(u), c.p);
      if (gn == 0.0) continue;
      u = u.scaled(1.0 / gn);
      const double uB = ball_average(u, ball.center, ball.radius);
      double integral = 0.0;
      for (std::size_t i = 0; i < u.values.size(); ++i) {
        if (u.mask[i]) integral += H(std::fabs(u.values[i] - uB));
      }
      integral *= u.grid.cellvol();
      const double ratio = orlicz::luxemburg_norm(subtract_constant(u, domain_average(u)), H).value;
      best_int = std::max(best_int, integral);
      best_ratio = std::max(best_ratio, ratio);
      t.add({"embedding", std::to_string(r), spec.id, fmt_num(integral), fmt_num(ratio)});
      rows.push_back(
          Json{{"resolution", r}, {"field", spec.id}, {"integral", jnum(integral)}, {"norm_ratio", jnum(ratio)}});
    }
    S_int.push_back({best_int});
    S_ratio.push_back({best_ratio});
  }
  const auto s1 = refinement_verdict(S_int, c.sweep.drift);
  const auto s2 = refinement_verdict(S_ratio, c.sweep.drift);
  if (s1.verdict == "vacuous") {
    res.verdict = "vacuous";
  } else if (s1.verdict == "bounded" && s2.verdict == "bounded") {
    res.verdict = "bounded";
  } else {
    res.verdict = "inconclusive";
  }
  finish(c, res,
         Json{{"constant", jnum(S_int.back()[0])},
              {"norm_ratio", jnum(S_ratio.back()[0])},
              {"refinement_integral", summary_json(s1)},
              {"refinement_norm_ratio", summary_json(s2)},
              {"series", rows}},
         {}, {kFdNote, "fields are scaled so that the discrete ||grad u||_p equals 1"});
  res.tables.push_back(t);
  return res;
}

ExperimentResult run_potential(const Config& c) {
  ExperimentResult res;
  res.experiment = "potential";
  const auto dom = make_domain(c);
  const auto phi = make_phi(c);
  const auto opts = make_potential_options(c);
  const auto family = required_density(c, dom);
  const auto& points = c.sweep.points;

  CsvTable t{"potential.csv",
             {"experiment", "resolution", "field", "x1", "x2", "x3", "exclude_self_cell", "cap_at_half_cell"},
             {}};
  Json rows = Json::array();
  bool all_zero = true;
  bool matched = true;
  double worst_rel = 0.0;
  for (int r : c.grid.resolutions) {
    const auto disc = discretize(dom, r);
    if (!points.empty()) {
      for (const auto& spec : family) {
        const GridField f = GridField::sample(disc, spec.fn);
        for (const Point& x : points) {
          potentials::PotentialOptions ex = opts;
          ex.singular_rule = potentials::SingularRule::ExcludeSelfCell;
          potentials::PotentialOptions cap = opts;
          cap.singular_rule = potentials::SingularRule::CapAtHalfCell;
          const double v_ex = potentials::riesz_potential(f, phi, x, ex);
          const double v_cap = potentials::riesz_potential(f, phi, x, cap);
          const double v = opts.singular_rule == potentials::SingularRule::ExcludeSelfCell ? v_ex : v_cap;
          all_zero = all_zero && v == 0.0;
          Json row{{"resolution", r},          {"field", spec.id},       {"x", point_json(x, c.n)},
                   {"exclude_self_cell", jnum(v_ex)}, {"cap_at_half_cell", jnum(v_cap)}};
          if (c.sweep.reference) {
            const double rel = std::fabs(v - *c.sweep.reference) / std::fabs(*c.sweep.reference);
            worst_rel = std::max(worst_rel, rel);
            matched = matched && rel <= c.sweep.tolerance;
            row["relative_error"] = jnum(rel);
          }
          rows.push_back(row);
          auto cells = std::vector<std::string>{"potential", std::to_string(r), spec.id};
          for (auto& s : point_cells(x)) cells.push_back(s);
          cells.push_back(fmt_num(v_ex));
          cells.push_back(fmt_num(v_cap));
          t.add(cells);
        }
      }
    } else {
      const potentials::RieszOperator op(disc.grid, phi, opts.singular_rule);
      for (const auto& spec : family) {
        const GridField f = GridField::sample(disc, spec.fn);
        const GridField I = op.apply(f);
        double mx = 0.0;
        for (double v : I.values) mx = std::max(mx, v);
        all_zero = all_zero && mx == 0.0;
        rows.push_back(Json{{"resolution", r}, {"field", spec.id}, {"max", jnum(mx)}});
        res.tables.push_back(field_table("potential_" + std::to_string(r) + "_" + spec.id + ".csv", "potential", I));
      }
    }
  }
  if (c.sweep.reference && points.empty()) throw InputError("potential: sweep.reference needs sweep.points");
  if (c.sweep.reference) {
    res.verdict = matched ? "match" : "mismatch";
  } else {
    res.verdict = all_zero ? "vacuous" : "bounded";
  }
  Json body{{"values", rows}};
  if (c.sweep.reference) {
    body["reference"] = *c.sweep.reference;
    body["tolerance"] = c.sweep.tolerance;
    body["worst_relative_error"] = jnum(worst_rel);
  }
  finish(c, res, body);
  if (!points.empty()) res.tables.insert(res.tables.begin(), t);
  return res;
}

ExperimentResult run_maximal(const Config& c) {
  ExperimentResult res;
  res.experiment = "maximal";
  const auto dom = make_domain(c);
  const auto opts = make_potential_options(c);
  const auto family = required_density(c, dom);

  CsvTable t{"maximal.csv", {"experiment", "resolution", "field", "x1", "x2", "x3", "value"}, {}};
  Json rows = Json::array();
  std::size_t const_fail = 0;
  std::size_t sub_fail = 0;
  std::size_t avg_fail = 0;
  std::size_t checked = 0;
  bool matched = true;
  double worst_rel = 0.0;
  for (int r : c.grid.resolutions) {
    const auto disc = discretize(dom, r);
    std::vector<Point> pts = c.sweep.points;
    if (pts.empty()) {
      // Every masked center, thinned to at most 4096 by a fixed stride.
      const std::size_t stride = std::max<std::size_t>(1, disc.masked / 4096);
      std::size_t seen = 0;
      for (std::size_t i = 0; i < disc.grid.size(); ++i) {
        if (disc.mask[i] && seen++ % stride == 0) pts.push_back(disc.grid.center(i));
      }
    }
    for (const auto& spec : family) {
      const GridField f = GridField::sample(disc, spec.fn);
      const potentials::MaximalOperator M(f, opts);
      const double avg = grid_window_average(f);
      for (const Point& x : pts) {
        const double v = M.at(x);
        if (v < avg * (1.0 - 1e-12)) ++avg_fail;
        if (!c.sweep.points.empty()) {
          auto cells = std::vector<std::string>{"maximal", std::to_string(r), spec.id};
          for (auto& s : point_cells(x)) cells.push_back(s);
          cells.push_back(fmt_num(v));
          t.add(cells);
          Json row{{"resolution", r}, {"field", spec.id}, {"x", point_json(x, c.n)}, {"value", jnum(v)}};
          if (c.sweep.reference) {
            const double rel = std::fabs(v - *c.sweep.reference) / std::fabs(*c.sweep.reference);
            worst_rel = std::max(worst_rel, rel);
            matched = matched && rel <= c.sweep.tolerance;
            row["relative_error"] = jnum(rel);
          }
          rows.push_back(row);
        }
      }
      if (c.sweep.points.empty()) {
        res.tables.push_back(field_table("maximal_" + std::to_string(r) + "_" + spec.id + ".csv", "maximal",
                                         M.field()));
      }
    }

    // Identity: a constant field is its own maximal function.
    {
      const double cv = c.fields.value;
      const GridField one(disc.grid, std::vector<std::uint8_t>(disc.grid.size(), 1),
                          std::vector<double>(disc.grid.size(), cv));
      const potentials::MaximalOperator M(one, opts);
      for (const Point& x : pts) {
        if (M.at(x) != std::fabs(cv)) ++const_fail;
      }
    }
    // Sublinearity on seeded nonnegative pairs.
    Rng rng(c.seed);
    for (int pair = 0; pair < c.sweep.pairs; ++pair) {
      std::vector<double> a(disc.grid.size(), 0.0);
      std::vector<double> b(disc.grid.size(), 0.0);
      std::vector<double> s(disc.grid.size(), 0.0);
      for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = rng.uniform();
        b[i] = rng.uniform();
        s[i] = a[i] + b[i];
      }
      const potentials::MaximalOperator Ma(GridField(disc.grid, disc.mask, a), opts);
      const potentials::MaximalOperator Mb(GridField(disc.grid, disc.mask, b), opts);
      const potentials::MaximalOperator Ms(GridField(disc.grid, disc.mask, s), opts);
      for (const Point& x : pts) {
        const double lhs = Ms.at(x);
        const double rhs = Ma.at(x) + Mb.at(x);
        ++checked;
        if (lhs > rhs * (1.0 + 1e-12)) ++sub_fail;
      }
    }
  }
  const bool identities = const_fail == 0 && sub_fail == 0 && avg_fail == 0;
  res.verdict = identities && matched ? "match" : "mismatch";
  Json body{{"values", rows},
            {"identities",
             Json{{"constant_field_failures", const_fail},
                  {"sublinearity_checks", checked},
                  {"sublinearity_failures", sub_fail},
                  {"below_window_average_failures", avg_fail}}},
            {"radii", "h, 2h, 4h, ... below the grid diameter, then the diameter"}};
  if (c.sweep.reference) {
    body["reference"] = *c.sweep.reference;
    body["tolerance"] = c.sweep.tolerance;
    body["worst_relative_error"] = jnum(worst_rel);
  }
  finish(c, res, body, {},
         {"ball volume counts in-grid cells; f is zero off its mask",
          "the window average is taken over all grid cells"});
  if (!c.sweep.points.empty()) res.tables.insert(res.tables.begin(), t);
  return res;
}

}  // namespace rieszlab::harness
