#pragma once

// Experiment configs and the verification suites: body/slice computations,
// the restricted-volume comparisons, the moving-intersection limits, the
// semigroup identity, and the numerical-equivalence experiment over a
// bounded flag family. Exit semantics live in the CLI: a failed verdict is
// distinct from a tooling error.

#include <chrono>
#include <filesystem>

#include "nok/report.hpp"

namespace nok {

struct ExperimentConfig {
  ModelPtr model;
  DivisorClass divisor;
  std::optional<DivisorClass> divisor2;
  Flag flag;
  bool has_flag = false;
  long long truncation = 8;
  long long msi_cap = 6;
  std::uint64_t seed = 1;
  std::vector<QVec> a_grid;
  QVec a;
  std::string series_kind = "complete";
  Rat pv_point = 0, pv_rate = 0;
  std::vector<QVec> series_points;
  std::string name;
  nlohmann::json raw;
};

namespace detail {

inline QVec parse_rat_list(const nlohmann::json& j) {
  QVec v;
  for (const auto& e : j) v.push_back(parse_rat(e.get<std::string>()));
  return v;
}

}  // namespace detail

inline ExperimentConfig parse_config_json(const nlohmann::json& j, const std::string& name) {
  ExperimentConfig c;
  c.raw = j;
  c.name = name;
  const auto& var = j.at("variety");
  std::string kind = var.at("kind").get<std::string>();
  if (kind == "projective_space") {
    c.model = make_projective_space(var.at("dim").get<int>());
  } else if (kind == "toric") {
    std::vector<LVec> rays;
    for (const auto& r : var.at("rays")) rays.push_back(r.get<LVec>());
    std::vector<std::vector<int>> cones;
    for (const auto& cn : var.at("cones")) cones.push_back(cn.get<std::vector<int>>());
    c.model = make_toric(rays, cones, var.value("name", std::string("toric")));
  } else {
    throw std::invalid_argument("config: unknown variety kind '" + kind + "'");
  }
  auto parse_divisor = [&](const nlohmann::json& dj) {
    if (c.model->kind == VarietyModel::Kind::Projective)
      return make_divisor(c.model, {dj.at("degree").get<long long>()});
    return make_divisor(c.model, dj.at("coefficients").get<std::vector<long long>>());
  };
  c.divisor = parse_divisor(j.at("divisor"));
  if (j.contains("divisor2")) c.divisor2 = parse_divisor(j.at("divisor2"));
  c.truncation = j.value("truncation", 8LL);
  c.msi_cap = j.value("msi_cap", 6LL);
  c.seed = j.value("seed", 1ULL);
  if (const char* env = std::getenv("NOK_SEED")) c.seed = std::stoull(env);
  if (j.contains("flag")) {
    const auto& fj = j.at("flag");
    std::string fk = fj.at("kind").get<std::string>();
    if (fk == "torus_invariant") {
      if (c.model->kind == VarietyModel::Kind::Projective) {
        c.flag = coordinate_flag(c.model, fj.value("vars", std::vector<int>{}));
      } else {
        c.flag = invariant_flag(c.model, fj.value("cone", 0),
                                fj.value("order", std::vector<int>{}));
      }
    } else if (fk == "generic_linear") {
      c.flag = generic_flag(c.model, fj.value("seed", c.seed));
    } else {
      throw std::invalid_argument("config: unknown flag kind '" + fk + "'");
    }
    c.has_flag = true;
  }
  if (j.contains("a")) c.a = detail::parse_rat_list(j.at("a"));
  if (j.contains("a_grid")) {
    for (const auto& row : j.at("a_grid")) c.a_grid.push_back(detail::parse_rat_list(row));
  } else {
    int r = c.model->dim - 1;
    if (r >= 1)
      for (int k = 1; k <= 4; ++k)
        c.a_grid.push_back(QVec(static_cast<size_t>(r), Rat(1, 1LL << k)));
  }
  if (j.contains("series")) {
    const auto& sj = j.at("series");
    c.series_kind = sj.at("kind").get<std::string>();
    if (c.series_kind == "point_vanishing") {
      c.pv_point = parse_rat(sj.at("point").get<std::string>());
      c.pv_rate = parse_rat(sj.at("rate").get<std::string>());
    } else if (c.series_kind == "forms_through_points") {
      for (const auto& p : sj.at("points")) c.series_points.push_back(detail::parse_rat_list(p));
    }
  }
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
    throw std::runtime_error(path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                             ": " + e.what());
  }
  std::string stem = std::filesystem::path(path).stem().string();
  try {
    return parse_config_json(j, stem);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

// the series a config describes, over the config's divisor
inline GradedSeries config_series(const ExperimentConfig& c) {
  if (c.series_kind == "complete") return complete_series(c.divisor);
  if (c.series_kind == "point_vanishing")
    return point_vanishing_series(c.divisor, c.pv_point, c.pv_rate);
  if (c.series_kind == "forms_through_points") {
    SectionSpace full = sections(c.divisor, 1);
    auto monos = monomial_union(full.basis);
    QMat cond;
    for (const auto& p : c.series_points) {
      QVec row;
      for (const auto& mono : monos) {
        Rat v = 1;
        for (int i = 0; i < full.basis[0].nvars - 1; ++i)
          for (long long k = 0; k < mono[static_cast<size_t>(i)]; ++k) v *= p[static_cast<size_t>(i)];
        row.push_back(v);
      }
      cond.push_back(row);
    }
    QMat ker = kernel_basis(std::move(cond), monos.size());
    std::vector<MPoly> gens;
    for (const auto& k : ker) gens.push_back(poly_from_row(k, monos, full.basis[0].nvars));
    if (gens.empty()) throw std::invalid_argument("forms_through_points: no sections left");
    return powers_series(c.divisor, gens);
  }
  throw std::invalid_argument("config: unknown series kind '" + c.series_kind + "'");
}

// ---- helpers shared by the verifiers ----

// Y_r . D^(d-r) for the flag's stage subvariety
inline long long stage_self_intersection(const Flag& f, const DivisorClass& d, int r) {
  int dim = f.dim();
  if (r == 0) return intersection_number(std::vector<DivisorClass>(static_cast<size_t>(dim), d));
  if (r == dim - 1) return curve_class_pairing(f, d);
  if (f.kind == Flag::Kind::ProjLinear) {
    long long p = 1;
    for (int i = 0; i < dim - r; ++i) p *= d.degree();
    return p;
  }
  StarStage st = star_stage(f, r);
  DivisorClass restr = make_divisor(st.star, star_divisor(f, st, r, d.coeffs));
  return intersection_number(std::vector<DivisorClass>(static_cast<size_t>(dim - r), restr));
}

inline Rat factorial(int n) {
  Rat f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// ---- verifiers ----

inline VerdictReport verify_theorem_main_a(const ExperimentConfig& c) {
  auto t0 = std::chrono::steady_clock::now();
  VerdictReport rep;
  rep.name = "main-a";
  rep.config_echo = c.raw;
  if (!is_ample(c.divisor)) throw std::invalid_argument("main-a: divisor must be ample");
  int d = c.model->dim;
  GradedSeries w = complete_series(c.divisor);
  GradedSemigroup g = graded_semigroup(c.flag, w, c.truncation);
  BodyApprox body = okounkov_body(g);
  rep.quantities["body"] = body_json(body);
  bool all_pass = true;
  nlohmann::json per_r = nlohmann::json::array();
  for (int r = 0; r < d; ++r) {
    nlohmann::json row;
    row["r"] = r;
    Polytope slice = r == 0 ? body.body : slice_prefix(body.body, QVec(static_cast<size_t>(r), Rat(0)));
    Rat lhs = factorial(d - r) * volume(slice);
    long long rhs = stage_self_intersection(c.flag, c.divisor, r);
    row["slice_volume_scaled"] = rat_str(lhs);
    row["intersection_number"] = rhs;
    bool eq = lhs == Rat(rhs);
    row["equal"] = eq;
    row["exact"] = body.exact;
    if (body.exact && !eq) all_pass = false;
    if (!body.exact) {
      // report the limiting sequence over the a-grid
      nlohmann::json grid = nlohmann::json::array();
      for (const auto& a_full : c.a_grid) {
        if (static_cast<int>(a_full.size()) < r) continue;
        QVec a(a_full.begin(), a_full.begin() + r);
        Polytope s = r == 0 ? body.body : slice_prefix(body.body, a);
        nlohmann::json ge;
        ge["a"] = qvec_json(a);
        ge["slice_volume_scaled"] = rat_str(factorial(d - r) * volume(s));
        grid.push_back(ge);
      }
      row["a_grid"] = grid;
      all_pass = false;
    }
    per_r.push_back(row);
  }
  rep.sequences["per_r"] = per_r;
  rep.pass = all_pass;
  rep.verdict = all_pass ? "pass" : (body.exact ? "fail" : "consistent-within-truncation");
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline VerdictReport verify_theorem_b(const ExperimentConfig& c) {
  auto t0 = std::chrono::steady_clock::now();
  VerdictReport rep;
  rep.name = "theorem-b";
  rep.config_echo = c.raw;
  if (!is_big(c.divisor)) throw std::invalid_argument("theorem-b: divisor must be big");
  int d = c.model->dim;
  // quantity 1: slice length of the Okounkov body at 0^(d-1)
  GradedSeries w = complete_series(c.divisor);
  GradedSemigroup g = graded_semigroup(c.flag, w, c.truncation);
  BodyApprox body = okounkov_body(g);
  Polytope slice = d == 1 ? body.body : slice_prefix(body.body, QVec(static_cast<size_t>(d - 1), Rat(0)));
  Rat slice_len = volume(slice);
  rep.quantities["slice_length"] = rat_str(slice_len);
  rep.quantities["slice_exact"] = body.exact;
  // quantity 2: restricted-volume rank sequence
  RestrictedVolume rv = restricted_volume(c.divisor, c.flag, c.truncation);
  rep.sequences["ranks"] = growth_json(rv.growth, 1);
  // quantity 3: the closed formula
  RestrictedVolumeFormula fm = restricted_vol_formula(c.divisor, c.flag, c.truncation);
  rep.quantities["formula_value"] = rat_str(fm.value);
  rep.quantities["formula_exact"] = fm.exact;
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& comp : fm.components) {
    nlohmann::json cj;
    cj["ray"] = comp.ray;
    cj["points"] = comp.points;
    cj["asymptotic_ord"] = rat_str(comp.asymptotic_ord);
    comps.push_back(cj);
  }
  rep.quantities["formula_components"] = comps;
  for (const auto& n : fm.notes) rep.notes.push_back(n);
  for (const auto& n : rv.notes) rep.notes.push_back(n);
  bool rank_exact = rv.growth.exact;
  std::optional<Rat> rank_limit = rv.growth.estimate;
  bool agree = true;
  if (body.exact && fm.exact && slice_len != fm.value) agree = false;
  if (body.exact && rank_exact && rank_limit && slice_len != *rank_limit) agree = false;
  if (fm.exact && rank_exact && rank_limit && fm.value != *rank_limit) agree = false;
  bool all_exact = body.exact && fm.exact && rank_exact;
  rep.pass = agree && all_exact;
  rep.verdict = !agree ? "fail" : (all_exact ? "pass" : "consistent-within-truncation");
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline VerdictReport verify_theorem_c(const ExperimentConfig& c) {
  auto t0 = std::chrono::steady_clock::now();
  VerdictReport rep;
  rep.name = "theorem-c";
  rep.config_echo = c.raw;
  int d = c.model->dim;
  if (d > 2) throw std::invalid_argument("theorem-c: moving intersections computed for dim <= 2");
  GradedSeries w = config_series(c);
  std::vector<std::pair<long long, long long>> dims;
  for (long long m = 1; m <= c.truncation; ++m) dims.push_back({m, w.level(m).dim()});
  GrowthEstimate ge = growth_estimate(dims, d, w.ell);
  rep.sequences["dims"] = growth_json(ge, d);
  nlohmann::json msi_rows = nlohmann::json::array();
  bool all_match = true;
  long long msi_levels = std::min(c.truncation, c.msi_cap);
  for (long long m = 1; m <= msi_levels; ++m) {
    if (w.level(m).basis.empty()) continue;
    MsiResult r = d == 1 ? moving_self_intersection_curve(w, m)
                         : moving_self_intersection_surface(w, m, c.seed + static_cast<std::uint64_t>(m));
    nlohmann::json row;
    row["m"] = m;
    row["count"] = r.count;
    Rat md = 1;
    for (int i = 0; i < d; ++i) md *= Rat(m);
    row["normalized"] = rat_str(Rat(r.count) / md);
    if (ge.estimate) {
      Rat gap = Rat(r.count) / md - *ge.estimate;
      if (gap < 0) gap = -gap;
      row["gap_to_volume"] = rat_str(gap);
      if (d == 1 && gap != 0 && m == msi_levels) all_match = false;
      if (d == 2 && Rat(r.count) != *ge.estimate * md) all_match = false;
    }
    msi_rows.push_back(row);
  }
  rep.sequences["moving_self_intersections"] = msi_rows;
  rep.quantities["volume_estimate"] = ge.estimate ? rat_str(*ge.estimate) : "none";
  rep.quantities["volume_exact"] = ge.exact;
  rep.pass = all_match && ge.exact;
  rep.verdict = rep.pass ? "pass" : (all_match ? "consistent-within-truncation" : "fail");
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline VerdictReport verify_lemma_semigroup(const ExperimentConfig& c) {
  auto t0 = std::chrono::steady_clock::now();
  VerdictReport rep;
  rep.name = "lemma-semigroup";
  rep.config_echo = c.raw;
  VSeries v = build_v_series(c.flag, c.divisor, std::vector<Rat>(c.a.begin(), c.a.end()));
  GradedSemigroup gv = graded_semigroup(v.value_flag, v.series, c.truncation);
  GradedSemigroup gd = graded_semigroup(c.flag, complete_series(c.divisor), c.truncation);
  GradedSemigroup sliced = slice_semigroup(gd, c.a);
  bool all_equal = true;
  nlohmann::json rows = nlohmann::json::array();
  for (long long m = 1; m <= c.truncation; ++m) {
    bool eq = gv.levels.at(m) == sliced.levels.at(m);
    nlohmann::json row;
    row["m"] = m;
    row["v_count"] = gv.levels.at(m).size();
    row["slice_count"] = sliced.levels.at(m).size();
    row["equal"] = eq;
    rows.push_back(row);
    if (!eq) all_equal = false;
  }
  rep.sequences["levels"] = rows;
  rep.pass = all_equal;
  rep.verdict = all_equal ? "pass" : "fail";
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline VerdictReport theorem_a_experiment(const ExperimentConfig& c) {
  auto t0 = std::chrono::steady_clock::now();
  VerdictReport rep;
  rep.name = "theorem-a";
  rep.config_echo = c.raw;
  if (!c.divisor2) throw std::invalid_argument("theorem-a: config needs divisor2");
  if (c.model->kind != VarietyModel::Kind::Toric)
    throw std::invalid_argument("theorem-a: toric models only (class lattice ground truth)");
  // ground truth: numerically equivalent iff the coefficient difference is a
  // character pairing vector
  const auto& rays = c.model->fan.rays;
  QMat sys;
  for (size_t i = 0; i < rays.size(); ++i) {
    QVec row = qvec_of(rays[i]);
    row.push_back(Rat(c.divisor.coeffs[i] - c.divisor2->coeffs[i]));
    sys.push_back(row);
  }
  long long rank_aug = rank_of(sys);
  for (auto& row : sys) row.pop_back();
  bool equivalent = rank_aug == rank_of(sys);
  rep.quantities["numerically_equivalent"] = equivalent;
  if (!is_big(c.divisor) || !is_big(*c.divisor2))
    rep.notes.push_back("a divisor in the pair is not big; bodies are still compared");
  // bounded flag family: all invariant flags plus seeded generic flags
  std::vector<Flag> family;
  for (size_t cone = 0; cone < c.model->fan.max_cones.size(); ++cone) {
    std::vector<int> order = c.model->fan.max_cones[cone];
    std::sort(order.begin(), order.end());
    do {
      family.push_back(invariant_flag(c.model, static_cast<int>(cone), order));
    } while (std::next_permutation(order.begin(), order.end()));
  }
  if (supports_generic_flag(c.model))
    for (std::uint64_t s = 1; s <= 8; ++s)
      family.push_back(generic_flag(c.model, c.seed + s));
  bool separated = false;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& fl : family) {
    GradedSemigroup g1 = graded_semigroup(fl, complete_series(c.divisor), c.truncation);
    GradedSemigroup g2 = graded_semigroup(fl, complete_series(*c.divisor2), c.truncation);
    BodyApprox b1 = okounkov_body(g1);
    BodyApprox b2 = okounkov_body(g2);
    bool same = same_polytope(b1.body, b2.body);
    nlohmann::json row;
    row["flag"] = fl.desc;
    row["bodies_equal"] = same;
    row["exact"] = b1.exact && b2.exact;
    // the first-coordinate minimum is the asymptotic order along Y_1
    auto min1 = [&](const BodyApprox& b) {
      Rat mn = b.body.vertices.empty() ? Rat(0) : b.body.vertices[0][0];
      for (const auto& v : b.body.vertices) mn = std::min(mn, v[0]);
      return mn;
    };
    row["ord_Y1_min"] = {rat_str(min1(b1)), rat_str(min1(b2))};
    rows.push_back(row);
    if (!same) separated = true;
  }
  rep.sequences["flags"] = rows;
  rep.quantities["separated"] = separated;
  bool supported = equivalent ? !separated : separated;
  rep.pass = supported;
  rep.verdict = supported ? (equivalent ? "supported (never separated)" : "supported (separated)")
                          : (equivalent ? "fail (equivalent pair separated)"
                                        : "unseparated within the bounded family");
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// ---- plain computations exposed by the CLI ----

inline VerdictReport run_body(const ExperimentConfig& c) {
  VerdictReport rep;
  rep.name = "body";
  rep.config_echo = c.raw;
  GradedSeries w = config_series(c);
  GradedSemigroup g = graded_semigroup(c.flag, w, c.truncation);
  BodyApprox b = okounkov_body(g);
  rep.quantities["body"] = body_json(b);
  rep.quantities["flag"] = flag_json(c.flag);
  int d = b.body.ambient;
  rep.quantities["scaled_volume"] = rat_str(factorial(d) * volume(b.body));
  rep.pass = true;
  rep.verdict = "computed";
  return rep;
}

inline VerdictReport run_semigroup(const ExperimentConfig& c) {
  VerdictReport rep;
  rep.name = "semigroup";
  rep.config_echo = c.raw;
  GradedSeries w = config_series(c);
  GradedSemigroup g = graded_semigroup(c.flag, w, c.truncation);
  rep.quantities["semigroup"] = semigroup_json(g);
  rep.pass = true;
  rep.verdict = "computed";
  return rep;
}

inline VerdictReport run_slice(const ExperimentConfig& c) {
  VerdictReport rep;
  rep.name = "slice";
  rep.config_echo = c.raw;
  if (c.a.empty()) throw std::invalid_argument("slice: config needs 'a'");
  GradedSeries w = config_series(c);
  SliceCompare sc = body_slice_compare(c.flag, w, c.a, c.truncation);
  rep.quantities["body_slice"] = polytope_json(sc.body_slice);
  rep.quantities["sliced_semigroup_body"] = polytope_json(sc.sliced_body);
  rep.quantities["containment"] = sc.containment;
  rep.quantities["equality"] = sc.equality;
  rep.quantities["interior_witnessed"] = sc.interior_witnessed;
  rep.quantities["slice_volume"] = rat_str(volume(sc.body_slice));
  for (const auto& n : sc.notes) rep.notes.push_back(n);
  rep.pass = sc.containment;
  rep.verdict = sc.containment ? "computed" : "fail (containment violated)";
  return rep;
}

inline VerdictReport run_restricted_volume(const ExperimentConfig& c) {
  VerdictReport rep;
  rep.name = "restricted-volume";
  rep.config_echo = c.raw;
  RestrictedVolume rv = restricted_volume(c.divisor, c.flag, c.truncation);
  rep.sequences["ranks"] = growth_json(rv.growth, 1);
  if (rv.closed_form) {
    rep.quantities["closed_form"] = rat_str(*rv.closed_form);
    rep.quantities["closed_exact"] = rv.closed_exact;
  }
  for (const auto& n : rv.notes) rep.notes.push_back(n);
  rep.pass = true;
  rep.verdict = "computed";
  return rep;
}

inline VerdictReport run_base_locus(const ExperimentConfig& c) {
  VerdictReport rep;
  rep.name = "base-locus";
  rep.config_echo = c.raw;
  GradedSeries w = config_series(c);
  auto locus_json = [](const BaseLocusDescriptor& b) {
    nlohmann::json j;
    nlohmann::json div = nlohmann::json::array();
    for (const auto& [p, mult] : b.divisorial) {
      nlohmann::json e;
      e["component"] = p.key();
      e["label"] = p.label;
      e["multiplicity"] = mult;
      div.push_back(e);
    }
    j["divisorial"] = div;
    nlohmann::json res = nlohmann::json::array();
    for (const auto& [pt, note] : b.residual_points) {
      nlohmann::json e;
      e["point"] = qvec_json(pt);
      e["note"] = note;
      res.push_back(e);
    }
    j["residual_points"] = res;
    j["notes"] = b.notes;
    j["whole"] = b.whole;
    j["stabilized"] = b.stabilized;
    return j;
  };
  nlohmann::json per_level = nlohmann::json::object();
  for (long long m = 1; m <= c.truncation; ++m)
    per_level[std::to_string(m)] = locus_json(base_locus_level(w, m));
  rep.quantities["per_level"] = per_level;
  rep.quantities["stable"] = locus_json(base_locus_stable(w, c.truncation));
  if (is_big(c.divisor)) {
    AugmentedBaseLocus ab = augmented_base_locus(c.divisor, c.truncation);
    rep.quantities["augmented"] = locus_json(ab.locus);
    rep.quantities["augmented_epsilon"] = rat_str(ab.epsilon);
    rep.quantities["augmented_stabilized"] = ab.stabilized;
  }
  rep.pass = true;
  rep.verdict = "computed";
  return rep;
}

inline VerdictReport run_full_report(const ExperimentConfig& c) {
  VerdictReport rep;
  rep.name = "report";
  rep.config_echo = c.raw;
  nlohmann::json parts;
  parts["body"] = report_json(run_body(c));
  parts["base_locus"] = report_json(run_base_locus(c));
  bool pass = true;
  if (c.model->dim >= 2 && c.series_kind == "complete") {
    try {
      VerdictReport rv = run_restricted_volume(c);
      parts["restricted_volume"] = report_json(rv);
    } catch (const std::exception& e) {
      parts["restricted_volume"] = std::string("unavailable: ") + e.what();
    }
  }
  if (is_ample(c.divisor)) {
    VerdictReport ma = verify_theorem_main_a(c);
    parts["main_a"] = report_json(ma);
    pass = pass && ma.pass;
  }
  if (c.model->dim <= 2) {
    try {
      VerdictReport tc = verify_theorem_c(c);
      parts["theorem_c"] = report_json(tc);
      pass = pass && tc.pass;
    } catch (const std::exception& e) {
      parts["theorem_c"] = std::string("unavailable: ") + e.what();
    }
  }
  if (!c.a.empty() && static_cast<int>(c.a.size()) < c.model->dim) {
    VerdictReport ls = verify_lemma_semigroup(c);
    parts["lemma_semigroup"] = report_json(ls);
    pass = pass && ls.pass;
  }
  if (c.divisor2) {
    VerdictReport ta = theorem_a_experiment(c);
    parts["theorem_a"] = report_json(ta);
    pass = pass && ta.pass;
  }
  rep.quantities = parts;
  rep.pass = pass;
  rep.verdict = pass ? "pass" : "fail";
  return rep;
}

}  // namespace nok
