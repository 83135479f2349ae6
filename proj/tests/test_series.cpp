#include <catch2/catch_amalgamated.hpp>

#include "nok/okounkov.hpp"

using namespace nok;

namespace {

// independent oracle for V-levels on P^2 with the coordinate flag: filter
// monomials of the rescaled complete series by the valuation threshold and
// count the surviving suffix exponents
long long v_dim_oracle_p2(long long k_deg, const Rat& a, long long m) {
  long long ell = to_ll(denominator(a));
  if (m % ell != 0) return 0;
  long long k = m / ell;
  long long deg = ell * k_deg * k;
  long long t = to_ll(numerator(a)) * k;  // k * (ell * a)
  std::set<LVec> suffixes;
  for (long long e1 = 0; e1 <= deg; ++e1)
    for (long long e2 = 0; e1 + e2 <= deg; ++e2)
      if (e1 == t) suffixes.insert({e2});
  return static_cast<long long>(suffixes.size());
}

}  // namespace

TEST_CASE("complete series dimensions") {
  auto p1 = make_projective_space(1);
  auto w = complete_series(make_divisor(p1, {1}));
  for (long long m = 0; m <= 5; ++m) REQUIRE(w.level(m).dim() == m + 1);
  auto zero = complete_series(make_divisor(p1, {0}));
  for (long long m = 0; m <= 4; ++m) REQUIRE(zero.level(m).dim() == 1);
}

TEST_CASE("V series on P2: both routes, both flags, rational thresholds") {
  auto p2 = make_projective_space(2);
  auto o1 = make_divisor(p2, {1});
  auto o2 = make_divisor(p2, {2});
  auto fc = coordinate_flag(p2);
  auto fg = generic_flag(p2, 555);
  for (const Flag* f : {&fc, &fg}) {
    // a = (0): restricted complete series, dims m + 1
    VSeries v0 = build_v_series(*f, o1, {Rat(0)});
    for (long long m = 1; m <= 5; ++m) {
      REQUIRE(v0.series.level(m).dim() == m + 1);
      SectionSpace ind = v_level_inductive(*f, o1, {Rat(0)}, m);
      REQUIRE(same_subspace(v0.series.level(m), ind));
    }
    // a = (1/2) on O(2): zero at odd levels, 3k+1 at level 2k
    VSeries vh = build_v_series(*f, o2, {Rat(1, 2)});
    REQUIRE(vh.ell == 2);
    for (long long m = 1; m <= 8; ++m) {
      REQUIRE(vh.series.level(m).dim() == v_dim_oracle_p2(2, Rat(1, 2), m));
      SectionSpace ind = v_level_inductive(*f, o2, {Rat(1, 2)}, m);
      REQUIRE(same_subspace(vh.series.level(m), ind));
    }
  }
  // thresholds outside the big range are rejected
  REQUIRE_THROWS_AS(build_v_series(fc, o1, {Rat(2)}), std::invalid_argument);
}

TEST_CASE("V series on P3 with two steps") {
  auto p3 = make_projective_space(3);
  auto o2 = make_divisor(p3, {2});
  auto fc = coordinate_flag(p3);
  std::vector<Rat> a = {Rat(1, 2), Rat(0)};
  VSeries v = build_v_series(fc, o2, a);
  REQUIRE(v.ell == 2);
  for (long long m = 2; m <= 6; m += 2) {
    SectionSpace direct = v.series.level(m);
    SectionSpace ind = v_level_inductive(fc, o2, a, m);
    REQUIRE(direct.dim() > 0);
    REQUIRE(same_subspace(direct, ind));
  }
  REQUIRE(v.series.level(3).dim() == 0);
}

TEST_CASE("V series on toric models with invariant flags") {
  auto f2 = hirzebruch(2);
  auto d = make_divisor(f2, {2, 1, 0, 0});  // C0 + 2f
  auto fl = invariant_flag(f2, 0, {0, 1});  // fiber flag
  VSeries v = build_v_series(fl, d, {Rat(0)});
  for (long long m = 1; m <= 6; ++m) {
    REQUIRE(v.series.level(m).dim() == m + 1);  // restriction to the fiber
    SectionSpace ind = v_level_inductive(fl, d, {Rat(0)}, m);
    REQUIRE(same_subspace(v.series.level(m), ind));
  }
  // rational threshold along the fiber direction
  VSeries vq = build_v_series(fl, d, {Rat(1, 2)});
  for (long long m = 2; m <= 8; m += 2) {
    SectionSpace ind = v_level_inductive(fl, d, {Rat(1, 2)}, m);
    REQUIRE(same_subspace(vq.series.level(m), ind));
  }
}

TEST_CASE("V series on toric P3 with a two-step invariant flag") {
  auto p3 = toric_projective_space(3);
  auto o1 = make_divisor(p3, {0, 0, 0, 1});
  auto fl = invariant_flag(p3, 0, {});
  std::vector<Rat> a = {Rat(0), Rat(1, 2)};
  VSeries v = build_v_series(fl, o1, a);
  for (long long m = 2; m <= 6; m += 2) {
    SectionSpace direct = v.series.level(m);
    SectionSpace ind = v_level_inductive(fl, o1, a, m);
    REQUIRE(same_subspace(direct, ind));
  }
}

TEST_CASE("V series on P1xP1 with the hyperplane-section flag") {
  auto q = p1xp1();
  auto d = make_divisor(q, {0, 0, 1, 1});
  auto fl = generic_flag(q, 2025);
  VSeries v = build_v_series(fl, d, {Rat(1, 2)});
  REQUIRE(v.ell == 2);
  for (long long m = 2; m <= 6; m += 2) {
    long long k = m / 2;
    REQUIRE(v.series.level(m).dim() == 2 * k + 1);  // O(k,k) restricted to the curve
    SectionSpace ind = v_level_inductive(fl, d, {Rat(1, 2)}, m);
    REQUIRE(same_subspace(v.series.level(m), ind));
  }
  REQUIRE(v.series.level(3).dim() == 0);
}

TEST_CASE("sandwich inclusions hold for V series") {
  auto p2 = make_projective_space(2);
  auto fc = coordinate_flag(p2);
  VSeries v = build_v_series(fc, make_divisor(p2, {2}), {Rat(1, 2)});
  std::vector<std::string> notes;
  REQUIRE(check_sandwich(v, 8, &notes));

  auto f2 = hirzebruch(2);
  auto fl = invariant_flag(f2, 0, {0, 1});
  VSeries v2 = build_v_series(fl, make_divisor(f2, {2, 1, 0, 0}), {Rat(0)});
  REQUIRE(check_sandwich(v2, 6, &notes));

  auto qq = p1xp1();
  VSeries v3 = build_v_series(generic_flag(qq, 31), make_divisor(qq, {0, 0, 1, 1}),
                              {Rat(1, 2)});
  REQUIRE(check_sandwich(v3, 6, &notes));

  auto p3 = toric_projective_space(3);
  VSeries v4 = build_v_series(invariant_flag(p3, 0, {}), make_divisor(p3, {0, 0, 0, 2}),
                              {Rat(1, 2), Rat(0)});
  REQUIRE(check_sandwich(v4, 6, &notes));
}

TEST_CASE("semigroup identity: values of V equal the sliced value semigroup") {
  auto p2 = make_projective_space(2);
  auto fc = coordinate_flag(p2);
  auto fg = generic_flag(p2, 808);
  long long M = 8;
  for (const Flag* f : {&fc, &fg}) {
    for (auto [deg, a] : std::vector<std::pair<long long, Rat>>{{1, Rat(0)}, {2, Rat(1, 2)}}) {
      auto d = make_divisor(p2, {deg});
      VSeries v = build_v_series(*f, d, {a});
      GradedSemigroup gv = graded_semigroup(v.value_flag, v.series, M);
      GradedSemigroup gd = graded_semigroup(*f, complete_series(d), M);
      GradedSemigroup sliced = slice_semigroup(gd, {a});
      for (long long m = 1; m <= M; ++m) REQUIRE(gv.levels.at(m) == sliced.levels.at(m));
    }
  }
  // the toric side, including a curve-stage flag on P1xP1
  auto f2 = hirzebruch(2);
  auto fl = invariant_flag(f2, 0, {0, 1});
  auto d = make_divisor(f2, {2, 1, 0, 0});
  VSeries v = build_v_series(fl, d, {Rat(1, 2)});
  GradedSemigroup gv = graded_semigroup(v.value_flag, v.series, M);
  GradedSemigroup sliced = slice_semigroup(graded_semigroup(fl, complete_series(d), M), {Rat(1, 2)});
  for (long long m = 1; m <= M; ++m) REQUIRE(gv.levels.at(m) == sliced.levels.at(m));

  auto qq = p1xp1();
  auto fq = generic_flag(qq, 99);
  auto dq = make_divisor(qq, {0, 0, 1, 1});
  VSeries vq = build_v_series(fq, dq, {Rat(0)});
  GradedSemigroup gvq = graded_semigroup(fq, vq.series, 5);
  GradedSemigroup slq = slice_semigroup(graded_semigroup(fq, complete_series(dq), 5), {Rat(0)});
  for (long long m = 1; m <= 5; ++m) REQUIRE(gvq.levels.at(m) == slq.levels.at(m));
}

TEST_CASE("mu morphisms") {
  auto p1 = make_projective_space(1);
  auto o1 = make_divisor(p1, {1});
  MPoly x = mp_monomial({1, 0}, 1);
  for (long long m = 1; m <= 4; ++m) {
    SectionSpace vm = sections(o1, m);
    SectionSpace img = mu_image(vm, x);
    REQUIRE(img.dim() == vm.dim());  // injective
    // preimage of the full target is everything
    SectionSpace full = sections(make_divisor(p1, {2}), m);
    SectionSpace pre = mu_preimage(vm, x, full);
    REQUIRE(pre.dim() == vm.dim());
    // preimage of sections vanishing at p = 1 (where x(p) != 0): sections of
    // V vanishing at p
    GradedSeries targ = point_vanishing_series(make_divisor(p1, {2}), Rat(1), Rat(0));
    SectionSpace van;
    van.carrier = full.carrier;
    van.level = m;
    MPoly lin = mp_monomial({1, 0}, 1) - mp_monomial({0, 1}, 1);
    for (long long j = 1; j <= 2 * m; ++j)
      van.basis.push_back(mp_pow(lin, j) * mp_monomial({0, 2 * m - j}, 1));
    canonicalize_space(van);
    SectionSpace pre2 = mu_preimage(vm, x, van);
    REQUIRE(pre2.dim() == vm.dim() - 1);
    for (const auto& b : pre2.basis) REQUIRE(mp_eval(b, {Rat(1), Rat(1)}) == 0);
  }
}

TEST_CASE("series restriction to flag subvarieties") {
  auto p2 = make_projective_space(2);
  auto fc = coordinate_flag(p2);
  auto w = complete_series(make_divisor(p2, {2}));
  GradedSeries r = restrict_series(w, fc, 1);
  for (long long m = 1; m <= 5; ++m) REQUIRE(r.level(m).dim() == 2 * m + 1);
  // a series whose sections all vanish on Y1 restricts to zero
  GradedSeries van;
  van.carrier = w.carrier;
  van.desc = "multiples of x1";
  van.level_fn = [p2](long long m) {
    SectionSpace s = sections(make_divisor(p2, {1}), m);
    SectionSpace out = s;
    out.basis.clear();
    MPoly x1 = mp_monomial({1, 0, 0}, 1);
    for (const auto& b : sections(make_divisor(p2, {1}), m - 1 < 0 ? 0 : m - 1).basis)
      if (m >= 1) out.basis.push_back(x1 * b);
    canonicalize_space(out);
    return out;
  };
  GradedSeries rv = restrict_series(van, fc, 1);
  for (long long m = 1; m <= 4; ++m) REQUIRE(rv.level(m).dim() == 0);
  // toric restriction to an invariant curve: lattice points of an edge
  auto f2 = hirzebruch(2);
  auto fl = invariant_flag(f2, 0, {0, 1});
  auto wd = complete_series(make_divisor(f2, {3, 1, 0, 0}));
  GradedSeries rt = restrict_series(wd, fl, 1);
  for (long long m = 1; m <= 4; ++m) REQUIRE(rt.level(m).dim() == m + 1);
}

TEST_CASE("base loci per level and stable") {
  auto p2 = make_projective_space(2);
  BaseLocusDescriptor empty = base_locus_level(complete_series(make_divisor(p2, {1})), 3);
  REQUIRE(empty.divisorial.empty());
  REQUIRE(empty.residual_points.empty());

  auto f2 = hirzebruch(2);
  // C0 + 2f is nef: the lattice oracle gives order 0 along every ray
  auto nef = complete_series(make_divisor(f2, {2, 1, 0, 0}));
  for (long long m = 1; m <= 4; ++m) {
    BaseLocusDescriptor b = base_locus_level(nef, m);
    REQUIRE(b.divisorial.empty());
    REQUIRE(b.residual_points.empty());
  }
  // C0 + f has stable base locus C0 with level multiplicity ceil(m/2)
  auto big = complete_series(make_divisor(f2, {1, 1, 0, 0}));
  for (long long m = 1; m <= 6; ++m) {
    BaseLocusDescriptor b = base_locus_level(big, m);
    REQUIRE(b.divisorial.size() == 1);
    REQUIRE(b.divisorial[0].first.ray == 1);
    REQUIRE(b.divisorial[0].second == (m + 1) / 2);
  }
  BaseLocusDescriptor st = base_locus_stable(big, 8);
  REQUIRE(st.stable);
  REQUIRE(st.divisorial.size() == 1);
  REQUIRE(st.divisorial[0].first.ray == 1);

  // sections of O(3) on P1 vanishing at p: base point p with multiplicity 1
  auto p1 = make_projective_space(1);
  GradedSeries pv = point_vanishing_series(make_divisor(p1, {3}), Rat(2), Rat(0));
  // rate 0 gives the complete series; force order exactly 1 per level instead
  GradedSeries pv1;
  pv1.carrier = pv.carrier;
  pv1.desc = "O(3) sections vanishing at 2";
  pv1.level_fn = [p1](long long m) {
    SectionSpace s;
    s.carrier = sections(make_divisor(p1, {3}), 0).carrier;
    s.level = m;
    MPoly lin = mp_monomial({1, 0}, 1) - mp_monomial({0, 1}, Rat(2));
    for (long long j = 1; j <= 3 * m; ++j)
      s.basis.push_back(mp_pow(lin, j) * mp_monomial({0, 3 * m - j}, 1));
    canonicalize_space(s);
    return s;
  };
  BaseLocusDescriptor bp = base_locus_level(pv1, 1);
  REQUIRE(bp.divisorial.size() == 1);
  REQUIRE(bp.divisorial[0].first.kind == PrimeDivisorRef::Kind::CurvePoint);
  REQUIRE(bp.divisorial[0].first.point == Rat(2));
  REQUIRE(bp.divisorial[0].second == 1);
}

TEST_CASE("augmented base locus") {
  auto f2 = hirzebruch(2);
  AugmentedBaseLocus amp = augmented_base_locus(reference_ample(f2), 6);
  REQUIRE(amp.locus.divisorial.empty());
  REQUIRE(amp.stabilized);

  AugmentedBaseLocus nef = augmented_base_locus(make_divisor(f2, {2, 1, 0, 0}), 6);
  bool has_c0 = false;
  for (const auto& [p, mult] : nef.locus.divisorial)
    if (p.kind == PrimeDivisorRef::Kind::ToricRay && p.ray == 1) has_c0 = true;
  REQUIRE(has_c0);

  // F1, pullback of O(1) from P2: the exceptional-type curve appears
  auto f1 = hirzebruch(1);
  AugmentedBaseLocus pull = augmented_base_locus(make_divisor(f1, {1, 1, 0, 0}), 6);
  bool has_exc = false;
  for (const auto& [p, mult] : pull.locus.divisorial)
    if (p.kind == PrimeDivisorRef::Kind::ToricRay && p.ray == 1) has_exc = true;
  REQUIRE(has_exc);

  REQUIRE_THROWS_AS(augmented_base_locus(make_divisor(f2, {0, 1, 0, 0}), 4),
                    std::invalid_argument);
}

TEST_CASE("restricted volumes") {
  auto p2 = make_projective_space(2);
  auto fc = coordinate_flag(p2);
  RestrictedVolume rv = restricted_volume(make_divisor(p2, {2}), fc, 8);
  for (auto [m, r] : rv.ranks) REQUIRE(r == 2 * m + 1);
  REQUIRE(rv.growth.exact);
  REQUIRE(*rv.growth.estimate == 2);
  REQUIRE(*rv.closed_form == 2);

  auto q = p1xp1();
  auto fq = invariant_flag(q, 0, {0, 1});
  RestrictedVolume rq = restricted_volume(make_divisor(q, {0, 0, 1, 2}), fq, 8);
  REQUIRE(*rq.growth.estimate == 2);  // pairing of O(1,2) with the flag curve
  REQUIRE(*rq.closed_form == 2);

  auto f2 = hirzebruch(2);
  auto fl = invariant_flag(f2, 0, {0, 1});
  RestrictedVolume rnef = restricted_volume(make_divisor(f2, {2, 1, 0, 0}), fl, 12);
  for (auto [m, r] : rnef.ranks) REQUIRE(r == m + 1);
  REQUIRE(*rnef.growth.estimate == 1);
  REQUIRE(*rnef.closed_form == 1);

  RestrictedVolume rbig = restricted_volume(make_divisor(f2, {1, 1, 0, 0}), fl, 12);
  for (auto [m, r] : rbig.ranks) REQUIRE(r == m / 2 + 1);
  REQUIRE(*rbig.growth.estimate == Rat(1, 2));
  REQUIRE(*rbig.closed_form == Rat(1, 2));
  REQUIRE(rbig.closed_exact);

  // flag curve inside the augmented base locus is rejected
  auto flc0 = invariant_flag(f2, 0, {1, 0});  // Y1 = C0
  REQUIRE_THROWS_AS(restricted_volume(make_divisor(f2, {2, 1, 0, 0}), flc0, 8),
                    std::invalid_argument);
}

TEST_CASE("restricted volume formula details") {
  auto f2 = hirzebruch(2);
  auto fl = invariant_flag(f2, 0, {0, 1});
  RestrictedVolumeFormula fm = restricted_vol_formula(make_divisor(f2, {1, 1, 0, 0}), fl, 8);
  REQUIRE(fm.curve_degree == 1);
  REQUIRE(fm.components.size() == 1);
  REQUIRE(fm.components[0].ray == 1);
  REQUIRE(fm.components[0].points == 1);
  REQUIRE(fm.components[0].asymptotic_ord == Rat(1, 2));
  REQUIRE(fm.value == Rat(1, 2));

  // ample: no components, value = pairing
  RestrictedVolumeFormula am = restricted_vol_formula(reference_ample(f2), fl, 6);
  REQUIRE(am.components.empty());
}

TEST_CASE("asymptotic order against the lattice oracle") {
  auto f2 = hirzebruch(2);
  // |m C0| = {m C0}: order m at every level, limit 1
  auto c0 = make_divisor(f2, {0, 1, 0, 0});
  REQUIRE(toric_asymptotic_ord(c0, 1) == 1);
  auto c02f = make_divisor(f2, {2, 1, 0, 0});
  REQUIRE(toric_asymptotic_ord(c02f, 1) == 0);
  auto c0f = make_divisor(f2, {1, 1, 0, 0});
  REQUIRE(toric_asymptotic_ord(c0f, 1) == Rat(1, 2));
  // the level sequence ord/m decreases to the limit
  GradedSeries w = complete_series(c0f);
  auto seq = asymptotic_ord_from(
      [&](long long m) -> std::optional<long long> {
        return ord_along_ray(w.level(m), 1);
      },
      10, toric_asymptotic_ord(c0f, 1));
  REQUIRE(seq.exact);
  REQUIRE(seq.estimate == Rat(1, 2));
  for (auto [m, o] : seq.seq) REQUIRE(o == (m + 1) / 2);
}

TEST_CASE("moving self-intersections") {
  // curve case: O(3m) with forced order >= m at 0
  auto p1 = make_projective_space(1);
  GradedSeries pv = point_vanishing_series(make_divisor(p1, {3}), Rat(0), Rat(1));
  for (long long m = 1; m <= 6; ++m) {
    MsiResult r = moving_self_intersection_curve(pv, m);
    REQUIRE(r.count == 2 * m);
  }
  // base-point-free plane series: Bezout
  auto p2 = make_projective_space(2);
  GradedSeries o2 = complete_series(make_divisor(p2, {2}));
  for (long long m = 1; m <= 3; ++m) {
    MsiResult r = moving_self_intersection_surface(o2, m, 17);
    REQUIRE(r.count == 4 * m * m);
  }
  // pencil of conics through three points
  Rng rng(7);
  std::vector<QVec> pts = {{Rat(1), Rat(1)}, {Rat(-1), Rat(2)}, {Rat(2), Rat(-1)}};
  SectionSpace conics = sections(make_divisor(p2, {2}), 1);
  QMat rows;
  auto monos = monomial_union(conics.basis);
  QMat m = poly_matrix(conics.basis, monos);
  // conditions: vanish at the three points
  QMat cond;
  for (const auto& p : pts) {
    QVec row;
    for (const auto& mono : monos) {
      Rat v = 1;
      for (long long i = 0; i < mono[0]; ++i) v *= p[0];
      for (long long i = 0; i < mono[1]; ++i) v *= p[1];
      row.push_back(v);
    }
    cond.push_back(row);
  }
  QMat ker = kernel_basis(std::move(cond), monos.size());
  std::vector<MPoly> gens;
  for (const auto& k : ker) gens.push_back(poly_from_row(k, monos, 3));
  REQUIRE(gens.size() == 3);
  GradedSeries conic_series = powers_series(make_divisor(p2, {2}), gens);
  MsiResult r1 = moving_self_intersection_surface(conic_series, 1, 99);
  REQUIRE(r1.count == 1);  // 4 - 3
}

TEST_CASE("conditions report") {
  auto p2 = make_projective_space(2);
  auto fc = coordinate_flag(p2);
  auto d = make_divisor(p2, {1});
  ConditionsReport rep = check_conditions(complete_series(d), fc, d, 2, 5, 13);
  REQUIRE(rep.a_holds);
  REQUIRE(rep.b_growth);
  REQUIRE(rep.b_separates);
  REQUIRE(!rep.b_fixed_component);

  VSeries v = build_v_series(fc, make_divisor(p2, {2}), {Rat(1, 2)});
  REQUIRE(check_sandwich(v, 8, nullptr));

  // a series with a fixed line: (B) flags the fixed component
  GradedSeries fixed;
  fixed.carrier = sections(d, 0).carrier;
  fixed.desc = "fixed line";
  fixed.level_fn = [p2](long long m) {
    SectionSpace s = sections(make_divisor(p2, {2}), m);
    SectionSpace out = s;
    out.basis.clear();
    MPoly x1m = mp_monomial({m, 0, 0}, 1);
    for (const auto& b : sections(make_divisor(p2, {1}), m).basis)
      out.basis.push_back(x1m * b);
    canonicalize_space(out);
    return out;
  };
  ConditionsReport repf = check_conditions(fixed, fc, make_divisor(p2, {2}), 2, 4, 13);
  REQUIRE(repf.b_fixed_component);
}

TEST_CASE("lemma-style base locus bounds for V series") {
  // ord of V_m(D; a) at the flag point dominates ord of |mD| along C0
  auto f2 = hirzebruch(2);
  auto fl = invariant_flag(f2, 0, {0, 1});
  auto d = make_divisor(f2, {1, 1, 0, 0});  // B(D) = C0
  VSeries v = build_v_series(fl, d, {Rat(0)});
  GradedSeries full = complete_series(d);
  for (long long m = 1; m <= 8; ++m) {
    long long ord_e = ord_along_ray(full.level(m), 1);
    // F = Y1 cap C0 is the boundary point of the fiber corresponding to the
    // image of ray 1 in the stage model
    const SectionSpace& vm = v.series.level(m);
    REQUIRE(!vm.basis.empty());
    StarStage st = star_stage(fl, 1);
    int stage_ray = -1;
    for (size_t i = 0; i < st.ray_of_star.size(); ++i)
      if (st.ray_of_star[i] == 1) stage_ray = static_cast<int>(i);
    REQUIRE(stage_ray >= 0);
    long long ord_f = ord_along_ray(vm, stage_ray);
    REQUIRE(ord_f >= ord_e);
    // the containment B(V) >= Y_r cap B(D): the point is in the base locus
    REQUIRE(ord_f > 0);
  }
}
