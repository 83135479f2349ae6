#include <catch2/catch_amalgamated.hpp>

#include "nok/valuation.hpp"

using namespace nok;

namespace {

// homogeneous monomial on P^2 in storage order (x1, x2, x0)
MPoly pm(long long e1, long long e2, long long e0) { return mp_monomial({e1, e2, e0}, 1); }

SectionSpace p2_space(long long k, long long m) {
  auto p2 = make_projective_space(2);
  return sections(make_divisor(p2, {k}), m);
}

}  // namespace

TEST_CASE("valuation of monomials under the coordinate flag") {
  auto w = p2_space(1, 3);
  auto f = coordinate_flag(make_projective_space(2));
  REQUIRE(valuate(f, w, pm(2, 1, 0)) == LVec{2, 1});
  REQUIRE(valuate(f, w, pm(0, 0, 3)) == LVec{0, 0});
  // x + x^2 y at level 3: the lex-minimal term wins
  MPoly s = pm(1, 0, 2) + pm(2, 1, 0);
  REQUIRE(valuate(f, w, s) == LVec{1, 0});
  REQUIRE_THROWS_AS(valuate(f, w, mp_zero(3)), std::invalid_argument);
}

TEST_CASE("valuation of (x+y)^3 under a linear flag containing {x+y=0}") {
  auto p2 = make_projective_space(2);
  Flag f;
  f.kind = Flag::Kind::ProjLinear;
  f.model = p2;
  f.T = {{Rat(1), Rat(1), Rat(0)}, {Rat(1), Rat(0), Rat(0)}, {Rat(0), Rat(0), Rat(1)}};
  f.Tinv = *detail::invert(f.T);
  f.desc = "flag through x+y=0";
  auto w = p2_space(1, 3);
  MPoly xy = pm(1, 0, 0) + pm(0, 1, 0);
  MPoly s = xy * xy * xy;
  REQUIRE(valuate(f, w, s) == LVec{3, 0});
}

TEST_CASE("value sets on P2") {
  auto p2 = make_projective_space(2);
  auto f = coordinate_flag(p2);
  // span{x, x+y}: eliminating exposes y
  SectionSpace w = p2_space(1, 1);
  w.basis = {pm(1, 0, 0), pm(1, 0, 0) + pm(0, 1, 0)};
  auto vs = value_set(f, w);
  REQUIRE(vs == std::vector<LVec>{{0, 1}, {1, 0}});

  // complete O(2) level 1: all six lattice points of the doubled simplex
  auto full = p2_space(2, 1);
  auto vs2 = value_set(f, full);
  REQUIRE(vs2.size() == 6);
  for (const auto& v : vs2) REQUIRE(v[0] + v[1] <= 2);

  // singleton
  SectionSpace one = p2_space(1, 1);
  one.basis = {pm(1, 0, 0) + pm(0, 1, 0)};
  REQUIRE(value_set(f, one).size() == 1);
}

TEST_CASE("value set size equals dimension on random subspaces") {
  auto p2 = make_projective_space(2);
  auto fc = coordinate_flag(p2);
  auto fg = generic_flag(p2, 77);
  Rng rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    long long m = 1 + static_cast<long long>(rng.below(3));
    auto full = p2_space(2, m);
    long long n = full.dim();
    long long k = 1 + static_cast<long long>(rng.below(static_cast<std::uint64_t>(n)));
    SectionSpace w = full;
    w.basis.clear();
    for (long long i = 0; i < k; ++i) {
      MPoly s = mp_zero(3);
      for (const auto& b : full.basis)
        s = s + Rat(rng.int_in(-5, 5)) * b;
      if (!s.zero()) w.basis.push_back(s);
    }
    canonicalize_space(w);
    if (w.basis.empty()) continue;
    REQUIRE(static_cast<long long>(value_set(fc, w).size()) == w.dim());
    REQUIRE(static_cast<long long>(value_set(fg, w).size()) == w.dim());
  }
}

TEST_CASE("valuation is additive on products") {
  auto p2 = make_projective_space(2);
  auto fc = coordinate_flag(p2);
  auto fg = generic_flag(p2, 99);
  Rng rng(321);
  for (int trial = 0; trial < 20; ++trial) {
    long long m1 = 1 + static_cast<long long>(rng.below(2));
    long long m2 = 1 + static_cast<long long>(rng.below(2));
    auto w1 = p2_space(1, m1), w2 = p2_space(1, m2), w12 = p2_space(1, m1 + m2);
    auto rand_elt = [&](const SectionSpace& w) {
      MPoly s = mp_zero(3);
      while (s.zero())
        for (const auto& b : w.basis) s = s + Rat(rng.int_in(-3, 3)) * b;
      return s;
    };
    MPoly a = rand_elt(w1), b = rand_elt(w2);
    REQUIRE(valuate(fc, w12, a * b) == valuate(fc, w1, a) + valuate(fc, w2, b));
    REQUIRE(valuate(fg, w12, a * b) == valuate(fg, w1, a) + valuate(fg, w2, b));
  }
}

TEST_CASE("toric invariant flag valuations on F2") {
  auto f2 = hirzebruch(2);
  auto d = make_divisor(f2, {2, 1, 0, 0});  // C0 + 2f
  auto fl = invariant_flag(f2, 0, {0, 1});  // fiber then the point on C0
  for (long long m = 1; m <= 4; ++m) {
    auto w = sections(d, m);
    std::vector<LVec> vs = value_set(fl, w);
    REQUIRE(static_cast<long long>(vs.size()) == w.dim());
    long long b = value_bound(fl, d);
    for (const auto& v : vs) {
      REQUIRE(v[0] >= 0);
      REQUIRE(v[1] >= 0);
      REQUIRE(v[0] <= m * b);
      REQUIRE(v[1] <= m * b);
    }
  }
  // the section lattice maps to nu = (x + 2m, y + m)
  auto w1 = sections(d, 1);
  REQUIRE(valuate(fl, w1, mp_monomial({0, 0}, 1)) == LVec{2, 1});
  REQUIRE(valuate(fl, w1, mp_monomial({-2, -1}, 1)) == LVec{0, 0});
}

TEST_CASE("hyperplane-section flag on P1xP1") {
  auto q = p1xp1();
  auto fl = generic_flag(q, 4242);
  REQUIRE(fl.kind == Flag::Kind::QuadricCurve);
  auto d = make_divisor(q, {0, 0, 1, 1});  // O(1,1)
  auto w = sections(d, 1);
  REQUIRE(w.dim() == 4);
  // q itself is a section of O(1,1): its valuation starts with 1
  MPoly qq = quadric_poly(fl);
  REQUIRE(valuate(fl, w, qq)[0] == 1);
  auto vs = value_set(fl, w);
  REQUIRE(vs.size() == 4);
  // additivity across levels
  auto w2 = sections(d, 2);
  Rng rng(8);
  for (int trial = 0; trial < 6; ++trial) {
    MPoly a = mp_zero(2), b = mp_zero(2);
    while (a.zero())
      for (const auto& s : w.basis) a = a + Rat(rng.int_in(-3, 3)) * s;
    while (b.zero())
      for (const auto& s : w.basis) b = b + Rat(rng.int_in(-3, 3)) * s;
    REQUIRE(valuate(fl, w2, a * b) == valuate(fl, w, a) + valuate(fl, w, b));
  }
}

TEST_CASE("generic flags are rejected on non-rational-section toric models") {
  REQUIRE_THROWS_AS(generic_flag(hirzebruch(2), 1), std::invalid_argument);
}

TEST_CASE("ord along rays and echelon independence") {
  auto f2 = hirzebruch(2);
  auto d = make_divisor(f2, {1, 1, 0, 0});  // C0 + f, stable base locus C0
  for (long long m = 1; m <= 6; ++m) {
    auto w = sections(d, m);
    REQUIRE(ord_along_ray(w, 1) == (m + 1) / 2);  // ceil(m/2) along C0
    REQUIRE(ord_along_ray(w, 0) == 0);
  }
}

TEST_CASE("asymptotic order machinery") {
  // ord(|m D|) = ceil(m/2): estimate 1/2 via closed form
  auto seq = [](long long m) -> std::optional<long long> { return (m + 1) / 2; };
  auto a = asymptotic_ord_from(seq, 12, Rat(1, 2));
  REQUIRE(a.exact);
  REQUIRE(a.estimate == Rat(1, 2));
  auto b = asymptotic_ord_from(seq, 12);
  REQUIRE(!b.exact);
  REQUIRE(b.estimate == Rat(1, 2));  // attained at even levels
  auto zero = asymptotic_ord_from([](long long) { return 0; }, 4);
  REQUIRE(zero.exact);
  REQUIRE(zero.estimate == 0);
}

TEST_CASE("subspace utilities") {
  auto w = p2_space(1, 1);
  SectionSpace a = w, b = w;
  a.basis = {pm(1, 0, 0) + pm(0, 1, 0)};
  b.basis = {pm(1, 0, 0), pm(0, 1, 0)};
  REQUIRE(subspace_leq(a, b));
  REQUIRE(!subspace_leq(b, a));
  REQUIRE(space_contains(b, pm(1, 0, 0) - pm(0, 1, 0)));
  REQUIRE(!space_contains(a, pm(1, 0, 0)));
}
