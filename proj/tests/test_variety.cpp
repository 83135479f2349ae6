#include <catch2/catch_amalgamated.hpp>

#include "nok/variety.hpp"

using namespace nok;

namespace {

// independent lattice-point enumerator: raw inequality scan over a box
long long lattice_oracle(const DivisorClass& d, long long m, long long box = 64) {
  int n = d.model->dim;
  long long count = 0;
  LVec u(static_cast<size_t>(n));
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      for (size_t r = 0; r < d.model->fan.rays.size(); ++r)
        if (dot(u, d.model->fan.rays[r]) < -m * d.coeffs[r]) return;
      ++count;
      return;
    }
    for (long long x = -box; x <= box; ++x) {
      u[static_cast<size_t>(i)] = x;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return count;
}

}  // namespace

TEST_CASE("fan validation") {
  REQUIRE_NOTHROW(p1xp1());
  REQUIRE_NOTHROW(hirzebruch(2));
  REQUIRE_NOTHROW(toric_projective_space(3));
  // non-smooth cone: |det| = 2
  REQUIRE_THROWS_AS(make_toric({{1, 0}, {-1, 2}, {0, -1}}, {{0, 1}, {1, 2}, {2, 0}}),
                    std::invalid_argument);
  // incomplete fan: single quadrant
  REQUIRE_THROWS_AS(make_toric({{1, 0}, {0, 1}}, {{0, 1}}), std::invalid_argument);
  // non-primitive ray
  REQUIRE_THROWS_AS(make_toric({{2, 0}, {0, 1}, {-2, -1}}, {{0, 1}, {1, 2}, {2, 0}}),
                    std::invalid_argument);
}

TEST_CASE("section dimensions") {
  auto p2 = make_projective_space(2);
  auto o1 = make_divisor(p2, {1});
  REQUIRE(sections(o1, 2).dim() == 6);
  REQUIRE(h0(o1, 2) == 6);

  auto q = p1xp1();
  auto o12 = make_divisor(q, {0, 0, 1, 2});
  REQUIRE(sections(o12, 1).dim() == 6);

  auto f2 = hirzebruch(2);
  auto dd = make_divisor(f2, {3, 1, 0, 0});  // C0 + 3f
  REQUIRE(sections(dd, 1).dim() == 6);
  REQUIRE(sections(dd, 1).dim() == lattice_oracle(dd, 1));
  for (long long m = 0; m <= 4; ++m)
    REQUIRE(h0(dd, m) == lattice_oracle(dd, m, 16 + 4 * m));
}

TEST_CASE("section multiplicativity") {
  auto f2 = hirzebruch(2);
  auto dd = make_divisor(f2, {2, 1, 0, 0});  // C0 + 2f
  auto s1 = sections(dd, 1), s2 = sections(dd, 2), s3 = sections(dd, 3);
  std::vector<MPoly> prods;
  for (const auto& a : s1.basis)
    for (const auto& b : s2.basis) prods.push_back(a * b);
  auto monos = monomial_union(s3.basis);
  for (const auto& p : prods)
    for (const auto& [e, c] : p.terms)
      REQUIRE(std::find(monos.begin(), monos.end(), e) != monos.end());
}

TEST_CASE("intersection numbers") {
  auto p2 = make_projective_space(2);
  REQUIRE(intersection_number({make_divisor(p2, {1}), make_divisor(p2, {1})}) == 1);
  auto p3 = make_projective_space(3);
  auto o2 = make_divisor(p3, {2});
  REQUIRE(intersection_number({o2, o2, o2}) == 8);

  auto q = p1xp1();
  auto o12 = make_divisor(q, {0, 0, 1, 2});
  REQUIRE(intersection_number({o12, o12}) == 4);

  auto p3t = toric_projective_space(3);
  auto t2 = make_divisor(p3t, {0, 0, 0, 2});
  REQUIRE(intersection_number({t2, t2, t2}) == 8);
}

TEST_CASE("intersection number is symmetric and multilinear") {
  auto q = p1xp1();
  auto a = make_divisor(q, {0, 0, 1, 0});
  auto b = make_divisor(q, {0, 0, 0, 1});
  REQUIRE(intersection_number({a, b}) == intersection_number({b, a}));
  auto c = a + 2 * b;
  REQUIRE(intersection_number({c, c}) ==
          intersection_number({a, a}) + 4 * intersection_number({a, b}) +
              4 * intersection_number({b, b}));
  REQUIRE(intersection_number({a + b, c}) ==
          intersection_number({a, c}) + intersection_number({b, c}));
}

TEST_CASE("wall pairings on F2") {
  auto f2 = hirzebruch(2);
  // rays: 0 = fiber f, 1 = negative section C0, 3 = positive section
  auto c0 = make_divisor(f2, {0, 1, 0, 0});
  auto fib = make_divisor(f2, {1, 0, 0, 0});
  auto d23 = make_divisor(f2, {3, 1, 0, 0});  // C0 + 3f
  const Wall* wall_c0 = nullptr;
  const Wall* wall_f = nullptr;
  for (const auto& w : f2->fan.walls) {
    if (w.tau == std::vector<int>{1}) wall_c0 = &w;
    if (w.tau == std::vector<int>{0}) wall_f = &w;
  }
  REQUIRE(wall_c0 != nullptr);
  REQUIRE(wall_f != nullptr);
  REQUIRE(wall_pairing(c0, *wall_c0) == -2);   // C0^2 = -2
  REQUIRE(wall_pairing(fib, *wall_c0) == 1);   // f . C0 = 1
  REQUIRE(wall_pairing(fib, *wall_f) == 0);    // f^2 = 0
  REQUIRE(wall_pairing(d23, *wall_f) == 1);    // (C0+3f) . f = 1
  REQUIRE(wall_pairing(d23, *wall_c0) == 1);
}

TEST_CASE("positivity predicates") {
  auto f2 = hirzebruch(2);
  auto c0 = make_divisor(f2, {0, 1, 0, 0});
  auto c0_2f = make_divisor(f2, {2, 1, 0, 0});
  auto c0_f = make_divisor(f2, {1, 1, 0, 0});
  REQUIRE(!is_big(c0));
  REQUIRE(!is_nef(c0));
  REQUIRE(is_nef(c0_2f));
  REQUIRE(is_big(c0_2f));
  REQUIRE(!is_ample(c0_2f));  // touches the nef boundary
  REQUIRE(is_big(c0_f));
  REQUIRE(!is_nef(c0_f));

  auto amp = reference_ample(f2);
  REQUIRE(is_ample(amp));
  auto ampq = reference_ample(p1xp1());
  REQUIRE(is_ample(ampq));
}

TEST_CASE("toric ord along rays") {
  auto f2 = hirzebruch(2);
  auto c0 = make_divisor(f2, {0, 1, 0, 0});
  // |m C0| = { m C0 }: the only section vanishes along C0 to order m
  for (long long m = 1; m <= 4; ++m) {
    auto s = sections(c0, m);
    REQUIRE(s.dim() == 1);
    REQUIRE(toric_ord_along_ray(s.basis[0], c0, m, 1) == m);
  }
}
