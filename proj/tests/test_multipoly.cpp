#include <catch2/catch_amalgamated.hpp>

#include "nok/multipoly.hpp"
#include "nok/rng.hpp"

using namespace nok;

namespace {

// Sylvester-matrix resultant, used as an independent oracle
Rat sylvester_resultant(const std::vector<Rat>& f, const std::vector<Rat>& g) {
  long long m = poly_deg(f), n = poly_deg(g);
  if (m < 0 || n < 0) return Rat(0);
  size_t sz = static_cast<size_t>(m + n);
  if (sz == 0) return Rat(1);
  QMat s(sz, QVec(sz, Rat(0)));
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j <= m; ++j) s[static_cast<size_t>(i)][static_cast<size_t>(i + j)] = f[static_cast<size_t>(m - j)];
  for (long long i = 0; i < m; ++i)
    for (long long j = 0; j <= n; ++j) s[static_cast<size_t>(n + i)][static_cast<size_t>(i + j)] = g[static_cast<size_t>(n - j)];
  return det(s);
}

MPoly uni(std::initializer_list<int> coeffs) {  // ascending degree
  std::vector<Rat> d;
  for (int c : coeffs) d.push_back(Rat(c));
  return from_dense(d);
}

}  // namespace

TEST_CASE("arithmetic and exact division") {
  // (x + y)^2 = x^2 + 2xy + y^2
  MPoly x = mp_monomial({1, 0}, 1), y = mp_monomial({0, 1}, 1);
  MPoly s = x + y;
  MPoly sq = s * s;
  REQUIRE(sq.terms.size() == 3);
  REQUIRE(sq.terms.at({1, 1}) == 2);
  auto q = divide_exact(sq, s);
  REQUIRE(q.has_value());
  REQUIRE(*q == s);
  REQUIRE(!divide_exact(sq + mp_const(2, 1), s).has_value());
  REQUIRE(divisibility_order(sq, s, 10) == 2);
  REQUIRE(divisibility_order(sq * s, s, 10) == 3);
}

TEST_CASE("laurent division by a polynomial with nonzero corner") {
  // f = x^-1 y + 2 + x y^-1 times q = 1 + x y
  MPoly f = mp_monomial({-1, 1}, 1) + mp_const(2, 2) + mp_monomial({1, -1}, 1);
  MPoly qq = mp_const(2, 1) + mp_monomial({1, 1}, 1);
  MPoly prod = f * qq;
  auto d = divide_exact(prod, qq);
  REQUIRE(d.has_value());
  REQUIRE(*d == f);
}

TEST_CASE("linear substitution is multiplicative") {
  Rng rng(11);
  std::vector<QVec> subs = {{Rat(1), Rat(2), Rat(0)}, {Rat(0), Rat(1), Rat(1)}, {Rat(1), Rat(0), Rat(1)}};
  MPoly a = mp_monomial({2, 0, 0}, 1) + mp_monomial({0, 1, 1}, 3);
  MPoly b = mp_monomial({1, 1, 0}, 2) + mp_monomial({0, 0, 2}, -1);
  MPoly lhs = substitute_linear(a * b, subs, 3);
  MPoly rhs = substitute_linear(a, subs, 3) * substitute_linear(b, subs, 3);
  REQUIRE(lhs == rhs);
}

TEST_CASE("orders at roots") {
  // (x - 2)^3 (x + 1)
  MPoly f = mp_pow(uni({-2, 1}), 3) * uni({1, 1});
  REQUIRE(ord_at_root(f, Rat(2)) == 3);
  REQUIRE(ord_at_root(f, Rat(-1)) == 1);
  REQUIRE(ord_at_root(f, Rat(0)) == 0);
}

TEST_CASE("univariate resultants match the Sylvester oracle") {
  Rng rng(99);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<Rat> f(static_cast<size_t>(rng.int_in(2, 5)));
    std::vector<Rat> g(static_cast<size_t>(rng.int_in(2, 5)));
    for (auto& c : f) c = Rat(rng.int_in(-5, 5));
    for (auto& c : g) c = Rat(rng.int_in(-5, 5));
    while (f.empty() || f.back() == 0) { f.push_back(Rat(rng.int_in(1, 5))); }
    while (g.empty() || g.back() == 0) { g.push_back(Rat(rng.int_in(1, 5))); }
    REQUIRE(resultant_univariate(f, g) == sylvester_resultant(f, g));
  }
}

TEST_CASE("bivariate resultant counts common roots") {
  // f = y - x^2, g = y - x : common points (0,0), (1,1)
  MPoly f = mp_monomial({0, 1}, 1) - mp_monomial({2, 0}, 1);
  MPoly g = mp_monomial({0, 1}, 1) - mp_monomial({1, 0}, 1);
  MPoly r = resultant_y(f, g);
  REQUIRE(max_exponent(r, 0) == 2);
  REQUIRE(ord_at_root(r, Rat(0)) == 1);
  REQUIRE(ord_at_root(r, Rat(1)) == 1);
}

TEST_CASE("gcd and bounded rational roots") {
  MPoly f = mp_pow(uni({-1, 2}), 2) * uni({3, 1});  // (2x-1)^2 (x+3)
  MPoly g = uni({-1, 2}) * uni({5, 1});
  MPoly h = gcd_univariate({f, g});
  REQUIRE(poly_deg(to_dense(h)) == 1);
  auto rs = rational_roots(f, 10);
  REQUIRE(rs.roots.size() == 2);
  REQUIRE(rs.roots[0].first == Rat(-3));
  REQUIRE(rs.roots[1].first == Rat(1, 2));
  REQUIRE(rs.roots[1].second == 2);
  REQUIRE(rs.leftover.terms.size() == 1);  // constant
}

TEST_CASE("poly matrix round trip") {
  MPoly a = mp_monomial({1, 0}, 1) + mp_monomial({0, 1}, 2);
  MPoly b = mp_monomial({0, 1}, 5);
  auto monos = monomial_union({a, b});
  auto m = poly_matrix({a, b}, monos);
  REQUIRE(m.size() == 2);
  REQUIRE(poly_from_row(m[0], monos, 2) == a);
}
