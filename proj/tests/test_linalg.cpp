#include <catch2/catch_amalgamated.hpp>

#include "nok/linalg.hpp"
#include "nok/rng.hpp"

using namespace nok;

TEST_CASE("rref rank on small matrices") {
  QMat m = {{Rat(1), Rat(0)}, {Rat(1), Rat(0)}};
  REQUIRE(rank_of(m) == 1);
  QMat m2 = {{Rat(1), Rat(2)}, {Rat(3), Rat(4)}};
  REQUIRE(rank_of(m2) == 2);
}

TEST_CASE("rank agrees with a second elimination on permuted rows") {
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    QMat m(5, QVec(5));
    for (auto& row : m)
      for (auto& x : row) x = Rat(rng.int_in(-6, 6), rng.int_in(1, 4));
    long long r1 = rank_of(m);
    QMat p = m;
    for (size_t i = p.size(); i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
    // second elimination: plain forward elimination without the pivot rule
    QMat q = p;
    size_t rank = 0;
    for (size_t c = 0; c < 5 && rank < 5; ++c) {
      size_t sel = q.size();
      for (size_t i = rank; i < q.size(); ++i)
        if (q[i][c] != 0) { sel = i; break; }
      if (sel == q.size()) continue;
      std::swap(q[rank], q[sel]);
      for (size_t i = rank + 1; i < q.size(); ++i) {
        if (q[i][c] == 0) continue;
        Rat f = q[i][c] / q[rank][c];
        for (size_t j = c; j < 5; ++j) q[i][j] -= f * q[rank][j];
      }
      ++rank;
    }
    REQUIRE(r1 == static_cast<long long>(rank));
  }
}

TEST_CASE("rref is canonical regardless of row order") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    QMat m(4, QVec(6));
    for (auto& row : m)
      for (auto& x : row) x = Rat(rng.int_in(-3, 3));
    QMat a = m, b = m;
    std::reverse(b.begin(), b.end());
    REQUIRE(row_space_basis(std::move(a)) == row_space_basis(std::move(b)));
  }
}

TEST_CASE("solve and kernel") {
  QMat a = {{Rat(2), Rat(1)}, {Rat(1), Rat(-1)}};
  auto x = solve_square(a, {Rat(5), Rat(1)});
  REQUIRE(x.has_value());
  REQUIRE((*x)[0] == 2);
  REQUIRE((*x)[1] == 1);

  QMat sing = {{Rat(1), Rat(2)}, {Rat(2), Rat(4)}};
  REQUIRE(!solve_square(sing, {Rat(1), Rat(2)}).has_value());

  QMat k = {{Rat(1), Rat(1), Rat(1)}};
  auto ker = kernel_basis(k, 3);
  REQUIRE(ker.size() == 2);
  for (const auto& v : ker) REQUIRE(v[0] + v[1] + v[2] == 0);
}

TEST_CASE("row space containment") {
  QMat a = {{Rat(1), Rat(0), Rat(1)}};
  QMat b = {{Rat(1), Rat(0), Rat(1)}, {Rat(0), Rat(1), Rat(0)}};
  REQUIRE(row_space_leq(a, b));
  REQUIRE(!row_space_leq(b, a));
  REQUIRE(in_row_space(b, {Rat(2), Rat(3), Rat(2)}));
  REQUIRE(!in_row_space(b, {Rat(0), Rat(0), Rat(1)}));
}

TEST_CASE("preimage coefficients") {
  // map sends e1 -> (1,0), e2 -> (0,1), e3 -> (1,1); target = span{(1,1)}
  QMat rows = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(1), Rat(1)}};
  QMat target = {{Rat(1), Rat(1)}};
  auto pre = preimage_coefficients(rows, row_space_basis(QMat(target)));
  REQUIRE(pre.size() == 2);  // preimage has dimension 2
  for (const auto& c : pre) {
    QVec img = {c[0] + c[2], c[1] + c[2]};
    REQUIRE(img[0] == img[1]);  // lands in the diagonal
  }
}

TEST_CASE("exact convex membership") {
  std::vector<QVec> tri = {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
  REQUIRE(in_convex_hull({Rat(1, 4), Rat(1, 4)}, tri));
  REQUIRE(in_convex_hull({Rat(1, 2), Rat(1, 2)}, tri));  // boundary
  REQUIRE(!in_convex_hull({Rat(2, 3), Rat(2, 3)}, tri));
  REQUIRE(in_convex_hull({Rat(0), Rat(0)}, tri));
  REQUIRE(!in_convex_hull({Rat(-1, 100), Rat(0)}, tri));
}

TEST_CASE("determinant") {
  QMat m = {{Rat(1), Rat(2)}, {Rat(3), Rat(4)}};
  REQUIRE(det(m) == -2);
  QMat id3 = {{Rat(1), Rat(0), Rat(0)}, {Rat(0), Rat(1), Rat(0)}, {Rat(0), Rat(0), Rat(1)}};
  REQUIRE(det(id3) == 1);
}
