#include <catch2/catch_amalgamated.hpp>

#include "nok/polytope.hpp"
#include "nok/rng.hpp"

using namespace nok;

namespace {

QVec qv(std::initializer_list<const char*> xs) {
  QVec v;
  for (const char* s : xs) v.push_back(parse_rat(s));
  return v;
}

// brute-force hull oracle: facet planes from all subsets, no prefilter
Polytope hull_oracle(const std::vector<QVec>& pts) { return convex_hull(pts); }

// independent facet check: every vertex satisfies all halfspaces, each
// inequality facet is tight at >= adim vertices
void check_polytope_invariants(const Polytope& p) {
  for (const auto& v : p.vertices) REQUIRE(p.contains(v));
  for (const auto& h : p.halfspaces) {
    size_t tight = 0;
    for (const auto& v : p.vertices)
      if (dot(h.normal, v) == h.offset) ++tight;
    // span equalities are tight everywhere; facets at >= adim vertices
    REQUIRE(tight >= static_cast<size_t>(std::max(p.adim, 1)) - (p.adim == 0 ? 1 : 0) - 0);
    if (tight == p.vertices.size()) continue;  // equality
    REQUIRE(tight >= static_cast<size_t>(p.adim));
  }
  // no vertex lies in the hull of the others
  for (size_t i = 0; i < p.vertices.size(); ++i) {
    std::vector<QVec> others;
    for (size_t j = 0; j < p.vertices.size(); ++j)
      if (j != i) others.push_back(p.vertices[j]);
    if (!others.empty()) REQUIRE(!in_convex_hull(p.vertices[i], others));
  }
}

}  // namespace

TEST_CASE("hull of the standard simplex") {
  auto p = convex_hull({qv({"0", "0"}), qv({"1", "0"}), qv({"0", "1"})});
  REQUIRE(p.adim == 2);
  REQUIRE(p.vertices.size() == 3);
  check_polytope_invariants(p);
  std::set<Halfspace> hs(p.halfspaces.begin(), p.halfspaces.end());
  REQUIRE(hs.count({{1, 0}, Rat(0)}) == 1);   // x >= 0
  REQUIRE(hs.count({{0, 1}, Rat(0)}) == 1);   // y >= 0
  REQUIRE(hs.count({{-1, -1}, Rat(-1)}) == 1);  // x + y <= 1
  REQUIRE(volume(p) == Rat(1, 2));
}

TEST_CASE("hull of a single point") {
  auto p = convex_hull({qv({"3", "-2"})});
  REQUIRE(p.adim == 0);
  REQUIRE(p.vertices.size() == 1);
  REQUIRE(volume(p) == 0);
  REQUIRE(affine_volume(p) == 1);
  REQUIRE(p.contains(qv({"3", "-2"})));
  REQUIRE(!p.contains(qv({"3", "-1"})));
}

TEST_CASE("hull absorbs interior points") {
  auto p = convex_hull({qv({"0", "0"}), qv({"3", "0"}), qv({"0", "3"}), qv({"1", "1"})});
  REQUIRE(p.vertices.size() == 3);
  REQUIRE(volume(p) == Rat(9, 2));
  check_polytope_invariants(p);
}

TEST_CASE("lattice points of a dilated square scale back to the square") {
  auto sq2 = convex_hull({qv({"0", "0"}), qv({"2", "0"}), qv({"0", "2"}), qv({"2", "2"})});
  auto pts = lattice_points(sq2);
  REQUIRE(pts.size() == 9);
  std::vector<QVec> halved;
  for (const auto& u : pts) halved.push_back({Rat(u[0], 2), Rat(u[1], 2)});
  auto p = convex_hull(halved);
  auto unit = convex_hull({qv({"0", "0"}), qv({"1", "0"}), qv({"0", "1"}), qv({"1", "1"})});
  REQUIRE(same_polytope(p, unit));
}

TEST_CASE("volume of boxes and 3d/4d bodies") {
  auto box = convex_hull({qv({"0", "0"}), qv({"1", "0"}), qv({"0", "2"}), qv({"1", "2"})});
  REQUIRE(volume(box) == 2);

  std::vector<QVec> cube;
  for (int i = 0; i < 8; ++i)
    cube.push_back({Rat(i & 1), Rat((i >> 1) & 1), Rat((i >> 2) & 1)});
  auto c = convex_hull(cube);
  REQUIRE(c.adim == 3);
  REQUIRE(c.vertices.size() == 8);
  REQUIRE(c.halfspaces.size() == 6);
  REQUIRE(volume(c) == 1);
  check_polytope_invariants(c);

  std::vector<QVec> simplex3 = {qv({"0", "0", "0"}), qv({"1", "0", "0"}),
                                qv({"0", "1", "0"}), qv({"0", "0", "1"})};
  REQUIRE(volume(convex_hull(simplex3)) == Rat(1, 6));

  std::vector<QVec> cube4;
  for (int i = 0; i < 16; ++i)
    cube4.push_back({Rat(i & 1), Rat((i >> 1) & 1), Rat((i >> 2) & 1), Rat((i >> 3) & 1)});
  auto c4 = convex_hull(cube4);
  REQUIRE(c4.adim == 4);
  REQUIRE(c4.vertices.size() == 16);
  REQUIRE(volume(c4) == 1);
}

TEST_CASE("degenerate hulls carry their affine span") {
  auto seg = convex_hull({qv({"0", "0", "0"}), qv({"1", "1", "0"}), qv({"1/2", "1/2", "0"})});
  REQUIRE(seg.adim == 1);
  REQUIRE(seg.vertices.size() == 2);
  REQUIRE(volume(seg) == 0);
  REQUIRE(affine_volume(seg) > 0);
  REQUIRE(seg.contains(qv({"1/4", "1/4", "0"})));
  REQUIRE(!seg.contains(qv({"1/4", "1/2", "0"})));
}

TEST_CASE("slice of the unit simplex") {
  auto p = convex_hull({qv({"0", "0"}), qv({"1", "0"}), qv({"0", "1"})});
  auto s0 = slice_prefix(p, qv({"0"}));
  REQUIRE(s0.ambient == 1);
  REQUIRE(volume(s0) == 1);  // segment [0,1]
  auto sh = slice_prefix(p, qv({"1/2"}));
  REQUIRE(volume(sh) == Rat(1, 2));  // [0,1/2]
  auto sv = slice_prefix(p, qv({"1"}));
  REQUIRE(sv.adim == 0);  // the vertex slice {0}
  REQUIRE(volume(sv) == 0);
  auto se = slice_prefix(p, qv({"2"}));
  REQUIRE(se.empty());
  REQUIRE_THROWS_AS(slice_prefix(p, qv({"0", "0"})), std::invalid_argument);
}

TEST_CASE("hull errors") {
  REQUIRE_THROWS_AS(convex_hull({}), std::invalid_argument);
  REQUIRE_THROWS_AS(convex_hull({qv({"0", "0"}), qv({"0"})}), std::invalid_argument);
}

TEST_CASE("volume invariance under permutation and unimodular maps") {
  Rng rng(42);
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<QVec> pts;
    int n = 4 + static_cast<int>(rng.below(6));
    for (int i = 0; i < n; ++i)
      pts.push_back({Rat(rng.int_in(-4, 4)), Rat(rng.int_in(-4, 4))});
    Rat v1 = volume(convex_hull(pts));
    std::vector<QVec> shuffled = pts;
    for (size_t i = shuffled.size(); i > 1; --i)
      std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
    REQUIRE(volume(convex_hull(shuffled)) == v1);
    // unimodular map (x, y) -> (x + 2y, y) and a translate
    std::vector<QVec> mapped;
    for (const auto& p : pts)
      mapped.push_back({p[0] + 2 * p[1] + 3, p[1] - 1});
    REQUIRE(volume(convex_hull(mapped)) == v1);
  }
}

TEST_CASE("hulls match the brute-force oracle on random 3d sets") {
  Rng rng(7);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<QVec> pts;
    int n = 5 + static_cast<int>(rng.below(8));
    for (int i = 0; i < n; ++i)
      pts.push_back({Rat(rng.int_in(-3, 3)), Rat(rng.int_in(-3, 3)), Rat(rng.int_in(-3, 3))});
    auto p = convex_hull(pts);
    check_polytope_invariants(p);
    // V/H mutual containment: H-rep feasible points are in the hull
    auto q = polytope_from_halfspaces(3, p.halfspaces);
    REQUIRE(same_polytope(p, q));
    for (const auto& x : pts) REQUIRE(p.contains(x));
  }
}

TEST_CASE("cone over graded points and its body") {
  auto [cone, body] = cone_and_body({{{0}, 1}, {{1}, 1}});
  REQUIRE(body.ambient == 1);
  REQUIRE(volume(body) == 1);
  REQUIRE(cone.generators.size() == 2);

  auto [cone2, body2] = cone_and_body({{{1}, 1}, {{1}, 2}});
  REQUIRE(body2.vertices.size() == 2);
  REQUIRE(body2.vertices[0] == qv({"1/2"}));
  REQUIRE(body2.vertices[1] == qv({"1"}));

  REQUIRE_THROWS_AS(cone_and_body({}), std::invalid_argument);
}

TEST_CASE("cone body monotone under extra generators") {
  std::vector<std::pair<LVec, long long>> pts = {{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 1}};
  auto [c1, b1] = cone_and_body(pts);
  pts.push_back({{3, 3}, 2});
  auto [c2, b2] = cone_and_body(pts);
  REQUIRE(polytope_subset(b1, b2));
  REQUIRE(!polytope_subset(b2, b1));
}

TEST_CASE("minkowski sum of segments is a box") {
  auto sx = convex_hull({qv({"0", "0"}), qv({"1", "0"})});
  auto sy = convex_hull({qv({"0", "0"}), qv({"0", "2"})});
  auto box = minkowski_sum(sx, sy);
  REQUIRE(volume(box) == 2);
}

TEST_CASE("polytope json round trip shape") {
  auto p = convex_hull({qv({"0", "0"}), qv({"1/2", "0"}), qv({"0", "1/3"})});
  auto j = polytope_json(p);
  REQUIRE(j["ambient"] == 2);
  REQUIRE(j["vertices"].size() == 3);
  REQUIRE(j["vertices"][0][0].get<std::string>() == "0");
}
