#pragma once

// Exact convex geometry in ambient dimension <= 4: hulls carrying both V- and
// H-representations, volumes by base-vertex triangulation, coordinate slices,
// lattice point enumeration, Minkowski sums, and cones over graded point sets.
//
// Hull strategy: dimensions 0/1 are direct, dimension 2 uses a monotone chain,
// dimensions 3/4 filter to extreme points with an exact LP and then enumerate
// facet hyperplanes through subsets of extremes. Degenerate inputs are reduced
// to their affine span first and carry the span equations in the H-form.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nok/linalg.hpp"
#include "nok/rational.hpp"

namespace nok {

struct Halfspace {
  LVec normal;  // primitive integer vector
  Rat offset;   // <normal, x> >= offset
  friend bool operator<(const Halfspace& a, const Halfspace& b) {
    if (a.normal != b.normal) return a.normal < b.normal;
    return a.offset < b.offset;
  }
  friend bool operator==(const Halfspace& a, const Halfspace& b) {
    return a.normal == b.normal && a.offset == b.offset;
  }
};

struct Polytope {
  int ambient = 0;
  int adim = -1;  // affine dimension; -1 means empty
  std::vector<QVec> vertices;        // sorted lexicographically, irredundant
  std::vector<Halfspace> halfspaces; // facets, plus span equations as +/- pairs

  bool empty() const { return adim < 0; }

  bool contains(const QVec& x) const {
    if (empty()) return false;
    for (const auto& h : halfspaces)
      if (dot(h.normal, x) < h.offset) return false;
    return true;
  }

  bool contains_strictly(const QVec& x) const {
    if (empty()) return false;
    for (const auto& h : halfspaces)
      if (dot(h.normal, x) <= h.offset) return false;
    return true;
  }
};

namespace detail {

inline void canonicalize(Polytope& p) {
  std::sort(p.vertices.begin(), p.vertices.end());
  p.vertices.erase(std::unique(p.vertices.begin(), p.vertices.end()), p.vertices.end());
  std::sort(p.halfspaces.begin(), p.halfspaces.end());
  p.halfspaces.erase(std::unique(p.halfspaces.begin(), p.halfspaces.end()),
                     p.halfspaces.end());
}

// orientation of c relative to segment a->b
inline int orient2(const QVec& a, const QVec& b, const QVec& c) {
  Rat v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  return v == 0 ? 0 : (v > 0 ? 1 : -1);
}

// counter-clockwise hull of >= 3 non-collinear deduped sorted points
inline std::vector<size_t> chain2(const std::vector<QVec>& pts) {
  size_t n = pts.size();
  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;  // already sorted
  std::vector<size_t> h(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && orient2(pts[h[k - 2]], pts[h[k - 1]], pts[idx[i]]) <= 0) --k;
    h[k++] = idx[i];
  }
  size_t lower = k + 1;
  for (size_t i = n - 1; i-- > 0;) {
    while (k >= lower && orient2(pts[h[k - 2]], pts[h[k - 1]], pts[idx[i]]) <= 0) --k;
    h[k++] = idx[i];
  }
  h.resize(k - 1);
  return h;  // CCW order
}

// hyperplane through k affinely independent points of Q^k: primitive normal + offset
inline std::optional<Halfspace> hyperplane_through(const std::vector<QVec>& pts,
                                                   const std::vector<size_t>& sub) {
  size_t k = pts[0].size();
  QMat dirs;
  for (size_t i = 1; i < sub.size(); ++i) dirs.push_back(pts[sub[i]] - pts[sub[0]]);
  QMat ker = kernel_basis(QMat(dirs), k);
  if (ker.size() != 1) return std::nullopt;  // not spanning a hyperplane
  LVec n = primitive(ker[0]);
  Halfspace h;
  h.normal = n;
  h.offset = dot(n, pts[sub[0]]);
  return h;
}

// full-dimensional hull in dimension k >= 1; points deduped, sorted, spanning
inline std::pair<std::vector<size_t>, std::vector<Halfspace>> hull_fulldim(
    const std::vector<QVec>& pts, int k) {
  std::vector<size_t> verts;
  std::vector<Halfspace> hs;
  size_t n = pts.size();
  if (k == 1) {
    size_t lo = 0, hi = 0;
    for (size_t i = 1; i < n; ++i) {
      if (pts[i][0] < pts[lo][0]) lo = i;
      if (pts[i][0] > pts[hi][0]) hi = i;
    }
    verts = {lo, hi};
    hs.push_back({{1}, pts[lo][0]});
    hs.push_back({{-1}, -pts[hi][0]});
    std::sort(verts.begin(), verts.end());
    return {verts, hs};
  }
  if (k == 2) {
    std::vector<size_t> ccw = chain2(pts);
    verts = ccw;
    for (size_t i = 0; i < ccw.size(); ++i) {
      const QVec& a = pts[ccw[i]];
      const QVec& b = pts[ccw[(i + 1) % ccw.size()]];
      QVec nq = {-(b[1] - a[1]), b[0] - a[0]};  // inward for CCW
      LVec nn = primitive(nq);
      hs.push_back({nn, dot(nn, a)});
    }
    std::sort(verts.begin(), verts.end());
    return {verts, hs};
  }
  // k == 3 or 4: keep extreme points, then enumerate facet hyperplanes
  std::vector<size_t> ext;
  for (size_t i = 0; i < n; ++i) {
    std::vector<QVec> others;
    others.reserve(n - 1);
    for (size_t j = 0; j < n; ++j)
      if (j != i) others.push_back(pts[j]);
    if (!in_convex_hull(pts[i], others)) ext.push_back(i);
  }
  std::set<Halfspace> facets;
  std::vector<size_t> sub(static_cast<size_t>(k));
  std::vector<size_t> comb(static_cast<size_t>(k));
  size_t m = ext.size();
  // iterate k-subsets of ext
  for (size_t i = 0; i < static_cast<size_t>(k); ++i) comb[i] = i;
  while (true) {
    for (size_t i = 0; i < static_cast<size_t>(k); ++i) sub[i] = ext[comb[i]];
    auto h = hyperplane_through(pts, sub);
    if (h) {
      bool above = false, below = false;
      for (size_t e : ext) {
        Rat s = dot(h->normal, pts[e]) - h->offset;
        if (s > 0) above = true;
        if (s < 0) below = true;
        if (above && below) break;
      }
      if (!(above && below)) {
        Halfspace f = *h;
        if (below) {  // flip so every hull point satisfies >=
          for (auto& c : f.normal) c = -c;
          f.offset = -f.offset;
        }
        facets.insert(f);
      }
    }
    // next combination
    size_t i = static_cast<size_t>(k);
    while (i-- > 0) {
      if (comb[i] != i + m - static_cast<size_t>(k)) {
        ++comb[i];
        for (size_t j = i + 1; j < static_cast<size_t>(k); ++j) comb[j] = comb[j - 1] + 1;
        break;
      }
      if (i == 0) { i = SIZE_MAX; break; }
    }
    if (i == SIZE_MAX || m < static_cast<size_t>(k)) break;
  }
  verts = ext;
  std::sort(verts.begin(), verts.end());
  hs.assign(facets.begin(), facets.end());
  return {verts, hs};
}

}  // namespace detail

inline Polytope convex_hull(std::vector<QVec> pts) {
  if (pts.empty()) throw std::invalid_argument("convex_hull: empty point set");
  size_t n = pts[0].size();
  if (n == 0 || n > 4)
    throw std::invalid_argument("convex_hull: ambient dimension must be 1..4");
  for (const auto& p : pts)
    if (p.size() != n) throw std::invalid_argument("convex_hull: dimension mismatch");
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  Polytope out;
  out.ambient = static_cast<int>(n);

  const QVec& p0 = pts[0];
  QMat dirs;
  for (size_t i = 1; i < pts.size(); ++i) dirs.push_back(pts[i] - p0);
  QMat red = dirs;
  RrefResult rr = rref(red);
  int k = static_cast<int>(rr.rank);
  out.adim = k;

  // span equations (present whenever the hull is degenerate)
  if (k < static_cast<int>(n)) {
    QMat ker = kernel_basis(QMat(dirs), n);
    for (const auto& w : ker) {
      LVec nw = primitive(w);
      Rat c = dot(nw, p0);
      out.halfspaces.push_back({nw, c});
      LVec neg = nw;
      for (auto& x : neg) x = -x;
      out.halfspaces.push_back({neg, -c});
    }
  }
  if (k == 0) {
    out.vertices = {p0};
    detail::canonicalize(out);
    return out;
  }

  // reduce to pivot coordinates (injective on the affine span)
  std::vector<int> piv = rr.pivot_cols;
  std::vector<QVec> rpts(pts.size(), QVec(static_cast<size_t>(k)));
  for (size_t i = 0; i < pts.size(); ++i)
    for (int j = 0; j < k; ++j) rpts[i][static_cast<size_t>(j)] = pts[i][static_cast<size_t>(piv[static_cast<size_t>(j)])];

  // reduced points must be sorted for chain2; keep the permutation
  std::vector<size_t> order(pts.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return rpts[a] < rpts[b]; });
  std::vector<QVec> sorted_r(pts.size());
  for (size_t i = 0; i < order.size(); ++i) sorted_r[i] = rpts[order[i]];

  auto [vidx, hs_red] = detail::hull_fulldim(sorted_r, k);
  for (size_t vi : vidx) out.vertices.push_back(pts[order[vi]]);
  for (const auto& h : hs_red) {
    LVec nfull(n, 0);
    for (int j = 0; j < k; ++j) nfull[static_cast<size_t>(piv[static_cast<size_t>(j)])] = h.normal[static_cast<size_t>(j)];
    out.halfspaces.push_back({nfull, h.offset});
  }
  detail::canonicalize(out);
  return out;
}

inline Polytope empty_polytope(int ambient) {
  Polytope p;
  p.ambient = ambient;
  p.adim = -1;
  return p;
}

inline Polytope polytope_from_halfspaces(int ambient, std::vector<Halfspace> hs) {
  if (ambient < 1 || ambient > 4)
    throw std::invalid_argument("polytope_from_halfspaces: ambient must be 1..4");
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
  size_t m = hs.size();
  std::vector<QVec> verts;
  if (m >= static_cast<size_t>(ambient)) {
    std::vector<size_t> comb(static_cast<size_t>(ambient));
    for (size_t i = 0; i < comb.size(); ++i) comb[i] = i;
    while (true) {
      QMat a;
      QVec b;
      for (size_t i : comb) {
        a.push_back(qvec_of(hs[i].normal));
        b.push_back(hs[i].offset);
      }
      auto x = solve_square(std::move(a), std::move(b));
      if (x) {
        bool ok = true;
        for (const auto& h : hs)
          if (dot(h.normal, *x) < h.offset) { ok = false; break; }
        if (ok) verts.push_back(*x);
      }
      size_t i = comb.size();
      bool done = true;
      while (i-- > 0) {
        if (comb[i] != i + m - comb.size()) {
          ++comb[i];
          for (size_t j = i + 1; j < comb.size(); ++j) comb[j] = comb[j - 1] + 1;
          done = false;
          break;
        }
      }
      if (done) break;
    }
  }
  if (verts.empty()) return empty_polytope(ambient);
  return convex_hull(std::move(verts));
}

// { x in R^(d-r) : (a, x) in P }
inline Polytope slice_prefix(const Polytope& p, const QVec& a) {
  size_t r = a.size();
  if (static_cast<int>(r) >= p.ambient)
    throw std::invalid_argument("slice: prefix length must be < ambient dimension");
  int amb = p.ambient - static_cast<int>(r);
  if (p.empty()) return empty_polytope(amb);
  std::vector<Halfspace> hs;
  for (const auto& h : p.halfspaces) {
    Rat shift = 0;
    for (size_t i = 0; i < r; ++i) shift += Rat(h.normal[i]) * a[i];
    LVec tail(h.normal.begin() + static_cast<long>(r), h.normal.end());
    bool zero = true;
    for (long long c : tail)
      if (c != 0) { zero = false; break; }
    if (zero) {
      if (shift < h.offset) return empty_polytope(amb);  // violated constant constraint
      continue;
    }
    Rat off = h.offset - shift;
    // keep normals primitive in the sliced space
    Int g = 0;
    for (long long c : tail) g = boost::multiprecision::gcd(g, Int(c < 0 ? -c : c));
    if (g > 1) {
      for (auto& c : tail) c = to_ll(Int(c) / g);
      off /= Rat(g);
    }
    hs.push_back({tail, off});
  }
  return polytope_from_halfspaces(amb, std::move(hs));
}

namespace detail {

// triangulation of a full-dimensional polytope; returns (k+1)-tuples of
// vertex indices into `verts`
inline std::vector<std::vector<size_t>> triangulate_fulldim(
    const std::vector<QVec>& verts, const std::vector<Halfspace>& hs, int k) {
  std::vector<std::vector<size_t>> out;
  if (k == 1) {
    size_t lo = 0, hi = 0;
    for (size_t i = 1; i < verts.size(); ++i) {
      if (verts[i] < verts[lo]) lo = i;
      if (verts[hi] < verts[i]) hi = i;
    }
    if (lo != hi) out.push_back({lo, hi});
    return out;
  }
  size_t v0 = 0;  // verts sorted, take lexicographic minimum
  for (const auto& h : hs) {
    Rat s0 = dot(h.normal, verts[v0]) - h.offset;
    if (s0 <= 0) continue;  // facet contains v0 (or equality); skip
    std::vector<size_t> f;
    for (size_t i = 0; i < verts.size(); ++i)
      if (dot(h.normal, verts[i]) == h.offset) f.push_back(i);
    if (f.size() < static_cast<size_t>(k)) continue;
    // project away the coordinate where the normal is largest in magnitude
    size_t drop = 0;
    long long best = 0;
    for (size_t j = 0; j < h.normal.size(); ++j) {
      long long aj = h.normal[j] < 0 ? -h.normal[j] : h.normal[j];
      if (aj > best) { best = aj; drop = j; }
    }
    std::vector<QVec> fred;
    for (size_t i : f) {
      QVec q;
      for (size_t j = 0; j < verts[i].size(); ++j)
        if (j != drop) q.push_back(verts[i][j]);
      fred.push_back(q);
    }
    std::map<QVec, size_t> back;
    for (size_t i = 0; i < f.size(); ++i) back[fred[i]] = f[i];
    std::vector<QVec> fsorted = fred;
    std::sort(fsorted.begin(), fsorted.end());
    fsorted.erase(std::unique(fsorted.begin(), fsorted.end()), fsorted.end());
    auto [fi, fhs] = hull_fulldim(fsorted, k - 1);
    auto sub = triangulate_fulldim(fsorted, fhs, k - 1);
    if (k - 1 == 1 && sub.empty() && !fi.empty()) continue;
    for (const auto& s : sub) {
      std::vector<size_t> simplex = {v0};
      for (size_t si : s) simplex.push_back(back[fsorted[si]]);
      out.push_back(simplex);
    }
  }
  return out;
}

inline Rat simplex_volume(const std::vector<QVec>& pts) {
  size_t k = pts.size() - 1;
  QMat m;
  for (size_t i = 1; i <= k; ++i) m.push_back(pts[i] - pts[0]);
  Rat d = det(std::move(m));
  if (d < 0) d = -d;
  Rat fact = 1;
  for (size_t i = 2; i <= k; ++i) fact *= Rat(i);
  return d / fact;
}

}  // namespace detail

// Euclidean volume in the ambient dimension (0 when degenerate)
inline Rat volume(const Polytope& p) {
  if (p.empty() || p.adim < p.ambient) return Rat(0);
  if (p.ambient == 0) return Rat(0);
  if (p.adim == 0) return Rat(0);
  std::vector<Halfspace> facets = p.halfspaces;
  auto tris = detail::triangulate_fulldim(p.vertices, facets, p.ambient);
  Rat v = 0;
  for (const auto& t : tris) {
    std::vector<QVec> pts;
    for (size_t i : t) pts.push_back(p.vertices[i]);
    v += detail::simplex_volume(pts);
  }
  return v;
}

// measure inside the affine span, computed in the pivot-coordinate chart
// (counting measure 1 for a single point)
inline Rat affine_volume(const Polytope& p) {
  if (p.empty()) return Rat(0);
  if (p.adim == 0) return Rat(1);
  if (p.adim == p.ambient) return volume(p);
  QMat dirs;
  for (size_t i = 1; i < p.vertices.size(); ++i)
    dirs.push_back(p.vertices[i] - p.vertices[0]);
  QMat red = dirs;
  RrefResult rr = rref(red);
  std::vector<QVec> rpts;
  for (const auto& v : p.vertices) {
    QVec q;
    for (int c : rr.pivot_cols) q.push_back(v[static_cast<size_t>(c)]);
    rpts.push_back(q);
  }
  return volume(convex_hull(rpts));
}

inline std::vector<LVec> lattice_points(const Polytope& p) {
  std::vector<LVec> out;
  if (p.empty()) return out;
  size_t n = static_cast<size_t>(p.ambient);
  std::vector<long long> lo(n), hi(n);
  for (size_t j = 0; j < n; ++j) {
    Rat mn = p.vertices[0][j], mx = p.vertices[0][j];
    for (const auto& v : p.vertices) {
      if (v[j] < mn) mn = v[j];
      if (v[j] > mx) mx = v[j];
    }
    lo[j] = to_ll(rat_ceil(mn));
    hi[j] = to_ll(rat_floor(mx));
  }
  LVec cur(n);
  auto rec = [&](auto&& self, size_t j) -> void {
    if (j == n) {
      QVec q = qvec_of(cur);
      if (p.contains(q)) out.push_back(cur);
      return;
    }
    for (long long x = lo[j]; x <= hi[j]; ++x) {
      cur[j] = x;
      self(self, j + 1);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

inline Polytope minkowski_sum(const Polytope& a, const Polytope& b) {
  if (a.ambient != b.ambient) throw std::invalid_argument("minkowski_sum: dimension mismatch");
  if (a.empty() || b.empty()) return empty_polytope(a.ambient);
  std::vector<QVec> pts;
  for (const auto& u : a.vertices)
    for (const auto& v : b.vertices) pts.push_back(u + v);
  return convex_hull(pts);
}

inline Polytope dilate(const Polytope& p, const Rat& c) {
  if (c <= 0) throw std::invalid_argument("dilate: factor must be positive");
  Polytope q = p;
  for (auto& v : q.vertices)
    for (auto& x : v) x *= c;
  for (auto& h : q.halfspaces) h.offset *= c;
  return q;
}

inline bool polytope_subset(const Polytope& a, const Polytope& b) {
  if (a.empty()) return true;
  if (b.empty()) return false;
  for (const auto& v : a.vertices)
    if (!b.contains(v)) return false;
  return true;
}

inline bool same_polytope(const Polytope& a, const Polytope& b) {
  return a.ambient == b.ambient && a.adim == b.adim && a.vertices == b.vertices;
}

// ---- cones over graded point sets ----

struct RationalCone {
  int ambient = 0;
  std::vector<LVec> generators;  // primitive, pairwise distinct, sorted
};

// points (v, m) with level m >= 1; returns the cone they span and its slice
// at last coordinate 1 (equivalently the hull of { v/m })
inline std::pair<RationalCone, Polytope> cone_and_body(
    const std::vector<std::pair<LVec, long long>>& graded_points) {
  if (graded_points.empty())
    throw std::invalid_argument("cone_and_body: empty graded point set");
  std::vector<QVec> scaled;
  for (const auto& [v, m] : graded_points) {
    if (m < 1) throw std::invalid_argument("cone_and_body: level must be >= 1");
    QVec q(v.size());
    for (size_t i = 0; i < v.size(); ++i) q[i] = Rat(v[i], m);
    scaled.push_back(q);
  }
  Polytope body = convex_hull(scaled);
  RationalCone cone;
  cone.ambient = body.ambient + 1;
  std::set<LVec> gens;
  for (const auto& v : body.vertices) {
    QVec lift = v;
    lift.push_back(Rat(1));
    gens.insert(primitive(lift));
  }
  cone.generators.assign(gens.begin(), gens.end());
  return {cone, body};
}

// ---- serialization ----

inline nlohmann::json qvec_json(const QVec& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : v) a.push_back(rat_str(x));
  return a;
}

inline nlohmann::json polytope_json(const Polytope& p) {
  nlohmann::json j;
  j["ambient"] = p.ambient;
  j["affine_dim"] = p.adim;
  nlohmann::json vs = nlohmann::json::array();
  for (const auto& v : p.vertices) vs.push_back(qvec_json(v));
  j["vertices"] = vs;
  nlohmann::json hs = nlohmann::json::array();
  for (const auto& h : p.halfspaces) {
    nlohmann::json e;
    e["normal"] = h.normal;
    e["offset"] = rat_str(h.offset);
    hs.push_back(e);
  }
  j["halfspaces"] = hs;
  return j;
}

}  // namespace nok
