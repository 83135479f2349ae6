#pragma once

// Graded semigroups of series under a flag valuation, Okounkov bodies as
// certified inner approximations, volume reports, and semigroup/body slices.
//
// Exactness of a body is a certificate, not an assumption: the body is exact
// when the generators from levels <= ceil(M/2) already span the same cone as
// all levels <= M. Reports downgrade equality claims when the flag is unset.

#include "nok/moving.hpp"

namespace nok {

struct GradedSemigroup {
  long long M = 0;
  int val_dim = 0;
  std::map<long long, std::vector<LVec>> levels;  // sorted value lists per level
  std::string desc;
};

inline GradedSemigroup graded_semigroup(const Flag& value_flag, const GradedSeries& w,
                                        long long M) {
  if (M < 1) throw std::invalid_argument("graded_semigroup: truncation must be >= 1");
  GradedSemigroup g;
  g.M = M;
  g.desc = w.desc;
  for (long long m = 1; m <= M; ++m) {
    const SectionSpace& wm = w.level(m);
    if (wm.basis.empty()) {
      g.levels[m] = {};
      continue;
    }
    auto vs = value_set(value_flag, wm);
    if (g.val_dim == 0) g.val_dim = static_cast<int>(vs[0].size());
    g.levels[m] = std::move(vs);
  }
  return g;
}

// closure under addition within the truncation, checked on sampled pairs
inline bool semigroup_closed(const GradedSemigroup& g, Rng& rng, int samples = 64) {
  std::vector<std::pair<LVec, long long>> pts;
  for (const auto& [m, vs] : g.levels)
    for (const auto& v : vs) pts.push_back({v, m});
  if (pts.size() < 2) return true;
  for (int i = 0; i < samples; ++i) {
    const auto& [v1, m1] = pts[rng.below(pts.size())];
    const auto& [v2, m2] = pts[rng.below(pts.size())];
    if (m1 + m2 > g.M) continue;
    LVec sum = v1 + v2;
    const auto& target = g.levels.at(m1 + m2);
    if (!std::binary_search(target.begin(), target.end(), sum)) return false;
  }
  return true;
}

struct BodyApprox {
  Polytope body;
  RationalCone cone;
  bool exact = false;
  std::string exactness_note;
  std::map<long long, long long> level_counts;
  long long M = 0;
};

inline BodyApprox okounkov_body(const GradedSemigroup& g) {
  std::vector<std::pair<LVec, long long>> pts, half;
  for (const auto& [m, vs] : g.levels) {
    for (const auto& v : vs) {
      pts.push_back({v, m});
      if (2 * m <= g.M + 1) half.push_back({v, m});
    }
  }
  if (pts.empty()) throw std::invalid_argument("okounkov_body: all levels are empty");
  BodyApprox out;
  out.M = g.M;
  for (const auto& [m, vs] : g.levels) out.level_counts[m] = static_cast<long long>(vs.size());
  auto [cone, body] = cone_and_body(pts);
  out.cone = cone;
  out.body = body;
  if (!half.empty()) {
    auto [hc, hb] = cone_and_body(half);
    if (same_polytope(hb, body)) {
      out.exact = true;
      out.exactness_note = "generators stabilized at half truncation";
    } else {
      out.exactness_note = "inner approximation only (hull still growing at truncation)";
    }
  } else {
    out.exactness_note = "no generators below half truncation";
  }
  return out;
}

inline GradedSemigroup slice_semigroup(const GradedSemigroup& g, const QVec& a) {
  int r = static_cast<int>(a.size());
  if (r >= g.val_dim && g.val_dim > 0)
    throw std::invalid_argument("slice_semigroup: prefix length must be < value dimension");
  GradedSemigroup out;
  out.M = g.M;
  out.val_dim = g.val_dim - r;
  out.desc = g.desc + " sliced";
  for (const auto& [m, vs] : g.levels) {
    std::vector<LVec> kept;
    for (const auto& v : vs) {
      bool ok = true;
      for (int i = 0; i < r; ++i)
        if (Rat(v[static_cast<size_t>(i)]) != Rat(m) * a[static_cast<size_t>(i)]) { ok = false; break; }
      if (ok) kept.push_back(LVec(v.begin() + r, v.end()));
    }
    std::sort(kept.begin(), kept.end());
    out.levels[m] = std::move(kept);
  }
  return out;
}

// ---- volume report ----

struct VolumeReport {
  GrowthEstimate dims;            // d! * leading coefficient of dim growth
  std::optional<Rat> body_value;  // d! * volume(body)
  bool body_exact = false;
  std::optional<bool> agreement;  // set when both sides are exact
  BodyApprox body;
  std::vector<std::string> notes;
};

inline VolumeReport volume_of_series(const Flag& value_flag, const GradedSeries& w, int d,
                                     long long M) {
  VolumeReport out;
  std::vector<std::pair<long long, long long>> dims;
  bool any = false;
  for (long long m = 1; m <= M; ++m) {
    long long dm = w.level(m).dim();
    dims.push_back({m, dm});
    if (dm > 0) any = true;
  }
  if (!any) throw std::invalid_argument("volume_of_series: series empty up to truncation");
  out.dims = growth_estimate(dims, d, w.ell);
  GradedSemigroup g = graded_semigroup(value_flag, w, M);
  out.body = okounkov_body(g);
  Rat fact = 1;
  for (int i = 2; i <= d; ++i) fact *= i;
  out.body_value = fact * volume(out.body.body);
  out.body_exact = out.body.exact;
  if (out.body_exact && out.dims.exact) {
    out.agreement = (*out.body_value == *out.dims.estimate);
  } else {
    out.notes.push_back("equality reported only as consistency within truncation");
  }
  return out;
}

// ---- slice comparison ----

struct SliceCompare {
  Polytope body_slice;    // Delta(Gamma)|_a
  Polytope sliced_body;   // Delta(Gamma|_a)
  bool containment = false;    // sliced_body subseteq body_slice (always expected)
  bool equality = false;
  bool interior_witnessed = false;
  bool body_exact = false;
  std::vector<std::string> notes;
};

inline SliceCompare body_slice_compare(const Flag& value_flag, const GradedSeries& w,
                                       const QVec& a, long long M) {
  SliceCompare out;
  GradedSemigroup g = graded_semigroup(value_flag, w, M);
  BodyApprox full = okounkov_body(g);
  out.body_exact = full.exact;
  out.body_slice = slice_prefix(full.body, a);
  GradedSemigroup gs = slice_semigroup(g, a);
  bool any = false;
  for (const auto& [m, vs] : gs.levels)
    if (!vs.empty()) any = true;
  if (!any) {
    out.sliced_body = empty_polytope(out.body_slice.ambient);
    out.containment = true;
    out.equality = out.body_slice.empty();
    out.notes.push_back("sliced semigroup is empty");
    return out;
  }
  BodyApprox sliced = okounkov_body(gs);
  out.sliced_body = sliced.body;
  out.containment = polytope_subset(out.sliced_body, out.body_slice);
  out.equality = same_polytope(out.sliced_body, out.body_slice);
  // interior witness: a rational point of the slice strictly inside the body
  if (!out.sliced_body.empty() && !out.sliced_body.vertices.empty()) {
    QVec centroid(out.sliced_body.vertices[0].size(), Rat(0));
    for (const auto& v : out.sliced_body.vertices) centroid = centroid + v;
    Rat inv(1, static_cast<long long>(out.sliced_body.vertices.size()));
    centroid = inv * centroid;
    QVec lifted = a;
    for (const auto& c : centroid) lifted.push_back(c);
    out.interior_witnessed = full.body.contains_strictly(lifted);
  }
  if (!out.interior_witnessed)
    out.notes.push_back("boundary slice: interior hypothesis not witnessed");
  return out;
}

// ---- serialization ----

inline nlohmann::json semigroup_json(const GradedSemigroup& g) {
  nlohmann::json j;
  j["truncation"] = g.M;
  j["value_dim"] = g.val_dim;
  nlohmann::json lv;
  for (const auto& [m, vs] : g.levels) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : vs) arr.push_back(v);
    lv[std::to_string(m)] = arr;
  }
  j["levels"] = lv;
  return j;
}

inline nlohmann::json body_json(const BodyApprox& b) {
  nlohmann::json j;
  j["body"] = polytope_json(b.body);
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : b.cone.generators) gens.push_back(g);
  j["cone_generators"] = gens;
  j["exact"] = b.exact;
  j["exactness_note"] = b.exactness_note;
  nlohmann::json counts;
  for (const auto& [m, c] : b.level_counts) counts[std::to_string(m)] = c;
  j["level_point_counts"] = counts;
  return j;
}

}  // namespace nok
