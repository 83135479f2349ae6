#pragma once

// Moving self-intersection numbers of linear series levels (dimensions 1 and
// 2) and the condition (A)/(B)/(C) report for graded series.
//
// Dimension 2 counts common zeros of two seeded members through a resultant
// on an affine chart and subtracts local multiplicities at the base points;
// a second independent seed must reproduce the count.

#include "nok/locus.hpp"

namespace nok {

struct MsiResult {
  long long count = 0;
  long long total = 0;           // intersection number before base corrections
  long long base_correction = 0;
  std::vector<std::string> notes;
};

namespace detail {

inline MPoly random_member(const std::vector<MPoly>& basis, Rng& rng) {
  MPoly s = mp_zero(basis[0].nvars);
  while (s.zero())
    for (const auto& b : basis) s = s + Rat(rng.int_in(-9, 9)) * b;
  return s;
}

// one resultant-based count for P^2-type spaces (affine chart x0 = 1)
inline std::optional<long long> msi_p2_once(const std::vector<MPoly>& freed,
                                            const std::vector<QVec>& base_pts,
                                            long long deg, Rng& rng,
                                            std::vector<std::string>& notes) {
  MPoly f = random_member(freed, rng);
  MPoly g = random_member(freed, rng);
  MPoly fa = mp_substitute_const(f, 2, Rat(1));
  MPoly ga = mp_substitute_const(g, 2, Rat(1));
  if (max_exponent(fa, 1) == 0 || max_exponent(ga, 1) == 0) return std::nullopt;
  MPoly r = resultant_y(fa, ga);
  if (r.zero()) return std::nullopt;  // members share a component; reseed
  if (max_exponent(r, 0) != deg * deg) {
    notes.push_back("resultant degree dropped (intersections at infinity); reseeding");
    return std::nullopt;
  }
  // base points need distinct x-coordinates for local multiplicities
  std::set<Rat> xs;
  for (const auto& p : base_pts)
    if (!xs.insert(p[0]).second) return std::nullopt;
  long long corr = 0;
  for (const auto& p : base_pts) corr += ord_at_root(r, p[0]);
  return deg * deg - corr;
}

}  // namespace detail

// d = 1: zeros of a general member away from the base points
inline MsiResult moving_self_intersection_curve(const GradedSeries& w, long long m) {
  MsiResult out;
  const SectionSpace& wm = w.level(m);
  if (wm.basis.empty()) throw std::invalid_argument("moving_self_intersection: zero level");
  const Carrier& car = wm.carrier;
  BaseLocusDescriptor b = base_locus_level(w, m);
  long long fixed = 0;
  for (const auto& [p, mult] : b.divisorial) fixed += mult;
  if (!b.notes.empty())
    out.notes.insert(out.notes.end(), b.notes.begin(), b.notes.end());
  long long total = 0;
  if (car.kind == Carrier::Kind::Proj && car.model->dim == 1) {
    total = wm.level * car.div_coeffs[0];
  } else if (car.kind == Carrier::Kind::Curve) {
    total = wm.level * car.curve_deg;
  } else if (car.kind == Carrier::Kind::Toric && car.model->dim == 1) {
    long long s = 0;
    for (long long c : car.div_coeffs) s += c;
    total = wm.level * s;
  } else {
    throw std::invalid_argument("moving_self_intersection_curve: carrier is not a curve");
  }
  // unresolved gcd factors still have known degree; count them as fixed
  for (const auto& note : b.notes)
    if (note.rfind("unresolved base factor of degree ", 0) == 0)
      fixed += std::stoll(note.substr(33));
  out.total = total;
  out.base_correction = fixed;
  out.count = total - fixed;
  return out;
}

// d = 2 on P^2 (or a P^2-type carrier): seeded resultant counting
inline MsiResult moving_self_intersection_surface(const GradedSeries& w, long long m,
                                                  std::uint64_t seed) {
  MsiResult out;
  const SectionSpace& wm = w.level(m);
  if (wm.basis.empty()) throw std::invalid_argument("moving_self_intersection: zero level");
  const Carrier& car = wm.carrier;
  if (!(car.kind == Carrier::Kind::Proj && car.model->dim == 2))
    throw std::invalid_argument(
        "moving_self_intersection_surface: projective plane carriers only");
  BaseLocusDescriptor b = base_locus_level(w, m);
  // strip the divisorial fixed part
  MPoly g{3, {}};
  long long fixed_deg = 0;
  for (const auto& [p, mult] : b.divisorial)
    if (p.kind == PrimeDivisorRef::Kind::Form) {
      g = p.form;
      fixed_deg = total_degree(g);
    }
  std::vector<MPoly> freed;
  for (const auto& bb : wm.basis) {
    if (fixed_deg > 0) {
      auto q = divide_exact(bb, g);
      if (!q) throw std::logic_error("moving_self_intersection: fixed part does not divide");
      freed.push_back(*q);
    } else {
      freed.push_back(bb);
    }
  }
  std::vector<QVec> base_pts;
  for (const auto& [pt, note] : b.residual_points) {
    if (note.rfind("point at infinity", 0) == 0)
      throw std::invalid_argument(
          "moving_self_intersection: residual base point at infinity; change coordinates");
    base_pts.push_back(pt);
  }
  for (const auto& note : b.notes)
    if (note.rfind("unresolved", 0) == 0)
      throw std::invalid_argument("moving_self_intersection: unresolved base locus factor");
  long long deg = wm.level * car.div_coeffs[0] - fixed_deg;
  out.total = deg * deg;
  Rng rng(seed);
  std::optional<long long> first, second;
  for (int attempt = 0; attempt < 5 && !second; ++attempt) {
    Rng sub = rng.fork(static_cast<std::uint64_t>(attempt));
    auto c = detail::msi_p2_once(freed, base_pts, deg, sub, out.notes);
    if (!c) continue;
    if (!first) {
      first = c;
      Rng sub2 = rng.fork(1000 + static_cast<std::uint64_t>(attempt));
      auto c2 = detail::msi_p2_once(freed, base_pts, deg, sub2, out.notes);
      if (c2) second = c2;
    }
  }
  if (!first || !second)
    throw std::runtime_error("moving_self_intersection: no stable seeded count in 5 attempts");
  if (*first != *second)
    throw std::runtime_error("moving_self_intersection: seed disagreement " +
                             std::to_string(*first) + " vs " + std::to_string(*second));
  out.count = *first;
  out.base_correction = out.total - out.count;
  return out;
}

// ---- conditions (A), (B), (C) ----

struct ConditionsReport {
  bool a_holds = false;
  long long a_bound = 0;
  bool b_growth = false;
  bool b_separates = false;
  bool b_fixed_component = false;
  std::string b_verdict;  // "consistent with (B)" or a failure note
  std::optional<bool> c_sandwich;  // set for V(D; a) inputs
  std::vector<std::string> notes;
};

// (A) and (B) for a series on its stage; value_flag drives the valuations
inline ConditionsReport check_conditions(const GradedSeries& w, const Flag& value_flag,
                                         const DivisorClass& d_for_bound, int d, long long M,
                                         std::uint64_t seed) {
  ConditionsReport rep;
  rep.a_bound = value_bound(value_flag, d_for_bound);
  rep.a_holds = true;
  std::vector<std::pair<long long, long long>> dims;
  for (long long m = 1; m <= M; ++m) {
    const SectionSpace& wm = w.level(m);
    dims.push_back({m, wm.dim()});
    if (wm.basis.empty()) continue;
    if (wm.carrier.kind == Carrier::Kind::Curve) continue;  // bound applies upstream
    for (const auto& v : value_set(value_flag, wm))
      for (long long x : v)
        if (x < 0 || x > wm.level * w.ell * rep.a_bound) rep.a_holds = false;
  }
  GrowthEstimate ge = growth_estimate(dims, d, w.ell);
  rep.b_growth = ge.estimate.has_value() && *ge.estimate > 0;
  // separation of seeded point pairs by sections
  Rng rng(seed);
  long long m_sep = (M / w.ell) * w.ell;
  while (m_sep > 0 && w.level(m_sep).basis.empty()) m_sep -= w.ell;
  if (m_sep > 0) {
    const SectionSpace& wm = w.level(m_sep);
    rep.b_separates = true;
    int tried = 0;
    for (int trial = 0; trial < 8 && tried < 4; ++trial) {
      // evaluation points in the dense chart
      int nv = wm.basis[0].nvars;
      QVec p(static_cast<size_t>(nv)), q(static_cast<size_t>(nv));
      for (auto& x : p) x = rng.rat_of_height(7);
      for (auto& x : q) x = rng.rat_of_height(7);
      if (p == q) continue;
      QMat evals(2, QVec(wm.basis.size()));
      bool pole = false;
      try {
        for (size_t i = 0; i < wm.basis.size(); ++i) {
          evals[0][i] = mp_eval(wm.basis[i], p);
          evals[1][i] = mp_eval(wm.basis[i], q);
        }
      } catch (const std::exception&) {
        pole = true;
      }
      if (pole) continue;
      ++tried;
      if (rank_of(evals) < std::min<long long>(2, wm.dim())) rep.b_separates = false;
    }
    // fixed components block (B)
    BaseLocusDescriptor bl = base_locus_level(w, m_sep);
    for (const auto& [pd, mult] : bl.divisorial)
      if (pd.kind == PrimeDivisorRef::Kind::Form || pd.kind == PrimeDivisorRef::Kind::ToricRay)
        rep.b_fixed_component = true;
  }
  rep.b_verdict = (rep.b_growth && rep.b_separates && !rep.b_fixed_component)
                      ? "consistent with (B) (heuristic, not a proof)"
                      : "not consistent with (B)";
  if (rep.b_fixed_component) rep.b_verdict += " (fixed component detected)";
  return rep;
}

// (C) for V(D; a): the sandwich inclusions at every computed level
inline bool check_sandwich(const VSeries& v, long long M, std::vector<std::string>* notes) {
  const Flag& f = v.base_flag;
  int r = static_cast<int>(v.a.size());
  bool ok = true;
  for (long long m = v.ell; m <= M; m += v.ell) {
    long long k = m / v.ell;
    const SectionSpace& vm = v.series.level(m);
    // lower bound: restriction of the twisted complete series on X
    GradedSeries twisted = complete_series(make_divisor(f.model, v.twisted_unit));
    SectionSpace lower;
    if (r == 0) {
      lower = twisted.level(k);
    } else {
      GradedSeries restr = restrict_series(twisted, f, r);
      lower = restr.level(k);
    }
    // upper bound: the complete series on the stage
    SectionSpace upper = r == 0 ? sections(make_divisor(f.model, v.twisted_unit), k)
                                : stage_complete(f, v.twisted_unit, r, k);
    bool low_ok = subspace_leq(lower, vm);
    bool up_ok = subspace_leq(vm, upper);
    if (!low_ok || !up_ok) {
      ok = false;
      if (notes)
        notes->push_back("sandwich fails at level " + std::to_string(m) +
                         (low_ok ? "" : " (lower)") + (up_ok ? "" : " (upper)"));
    }
  }
  return ok;
}

}  // namespace nok
