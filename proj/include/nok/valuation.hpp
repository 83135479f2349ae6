#pragma once

// Flag valuations of sections and whole subspaces.
//
// Monomial-friendly stages (toric models, linear flags in flag coordinates)
// compute value sets by row reduction over a monomial order sorted by the
// valuation key, so pivots read off the values directly. The P1xP1
// hyperplane-section flag is the one genuinely non-monomial case and uses
// an elimination loop with exact leading-scalar cancellation.

#include <functional>

#include "nok/flag.hpp"

namespace nok {

// ---- generic subspace utilities ----

inline void canonicalize_space(SectionSpace& w) {
  std::vector<MPoly> nonzero;
  for (auto& f : w.basis)
    if (!f.zero()) nonzero.push_back(f);
  if (nonzero.empty()) { w.basis.clear(); return; }
  auto monos = monomial_union(nonzero);
  QMat m = poly_matrix(nonzero, monos);
  m = row_space_basis(std::move(m));
  int nv = nonzero[0].nvars;
  w.basis.clear();
  for (const auto& row : m) w.basis.push_back(poly_from_row(row, monos, nv));
}

inline bool space_contains(const SectionSpace& w, const MPoly& f) {
  if (f.zero()) return true;
  std::vector<MPoly> all = w.basis;
  all.push_back(f);
  auto monos = monomial_union(all);
  QMat m = poly_matrix(w.basis, monos);
  QVec v = poly_matrix({f}, monos)[0];
  return in_row_space(m, v);
}

inline bool subspace_leq(const SectionSpace& a, const SectionSpace& b) {
  if (a.basis.empty()) return true;
  std::vector<MPoly> all = a.basis;
  for (const auto& f : b.basis) all.push_back(f);
  auto monos = monomial_union(all);
  QMat bm = poly_matrix(b.basis, monos);
  long long rb = rank_of(bm);
  QMat both = poly_matrix(all, monos);
  return rank_of(both) == rb;
}

inline bool same_subspace(const SectionSpace& a, const SectionSpace& b) {
  return subspace_leq(a, b) && subspace_leq(b, a);
}

namespace detail {

inline bool is_identity(const QMat& t) {
  for (size_t i = 0; i < t.size(); ++i)
    for (size_t j = 0; j < t.size(); ++j)
      if (t[i][j] != ((i == j) ? 1 : 0)) return false;
  return true;
}

// valuation key of a toric monomial: nu_j = <u, w_j> + m * a_{w_j}
inline LVec toric_key(const Flag& f, const std::vector<long long>& coeffs, long long m,
                      const LVec& u) {
  LVec key;
  for (size_t j = 0; j < f.ray_order.size(); ++j) {
    const LVec& w = flag_ray(f, static_cast<int>(j));
    key.push_back(dot(u, w) + m * coeffs[static_cast<size_t>(f.ray_order[j])]);
  }
  return key;
}

// Taylor coefficients of a univariate polynomial around p, ascending
inline QVec taylor_at(const MPoly& f, const Rat& p, long long window) {
  std::vector<Rat> d = to_dense(f);
  QVec out(static_cast<size_t>(window + 1), Rat(0));
  // repeated synthetic division by (x - p)
  for (long long k = 0; k <= window && !d.empty(); ++k) {
    Rat val = 0;
    for (size_t i = d.size(); i-- > 0;) val = val * p + d[i];
    out[static_cast<size_t>(k)] = val;
    std::vector<Rat> q(d.size() > 1 ? d.size() - 1 : 0);
    Rat carry = 0;
    for (size_t i = d.size(); i-- > 1;) {
      carry = d[i] + carry * p;
      q[i - 1] = carry;
    }
    d = std::move(q);
  }
  return out;
}

struct QuadricData {
  long long t = 0;       // order along the curve
  long long ord = 0;     // order at the point after restriction
  Rat lead;              // leading scalar in the shared trivialization
};

inline void quadric_box(const SectionSpace& w, long long t, long long& xlo,
                        long long& xhi, long long& ylo, long long& yhi) {
  // box of the polytope of m*D - t*A on P1xP1
  std::vector<long long> c(w.carrier.div_coeffs.size());
  const auto& rays = w.carrier.model->fan.rays;
  for (size_t i = 0; i < c.size(); ++i) {
    long long amul = (rays[i][0] < 0 || rays[i][1] < 0) ? 1 : 0;
    c[i] = w.level * w.carrier.div_coeffs[i] - t * amul;
  }
  DivisorClass dd = make_divisor(w.carrier.model, c);
  Polytope p = divisor_polytope(dd);
  if (p.empty()) throw std::logic_error("quadric_box: empty twisted polytope");
  xlo = xhi = to_ll(numerator(p.vertices[0][0]));
  ylo = yhi = to_ll(numerator(p.vertices[0][1]));
  for (const auto& v : p.vertices) {
    long long x = to_ll(rat_floor(v[0])), X = to_ll(rat_ceil(v[0]));
    long long y = to_ll(rat_floor(v[1])), Y = to_ll(rat_ceil(v[1]));
    xlo = std::min(xlo, x);
    xhi = std::max(xhi, X);
    ylo = std::min(ylo, y);
    yhi = std::max(yhi, Y);
  }
}

inline QuadricData quadric_valuate(const Flag& f, const SectionSpace& w, const MPoly& s) {
  QuadricData out;
  MPoly q = quadric_poly(f);
  long long xlo, xhi, ylo, yhi;
  quadric_box(w, 0, xlo, xhi, ylo, yhi);
  long long cap = std::min(xhi - xlo, yhi - ylo) + 1;
  MPoly cur = s;
  out.t = 0;
  while (out.t < cap) {
    auto d = divide_exact(cur, q);
    if (!d) break;
    cur = *d;
    ++out.t;
  }
  quadric_box(w, out.t, xlo, xhi, ylo, yhi);
  MPoly g = quadric_param(f, cur, xlo, xhi, ylo, yhi);
  if (g.zero()) throw std::logic_error("quadric_valuate: restriction vanished");
  out.ord = ord_at_root(g, f.p0);
  QVec tc = taylor_at(g, f.p0, out.ord);
  out.lead = tc[static_cast<size_t>(out.ord)];
  return out;
}

}  // namespace detail

// full valuation vector of a nonzero section of the space w
inline LVec valuate(const Flag& f, const SectionSpace& w, const MPoly& s) {
  if (s.zero()) throw std::invalid_argument("valuate: the zero section has no valuation");
  switch (f.kind) {
    case Flag::Kind::ToricInvariant: {
      bool first = true;
      LVec best;
      for (const auto& [u, c] : s.terms) {
        LVec key = detail::toric_key(f, w.carrier.div_coeffs, w.level, u);
        if (first || key < best) { best = key; first = false; }
      }
      return best;
    }
    case Flag::Kind::ProjLinear: {
      MPoly t = detail::is_identity(f.T) ? s : to_flag_coords(f, s);
      int d = f.dim();
      bool first = true;
      LVec best;
      for (const auto& [e, c] : t.terms) {
        LVec key(e.begin(), e.begin() + d);
        if (first || key < best) { best = key; first = false; }
      }
      return best;
    }
    case Flag::Kind::QuadricCurve: {
      auto qd = detail::quadric_valuate(f, w, s);
      return {qd.t, qd.ord};
    }
  }
  throw std::logic_error("valuate: unknown flag kind");
}

// order of vanishing at the marked point of a curve-stage section
inline long long curve_ord(const SectionSpace& w, const MPoly& s) {
  if (w.carrier.kind != Carrier::Kind::Curve)
    throw std::invalid_argument("curve_ord: curve stages only");
  return ord_at_root(s, w.carrier.curve_point);
}

// ---- value sets ----

// value set of a subspace: the image of the valuation on nonzero elements;
// its size always equals dim W
inline std::vector<LVec> value_set(const Flag& f, const SectionSpace& w) {
  std::vector<LVec> out;
  if (w.basis.empty()) return out;
  if (w.carrier.kind == Carrier::Kind::Curve) {
    long long window = w.level * w.carrier.curve_deg;
    QMat m;
    for (const auto& b : w.basis)
      m.push_back(detail::taylor_at(b, w.carrier.curve_point, window));
    RrefResult rr = rref(m);
    for (int c : rr.pivot_cols) out.push_back({static_cast<long long>(c)});
    if (static_cast<long long>(out.size()) != w.dim())
      throw std::logic_error("value_set: curve stage rank mismatch");
    return out;
  }
  if (f.kind == Flag::Kind::QuadricCurve) {
    // elimination with exact cancellation of leading scalars
    std::vector<MPoly> basis = w.basis;
    std::vector<detail::QuadricData> data(basis.size());
    for (size_t i = 0; i < basis.size(); ++i)
      data[i] = detail::quadric_valuate(f, w, basis[i]);
    while (true) {
      // find a pair sharing a valuation
      std::map<std::pair<long long, long long>, size_t> seen;
      size_t a = basis.size(), b = basis.size();
      for (size_t i = 0; i < basis.size(); ++i) {
        auto key = std::make_pair(data[i].t, data[i].ord);
        auto it = seen.find(key);
        if (it != seen.end()) { a = it->second; b = i; break; }
        seen.emplace(key, i);
      }
      if (a == basis.size()) break;
      Rat c = data[b].lead / data[a].lead;
      basis[b] = basis[b] - c * basis[a];
      if (basis[b].zero())
        throw std::logic_error("value_set: dependent basis in elimination");
      data[b] = detail::quadric_valuate(f, w, basis[b]);
    }
    for (const auto& d : data) out.push_back({d.t, d.ord});
    std::sort(out.begin(), out.end());
    return out;
  }
  // monomial-order reduction: sort monomials by valuation key, pivots are values
  bool toric = w.carrier.kind == Carrier::Kind::Toric;
  if (f.kind == Flag::Kind::ProjLinear && !detail::is_identity(f.T) &&
      w.carrier.kind == Carrier::Kind::Proj) {
    // Complete monomial spaces are GL-invariant, so in flag coordinates the
    // space is again spanned by all monomials of its degree and the value set
    // is the full set of exponent prefixes. Anything smaller goes the slow way.
    bool all_monomials = true;
    long long deg = -1;
    for (const auto& b : w.basis) {
      if (b.terms.size() != 1) { all_monomials = false; break; }
      long long d0 = total_degree(b);
      if (deg < 0) deg = d0;
      if (d0 != deg) { all_monomials = false; break; }
    }
    int nv = w.basis[0].nvars;
    if (all_monomials && deg >= 0 &&
        static_cast<long long>(w.basis.size()) == binomial(deg + nv - 1, nv - 1)) {
      std::set<LVec> vals;
      for (const auto& b : w.basis) {
        const LVec& e = b.terms.begin()->first;
        vals.insert(LVec(e.begin(), e.begin() + f.dim()));
      }
      if (static_cast<long long>(vals.size()) != w.dim())
        throw std::logic_error("value_set: complete-space shortcut inconsistent");
      return {vals.begin(), vals.end()};
    }
  }
  std::vector<MPoly> basis = w.basis;
  if (f.kind == Flag::Kind::ProjLinear && !detail::is_identity(f.T))
    for (auto& bpoly : basis) bpoly = to_flag_coords(f, bpoly);
  auto monos = monomial_union(basis);
  int d = static_cast<int>(f.ray_order.size());
  if (f.kind == Flag::Kind::ProjLinear) d = f.dim();
  auto key_of = [&](const LVec& u) -> LVec {
    if (toric) return detail::toric_key(f, w.carrier.div_coeffs, w.level, u);
    return LVec(u.begin(), u.begin() + d);
  };
  std::stable_sort(monos.begin(), monos.end(), [&](const LVec& a, const LVec& b) {
    LVec ka = key_of(a), kb = key_of(b);
    if (ka != kb) return ka < kb;
    return a < b;
  });
  QMat m = poly_matrix(basis, monos);
  RrefResult rr = rref(m);
  if (rr.rank != static_cast<long long>(basis.size()))
    throw std::logic_error("value_set: basis not linearly independent");
  for (int c : rr.pivot_cols) out.push_back(key_of(monos[static_cast<size_t>(c)]));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (static_cast<long long>(out.size()) != w.dim())
    throw std::logic_error("value_set: repeated values (pivot keys must be distinct)");
  return out;
}

// minimum order of vanishing over a subspace along a prime divisor descriptor
// (toric ray index): the minimum over any spanning set equals the minimum
// over the space because orders only grow under linear combination
inline long long ord_along_ray(const SectionSpace& w, int ray) {
  if (w.basis.empty()) throw std::invalid_argument("ord_along_ray: zero subspace");
  if (w.carrier.kind != Carrier::Kind::Toric)
    throw std::invalid_argument("ord_along_ray: toric carriers only");
  DivisorClass d = make_divisor(w.carrier.model, w.carrier.div_coeffs);
  long long best = 0;
  bool first = true;
  for (const auto& b : w.basis) {
    long long o = toric_ord_along_ray(b, d, w.level, ray);
    if (first || o < best) { best = o; first = false; }
  }
  return best;
}

// minimum order of vanishing along the zero divisor of an irreducible form
inline long long ord_along_form(const SectionSpace& w, const MPoly& form) {
  if (w.basis.empty()) throw std::invalid_argument("ord_along_form: zero subspace");
  long long cap = 1 + total_degree(w.basis[0]);
  long long best = -1;
  for (const auto& b : w.basis) {
    long long o = divisibility_order(b, form, cap);
    if (best < 0 || o < best) best = o;
    if (best == 0) break;
  }
  return best;
}

inline long long ord_at_curve_point(const SectionSpace& w, const Rat& p) {
  if (w.basis.empty()) throw std::invalid_argument("ord_at_curve_point: zero subspace");
  long long best = -1;
  for (const auto& b : w.basis) {
    long long o = ord_at_root(b, p);
    if (best < 0 || o < best) best = o;
    if (best == 0) break;
  }
  return best;
}

// ---- condition (A): per-model valuation growth bound ----

inline long long value_bound(const Flag& f, const DivisorClass& d) {
  if (f.kind == Flag::Kind::ToricInvariant) {
    Polytope p = divisor_polytope(d);
    if (p.empty()) return 0;
    long long b = 0;
    for (int j = 0; j < f.dim(); ++j) {
      const LVec& w = flag_ray(f, j);
      long long a = d.coeffs[static_cast<size_t>(f.ray_order[static_cast<size_t>(j)])];
      for (const auto& v : p.vertices)
        b = std::max(b, to_ll(rat_ceil(dot(w, v) + Rat(a))));
    }
    return b;
  }
  if (f.kind == Flag::Kind::ProjLinear) return std::max<long long>(d.degree(), 0);
  // QuadricCurve: width + height of the divisor box bounds both entries
  Polytope p = divisor_polytope(d);
  if (p.empty()) return 0;
  Rat xw = 0, yw = 0;
  for (const auto& v : p.vertices)
    for (const auto& u : p.vertices) {
      xw = std::max(xw, Rat(v[0] - u[0]));
      yw = std::max(yw, Rat(v[1] - u[1]));
    }
  return to_ll(rat_ceil(xw + yw));
}

// ---- asymptotic order of vanishing ----

struct AsymOrd {
  std::vector<std::pair<long long, long long>> seq;  // (m, ord at level m)
  Rat estimate;       // min over computed levels of ord/m
  bool exact = false;
  std::string provenance;
};

// generic sequence-based estimate; exact_value (if supplied) is a closed form
// that certifies the limit
inline AsymOrd asymptotic_ord_from(
    const std::function<std::optional<long long>(long long)>& ord_at_level, long long M,
    std::optional<Rat> exact_value = std::nullopt) {
  AsymOrd out;
  bool any = false;
  for (long long m = 1; m <= M; ++m) {
    auto o = ord_at_level(m);
    if (!o) continue;
    out.seq.push_back({m, *o});
    Rat r(*o, m);
    if (!any || r < out.estimate) { out.estimate = r; any = true; }
  }
  if (!any) throw std::invalid_argument("asymptotic_ord: series empty at all levels");
  if (exact_value) {
    out.estimate = *exact_value;
    out.exact = true;
    out.provenance = "closed form";
    return out;
  }
  if (out.estimate == 0) {
    out.exact = true;  // orders are nonnegative, so the limit is 0
    out.provenance = "zero attained";
    return out;
  }
  // stabilization heuristic: constant tail of ord/m
  size_t n = out.seq.size();
  if (n >= 3) {
    Rat r1(out.seq[n - 1].second, out.seq[n - 1].first);
    Rat r2(out.seq[n - 2].second, out.seq[n - 2].first);
    Rat r3(out.seq[n - 3].second, out.seq[n - 3].first);
    if (r1 == r2 && r2 == r3 && r1 == out.estimate) {
      out.provenance = "stabilized tail (not certified)";
      return out;
    }
  }
  out.provenance = "best bound within truncation";
  return out;
}

}  // namespace nok
