#pragma once

// Graded linear series: complete series, multiplication morphisms mu(s),
// restriction to flag subvarieties, and the induced series V(D; a) built from
// valuation thresholds. Levels are computed lazily and cached; a series with
// rational thresholds a has a denominator ell and is zero off ell * N.
//
// Two independent constructions of V(D; a) are provided: the direct
// description (keep sections whose valuation prefix dominates m*a
// lexicographically, divide, restrict) and the inductive one (preimages under
// multiplication by flag-step sections, then restriction). They must agree
// level by level, and tests hold them to that.

#include <functional>
#include <numeric>

#include "nok/valuation.hpp"

namespace nok {

struct GradedSeries {
  Carrier carrier;      // carrier of the level spaces (per-unit divisor data)
  long long ell = 1;    // levels not divisible by ell are zero
  int stage = 0;        // flag stage the sections live on
  std::string desc;
  std::function<SectionSpace(long long)> level_fn;  // honest level m
  std::shared_ptr<std::map<long long, SectionSpace>> cache =
      std::make_shared<std::map<long long, SectionSpace>>();

  const SectionSpace& level(long long m) const {
    auto it = cache->find(m);
    if (it == cache->end()) it = cache->emplace(m, level_fn(m)).first;
    return it->second;
  }
};

inline SectionSpace zero_space(const Carrier& c) {
  SectionSpace s;
  s.carrier = c;
  s.level = 0;
  return s;
}

inline GradedSeries complete_series(const DivisorClass& d) {
  GradedSeries w;
  w.carrier = sections(d, 0).carrier;
  w.desc = "complete series of " + d.model->name;
  w.level_fn = [d](long long m) { return sections(d, m); };
  return w;
}

// ---- stage carriers and restriction ----

// carrier of the stage-r restriction of the (unit-level) divisor with the
// given coefficients
inline Carrier stage_carrier(const Flag& f, const std::vector<long long>& unit_coeffs,
                             int r) {
  if (r == 0) {
    DivisorClass d = make_divisor(f.model, unit_coeffs);
    return sections(d, 0).carrier;
  }
  if (f.kind == Flag::Kind::ToricInvariant) {
    StarStage st = star_stage(f, r);
    auto coeffs = star_divisor(f, st, r, unit_coeffs);
    Carrier c;
    c.kind = Carrier::Kind::Toric;
    c.model = st.star;
    c.div_coeffs = coeffs;
    c.label = st.star->name;
    return c;
  }
  if (f.kind == Flag::Kind::ProjLinear) {
    Carrier c;
    c.kind = Carrier::Kind::Proj;
    c.model = make_projective_space(f.dim() - r);
    c.div_coeffs = unit_coeffs;  // restriction of O(n) to a linear subspace
    c.label = "Y" + std::to_string(r) + " in " + f.model->name + " (flag coords)";
    return c;
  }
  if (r != 1) throw std::invalid_argument("stage_carrier: curve stage has r = 1");
  Carrier c;
  c.kind = Carrier::Kind::Curve;
  c.model = f.model;
  c.div_coeffs = unit_coeffs;
  c.curve_deg = surface_pair(make_divisor(f.model, unit_coeffs), flag_step_divisor(f, 1));
  c.curve_point = f.p0;
  c.label = "hyperplane-section curve in " + f.model->name;
  return c;
}

// the induced flag on a stage model (identity/coordinate conventions for
// linear flags; curve stages need no flag beyond the marked point)
inline Flag stage_flag(const Flag& f, int r) {
  if (r == 0) return f;
  if (f.kind == Flag::Kind::ToricInvariant) {
    StarStage st = star_stage(f, r);
    return induced_flag(f, st);
  }
  if (f.kind == Flag::Kind::ProjLinear)
    return coordinate_flag(make_projective_space(f.dim() - r));
  throw std::invalid_argument("stage_flag: no flag below a curve stage");
}

// restriction of a single stage-0 section to stage r after dividing out the
// steps to orders t_1..t_r; requires the section's valuation prefix to
// dominate t lexicographically (else the division is illegal and we throw)
inline MPoly restrict_section(const Flag& f, const SectionSpace& w0, const MPoly& s,
                              const std::vector<long long>& t, const Carrier& target) {
  int r = static_cast<int>(t.size());
  if (s.zero()) {
    return mp_zero(target.kind == Carrier::Kind::Curve
                       ? 1
                       : (target.kind == Carrier::Kind::Toric ? target.model->dim
                                                              : target.model->dim + 1));
  }
  LVec nu = valuate(f, w0, s);
  for (int i = 0; i < r; ++i) {
    if (nu[static_cast<size_t>(i)] < t[static_cast<size_t>(i)])
      throw std::invalid_argument("restrict_section: section does not vanish to the required order");
    if (nu[static_cast<size_t>(i)] > t[static_cast<size_t>(i)]) {
      // an earlier step divides to a higher order; the restriction vanishes
      return mp_zero(target.kind == Carrier::Kind::Curve
                         ? 1
                         : (target.kind == Carrier::Kind::Toric ? target.model->dim
                                                                : target.model->dim + 1));
    }
  }
  switch (f.kind) {
    case Flag::Kind::ToricInvariant: {
      MPoly out{target.model->dim, {}};
      for (const auto& [u, c] : s.terms) {
        LVec key = detail::toric_key(f, w0.carrier.div_coeffs, w0.level, u);
        bool keep = true;
        for (int i = 0; i < r; ++i)
          if (key[static_cast<size_t>(i)] != t[static_cast<size_t>(i)]) { keep = false; break; }
        if (!keep) continue;
        // star exponents are the valuation suffix in the quotient basis
        LVec star(key.begin() + r, key.end());
        // translate to the star model's lattice: subtract the twist of the
        // restricted divisor (already baked into the key, so this IS the
        // star coordinate up to the adapted character); verify by membership
        mp_add_term(out, star, c);
      }
      return out;
    }
    case Flag::Kind::ProjLinear: {
      MPoly hat = detail::is_identity(f.T) ? s : to_flag_coords(f, s);
      int nv = hat.nvars;
      MPoly out{nv - r, {}};
      for (const auto& [e, c] : hat.terms) {
        bool keep = true;
        for (int i = 0; i < r; ++i)
          if (e[static_cast<size_t>(i)] != t[static_cast<size_t>(i)]) { keep = false; break; }
        if (!keep) continue;
        out.terms[LVec(e.begin() + r, e.end())] = c;
      }
      return out;
    }
    case Flag::Kind::QuadricCurve: {
      MPoly q = quadric_poly(f);
      MPoly cur = s;
      for (long long i = 0; i < t[0]; ++i) {
        auto dv = divide_exact(cur, q);
        if (!dv) throw std::logic_error("restrict_section: division mismatch");
        cur = *dv;
      }
      long long xlo, xhi, ylo, yhi;
      SectionSpace probe = w0;
      detail::quadric_box(probe, t[0], xlo, xhi, ylo, yhi);
      return quadric_param(f, cur, xlo, xhi, ylo, yhi);
    }
  }
  throw std::logic_error("restrict_section: unknown flag kind");
}

// single flag step (stage r-1 -> stage r): divide by the local equation to
// order t, then restrict
inline MPoly restrict_one_step(const Flag& stage_f, const SectionSpace& w, const MPoly& s,
                               long long t, const Carrier& target) {
  return restrict_section(stage_f, w, s, {t}, target);
}

// ---- stage complete series ----

inline SectionSpace stage_complete(const Flag& f, const std::vector<long long>& unit_coeffs,
                                   int r, long long m) {
  Carrier c = stage_carrier(f, unit_coeffs, r);
  if (c.kind == Carrier::Kind::Curve) {
    SectionSpace s;
    s.carrier = c;
    s.level = m;
    long long n = m * c.curve_deg;
    if (n >= 0) {
      MPoly lin{1, {}};  // t - p0
      mp_add_term(lin, {1}, Rat(1));
      mp_add_term(lin, {0}, -c.curve_point);
      MPoly cur = mp_const(1, 1);
      for (long long j = 0; j <= n; ++j) {
        s.basis.push_back(cur);
        cur = cur * lin;
      }
    }
    return s;
  }
  DivisorClass d = make_divisor(c.model, c.div_coeffs);
  SectionSpace s = sections(d, m);
  s.carrier = c;  // keep the stage label
  return s;
}

// ---- V(D; a): direct construction ----

struct VSeries {
  GradedSeries series;   // on stage r, internal levels in units of ell
  Flag base_flag;
  Flag value_flag;       // flag on the stage model (r < dim-1 stages) or base
  bool curve_stage = false;
  std::vector<Rat> a;
  long long ell = 1;
  DivisorClass d_tilde;  // ell * D
  std::vector<long long> a_tilde;
  std::vector<long long> twisted_unit;  // coefficients of ell*D - sum a~_i A_i
};

namespace detail {

inline std::vector<long long> twist_coeffs(const Flag& f, const DivisorClass& dt,
                                           const std::vector<long long>& at) {
  std::vector<long long> c = dt.coeffs;
  for (size_t i = 0; i < at.size(); ++i) {
    DivisorClass ai = flag_step_divisor(f, static_cast<int>(i) + 1);
    for (size_t j = 0; j < c.size(); ++j) c[j] -= at[i] * ai.coeffs[j];
  }
  return c;
}

// direct level: image on Y_r of sections with valuation prefix >=_lex k*a~
inline SectionSpace v_level_direct(const Flag& f, const DivisorClass& dt,
                                   const std::vector<long long>& at, long long k,
                                   const Carrier& target) {
  SectionSpace w0 = sections(dt, k);
  std::vector<long long> t(at.size());
  for (size_t i = 0; i < at.size(); ++i) t[i] = k * at[i];
  SectionSpace out;
  out.carrier = target;
  out.level = k;
  if (w0.basis.empty()) return out;
  int r = static_cast<int>(at.size());
  if (f.kind == Flag::Kind::QuadricCurve) {
    // sections with ord along the curve >= t are exactly q^t * (twisted sections)
    std::vector<long long> tw = twist_coeffs(f, dt, at);
    SectionSpace twisted = sections(make_divisor(f.model, tw), k);
    MPoly q = quadric_poly(f);
    MPoly qt = mp_pow(q, t[0]);
    for (const auto& b : twisted.basis) {
      MPoly s = b * qt;
      out.basis.push_back(restrict_section(f, w0, s, t, target));
    }
    canonicalize_space(out);
    return out;
  }
  // Monomial flags. The source is the complete series, which in flag
  // coordinates is again the span of all monomials of its degree, so the
  // valuation-echelon basis is the plain monomial list and the threshold
  // filter acts on monomials directly.
  std::vector<MPoly> echelon = w0.basis;
  Flag f0 = f;
  if (f.kind == Flag::Kind::ProjLinear) f0 = coordinate_flag(make_projective_space(f.dim()));
  for (const auto& b : echelon) {
    LVec nu = valuate(f0, w0, b);
    LVec prefix(nu.begin(), nu.begin() + r);
    LVec tt(t.begin(), t.end());
    if (prefix != tt) continue;  // other prefixes restrict to zero or lie outside
    out.basis.push_back(restrict_section(f0, w0, b, t, target));
  }
  canonicalize_space(out);
  return out;
}

}  // namespace detail

inline long long lcm_ll(long long a, long long b) { return a / gcd_ll(a, b) * b; }

inline VSeries build_v_series(const Flag& f, const DivisorClass& d,
                              const std::vector<Rat>& a) {
  int r = static_cast<int>(a.size());
  if (r >= f.dim()) throw std::invalid_argument("build_v_series: need r < dim");
  for (const auto& ai : a)
    if (ai < 0) throw std::invalid_argument("build_v_series: thresholds must be >= 0");
  if (!same_model(f.model, d.model))
    throw std::invalid_argument("build_v_series: flag and divisor on different models");
  long long ell = 1;
  for (const auto& ai : a) ell = lcm_ll(ell, to_ll(denominator(ai)));
  VSeries v;
  v.base_flag = f;
  v.a = a;
  v.ell = ell;
  v.d_tilde = ell * d;
  for (const auto& ai : a) v.a_tilde.push_back(to_ll(numerator(ai) * (ell / denominator(ai))));
  v.twisted_unit = detail::twist_coeffs(f, v.d_tilde, v.a_tilde);
  // the thresholds must keep the twisted divisor big
  DivisorClass tw = make_divisor(f.model, v.twisted_unit);
  if (!is_big(tw))
    throw std::invalid_argument(
        "build_v_series: thresholds leave the big range (twisted divisor is not big)");
  Carrier target = stage_carrier(f, v.twisted_unit, r);
  v.curve_stage = target.kind == Carrier::Kind::Curve;
  if (!v.curve_stage && r > 0) v.value_flag = stage_flag(f, r);
  else if (r == 0) v.value_flag = f;
  GradedSeries s;
  s.carrier = target;
  s.ell = ell;
  s.stage = r;
  {
    std::ostringstream os;
    os << "V(" << d.model->name << ";";
    for (const auto& ai : a) os << " " << rat_str(ai);
    os << ")";
    s.desc = os.str();
  }
  Flag base = f;
  DivisorClass dt = v.d_tilde;
  std::vector<long long> at = v.a_tilde;
  s.level_fn = [base, dt, at, ell, target](long long m) {
    if (m % ell != 0) return zero_space(target);
    return detail::v_level_direct(base, dt, at, m / ell, target);
  };
  v.series = s;
  return v;
}

// ---- mu morphisms and the inductive construction ----

// multiplication morphism mu(s): level m map t -> t * s^m, from series of L
// into the complete series of L + M' (s a level-1 section of M')
inline SectionSpace mu_image(const SectionSpace& w, const MPoly& s) {
  SectionSpace out = w;
  out.basis.clear();
  MPoly sm = mp_pow(s, w.level);
  for (const auto& b : w.basis) out.basis.push_back(b * sm);
  canonicalize_space(out);
  return out;
}

// preimage of a subspace under mu(s) at the level of w
inline SectionSpace mu_preimage(const SectionSpace& w, const MPoly& s,
                                const SectionSpace& target_sub) {
  SectionSpace out = w;
  out.basis.clear();
  if (w.basis.empty()) return out;
  MPoly sm = mp_pow(s, w.level);
  std::vector<MPoly> images;
  for (const auto& b : w.basis) images.push_back(b * sm);
  std::vector<MPoly> all = images;
  for (const auto& g : target_sub.basis) all.push_back(g);
  auto monos = monomial_union(all);
  QMat rows = poly_matrix(images, monos);
  QMat target = row_space_basis(poly_matrix(target_sub.basis, monos));
  QMat coefs = preimage_coefficients(rows, target);
  for (const auto& c : coefs) {
    MPoly t = mp_zero(w.basis[0].nvars);
    for (size_t i = 0; i < w.basis.size(); ++i) t = t + c[i] * w.basis[i];
    out.basis.push_back(t);
  }
  canonicalize_space(out);
  return out;
}

// the flag-step section s_i (cutting Y_i out of Y_{i-1}) restricted to the
// stage model Y_{i-1}; on monomial stages this is the first stage coordinate
inline MPoly flag_step_section_on_stage(const Flag& f, int i) {
  DivisorClass ai = flag_step_divisor(f, i);
  MPoly s0{0, {}};
  if (f.kind == Flag::Kind::ToricInvariant) {
    s0 = mp_monomial(LVec(static_cast<size_t>(f.model->dim), 0), 1);
  } else if (f.kind == Flag::Kind::ProjLinear) {
    LVec e(static_cast<size_t>(f.dim() + 1), 0);
    e[static_cast<size_t>(i - 1)] = 1;  // y_i
    s0 = detail::is_identity(f.T) ? mp_monomial(e, 1) : from_flag_coords(f, mp_monomial(e, 1));
  } else {
    return quadric_poly(f);  // i == 1 on the curve flag
  }
  if (i == 1) return s0;
  SectionSpace w = sections(ai, 1);
  Carrier target = stage_carrier(f, ai.coeffs, i - 1);
  return restrict_section(f, w, s0, std::vector<long long>(static_cast<size_t>(i - 1), 0),
                          target);
}

// inductive route for V(D; a): repeated mu-preimages followed by plain
// restriction one flag step down
inline SectionSpace v_level_inductive(const Flag& f, const DivisorClass& d,
                                      const std::vector<Rat>& a, long long m) {
  int r = static_cast<int>(a.size());
  long long ell = 1;
  for (const auto& ai : a) ell = lcm_ll(ell, to_ll(denominator(ai)));
  std::vector<long long> at;
  for (const auto& ai : a) at.push_back(to_ll(numerator(ai) * (ell / denominator(ai))));
  DivisorClass dt = ell * d;
  std::vector<long long> twisted = detail::twist_coeffs(f, dt, at);
  Carrier target = stage_carrier(f, twisted, r);
  if (m % ell != 0) return zero_space(target);
  long long k = m / ell;

  std::vector<long long> prev_unit = dt.coeffs;
  SectionSpace v_prev = sections(make_divisor(f.model, prev_unit), k);  // stage 0
  for (int i = 1; i <= r; ++i) {
    DivisorClass ai_div = flag_step_divisor(f, i);
    std::vector<long long> next_unit = prev_unit;
    for (size_t j = 0; j < next_unit.size(); ++j)
      next_unit[j] -= at[static_cast<size_t>(i - 1)] * ai_div.coeffs[j];
    // domain: complete series of the twisted divisor on stage i-1
    SectionSpace domain = (i == 1) ? sections(make_divisor(f.model, next_unit), k)
                                   : stage_complete(f, next_unit, i - 1, k);
    MPoly s_i = flag_step_section_on_stage(f, i);
    SectionSpace pre = mu_preimage(domain, mp_pow(s_i, at[static_cast<size_t>(i - 1)]), v_prev);
    // plain restriction one flag step down on the stage model
    Flag sf = (i == 1) ? f : stage_flag(f, i - 1);
    Carrier next_stage = stage_carrier(f, next_unit, i);
    SectionSpace out;
    out.carrier = next_stage;
    out.level = k;
    for (const auto& b : pre.basis) {
      if (b.zero()) continue;
      LVec nu = valuate(sf, domain, b);
      if (nu[0] > 0) continue;  // vanishes on the next flag member
      if (i == 1) {
        out.basis.push_back(
            restrict_section(f, domain, b, std::vector<long long>(1, 0), next_stage));
      } else {
        out.basis.push_back(restrict_one_step(sf, domain, b, 0, next_stage));
      }
    }
    canonicalize_space(out);
    v_prev = out;
    prev_unit = next_unit;
  }
  return v_prev;
}

// ---- auxiliary series used in experiments and tests ----

// sections of m*D on P^1 vanishing at the point to order >= ceil(m * rate)
inline GradedSeries point_vanishing_series(const DivisorClass& d, const Rat& point,
                                           const Rat& rate) {
  if (d.model->kind != VarietyModel::Kind::Projective || d.model->dim != 1)
    throw std::invalid_argument("point_vanishing_series: P^1 only");
  GradedSeries w;
  w.carrier = sections(d, 0).carrier;
  w.desc = "sections with ord_p >= " + rat_str(rate) + "m on P1";
  long long k = d.degree();
  w.level_fn = [d, point, rate, k](long long m) {
    SectionSpace s;
    s.carrier = sections(d, 0).carrier;
    s.level = m;
    long long n = k * m;
    long long t = to_ll(rat_ceil(rate * m));
    if (n < t) return s;
    // basis (x1 - p x0)^j x0^(n-j), j = t..n  (storage order (x1, x0))
    MPoly lin = mp_monomial({1, 0}, 1) - mp_monomial({0, 1}, point);
    for (long long j = t; j <= n; ++j)
      s.basis.push_back(mp_pow(lin, j) * mp_monomial({0, n - j}, 1));
    return s;
  };
  return w;
}

// W_m = span of m-fold products of the given level-1 generators
inline GradedSeries powers_series(const DivisorClass& d, const std::vector<MPoly>& gens) {
  GradedSeries w;
  w.carrier = sections(d, 0).carrier;
  w.desc = "powers of a level-1 subspace";
  auto cache = w.cache;
  Carrier car = w.carrier;
  w.level_fn = [d, gens, cache, car](long long m) -> SectionSpace {
    SectionSpace s;
    s.carrier = car;
    s.level = m;
    if (m == 0) {
      s.basis = {mp_const(gens[0].nvars, 1)};
      return s;
    }
    if (m == 1) {
      s.basis = gens;
      canonicalize_space(s);
      return s;
    }
    auto it = cache->find(m - 1);
    SectionSpace prev;
    if (it != cache->end()) {
      prev = it->second;
    } else {
      // recompute recursively without re-entering the lambda through the series
      prev.carrier = car;
      prev.level = 1;
      prev.basis = gens;
      canonicalize_space(prev);
      for (long long j = 2; j < m; ++j) {
        SectionSpace next;
        next.carrier = car;
        next.level = j;
        for (const auto& a : prev.basis)
          for (const auto& g : gens) next.basis.push_back(a * g);
        canonicalize_space(next);
        prev = next;
      }
    }
    for (const auto& a : prev.basis)
      for (const auto& g : gens) s.basis.push_back(a * g);
    canonicalize_space(s);
    return s;
  };
  return w;
}

// restriction of a series on X to the flag subvariety Y_r (plain restriction)
inline GradedSeries restrict_series(const GradedSeries& w, const Flag& f, int r) {
  if (r < 1 || r >= f.dim())
    throw std::invalid_argument("restrict_series: need 1 <= r < dim");
  GradedSeries out;
  Carrier target = stage_carrier(f, w.carrier.div_coeffs, r);
  out.carrier = target;
  out.ell = w.ell;
  out.stage = r;
  out.desc = w.desc + " restricted to Y" + std::to_string(r);
  GradedSeries src = w;
  Flag base = f;
  std::vector<long long> t(static_cast<size_t>(r), 0);
  out.level_fn = [src, base, t, target](long long m) {
    const SectionSpace& wm = src.level(m);
    SectionSpace s;
    s.carrier = target;
    s.level = m;
    for (const auto& b : wm.basis) {
      LVec nu = valuate(base, wm, b);
      bool vanishes = false;
      for (size_t i = 0; i < t.size(); ++i)
        if (nu[i] > 0) { vanishes = true; break; }
      if (vanishes) continue;
      s.basis.push_back(restrict_section(base, wm, b, t, target));
    }
    canonicalize_space(s);
    return s;
  };
  return out;
}

}  // namespace nok
