#pragma once

// Sparse exact multivariate (Laurent) polynomials: arithmetic, exact division,
// linear substitution, univariate helpers (orders at points, gcd, resultants,
// bounded rational root extraction), and matrix coordinates for subspace work.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nok/linalg.hpp"
#include "nok/rational.hpp"

namespace nok {

struct MPoly {
  int nvars = 0;
  std::map<LVec, Rat> terms;  // exponent -> coefficient, no zero coefficients

  bool zero() const { return terms.empty(); }

  friend bool operator==(const MPoly& a, const MPoly& b) {
    return a.nvars == b.nvars && a.terms == b.terms;
  }
};

inline MPoly mp_zero(int nvars) { return MPoly{nvars, {}}; }

inline MPoly mp_monomial(const LVec& e, const Rat& c) {
  MPoly p{static_cast<int>(e.size()), {}};
  if (c != 0) p.terms[e] = c;
  return p;
}

inline MPoly mp_const(int nvars, const Rat& c) { return mp_monomial(LVec(nvars, 0), c); }

inline void mp_add_term(MPoly& p, const LVec& e, const Rat& c) {
  if (c == 0) return;
  auto it = p.terms.find(e);
  if (it == p.terms.end()) {
    p.terms.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) p.terms.erase(it);
  }
}

inline MPoly operator+(const MPoly& a, const MPoly& b) {
  MPoly r = a;
  for (const auto& [e, c] : b.terms) mp_add_term(r, e, c);
  return r;
}

inline MPoly operator-(const MPoly& a, const MPoly& b) {
  MPoly r = a;
  for (const auto& [e, c] : b.terms) mp_add_term(r, e, -c);
  return r;
}

inline MPoly operator*(const Rat& c, const MPoly& a) {
  MPoly r{a.nvars, {}};
  if (c == 0) return r;
  for (const auto& [e, k] : a.terms) r.terms[e] = c * k;
  return r;
}

inline MPoly operator*(const MPoly& a, const MPoly& b) {
  MPoly r{a.nvars, {}};
  for (const auto& [e1, c1] : a.terms)
    for (const auto& [e2, c2] : b.terms) mp_add_term(r, e1 + e2, c1 * c2);
  return r;
}

inline MPoly mp_pow(const MPoly& a, long long k) {
  MPoly r = mp_const(a.nvars, 1);
  MPoly base = a;
  while (k > 0) {
    if (k & 1) r = r * base;
    base = base * base;
    k >>= 1;
  }
  return r;
}

inline MPoly mp_shift(const MPoly& a, const LVec& s) {
  MPoly r{a.nvars, {}};
  for (const auto& [e, c] : a.terms) r.terms[e + s] = c;
  return r;
}

inline LVec min_exponents(const MPoly& a) {
  LVec m(a.nvars, 0);
  bool first = true;
  for (const auto& [e, c] : a.terms) {
    if (first) { m = e; first = false; continue; }
    for (int i = 0; i < a.nvars; ++i) m[i] = std::min(m[i], e[i]);
  }
  return m;
}

inline long long max_exponent(const MPoly& a, int var) {
  long long m = 0;
  bool first = true;
  for (const auto& [e, c] : a.terms) {
    if (first) { m = e[var]; first = false; continue; }
    m = std::max(m, e[var]);
  }
  return m;
}

inline long long total_degree(const MPoly& a) {
  long long d = 0;
  for (const auto& [e, c] : a.terms) {
    long long s = 0;
    for (long long x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

// exact division f / g over the rationals (lex order long division);
// nullopt when g does not divide f. Laurent inputs are shifted first.
inline std::optional<MPoly> divide_exact(const MPoly& f, const MPoly& g) {
  if (g.zero()) throw std::invalid_argument("divide_exact: division by zero");
  if (f.zero()) return mp_zero(f.nvars);
  LVec sf = min_exponents(f), sg = min_exponents(g);
  MPoly fn = f, gn = g;
  bool shifted = false;
  for (int i = 0; i < f.nvars; ++i)
    if (sf[i] < 0 || sg[i] < 0) shifted = true;
  if (shifted) {
    LVec nf(sf), ng(sg);
    for (auto& x : nf) x = x < 0 ? -x : 0;
    for (auto& x : ng) x = x < 0 ? -x : 0;
    fn = mp_shift(f, nf);
    gn = mp_shift(g, ng);
    auto q = divide_exact(fn, gn);
    if (!q) return std::nullopt;
    LVec back(f.nvars);
    for (int i = 0; i < f.nvars; ++i) back[i] = ng[i] - nf[i];
    return mp_shift(*q, back);
  }
  // leading term of g in lex order = largest exponent key
  auto glead = std::prev(gn.terms.end());
  MPoly rem = fn;
  MPoly quot{f.nvars, {}};
  while (!rem.zero()) {
    auto rlead = std::prev(rem.terms.end());
    LVec diff(f.nvars);
    bool ok = true;
    for (int i = 0; i < f.nvars; ++i) {
      diff[i] = rlead->first[i] - glead->first[i];
      if (diff[i] < 0) ok = false;
    }
    if (!ok) return std::nullopt;
    Rat c = rlead->second / glead->second;
    mp_add_term(quot, diff, c);
    MPoly t = mp_monomial(diff, c);
    rem = rem - t * gn;
  }
  return quot;
}

// largest t with g^t | f (f nonzero)
inline long long divisibility_order(const MPoly& f, const MPoly& g, long long cap) {
  MPoly cur = f;
  long long t = 0;
  while (t < cap) {
    auto q = divide_exact(cur, g);
    if (!q) break;
    cur = *q;
    ++t;
  }
  return t;
}

// substitute x_j = sum_k subs[j][k] * y_k for every variable (nvars_new y's)
inline MPoly substitute_linear(const MPoly& f, const std::vector<QVec>& subs,
                               int nvars_new) {
  std::vector<MPoly> forms;
  for (const auto& row : subs) {
    MPoly l = mp_zero(nvars_new);
    for (int k = 0; k < nvars_new; ++k) {
      if (row[static_cast<size_t>(k)] == 0) continue;
      LVec e(nvars_new, 0);
      e[k] = 1;
      mp_add_term(l, e, row[static_cast<size_t>(k)]);
    }
    forms.push_back(l);
  }
  // cache powers of each linear form
  std::vector<std::vector<MPoly>> pw(forms.size());
  for (size_t j = 0; j < forms.size(); ++j) pw[j].push_back(mp_const(nvars_new, 1));
  auto power = [&](size_t j, long long e) -> const MPoly& {
    while (static_cast<long long>(pw[j].size()) <= e)
      pw[j].push_back(pw[j].back() * forms[j]);
    return pw[j][static_cast<size_t>(e)];
  };
  MPoly out = mp_zero(nvars_new);
  for (const auto& [e, c] : f.terms) {
    MPoly t = mp_const(nvars_new, c);
    for (int j = 0; j < f.nvars; ++j) {
      if (e[j] < 0) throw std::invalid_argument("substitute_linear: negative exponent");
      if (e[j] > 0) t = t * power(static_cast<size_t>(j), e[j]);
    }
    out = out + t;
  }
  return out;
}

inline Rat mp_eval(const MPoly& f, const QVec& x) {
  Rat s = 0;
  for (const auto& [e, c] : f.terms) {
    Rat t = c;
    for (int i = 0; i < f.nvars; ++i) {
      if (e[i] < 0) {
        if (x[static_cast<size_t>(i)] == 0) throw std::invalid_argument("mp_eval: pole");
        for (long long k = 0; k < -e[i]; ++k) t /= x[static_cast<size_t>(i)];
      } else {
        for (long long k = 0; k < e[i]; ++k) t *= x[static_cast<size_t>(i)];
      }
    }
    s += t;
  }
  return s;
}

inline MPoly mp_derivative(const MPoly& f, int var) {
  MPoly r{f.nvars, {}};
  for (const auto& [e, c] : f.terms) {
    if (e[var] == 0) continue;
    LVec e2 = e;
    e2[var] -= 1;
    mp_add_term(r, e2, c * Rat(e[var]));
  }
  return r;
}

// set one variable to a constant, dropping it from the exponent vector
inline MPoly mp_substitute_const(const MPoly& f, int var, const Rat& value) {
  MPoly r{f.nvars - 1, {}};
  for (const auto& [e, c] : f.terms) {
    if (e[var] < 0) throw std::invalid_argument("mp_substitute_const: negative exponent");
    Rat t = c;
    for (long long k = 0; k < e[var]; ++k) t *= value;
    LVec e2;
    for (int i = 0; i < f.nvars; ++i)
      if (i != var) e2.push_back(e[i]);
    mp_add_term(r, e2, t);
  }
  return r;
}

// ---- univariate helpers (nvars == 1, nonnegative exponents) ----

inline std::vector<Rat> to_dense(const MPoly& f) {
  std::vector<Rat> d;
  for (const auto& [e, c] : f.terms) {
    if (e[0] < 0) throw std::invalid_argument("to_dense: Laurent input");
    if (static_cast<long long>(d.size()) <= e[0]) d.resize(static_cast<size_t>(e[0]) + 1, Rat(0));
    d[static_cast<size_t>(e[0])] = c;
  }
  while (!d.empty() && d.back() == 0) d.pop_back();
  return d;
}

inline MPoly from_dense(const std::vector<Rat>& d) {
  MPoly f{1, {}};
  for (size_t i = 0; i < d.size(); ++i)
    if (d[i] != 0) f.terms[{static_cast<long long>(i)}] = d[i];
  return f;
}

inline long long poly_deg(const std::vector<Rat>& d) {
  return static_cast<long long>(d.size()) - 1;  // -1 for the zero polynomial
}

inline std::vector<Rat> poly_mod(std::vector<Rat> a, const std::vector<Rat>& b) {
  if (b.empty()) throw std::invalid_argument("poly_mod: zero divisor");
  while (poly_deg(a) >= poly_deg(b)) {
    Rat f = a.back() / b.back();
    size_t shift = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    while (!a.empty() && a.back() == 0) a.pop_back();
    if (a.empty()) break;
  }
  return a;
}

inline std::vector<Rat> poly_gcd(std::vector<Rat> a, std::vector<Rat> b) {
  while (!b.empty()) {
    auto r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rat lc = a.back();
    for (auto& c : a) c /= lc;
  }
  return a;
}

// multiplicity of the root x = p
inline long long ord_at_root(const MPoly& f, const Rat& p) {
  if (f.zero()) throw std::invalid_argument("ord_at_root: zero polynomial");
  std::vector<Rat> d = to_dense(f);
  long long ord = 0;
  while (true) {
    // synthetic division by (x - p)
    Rat val = 0;
    for (size_t i = d.size(); i-- > 0;) val = val * p + d[i];
    if (val != 0) return ord;
    std::vector<Rat> q(d.size() - 1);
    Rat carry = 0;
    for (size_t i = d.size(); i-- > 1;) {
      carry = d[i] + carry * p;
      q[i - 1] = carry;
    }
    d = std::move(q);
    ++ord;
    if (d.empty()) throw std::logic_error("ord_at_root: zero polynomial after division");
  }
}

// resultant of two univariate polynomials over Q (Euclidean recursion)
inline Rat resultant_univariate(std::vector<Rat> f, std::vector<Rat> g) {
  if (f.empty() || g.empty()) return Rat(0);
  Rat sign = 1;
  Rat acc = 1;
  while (true) {
    if (poly_deg(g) == 0) {
      Rat r = 1;
      for (long long i = 0; i < poly_deg(f); ++i) r *= g[0];
      return acc * sign * r;
    }
    if (poly_deg(f) < poly_deg(g)) {
      if ((poly_deg(f) * poly_deg(g)) % 2 == 1) sign = -sign;
      std::swap(f, g);
      continue;
    }
    auto r = poly_mod(f, g);
    if (r.empty()) return Rat(0);
    Rat lc = g.back();
    long long e = poly_deg(f) - poly_deg(r);
    for (long long i = 0; i < e; ++i) acc *= lc;
    if ((poly_deg(f) * poly_deg(g)) % 2 == 1) sign = -sign;
    f = std::move(g);
    g = std::move(r);
  }
}

// Res_y(f, g) for bivariate f, g (vars x = 0, y = 1), by evaluation at
// x = t and Lagrange interpolation.
inline MPoly resultant_y(const MPoly& f, const MPoly& g) {
  long long dyf = max_exponent(f, 1), dyg = max_exponent(g, 1);
  long long dxf = max_exponent(f, 0), dxg = max_exponent(g, 0);
  if (dyf == 0 || dyg == 0)
    throw std::invalid_argument("resultant_y: inputs must involve y");
  long long bound = dyf * dxg + dyg * dxf;
  // leading y-coefficients as polynomials in x
  auto ycoef = [&](const MPoly& h, long long j) {
    MPoly c{1, {}};
    for (const auto& [e, k] : h.terms)
      if (e[1] == j) mp_add_term(c, {e[0]}, k);
    return c;
  };
  MPoly lf = ycoef(f, dyf), lg = ycoef(g, dyg);
  std::vector<Rat> xs, ys;
  long long t = 0;
  while (static_cast<long long>(xs.size()) < bound + 1) {
    Rat tv(t);
    t = t >= 0 ? -(t + 1) : -t;  // 0, -1, 1, -2, 2, ...
    if (mp_eval(lf, {tv}) == 0 || mp_eval(lg, {tv}) == 0) continue;
    auto fe = to_dense(mp_substitute_const(f, 0, tv));
    auto ge = to_dense(mp_substitute_const(g, 0, tv));
    xs.push_back(tv);
    ys.push_back(resultant_univariate(fe, ge));
  }
  // Lagrange interpolation (Newton form)
  size_t n = xs.size();
  std::vector<Rat> coef = ys;  // divided differences
  for (size_t j = 1; j < n; ++j)
    for (size_t i = n - 1; i >= j; --i) {
      coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j]);
      if (i == j) break;
    }
  std::vector<Rat> poly = {coef[n - 1]};
  for (size_t i = n - 1; i-- > 0;) {
    // poly = poly * (x - xs[i]) + coef[i]
    std::vector<Rat> np(poly.size() + 1, Rat(0));
    for (size_t k = 0; k < poly.size(); ++k) {
      np[k + 1] += poly[k];
      np[k] -= xs[i] * poly[k];
    }
    np[0] += coef[i];
    poly = std::move(np);
  }
  while (!poly.empty() && poly.back() == 0) poly.pop_back();
  return from_dense(poly);
}

// gcd of many univariate polynomials, monic
inline MPoly gcd_univariate(const std::vector<MPoly>& fs) {
  std::vector<Rat> g;
  for (const auto& f : fs) {
    if (f.zero()) continue;
    g = g.empty() ? to_dense(f) : poly_gcd(g, to_dense(f));
    if (poly_deg(g) == 0) break;
  }
  return from_dense(g);
}

// rational roots with multiplicity, searched over bounded height plus the
// supplied candidates; returns roots and the undivided leftover factor
struct RootSplit {
  std::vector<std::pair<Rat, long long>> roots;
  MPoly leftover{1, {}};
};

inline RootSplit rational_roots(const MPoly& f, long long height,
                                const std::vector<Rat>& extra = {}) {
  RootSplit out;
  if (f.zero()) throw std::invalid_argument("rational_roots: zero polynomial");
  std::vector<Rat> d = to_dense(f);
  // strip x^k
  long long k0 = 0;
  while (!d.empty() && d[0] == 0) {
    d.erase(d.begin());
    ++k0;
  }
  if (k0 > 0) out.roots.push_back({Rat(0), k0});
  auto try_root = [&](const Rat& p) {
    long long mult = 0;
    while (poly_deg(d) >= 1) {
      Rat val = 0;
      for (size_t i = d.size(); i-- > 0;) val = val * p + d[i];
      if (val != 0) break;
      std::vector<Rat> q(d.size() - 1);
      Rat carry = 0;
      for (size_t i = d.size(); i-- > 1;) {
        carry = d[i] + carry * p;
        q[i - 1] = carry;
      }
      d = std::move(q);
      ++mult;
    }
    if (mult > 0) out.roots.push_back({p, mult});
  };
  for (const Rat& p : extra)
    if (p != 0) try_root(p);
  for (long long den = 1; den <= height && poly_deg(d) >= 1; ++den)
    for (long long num = -height * den; num <= height * den && poly_deg(d) >= 1; ++num) {
      if (num == 0) continue;
      Rat p(num, den);
      if (denominator(p) != den) continue;  // already tried in lowest terms
      try_root(p);
    }
  out.leftover = from_dense(d);
  std::sort(out.roots.begin(), out.roots.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

// ---- coordinates of polynomial families over a shared monomial list ----

inline std::vector<LVec> monomial_union(const std::vector<MPoly>& fs) {
  std::set<LVec> s;
  for (const auto& f : fs)
    for (const auto& [e, c] : f.terms) s.insert(e);
  return {s.begin(), s.end()};
}

inline QMat poly_matrix(const std::vector<MPoly>& fs, const std::vector<LVec>& monos) {
  std::map<LVec, size_t> index;
  for (size_t i = 0; i < monos.size(); ++i) index[monos[i]] = i;
  QMat m(fs.size(), QVec(monos.size(), Rat(0)));
  for (size_t i = 0; i < fs.size(); ++i)
    for (const auto& [e, c] : fs[i].terms) {
      auto it = index.find(e);
      if (it == index.end()) throw std::logic_error("poly_matrix: monomial missing");
      m[i][it->second] = c;
    }
  return m;
}

inline MPoly poly_from_row(const QVec& row, const std::vector<LVec>& monos, int nvars) {
  MPoly f{nvars, {}};
  for (size_t i = 0; i < monos.size(); ++i)
    if (row[i] != 0) f.terms[monos[i]] = row[i];
  return f;
}

inline std::string mp_str(const MPoly& f, const std::vector<std::string>& vars) {
  if (f.zero()) return "0";
  std::string s;
  for (const auto& [e, c] : f.terms) {
    if (!s.empty()) s += " + ";
    s += rat_str(c);
    for (int i = 0; i < f.nvars; ++i)
      if (e[i] != 0) s += "*" + vars[static_cast<size_t>(i)] + "^" + std::to_string(e[i]);
  }
  return s;
}

}  // namespace nok
