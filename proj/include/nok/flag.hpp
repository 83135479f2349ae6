#pragma once

// Admissible flags and the stage machinery behind them.
//
// Three kinds are supported:
//  - ToricInvariant: a maximal cone of a toric model with an ordering of its
//    rays; Y_r is the intersection of the first r invariant divisors, and the
//    stage models are star quotients (again smooth complete toric).
//  - ProjLinear: a chain of hyperplanes on P^d, encoded as an invertible
//    change of coordinates y = T x; in the y-coordinates the valuation is the
//    lexicographic minimum of the leading exponents, so coordinate flags and
//    seeded generic flags share one code path.
//  - QuadricCurve: on P1xP1 the hyperplane section of the Segre embedding is
//    an irreducible (1,1)-curve; the flag is such a curve plus a point on it.
//    The curve is rational, so restriction is substitution along a
//    parameterization and orders are root multiplicities.
//
// Generic flags on other toric models are rejected: their hyperplane sections
// have positive genus and no linear parameterization.

#include <optional>
#include <sstream>

#include "nok/rng.hpp"
#include "nok/variety.hpp"

namespace nok {

struct Flag {
  enum class Kind { ToricInvariant, ProjLinear, QuadricCurve } kind =
      Kind::ToricInvariant;
  ModelPtr model;

  // ToricInvariant
  int cone = 0;
  std::vector<int> ray_order;  // w_1 .. w_d as ray indices

  // ProjLinear: y = T x in storage order (x_1..x_d, x_0)
  QMat T, Tinv;

  // QuadricCurve: q = q00 + q10 t1 + q01 t2 + q11 t1 t2, point t1 = p0 on {q=0}
  Rat q00, q10, q01, q11, p0;

  std::uint64_t seed = 0;
  int attempts = 1;
  std::string desc;

  int dim() const { return model->dim; }
};

inline const LVec& flag_ray(const Flag& f, int i) {  // w_{i+1}
  return f.model->fan.rays[static_cast<size_t>(f.ray_order[static_cast<size_t>(i)])];
}

// ---- construction ----

inline Flag invariant_flag(ModelPtr model, int cone, std::vector<int> order) {
  if (model->kind != VarietyModel::Kind::Toric)
    throw std::invalid_argument("invariant_flag: toric models only");
  if (cone < 0 || cone >= static_cast<int>(model->fan.max_cones.size()))
    throw std::invalid_argument("invariant_flag: cone index out of range");
  const auto& c = model->fan.max_cones[static_cast<size_t>(cone)];
  if (order.empty()) order = c;
  std::vector<int> sorted_order = order, sorted_cone = c;
  std::sort(sorted_order.begin(), sorted_order.end());
  std::sort(sorted_cone.begin(), sorted_cone.end());
  if (sorted_order != sorted_cone)
    throw std::invalid_argument("invariant_flag: order must permute the cone's rays");
  Flag f;
  f.kind = Flag::Kind::ToricInvariant;
  f.model = std::move(model);
  f.cone = cone;
  f.ray_order = std::move(order);
  std::ostringstream os;
  os << "invariant flag, rays";
  for (int r : f.ray_order) os << " " << r;
  f.desc = os.str();
  return f;
}

// coordinate flag on P^d: Y_i = {x_{vars[0]} = ... = x_{vars[i-1]} = 0};
// vars are variable labels in 0..d with 0 the conventional homogenizer
inline Flag coordinate_flag(ModelPtr model, std::vector<int> vars = {}) {
  if (model->kind != VarietyModel::Kind::Projective)
    throw std::invalid_argument("coordinate_flag: projective models only");
  int d = model->dim;
  if (vars.empty())
    for (int i = 1; i <= d; ++i) vars.push_back(i);
  if (static_cast<int>(vars.size()) != d)
    throw std::invalid_argument("coordinate_flag: need dim variables");
  // storage position of x_i is i-1 for i >= 1, and d for x_0
  auto pos = [&](int v) { return v == 0 ? d : v - 1; };
  std::vector<bool> used(static_cast<size_t>(d + 1), false);
  Flag f;
  f.kind = Flag::Kind::ProjLinear;
  f.model = std::move(model);
  f.T.assign(static_cast<size_t>(d + 1), QVec(static_cast<size_t>(d + 1), Rat(0)));
  for (int i = 0; i < d; ++i) {
    int p = pos(vars[static_cast<size_t>(i)]);
    if (used[static_cast<size_t>(p)]) throw std::invalid_argument("coordinate_flag: repeated variable");
    used[static_cast<size_t>(p)] = true;
    f.T[static_cast<size_t>(i)][static_cast<size_t>(p)] = 1;
  }
  for (int p = 0; p <= d; ++p)
    if (!used[static_cast<size_t>(p)]) f.T[static_cast<size_t>(d)][static_cast<size_t>(p)] = 1;
  f.Tinv = f.T;  // permutation matrices: inverse = transpose
  for (size_t i = 0; i <= static_cast<size_t>(d); ++i)
    for (size_t j = 0; j <= static_cast<size_t>(d); ++j) f.Tinv[i][j] = f.T[j][i];
  std::ostringstream os;
  os << "coordinate flag, vars";
  for (int v : vars) os << " x" << v;
  f.desc = os.str();
  return f;
}

namespace detail {

inline std::optional<QMat> invert(const QMat& t) {
  size_t n = t.size();
  QMat aug = t;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) aug[i].push_back(i == j ? Rat(1) : Rat(0));
  RrefResult rr = rref(aug);
  if (rr.rank != static_cast<long long>(n)) return std::nullopt;
  QMat inv(n, QVec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

inline bool is_p1xp1_fan(const ModelPtr& m) {
  if (m->kind != VarietyModel::Kind::Toric || m->dim != 2) return false;
  std::vector<LVec> rays = m->fan.rays;
  std::sort(rays.begin(), rays.end());
  std::vector<LVec> expect = {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};
  return rays == expect;
}

}  // namespace detail

inline bool supports_generic_flag(const ModelPtr& m) {
  return m->kind == VarietyModel::Kind::Projective || detail::is_p1xp1_fan(m);
}

// seeded generic flag; retries until the non-degeneracy checks pass
inline Flag generic_flag(ModelPtr model, std::uint64_t seed) {
  Rng rng(seed ^ 0x5eedf1a6ULL);
  const long long H = 100;  // coefficient pool height
  if (model->kind == VarietyModel::Kind::Projective) {
    int d = model->dim;
    for (int attempt = 1; attempt <= 10; ++attempt) {
      QMat t(static_cast<size_t>(d + 1), QVec(static_cast<size_t>(d + 1)));
      for (auto& row : t)
        for (auto& x : row) x = rng.rat_of_height(H);
      auto inv = detail::invert(t);
      if (!inv) continue;
      Flag f;
      f.kind = Flag::Kind::ProjLinear;
      f.model = std::move(model);
      f.T = std::move(t);
      f.Tinv = std::move(*inv);
      f.seed = seed;
      f.attempts = attempt;
      f.desc = "generic linear flag (seed " + std::to_string(seed) + ")";
      return f;
    }
    throw std::runtime_error("generic_flag: no invertible transform after 10 attempts");
  }
  if (detail::is_p1xp1_fan(model)) {
    for (int attempt = 1; attempt <= 10; ++attempt) {
      Rat a = rng.rat_of_height(H), b = rng.rat_of_height(H);
      Rat c = rng.rat_of_height(H), e = rng.rat_of_height(H);
      if (a * e - b * c == 0) continue;  // reducible (1,1)-form
      Rat p = rng.rat_of_height(H);
      // the point must avoid t1 = 0 and the zeros of A = q00 + q10 t1 and
      // B = q01 + q11 t1 (where the parameterization degenerates)
      if (p == 0 || a + b * p == 0 || c + e * p == 0) continue;
      Flag f;
      f.kind = Flag::Kind::QuadricCurve;
      f.model = std::move(model);
      f.q00 = a;
      f.q10 = b;
      f.q01 = c;
      f.q11 = e;
      f.p0 = p;
      f.seed = seed;
      f.attempts = attempt;
      f.desc = "hyperplane-section flag on P1xP1 (seed " + std::to_string(seed) + ")";
      return f;
    }
    throw std::runtime_error("generic_flag: degenerate (1,1)-curves after 10 attempts");
  }
  throw std::invalid_argument(
      "generic_flag: generic flags exist only on projective spaces and P1xP1 "
      "(hyperplane sections of other toric surfaces are not rational)");
}

// the divisor class A_i cut out by the i-th flag step (1-based i)
inline DivisorClass flag_step_divisor(const Flag& f, int i) {
  if (f.kind == Flag::Kind::ToricInvariant) {
    std::vector<long long> c(f.model->fan.rays.size(), 0);
    c[static_cast<size_t>(f.ray_order[static_cast<size_t>(i - 1)])] = 1;
    return make_divisor(f.model, c);
  }
  if (f.kind == Flag::Kind::ProjLinear) return make_divisor(f.model, {1});
  // QuadricCurve: O(1,1) in the fan's ray order
  std::vector<long long> c(4, 0);
  for (size_t r = 0; r < 4; ++r) {
    const LVec& v = f.model->fan.rays[r];
    if (v[0] < 0 || v[1] < 0) c[r] = 1;  // rays (-1,0) and (0,-1)
  }
  return make_divisor(f.model, c);
}

// intersection pairing of divisors on a toric surface via wall relations
inline long long surface_pair(const DivisorClass& a, const DivisorClass& b) {
  if (a.model->dim != 2) throw std::invalid_argument("surface_pair: surfaces only");
  long long s = 0;
  for (size_t r = 0; r < a.model->fan.rays.size(); ++r) {
    if (b.coeffs[r] == 0) continue;
    for (const auto& w : a.model->fan.walls)
      if (w.tau == std::vector<int>{static_cast<int>(r)}) {
        s += b.coeffs[r] * wall_pairing(a, w);
        break;
      }
  }
  return s;
}

// Y_{d-1} . D for the flag's curve
inline long long curve_class_pairing(const Flag& f, const DivisorClass& d) {
  if (!same_model(f.model, d.model))
    throw std::invalid_argument("curve_class_pairing: flag and divisor on different models");
  int dim = f.dim();
  if (f.kind == Flag::Kind::ToricInvariant) {
    if (dim == 1) {  // the curve is X itself; pair with the wall relation
      return wall_pairing(d, f.model->fan.walls[0]);
    }
    std::vector<int> tau(f.ray_order.begin(), f.ray_order.end() - 1);
    std::sort(tau.begin(), tau.end());
    for (const auto& w : f.model->fan.walls) {
      std::vector<int> wt = w.tau;
      std::sort(wt.begin(), wt.end());
      if (wt == tau) return wall_pairing(d, w);
    }
    throw std::logic_error("curve_class_pairing: flag wall not found");
  }
  if (f.kind == Flag::Kind::ProjLinear) {
    long long p = d.degree();
    return p;  // line . O(k) = k on P^d
  }
  return surface_pair(d, flag_step_divisor(f, 1));  // (1,1)-curve pairing
}

// ---- star stages for invariant flags ----

struct StarStage {
  ModelPtr star;                 // the stage model Y_r
  std::vector<int> ray_of_star;  // star ray index -> original ray index
  QMat binv;                     // inverse of the ray basis (columns w_1..w_d)
  std::vector<int> order_tail;   // induced flag ray order on the star model
  int cone = 0;                  // induced flag cone on the star model
};

inline StarStage star_stage(const Flag& f, int r) {
  if (f.kind != Flag::Kind::ToricInvariant)
    throw std::invalid_argument("star_stage: invariant flags only");
  int d = f.dim();
  if (r < 1 || r >= d) throw std::invalid_argument("star_stage: 1 <= r < dim required");
  const ToricFan& fan = f.model->fan;
  QMat b(static_cast<size_t>(d), QVec(static_cast<size_t>(d)));
  for (int j = 0; j < d; ++j) {
    const LVec& w = flag_ray(f, j);
    for (int i = 0; i < d; ++i) b[static_cast<size_t>(i)][static_cast<size_t>(j)] = Rat(w[static_cast<size_t>(i)]);
  }
  auto binv = detail::invert(b);
  if (!binv) throw std::logic_error("star_stage: flag rays not a basis");
  // quotient coordinates: last d-r entries of binv * v
  auto quotient = [&](const LVec& v) {
    LVec q;
    for (int i = r; i < d; ++i) {
      Rat x = 0;
      for (int j = 0; j < d; ++j) x += (*binv)[static_cast<size_t>(i)][static_cast<size_t>(j)] * Rat(v[static_cast<size_t>(j)]);
      if (denominator(x) != 1) throw std::logic_error("star_stage: non-integral quotient");
      q.push_back(to_ll(numerator(x)));
    }
    return q;
  };
  std::vector<int> tau(f.ray_order.begin(), f.ray_order.begin() + r);
  std::sort(tau.begin(), tau.end());
  // rays adjacent to tau
  std::vector<int> adjacent;
  for (const auto& cone : fan.max_cones) {
    std::vector<int> sc = cone;
    std::sort(sc.begin(), sc.end());
    if (!std::includes(sc.begin(), sc.end(), tau.begin(), tau.end())) continue;
    for (int ray : cone)
      if (std::find(tau.begin(), tau.end(), ray) == tau.end() &&
          std::find(adjacent.begin(), adjacent.end(), ray) == adjacent.end())
        adjacent.push_back(ray);
  }
  std::sort(adjacent.begin(), adjacent.end());
  std::vector<LVec> star_rays;
  for (int ray : adjacent) star_rays.push_back(quotient(fan.rays[static_cast<size_t>(ray)]));
  std::vector<std::vector<int>> star_cones;
  for (const auto& cone : fan.max_cones) {
    std::vector<int> sc = cone;
    std::sort(sc.begin(), sc.end());
    if (!std::includes(sc.begin(), sc.end(), tau.begin(), tau.end())) continue;
    std::vector<int> image;
    for (int ray : cone) {
      if (std::find(tau.begin(), tau.end(), ray) != tau.end()) continue;
      auto it = std::find(adjacent.begin(), adjacent.end(), ray);
      image.push_back(static_cast<int>(it - adjacent.begin()));
    }
    star_cones.push_back(image);
  }
  StarStage st;
  st.star = make_toric(star_rays, star_cones, f.model->name + "|Y" + std::to_string(r));
  st.ray_of_star = adjacent;
  st.binv = *binv;
  for (int j = r; j < d; ++j) {
    int orig = f.ray_order[static_cast<size_t>(j)];
    auto it = std::find(adjacent.begin(), adjacent.end(), orig);
    if (it == adjacent.end()) throw std::logic_error("star_stage: flag tail ray lost");
    st.order_tail.push_back(static_cast<int>(it - adjacent.begin()));
  }
  // locate the induced cone (image of the flag's cone)
  {
    const auto& cone = fan.max_cones[static_cast<size_t>(f.cone)];
    std::vector<int> image;
    for (int ray : cone) {
      if (std::find(tau.begin(), tau.end(), ray) != tau.end()) continue;
      auto it = std::find(adjacent.begin(), adjacent.end(), ray);
      image.push_back(static_cast<int>(it - adjacent.begin()));
    }
    std::sort(image.begin(), image.end());
    for (size_t i = 0; i < st.star->fan.max_cones.size(); ++i) {
      std::vector<int> c = st.star->fan.max_cones[i];
      std::sort(c.begin(), c.end());
      if (c == image) { st.cone = static_cast<int>(i); break; }
    }
  }
  return st;
}

// restriction of a divisor class (per unit level) to the stage model:
// adapt by the character u_tau with <u_tau, w_j> = -a_{w_j} for all j
inline std::vector<long long> star_divisor(const Flag& f, const StarStage& st, int r,
                                           const std::vector<long long>& coeffs) {
  int d = f.dim();
  QVec rhs(static_cast<size_t>(d));
  for (int j = 0; j < d; ++j)
    rhs[static_cast<size_t>(j)] = Rat(-coeffs[static_cast<size_t>(f.ray_order[static_cast<size_t>(j)])]);
  // u_tau solves W^T u = rhs where rows of W^T are the w_j
  QMat wt(static_cast<size_t>(d), QVec(static_cast<size_t>(d)));
  for (int j = 0; j < d; ++j) {
    const LVec& w = flag_ray(f, j);
    for (int i = 0; i < d; ++i) wt[static_cast<size_t>(j)][static_cast<size_t>(i)] = Rat(w[static_cast<size_t>(i)]);
  }
  auto u = solve_square(std::move(wt), std::move(rhs));
  if (!u) throw std::logic_error("star_divisor: singular flag basis");
  std::vector<long long> out;
  for (int k = 0; k < static_cast<int>(st.ray_of_star.size()); ++k) {
    int ray = st.ray_of_star[static_cast<size_t>(k)];
    Rat a = Rat(coeffs[static_cast<size_t>(ray)]) + dot(f.model->fan.rays[static_cast<size_t>(ray)], *u);
    if (denominator(a) != 1) throw std::logic_error("star_divisor: non-integral restriction");
    out.push_back(to_ll(numerator(a)));
  }
  (void)r;
  return out;
}

// the induced flag on the stage model
inline Flag induced_flag(const Flag& f, const StarStage& st) {
  return invariant_flag(st.star, st.cone, st.order_tail);
}

// ---- transforms for linear flags on projective spaces ----

inline MPoly to_flag_coords(const Flag& f, const MPoly& s) {
  if (f.kind != Flag::Kind::ProjLinear)
    throw std::invalid_argument("to_flag_coords: linear flags only");
  // x = Tinv y, substitute columns of Tinv as linear forms
  std::vector<QVec> subs;
  for (const auto& row : f.Tinv) subs.push_back(row);
  return substitute_linear(s, subs, static_cast<int>(f.Tinv.size()));
}

inline MPoly from_flag_coords(const Flag& f, const MPoly& s) {
  std::vector<QVec> subs;
  for (const auto& row : f.T) subs.push_back(row);
  return substitute_linear(s, subs, static_cast<int>(f.T.size()));
}

// ---- P1xP1 hyperplane-section flag primitives ----

inline MPoly quadric_poly(const Flag& f) {
  MPoly q{2, {}};
  mp_add_term(q, {0, 0}, f.q00);
  mp_add_term(q, {1, 0}, f.q10);
  mp_add_term(q, {0, 1}, f.q01);
  mp_add_term(q, {1, 1}, f.q11);
  return q;
}

// Substitute t2 = -A/B along {q = 0} and clear denominators against the given
// support box: the result is the restriction in a fixed trivialization, a
// univariate polynomial of degree <= (x-width + y-height) of the box.
inline MPoly quadric_param(const Flag& f, const MPoly& s, long long xlo, long long xhi,
                           long long ylo, long long yhi) {
  MPoly a{1, {}}, bpoly{1, {}};
  mp_add_term(a, {0}, f.q00);
  mp_add_term(a, {1}, f.q10);
  mp_add_term(bpoly, {0}, f.q01);
  mp_add_term(bpoly, {1}, f.q11);
  MPoly out = mp_zero(1);
  for (const auto& [e, c] : s.terms) {
    if (e[0] < xlo || e[0] > xhi || e[1] < ylo || e[1] > yhi)
      throw std::invalid_argument("quadric_param: term outside the declared box");
    MPoly t = mp_monomial({e[0] - xlo}, c);
    t = t * mp_pow(Rat(-1) * a, e[1] - ylo);
    t = t * mp_pow(bpoly, yhi - e[1]);
    out = out + t;
  }
  return out;
}

inline nlohmann::json flag_json(const Flag& f) {
  nlohmann::json j;
  j["description"] = f.desc;
  j["attempts"] = f.attempts;
  switch (f.kind) {
    case Flag::Kind::ToricInvariant:
      j["kind"] = "torus_invariant";
      j["cone"] = f.cone;
      j["ray_order"] = f.ray_order;
      break;
    case Flag::Kind::ProjLinear: {
      j["kind"] = "linear";
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& row : f.T) rows.push_back(qvec_json(row));
      j["transform"] = rows;
      j["seed"] = f.seed;
      break;
    }
    case Flag::Kind::QuadricCurve:
      j["kind"] = "hyperplane_section";
      j["q"] = {rat_str(f.q00), rat_str(f.q10), rat_str(f.q01), rat_str(f.q11)};
      j["point"] = rat_str(f.p0);
      j["seed"] = f.seed;
      break;
  }
  return j;
}

}  // namespace nok
