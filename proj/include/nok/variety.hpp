#pragma once

// Ambient models: projective spaces P^d and smooth complete toric varieties
// given by a fan, with divisor classes, section spaces, polytopes, wall
// relations, and intersection numbers.
//
// Projective sections are homogeneous monomials with exponent order
// (x_1, ..., x_d, x_0): the final variable is the homogenizer, so coordinate
// flags read valuations off the leading exponents directly. Toric sections
// are Laurent monomials indexed by lattice points of the divisor polytope.

#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "nok/multipoly.hpp"
#include "nok/polytope.hpp"

namespace nok {

struct Wall {
  std::vector<int> tau;         // ray indices of the shared face (size dim-1)
  int ray_a = -1, ray_b = -1;   // opposite rays of the two adjacent cones
  std::vector<long long> rel;   // v_a + v_b = sum rel[i] * v_tau[i]
};

struct ToricFan {
  int dim = 0;
  std::vector<LVec> rays;
  std::vector<std::vector<int>> max_cones;
  std::vector<Wall> walls;
};

struct VarietyModel {
  enum class Kind { Projective, Toric } kind = Kind::Projective;
  int dim = 0;
  ToricFan fan;  // toric only
  std::string name;
};

using ModelPtr = std::shared_ptr<const VarietyModel>;

namespace detail {

inline Rat ray_det(const std::vector<LVec>& rays, const std::vector<int>& cone) {
  QMat m;
  for (int i : cone) m.push_back(qvec_of(rays[static_cast<size_t>(i)]));
  return det(std::move(m));
}

inline std::vector<Wall> compute_walls(const ToricFan& fan) {
  std::vector<Wall> walls;
  int d = fan.dim;
  if (d == 1) {
    Wall w;
    w.ray_a = fan.max_cones[0][0];
    w.ray_b = fan.max_cones[1][0];
    walls.push_back(w);
    return walls;
  }
  size_t nc = fan.max_cones.size();
  for (size_t i = 0; i < nc; ++i)
    for (size_t j = i + 1; j < nc; ++j) {
      std::vector<int> shared;
      for (int r : fan.max_cones[i])
        for (int s : fan.max_cones[j])
          if (r == s) shared.push_back(r);
      if (static_cast<int>(shared.size()) != d - 1) continue;
      Wall w;
      w.tau = shared;
      for (int r : fan.max_cones[i])
        if (std::find(shared.begin(), shared.end(), r) == shared.end()) w.ray_a = r;
      for (int r : fan.max_cones[j])
        if (std::find(shared.begin(), shared.end(), r) == shared.end()) w.ray_b = r;
      // solve v_a + v_b = sum c_i v_tau_i
      QMat m(static_cast<size_t>(d), QVec(shared.size()));
      QVec rhs(static_cast<size_t>(d));
      for (int row = 0; row < d; ++row) {
        for (size_t k = 0; k < shared.size(); ++k)
          m[static_cast<size_t>(row)][k] = fan.rays[static_cast<size_t>(shared[k])][static_cast<size_t>(row)];
        rhs[static_cast<size_t>(row)] =
            Rat(fan.rays[static_cast<size_t>(w.ray_a)][static_cast<size_t>(row)] +
                fan.rays[static_cast<size_t>(w.ray_b)][static_cast<size_t>(row)]);
      }
      // least-structure solve: stack and reduce
      QMat aug = m;
      for (int row = 0; row < d; ++row) aug[static_cast<size_t>(row)].push_back(rhs[static_cast<size_t>(row)]);
      RrefResult rr = rref(aug);
      for (int c : rr.pivot_cols)
        if (c == static_cast<int>(shared.size()))
          throw std::invalid_argument("fan: wall relation unsolvable (fan not smooth?)");
      w.rel.assign(shared.size(), 0);
      for (size_t k = 0; k < rr.pivot_cols.size(); ++k) {
        Rat v = aug[k][shared.size()];
        if (denominator(v) != 1)
          throw std::invalid_argument("fan: non-integral wall relation");
        w.rel[static_cast<size_t>(rr.pivot_cols[k])] = to_ll(numerator(v));
      }
      walls.push_back(w);
    }
  return walls;
}

}  // namespace detail

inline ModelPtr make_projective_space(int d) {
  if (d < 1 || d > 3) throw std::invalid_argument("projective space: dimension must be 1..3");
  auto m = std::make_shared<VarietyModel>();
  m->kind = VarietyModel::Kind::Projective;
  m->dim = d;
  m->name = "P" + std::to_string(d);
  return m;
}

inline ModelPtr make_toric(std::vector<LVec> rays, std::vector<std::vector<int>> cones,
                           std::string name = "toric") {
  if (rays.empty() || cones.empty()) throw std::invalid_argument("toric: empty fan");
  int d = static_cast<int>(rays[0].size());
  if (d < 1 || d > 3) throw std::invalid_argument("toric: dimension must be 1..3");
  for (const auto& r : rays) {
    if (static_cast<int>(r.size()) != d) throw std::invalid_argument("toric: ray dimension mismatch");
    long long g = 0;
    for (long long x : r) g = gcd_ll(g, x);
    if (g != 1) throw std::invalid_argument("toric: rays must be primitive");
  }
  ToricFan fan;
  fan.dim = d;
  fan.rays = std::move(rays);
  fan.max_cones = std::move(cones);
  for (auto& c : fan.max_cones) {
    if (static_cast<int>(c.size()) != d)
      throw std::invalid_argument("toric: maximal cones need dim rays (smooth complete fan)");
    Rat dt = detail::ray_det(fan.rays, c);
    if (dt != 1 && dt != -1)
      throw std::invalid_argument("toric: non-smooth maximal cone (|det| != 1)");
  }
  // completeness: every wall of every cone is shared by exactly one other cone
  if (d == 1) {
    if (fan.max_cones.size() != 2)
      throw std::invalid_argument("toric: a complete 1-dimensional fan has two rays");
  } else {
    for (size_t i = 0; i < fan.max_cones.size(); ++i) {
      std::vector<int> cone = fan.max_cones[i];
      std::sort(cone.begin(), cone.end());
      for (size_t drop = 0; drop < cone.size(); ++drop) {
        std::vector<int> face;
        for (size_t k = 0; k < cone.size(); ++k)
          if (k != drop) face.push_back(cone[k]);
        int sharing = 0;
        for (size_t j = 0; j < fan.max_cones.size(); ++j) {
          if (j == i) continue;
          std::vector<int> other = fan.max_cones[j];
          std::sort(other.begin(), other.end());
          if (std::includes(other.begin(), other.end(), face.begin(), face.end())) ++sharing;
        }
        if (sharing != 1)
          throw std::invalid_argument("toric: fan is not complete (unmatched wall)");
      }
    }
  }
  fan.walls = detail::compute_walls(fan);
  auto m = std::make_shared<VarietyModel>();
  m->kind = VarietyModel::Kind::Toric;
  m->dim = d;
  m->fan = std::move(fan);
  m->name = std::move(name);
  return m;
}

inline bool same_model(const ModelPtr& a, const ModelPtr& b) {
  if (a == b) return true;
  return a->kind == b->kind && a->dim == b->dim &&
         (a->kind == VarietyModel::Kind::Projective ||
          (a->fan.rays == b->fan.rays && a->fan.max_cones == b->fan.max_cones));
}

struct DivisorClass {
  ModelPtr model;
  std::vector<long long> coeffs;  // per ray (toric) or {degree} (projective)

  long long degree() const { return coeffs.at(0); }  // projective space only

  friend DivisorClass operator+(const DivisorClass& a, const DivisorClass& b) {
    DivisorClass r = a;
    for (size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] += b.coeffs[i];
    return r;
  }
  friend DivisorClass operator-(const DivisorClass& a, const DivisorClass& b) {
    DivisorClass r = a;
    for (size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] -= b.coeffs[i];
    return r;
  }
  friend DivisorClass operator*(long long c, const DivisorClass& a) {
    DivisorClass r = a;
    for (auto& x : r.coeffs) x *= c;
    return r;
  }
};

inline DivisorClass make_divisor(ModelPtr model, std::vector<long long> coeffs) {
  size_t want = model->kind == VarietyModel::Kind::Projective
                    ? 1
                    : model->fan.rays.size();
  if (coeffs.size() != want) throw std::invalid_argument("divisor: coefficient count mismatch");
  return DivisorClass{std::move(model), std::move(coeffs)};
}

// lattice polytope { u : <u, v_ray> >= -a_ray } of a toric divisor
inline Polytope divisor_polytope(const DivisorClass& d) {
  if (d.model->kind != VarietyModel::Kind::Toric)
    throw std::invalid_argument("divisor_polytope: toric models only");
  std::vector<Halfspace> hs;
  for (size_t i = 0; i < d.model->fan.rays.size(); ++i)
    hs.push_back({d.model->fan.rays[i], Rat(-d.coeffs[i])});
  return polytope_from_halfspaces(d.model->dim, std::move(hs));
}

// D . C_tau for the invariant curve of a wall
inline long long wall_pairing(const DivisorClass& d, const Wall& w) {
  long long s = d.coeffs[static_cast<size_t>(w.ray_a)] + d.coeffs[static_cast<size_t>(w.ray_b)];
  for (size_t i = 0; i < w.tau.size(); ++i)
    s -= w.rel[i] * d.coeffs[static_cast<size_t>(w.tau[i])];
  return s;
}

inline bool is_nef(const DivisorClass& d) {
  if (d.model->kind == VarietyModel::Kind::Projective) return d.degree() >= 0;
  for (const auto& w : d.model->fan.walls)
    if (wall_pairing(d, w) < 0) return false;
  return true;
}

inline bool is_ample(const DivisorClass& d) {
  if (d.model->kind == VarietyModel::Kind::Projective) return d.degree() > 0;
  for (const auto& w : d.model->fan.walls)
    if (wall_pairing(d, w) <= 0) return false;
  return true;
}

inline bool is_big(const DivisorClass& d) {
  if (d.model->kind == VarietyModel::Kind::Projective) return d.degree() > 0;
  Polytope p = divisor_polytope(d);
  return !p.empty() && p.adim == d.model->dim;
}

// deterministic small ample divisor used as the reference for epsilon ladders
inline DivisorClass reference_ample(const ModelPtr& model) {
  if (model->kind == VarietyModel::Kind::Projective) return make_divisor(model, {1});
  size_t n = model->fan.rays.size();
  for (long long total = 1; total <= 4 * static_cast<long long>(n); ++total) {
    std::vector<long long> a(n, 0);
    // enumerate coefficient vectors with entries 0..4 and given sum, lexicographically
    auto rec = [&](auto&& self, size_t i, long long rem) -> bool {
      if (i == n) {
        if (rem != 0) return false;
        DivisorClass d = make_divisor(model, a);
        return is_ample(d);
      }
      for (long long v = 0; v <= std::min<long long>(4, rem); ++v) {
        a[i] = v;
        if (self(self, i + 1, rem - v)) return true;
      }
      a[i] = 0;
      return false;
    };
    if (rec(rec, 0, total)) return make_divisor(model, a);
  }
  throw std::runtime_error("reference_ample: no small ample divisor found");
}

// ---- section spaces ----

struct Carrier {
  enum class Kind { Proj, Toric, Curve } kind = Kind::Proj;
  ModelPtr model;                       // Proj / Toric
  std::vector<long long> div_coeffs;    // degree (Proj: single entry) or ray coefficients
  long long curve_deg = 0;              // Curve: bundle degree per level unit
  Rat curve_point;                      // Curve: the marked point of the flag
  std::string label;
};

struct SectionSpace {
  Carrier carrier;
  long long level = 0;
  std::vector<MPoly> basis;

  long long dim() const { return static_cast<long long>(basis.size()); }
};

inline long long binomial(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// monomials of total degree deg in nvars variables, lex order
inline std::vector<LVec> homogeneous_exponents(int nvars, long long deg) {
  std::vector<LVec> out;
  LVec cur(static_cast<size_t>(nvars), 0);
  auto rec = [&](auto&& self, int i, long long rem) -> void {
    if (i == nvars - 1) {
      cur[static_cast<size_t>(i)] = rem;
      out.push_back(cur);
      return;
    }
    for (long long e = 0; e <= rem; ++e) {
      cur[static_cast<size_t>(i)] = e;
      self(self, i + 1, rem - e);
    }
  };
  if (deg >= 0) rec(rec, 0, deg);
  return out;
}

inline SectionSpace sections(const DivisorClass& d, long long m) {
  if (m < 0) throw std::invalid_argument("sections: level must be >= 0");
  SectionSpace s;
  s.level = m;
  if (d.model->kind == VarietyModel::Kind::Projective) {
    s.carrier = {Carrier::Kind::Proj, d.model, d.coeffs, 0, Rat(0), d.model->name};
    long long deg = d.degree() * m;
    if (deg >= 0)
      for (const auto& e : homogeneous_exponents(d.model->dim + 1, deg))
        s.basis.push_back(mp_monomial(e, 1));
    return s;
  }
  s.carrier = {Carrier::Kind::Toric, d.model, d.coeffs, 0, Rat(0), d.model->name};
  std::vector<Halfspace> hs;
  for (size_t i = 0; i < d.model->fan.rays.size(); ++i)
    hs.push_back({d.model->fan.rays[i], Rat(-m * d.coeffs[i])});
  Polytope p = polytope_from_halfspaces(d.model->dim, std::move(hs));
  for (const auto& u : lattice_points(p)) s.basis.push_back(mp_monomial(u, 1));
  return s;
}

inline long long h0(const DivisorClass& d, long long m) {
  if (d.model->kind == VarietyModel::Kind::Projective) {
    long long deg = d.degree() * m;
    if (deg < 0) return 0;
    return binomial(deg + d.model->dim, d.model->dim);
  }
  return sections(d, m).dim();
}

// d-fold intersection number via inclusion-exclusion over coefficient sums
// (valid for globally generated classes; projective spaces multiply degrees)
inline long long intersection_number(const std::vector<DivisorClass>& ds) {
  if (ds.empty()) throw std::invalid_argument("intersection_number: no divisors");
  const ModelPtr& model = ds[0].model;
  for (const auto& d : ds)
    if (!same_model(d.model, model))
      throw std::invalid_argument("intersection_number: divisors on different models");
  int dim = model->dim;
  if (static_cast<int>(ds.size()) != dim)
    throw std::invalid_argument("intersection_number: need dim divisors");
  if (model->kind == VarietyModel::Kind::Projective) {
    long long p = 1;
    for (const auto& d : ds) p *= d.degree();
    return p;
  }
  Rat total = 0;
  size_t n = ds.size();
  for (size_t mask = 1; mask < (1u << n); ++mask) {
    DivisorClass sum = make_divisor(model, std::vector<long long>(model->fan.rays.size(), 0));
    int bits = 0;
    for (size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) { sum = sum + ds[i]; ++bits; }
    Rat v = volume(divisor_polytope(sum));
    total += ((static_cast<int>(n) - bits) % 2 == 0) ? v : -v;
  }
  if (denominator(total) != 1)
    throw std::logic_error("intersection_number: non-integral mixed volume");
  return to_ll(numerator(total));
}

// ---- stock models ----

inline ModelPtr toric_projective_space(int d) {
  std::vector<LVec> rays;
  for (int i = 0; i < d; ++i) {
    LVec e(static_cast<size_t>(d), 0);
    e[static_cast<size_t>(i)] = 1;
    rays.push_back(e);
  }
  rays.push_back(LVec(static_cast<size_t>(d), -1));
  std::vector<std::vector<int>> cones;
  for (int skip = 0; skip <= d; ++skip) {
    std::vector<int> c;
    for (int i = 0; i <= d; ++i)
      if (i != skip) c.push_back(i);
    cones.push_back(c);
  }
  return make_toric(rays, cones, "P" + std::to_string(d) + "_toric");
}

inline ModelPtr p1xp1() {
  return make_toric({{1, 0}, {0, 1}, {-1, 0}, {0, -1}},
                    {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, "P1xP1");
}

// Hirzebruch surface F_e: rays (1,0), (0,1), (-1,e), (0,-1); the divisor of
// ray 1 is the negative section (self-intersection -e), ray 0 is a fiber.
inline ModelPtr hirzebruch(long long e) {
  return make_toric({{1, 0}, {0, 1}, {-1, e}, {0, -1}},
                    {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, "F" + std::to_string(e));
}

// order of vanishing of a toric section along the invariant divisor of a ray
inline long long toric_ord_along_ray(const MPoly& s, const DivisorClass& d, long long m,
                                     int ray) {
  if (s.zero()) throw std::invalid_argument("toric_ord_along_ray: zero section");
  const LVec& v = d.model->fan.rays[static_cast<size_t>(ray)];
  long long best = 0;
  bool first = true;
  for (const auto& [u, c] : s.terms) {
    long long o = dot(u, v) + m * d.coeffs[static_cast<size_t>(ray)];
    if (first || o < best) { best = o; first = false; }
  }
  return best;
}

}  // namespace nok
