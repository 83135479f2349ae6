#pragma once

// Exact rational scalars and small vectors. Everything downstream assumes
// arithmetic is exact; there is no floating point anywhere in the library.

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace nok {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using QVec = std::vector<Rat>;        // point of Q^n
using LVec = std::vector<long long>;  // lattice point / exponent vector

inline std::string rat_str(const Rat& q) {
  Int n = numerator(q), d = denominator(q);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int n(s.substr(0, slash)), d(s.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("zero denominator");
    return Rat(n, d);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational '" + s + "'");
  }
}

inline long long to_ll(const Int& n) {
  if (n > std::numeric_limits<long long>::max() || n < std::numeric_limits<long long>::min())
    throw std::overflow_error("integer too large for machine word: " + n.str());
  return static_cast<long long>(n);
}

// floor/ceil of a rational as exact integers
inline Int rat_floor(const Rat& q) {
  Int n = numerator(q), d = denominator(q);
  Int t = n / d;
  if (n < 0 && t * d != n) --t;
  return t;
}
inline Int rat_ceil(const Rat& q) { return -rat_floor(-q); }

// bit-size proxy used as a deterministic pivot tie-break
inline unsigned rat_bits(const Rat& q) {
  Int n = numerator(q), d = denominator(q);
  if (n < 0) n = -n;
  unsigned bn = (n == 0) ? 0 : boost::multiprecision::msb(n) + 1;
  unsigned bd = (d == 1) ? 0 : boost::multiprecision::msb(d) + 1;
  return bn + bd;
}

inline Rat dot(const QVec& a, const QVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rat dot(const LVec& a, const QVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * b[i];
  return s;
}

inline long long dot(const LVec& a, const LVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  long long s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline QVec qvec_of(const LVec& v) {
  QVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = v[i];
  return r;
}

inline QVec operator+(const QVec& a, const QVec& b) {
  QVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}
inline QVec operator-(const QVec& a, const QVec& b) {
  QVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}
inline QVec operator*(const Rat& c, const QVec& a) {
  QVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

inline LVec operator+(const LVec& a, const LVec& b) {
  LVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}
inline LVec operator-(const LVec& a, const LVec& b) {
  LVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline long long gcd_ll(long long a, long long b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) { long long t = a % b; a = b; b = t; }
  return a;
}

// scale a rational vector to a primitive integer vector (direction preserved)
inline LVec primitive(const QVec& v) {
  Int l = 1;
  for (const Rat& q : v) l = boost::multiprecision::lcm(l, denominator(q));
  std::vector<Int> w(v.size());
  Int g = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    w[i] = numerator(v[i]) * (l / denominator(v[i]));
    g = boost::multiprecision::gcd(g, w[i]);
  }
  LVec r(v.size(), 0);
  if (g == 0) return r;
  for (size_t i = 0; i < v.size(); ++i) r[i] = to_ll(w[i] / g);
  return r;
}

}  // namespace nok
