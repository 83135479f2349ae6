#pragma once

// Exact rational linear algebra: reduced row echelon form with a
// deterministic pivot rule, solving, kernels, row-space tests, and a small
// exact simplex used for convex-hull membership.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nok/rational.hpp"

namespace nok {

using QMat = std::vector<QVec>;

struct RrefResult {
  long long rank = 0;
  std::vector<int> pivot_cols;
};

// In-place reduced row echelon form. Pivot rule: leftmost nonzero column;
// among candidate rows the entry with the smallest bit size wins, then the
// lowest row index. The result (a canonical RREF) does not depend on the
// rule, only the intermediate arithmetic does.
inline RrefResult rref(QMat& m) {
  RrefResult res;
  if (m.empty()) return res;
  size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t best = rows;
    unsigned best_bits = 0;
    for (size_t i = r; i < rows; ++i) {
      if (m[i][c] == 0) continue;
      unsigned b = rat_bits(m[i][c]);
      if (best == rows || b < best_bits) { best = i; best_bits = b; }
    }
    if (best == rows) continue;
    std::swap(m[r], m[best]);
    Rat inv = Rat(1) / m[r][c];
    for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    res.pivot_cols.push_back(static_cast<int>(c));
    ++r;
  }
  res.rank = static_cast<long long>(r);
  return res;
}

inline long long rank_of(QMat m) { return rref(m).rank; }

// canonical RREF basis of the row space (zero rows dropped)
inline QMat row_space_basis(QMat m) {
  RrefResult rr = rref(m);
  m.resize(static_cast<size_t>(rr.rank));
  return m;
}

// is v in the row space of the (already reduced or not) matrix?
inline bool in_row_space(const QMat& basis, const QVec& v) {
  QMat m = basis;
  m.push_back(v);
  return rank_of(std::move(m)) == rank_of(QMat(basis));
}

inline bool row_space_leq(const QMat& a, const QMat& b) {
  // rowspace(a) subseteq rowspace(b)
  QMat m = b;
  for (const auto& row : a) m.push_back(row);
  return rank_of(std::move(m)) == rank_of(QMat(b));
}

// unique solution of a square system A x = b; nullopt if singular
inline std::optional<QVec> solve_square(QMat a, QVec b) {
  size_t n = a.size();
  for (size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
  RrefResult rr = rref(a);
  if (rr.rank != static_cast<long long>(n)) return std::nullopt;
  for (int c : rr.pivot_cols)
    if (c == static_cast<int>(n)) return std::nullopt;  // inconsistent
  QVec x(n);
  for (size_t i = 0; i < n; ++i) x[i] = a[i][n];
  return x;
}

// basis of { x : M x = 0 }
inline QMat kernel_basis(QMat m, size_t cols) {
  RrefResult rr = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (int c : rr.pivot_cols) is_pivot[static_cast<size_t>(c)] = true;
  QMat out;
  for (size_t fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    QVec v(cols, Rat(0));
    v[fc] = 1;
    for (size_t i = 0; i < rr.pivot_cols.size(); ++i) {
      size_t pc = static_cast<size_t>(rr.pivot_cols[i]);
      v[pc] = -m[i][fc];
    }
    out.push_back(v);
  }
  return out;
}

inline Rat det(QMat a) {
  size_t n = a.size();
  Rat d = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return Rat(0);
    if (p != c) { std::swap(a[p], a[c]); d = -d; }
    d *= a[c][c];
    Rat inv = Rat(1) / a[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      Rat f = a[i][c] * inv;
      for (size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return d;
}

// Coefficient vectors c with sum_i c_i row_i in rowspace(target).
// Returned rows are coefficient vectors over `rows`.
inline QMat preimage_coefficients(const QMat& rows, const QMat& target_rref) {
  if (rows.empty()) return {};
  size_t cols = rows[0].size();
  // residue of each row after eliminating with target pivots
  QMat residues;
  residues.reserve(rows.size());
  std::vector<int> tpiv;
  for (const auto& trow : target_rref) {
    size_t c = 0;
    while (c < cols && trow[c] == 0) ++c;
    tpiv.push_back(static_cast<int>(c));
  }
  for (const auto& row : rows) {
    QVec r = row;
    for (size_t i = 0; i < target_rref.size(); ++i) {
      Rat f = r[static_cast<size_t>(tpiv[i])];
      if (f == 0) continue;
      for (size_t j = 0; j < cols; ++j) r[j] -= f * target_rref[i][j];
    }
    residues.push_back(r);
  }
  // want sum c_i residues_i = 0  ->  kernel of residues^T
  QMat rt(cols, QVec(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols; ++j) rt[j][i] = residues[i][j];
  return kernel_basis(std::move(rt), rows.size());
}

// Exact feasibility test: is p a convex combination of pts? Phase-one
// simplex with Bland's rule, fully rational.
inline bool in_convex_hull(const QVec& p, const std::vector<QVec>& pts) {
  if (pts.empty()) return false;
  size_t d = p.size(), n = pts.size();
  size_t rows = d + 1;
  // tableau rows: [lambda columns | artificial columns | rhs]
  size_t cols = n + rows + 1;
  QMat t(rows, QVec(cols, Rat(0)));
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = 0; j < n; ++j) t[i][j] = pts[j][i];
    t[i][cols - 1] = p[i];
  }
  for (size_t j = 0; j < n; ++j) t[d][j] = 1;
  t[d][cols - 1] = 1;
  for (size_t i = 0; i < rows; ++i) {
    if (t[i][cols - 1] < 0)
      for (size_t j = 0; j < cols; ++j) t[i][j] = -t[i][j];
    t[i][n + i] = 1;
  }
  std::vector<size_t> basis(rows);
  for (size_t i = 0; i < rows; ++i) basis[i] = n + i;
  // objective: minimize sum of artificials; reduced costs
  QVec z(cols, Rat(0));
  for (size_t j = 0; j < cols; ++j)
    for (size_t i = 0; i < rows; ++i) z[j] += t[i][j];
  for (size_t i = 0; i < rows; ++i) z[n + i] -= 1;  // cost of artificial is 1
  // z[j] now holds sum of column minus cost; entering when z[j] > 0 for non-cost... use
  // standard phase-1: reduced cost of column j = (sum over rows of t[i][j]) - c_j with
  // c_j = 1 for artificials, 0 otherwise; already computed in z. rhs objective:
  while (true) {
    size_t enter = cols;  // Bland: smallest index with positive reduced cost
    for (size_t j = 0; j + 1 < cols; ++j)
      if (z[j] > 0) { enter = j; break; }
    if (enter == cols) break;
    size_t leave = rows;
    Rat best;
    for (size_t i = 0; i < rows; ++i) {
      if (t[i][enter] <= 0) continue;
      Rat ratio = t[i][cols - 1] / t[i][enter];
      if (leave == rows || ratio < best ||
          (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == rows) return false;  // unbounded; cannot happen here
    Rat piv = t[leave][enter];
    for (size_t j = 0; j < cols; ++j) t[leave][j] /= piv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Rat f = t[i][enter];
      for (size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
    }
    Rat fz = z[enter];
    for (size_t j = 0; j < cols; ++j) z[j] -= fz * t[leave][j];
    basis[leave] = enter;
  }
  // feasible iff all artificial variables are zero
  for (size_t i = 0; i < rows; ++i)
    if (basis[i] >= n && t[i][cols - 1] != 0) return false;
  return true;
}

}  // namespace nok
