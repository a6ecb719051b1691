#pragma once

#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <vector>

namespace wallx {

using IntMat = std::vector<std::vector<long long>>;
using IntVec = std::vector<long long>;

inline IntMat identity_mat(int n) {
  IntMat m(n, IntVec(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline IntVec mat_apply(const IntMat& a, const IntVec& v) {
  IntVec r(a.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != v.size()) throw std::invalid_argument("mat_apply shape mismatch");
    for (size_t j = 0; j < v.size(); ++j) r[i] += a[i][j] * v[j];
  }
  return r;
}

struct SmithForm {
  IntMat d;  // diagonal form, rows x cols as input
  IntMat u;  // rows x rows unimodular, d = u * a * v
  IntMat v;  // cols x cols unimodular
  int rank = 0;
};

// Smith-type normal form by integer row/column reduction.  Desk-scale only;
// entries stay tiny for every lattice in this project.  cols_hint is needed
// when the matrix has no rows (maps to the zero lattice).
inline SmithForm smith_form(IntMat a, int cols_hint = -1) {
  int rows = (int)a.size();
  int cols = rows ? (int)a[0].size() : (cols_hint >= 0 ? cols_hint : 0);
  SmithForm s;
  s.u = identity_mat(rows);
  s.v = identity_mat(cols);
  auto swap_rows = [&](int i, int j) { std::swap(a[i], a[j]); std::swap(s.u[i], s.u[j]); };
  auto swap_cols = [&](int i, int j) {
    for (auto& row : a) std::swap(row[i], row[j]);
    for (auto& row : s.v) std::swap(row[i], row[j]);
  };
  auto row_op = [&](int dst, int src, long long f) {  // row dst -= f * row src
    for (int k = 0; k < cols; ++k) a[dst][k] -= f * a[src][k];
    for (int k = 0; k < rows; ++k) s.u[dst][k] -= f * s.u[src][k];
  };
  auto col_op = [&](int dst, int src, long long f) {
    for (int k = 0; k < rows; ++k) a[k][dst] -= f * a[k][src];
    for (int k = 0; k < cols; ++k) s.v[k][dst] -= f * s.v[k][src];
  };

  int t = 0;
  while (t < rows && t < cols) {
    // find pivot: smallest nonzero |entry| in the remaining block
    int pi = -1, pj = -1;
    for (int i = t; i < rows; ++i)
      for (int j = t; j < cols; ++j)
        if (a[i][j] != 0 && (pi < 0 || std::llabs(a[i][j]) < std::llabs(a[pi][pj]))) { pi = i; pj = j; }
    if (pi < 0) break;
    swap_rows(t, pi);
    swap_cols(t, pj);
    bool again = true;
    while (again) {
      again = false;
      for (int i = t + 1; i < rows; ++i)
        if (a[i][t] != 0) {
          long long f = a[i][t] / a[t][t];
          row_op(i, t, f);
          if (a[i][t] != 0) { swap_rows(t, i); again = true; }
        }
      for (int j = t + 1; j < cols; ++j)
        if (a[t][j] != 0) {
          long long f = a[t][j] / a[t][t];
          col_op(j, t, f);
          if (a[t][j] != 0) { swap_cols(t, j); again = true; }
        }
    }
    if (a[t][t] < 0) {
      for (int k = 0; k < cols; ++k) a[t][k] = -a[t][k];
      for (int k = 0; k < rows; ++k) s.u[t][k] = -s.u[t][k];
    }
    ++t;
  }
  s.rank = t;
  s.d = a;
  return s;
}

struct LatticeSolution {
  IntVec particular;          // one solution of A x = b
  std::vector<IntVec> kernel;  // basis of ker A
};

// Solve A x = b over the integers; nullopt when no solution exists.
inline std::optional<LatticeSolution> solve_lattice(const IntMat& a, const IntVec& b,
                                                    int cols_hint = -1) {
  int rows = (int)a.size();
  int cols = rows ? (int)a[0].size() : (cols_hint >= 0 ? cols_hint : 0);
  if ((int)b.size() != rows) throw std::invalid_argument("solve_lattice shape mismatch");
  SmithForm s = smith_form(a, cols);
  IntVec ub = mat_apply(s.u, b);
  IntVec w(cols, 0);
  for (int i = 0; i < rows; ++i) {
    long long d = (i < cols && i < s.rank) ? s.d[i][i] : 0;
    if (d == 0) {
      if (ub[i] != 0) return std::nullopt;
    } else {
      if (ub[i] % d != 0) return std::nullopt;
      w[i] = ub[i] / d;
    }
  }
  LatticeSolution sol;
  sol.particular = mat_apply(s.v, w);
  for (int j = s.rank; j < cols; ++j) {
    IntVec col(cols);
    for (int i = 0; i < cols; ++i) col[i] = s.v[i][j];
    sol.kernel.push_back(col);
  }
  return sol;
}

}  // namespace wallx
