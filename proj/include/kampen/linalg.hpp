#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "kampen/core.hpp"

namespace kampen {

// Column-major sparse integer matrix; boundary operators are stored this way.
struct SparseIntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::map<int, Int>> column;  // per column: row -> entry, no zeros

  SparseIntMatrix() = default;
  SparseIntMatrix(int r, int c) : rows(r), cols(c), column(c) {}

  void add(int r, int c, const Int& v) {
    if (v == 0) return;
    auto& col = column[c];
    auto it = col.find(r);
    if (it == col.end()) {
      col.emplace(r, v);
    } else if ((it->second += v) == 0) {
      col.erase(it);
    }
  }

  Int get(int r, int c) const {
    auto it = column[c].find(r);
    return it == column[c].end() ? Int(0) : it->second;
  }

  Vec apply(const Vec& x) const {
    Vec out(rows, 0);
    for (int j = 0; j < cols; ++j) {
      if (x[j] == 0) continue;
      for (const auto& [i, v] : column[j]) out[i] += v * x[j];
    }
    return out;
  }

  // transpose action: (M^T x)_j = sum_i M_ij x_i
  Vec apply_transpose(const Vec& x) const {
    Vec out(cols, 0);
    for (int j = 0; j < cols; ++j)
      for (const auto& [i, v] : column[j]) out[j] += v * x[i];
    return out;
  }
};

struct DenseMat {
  int rows = 0;
  int cols = 0;
  std::vector<Int> a;

  DenseMat() = default;
  DenseMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  Int& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const Int& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static DenseMat identity(int n) {
    DenseMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static DenseMat from_sparse(const SparseIntMatrix& s) {
    DenseMat m(s.rows, s.cols);
    for (int j = 0; j < s.cols; ++j)
      for (const auto& [i, v] : s.column[j]) m.at(i, j) = v;
    return m;
  }

  Vec apply(const Vec& x) const {
    Vec out(rows, 0);
    for (int i = 0; i < rows; ++i) {
      Int s = 0;
      for (int j = 0; j < cols; ++j)
        if (a[static_cast<size_t>(i) * cols + j] != 0)
          s += a[static_cast<size_t>(i) * cols + j] * x[j];
      out[i] = s;
    }
    return out;
  }

  DenseMat mul(const DenseMat& o) const {
    DenseMat out(rows, o.cols);
    for (int i = 0; i < rows; ++i)
      for (int k = 0; k < cols; ++k) {
        const Int& v = at(i, k);
        if (v == 0) continue;
        for (int j = 0; j < o.cols; ++j)
          if (o.at(k, j) != 0) out.at(i, j) += v * o.at(k, j);
      }
    return out;
  }

  bool is_identity() const {
    if (rows != cols) return false;
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
  }
};

// U*M*V = D with U, V unimodular (inverses tracked), diag(D) nonnegative with
// d1 | d2 | ... . Pivot rule: minimal absolute value, ties broken by lowest
// row then lowest column.
struct SnfResult {
  DenseMat U, Uinv, V, Vinv;
  std::vector<Int> diag;  // min(rows, cols) entries
  int rank = 0;
};

inline SnfResult smith_normal_form(const DenseMat& input) {
  DenseMat M = input;
  const int r = M.rows, c = M.cols;
  SnfResult out;
  out.U = DenseMat::identity(r);
  out.Uinv = DenseMat::identity(r);
  out.V = DenseMat::identity(c);
  out.Vinv = DenseMat::identity(c);

  auto row_swap = [&](int i, int j) {
    if (i == j) return;
    for (int k = 0; k < c; ++k) std::swap(M.at(i, k), M.at(j, k));
    for (int k = 0; k < r; ++k) std::swap(out.U.at(i, k), out.U.at(j, k));
    for (int k = 0; k < r; ++k) std::swap(out.Uinv.at(k, i), out.Uinv.at(k, j));
  };
  auto col_swap = [&](int i, int j) {
    if (i == j) return;
    for (int k = 0; k < r; ++k) std::swap(M.at(k, i), M.at(k, j));
    for (int k = 0; k < c; ++k) std::swap(out.V.at(k, i), out.V.at(k, j));
    for (int k = 0; k < c; ++k) std::swap(out.Vinv.at(i, k), out.Vinv.at(j, k));
  };
  auto row_add = [&](int i, int j, const Int& q) {  // row i += q * row j
    for (int k = 0; k < c; ++k)
      if (M.at(j, k) != 0) M.at(i, k) += q * M.at(j, k);
    for (int k = 0; k < r; ++k)
      if (out.U.at(j, k) != 0) out.U.at(i, k) += q * out.U.at(j, k);
    for (int k = 0; k < r; ++k)
      if (out.Uinv.at(k, i) != 0) out.Uinv.at(k, j) -= q * out.Uinv.at(k, i);
  };
  auto col_add = [&](int i, int j, const Int& q) {  // col i += q * col j
    for (int k = 0; k < r; ++k)
      if (M.at(k, j) != 0) M.at(k, i) += q * M.at(k, j);
    for (int k = 0; k < c; ++k)
      if (out.V.at(k, j) != 0) out.V.at(k, i) += q * out.V.at(k, j);
    for (int k = 0; k < c; ++k)
      if (out.Vinv.at(i, k) != 0) out.Vinv.at(j, k) -= q * out.Vinv.at(i, k);
  };
  auto row_negate = [&](int i) {
    for (int k = 0; k < c; ++k) M.at(i, k) = -M.at(i, k);
    for (int k = 0; k < r; ++k) out.U.at(i, k) = -out.U.at(i, k);
    for (int k = 0; k < r; ++k) out.Uinv.at(k, i) = -out.Uinv.at(k, i);
  };

  int t = 0;
  while (t < r && t < c) {
    int pi = -1, pj = -1;
    Int best = 0;
    for (int i = t; i < r && best != 1; ++i)
      for (int j = t; j < c; ++j) {
        const Int& x = M.at(i, j);
        if (x == 0) continue;
        Int ax = abs(x);
        if (pi < 0 || ax < best) {
          pi = i;
          pj = j;
          best = ax;
          if (best == 1) break;
        }
      }
    if (pi < 0) break;
    row_swap(t, pi);
    col_swap(t, pj);
    if (M.at(t, t) < 0) row_negate(t);

    bool dirty = false;
    for (int i = t + 1; i < r; ++i)
      if (M.at(i, t) != 0) {
        Int q = M.at(i, t) / M.at(t, t);
        row_add(i, t, -q);
        if (M.at(i, t) != 0) dirty = true;
      }
    for (int j = t + 1; j < c; ++j)
      if (M.at(t, j) != 0) {
        Int q = M.at(t, j) / M.at(t, t);
        col_add(j, t, -q);
        if (M.at(t, j) != 0) dirty = true;
      }
    if (dirty) continue;

    if (M.at(t, t) != 1) {
      int bad = -1;
      for (int i = t + 1; i < r && bad < 0; ++i)
        for (int j = t + 1; j < c; ++j)
          if (M.at(i, j) % M.at(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad >= 0) {
        row_add(t, bad, 1);
        continue;
      }
    }
    ++t;
  }
  out.rank = t;
  out.diag.resize(std::min(r, c));
  for (int i = 0; i < std::min(r, c); ++i) out.diag[i] = M.at(i, i);
  return out;
}

inline SnfResult smith_normal_form(const SparseIntMatrix& m) {
  return smith_normal_form(DenseMat::from_sparse(m));
}

// M x = b over Z via SNF: D y = U b, x = V y
inline std::optional<Vec> solve_integer(const DenseMat& M, const Vec& b,
                                        const SnfResult* pre = nullptr) {
  SnfResult own;
  if (!pre) {
    own = smith_normal_form(M);
    pre = &own;
  }
  const SnfResult& s = *pre;
  Vec ub = s.U.apply(b);
  Vec y(M.cols, 0);
  for (int i = 0; i < std::min(M.rows, M.cols); ++i) {
    if (i < s.rank) {
      if (ub[i] % s.diag[i] != 0) return std::nullopt;
      y[i] = ub[i] / s.diag[i];
    }
  }
  for (int i = s.rank; i < M.rows; ++i)
    if (ub[i] != 0) return std::nullopt;
  return s.V.apply(y);
}

inline std::optional<Vec> solve_integer(const SparseIntMatrix& M, const Vec& b) {
  return solve_integer(DenseMat::from_sparse(M), b);
}

inline bool image_membership(const DenseMat& M, const Vec& b,
                             const SnfResult* pre = nullptr) {
  return solve_integer(M, b, pre).has_value();
}

// Integer kernel lattice basis: columns of V past the rank.
inline std::vector<Vec> kernel_basis(const DenseMat& M, const SnfResult* pre = nullptr) {
  SnfResult own;
  if (!pre) {
    own = smith_normal_form(M);
    pre = &own;
  }
  std::vector<Vec> out;
  for (int j = pre->rank; j < M.cols; ++j) {
    Vec v(M.cols);
    for (int i = 0; i < M.cols; ++i) v[i] = pre->V.at(i, j);
    out.push_back(std::move(v));
  }
  return out;
}

struct HomologyDecomposition {
  int betti = 0;
  struct Torsion {
    Int order;  // n_j > 1
    Vec cycle;  // z_j, an i-cycle
    Vec lift;   // c_j in C_{i+1} with boundary(c_j) = n_j * z_j
  };
  std::vector<Torsion> torsion;
  std::vector<Vec> free_reps;  // i-cycles generating the free part
};

// H_i from bnd_i : C_i -> C_{i-1} and bnd_ip1 : C_{i+1} -> C_i.
// Torsion lifts are read off the SNF change-of-basis matrices.
inline HomologyDecomposition homology_with_torsion_lifts(const DenseMat& bnd_i,
                                                         const DenseMat& bnd_ip1) {
  const int ci = bnd_i.cols;
  if (bnd_ip1.cols > 0 && bnd_ip1.rows != ci)
    throw input_error("homology: boundary matrix shape mismatch");

  SnfResult si = smith_normal_form(bnd_i);
  const int rank = bnd_i.rows > 0 ? si.rank : 0;
  const int z = ci - rank;

  // kernel basis Z = columns of V past the rank
  DenseMat Z(ci, z);
  for (int j = 0; j < z; ++j)
    for (int i = 0; i < ci; ++i) Z.at(i, j) = si.V.at(i, rank + j);

  HomologyDecomposition out;
  if (z == 0) return out;

  const int cip1 = bnd_ip1.cols;
  if (cip1 == 0) {
    out.betti = z;
    for (int j = 0; j < z; ++j) {
      Vec v(ci);
      for (int i = 0; i < ci; ++i) v[i] = Z.at(i, j);
      out.free_reps.push_back(std::move(v));
    }
    return out;
  }

  // coordinates of im(bnd_ip1) in the kernel basis: A = (Vinv * bnd_ip1)[rank:, :]
  DenseMat VB = si.Vinv.mul(bnd_ip1);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < cip1; ++j)
      if (VB.at(i, j) != 0)
        throw invariant_error("homology: image does not lie in the kernel (dd != 0?)");
  DenseMat A(z, cip1);
  for (int i = 0; i < z; ++i)
    for (int j = 0; j < cip1; ++j) A.at(i, j) = VB.at(rank + i, j);

  SnfResult sa = smith_normal_form(A);
  out.betti = z - sa.rank;
  auto cycle_from = [&](int j) {
    Vec v(ci, 0);
    for (int i = 0; i < ci; ++i) {
      Int s = 0;
      for (int k = 0; k < z; ++k)
        if (sa.Uinv.at(k, j) != 0) s += Z.at(i, k) * sa.Uinv.at(k, j);
      v[i] = s;
    }
    return v;
  };
  for (int j = 0; j < sa.rank; ++j) {
    if (sa.diag[j] > 1) {
      HomologyDecomposition::Torsion t;
      t.order = sa.diag[j];
      t.cycle = cycle_from(j);
      t.lift.resize(cip1);
      for (int i = 0; i < cip1; ++i) t.lift[i] = sa.V.at(i, j);
      out.torsion.push_back(std::move(t));
    }
  }
  for (int j = sa.rank; j < z; ++j) out.free_reps.push_back(cycle_from(j));
  return out;
}

// ---- GF(2) ----

struct Gf2Matrix {
  int rows = 0;
  int cols = 0;
  int words = 0;
  std::vector<std::uint64_t> bits;  // row-major packed

  Gf2Matrix() = default;
  Gf2Matrix(int r, int c)
      : rows(r), cols(c), words((c + 63) / 64), bits(static_cast<size_t>(r) * words) {}

  void set(int i, int j, int v) {
    auto& w = bits[static_cast<size_t>(i) * words + j / 64];
    std::uint64_t m = 1ull << (j % 64);
    if (v & 1)
      w |= m;
    else
      w &= ~m;
  }
  int get(int i, int j) const {
    return (bits[static_cast<size_t>(i) * words + j / 64] >> (j % 64)) & 1;
  }

  static Gf2Matrix from_dense(const DenseMat& m) {
    Gf2Matrix g(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
      for (int j = 0; j < m.cols; ++j)
        if (m.at(i, j) % 2 != 0) g.set(i, j, 1);
    return g;
  }

  static Gf2Matrix from_sparse(const SparseIntMatrix& m) {
    Gf2Matrix g(m.rows, m.cols);
    for (int j = 0; j < m.cols; ++j)
      for (const auto& [i, v] : m.column[j])
        if (v % 2 != 0) g.set(i, j, 1);
    return g;
  }

  void xor_rows(int dst, int src) {
    auto* d = &bits[static_cast<size_t>(dst) * words];
    const auto* s = &bits[static_cast<size_t>(src) * words];
    for (int k = 0; k < words; ++k) d[k] ^= s[k];
  }
  void swap_rows(int i, int j) {
    if (i == j) return;
    for (int k = 0; k < words; ++k)
      std::swap(bits[static_cast<size_t>(i) * words + k],
                bits[static_cast<size_t>(j) * words + k]);
  }
};

using BitVec = std::vector<std::uint8_t>;

inline int mod2_rank(Gf2Matrix m) {
  int rank = 0;
  for (int col = 0; col < m.cols && rank < m.rows; ++col) {
    int sel = -1;
    for (int i = rank; i < m.rows; ++i)
      if (m.get(i, col)) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    m.swap_rows(rank, sel);
    for (int i = 0; i < m.rows; ++i)
      if (i != rank && m.get(i, col)) m.xor_rows(i, rank);
    ++rank;
  }
  return rank;
}

// Solve M x = b over GF(2)
inline std::optional<BitVec> mod2_solve(const Gf2Matrix& mat, const BitVec& b) {
  Gf2Matrix m(mat.rows, mat.cols + 1);
  for (int i = 0; i < mat.rows; ++i) {
    for (int k = 0; k < mat.words; ++k)
      m.bits[static_cast<size_t>(i) * m.words + k] =
          mat.bits[static_cast<size_t>(i) * mat.words + k];
    m.set(i, mat.cols, b[i] & 1);
  }
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < mat.cols && row < m.rows; ++col) {
    int sel = -1;
    for (int i = row; i < m.rows; ++i)
      if (m.get(i, col)) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    m.swap_rows(row, sel);
    for (int i = 0; i < m.rows; ++i)
      if (i != row && m.get(i, col)) m.xor_rows(i, row);
    pivots.push_back(col);
    ++row;
  }
  for (int i = row; i < m.rows; ++i)
    if (m.get(i, mat.cols)) return std::nullopt;
  BitVec x(mat.cols, 0);
  for (size_t k = 0; k < pivots.size(); ++k)
    x[pivots[k]] = static_cast<std::uint8_t>(m.get(static_cast<int>(k), mat.cols));
  return x;
}

inline std::vector<BitVec> mod2_kernel_basis(Gf2Matrix m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int sel = -1;
    for (int i = row; i < m.rows; ++i)
      if (m.get(i, col)) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    m.swap_rows(row, sel);
    for (int i = 0; i < m.rows; ++i)
      if (i != row && m.get(i, col)) m.xor_rows(i, row);
    pivots.push_back(col);
    ++row;
  }
  std::vector<BitVec> out;
  std::vector<char> is_pivot(m.cols, 0);
  for (int p : pivots) is_pivot[p] = 1;
  for (int col = 0; col < m.cols; ++col) {
    if (is_pivot[col]) continue;
    BitVec v(m.cols, 0);
    v[col] = 1;
    for (size_t k = 0; k < pivots.size(); ++k)
      v[pivots[k]] = static_cast<std::uint8_t>(m.get(static_cast<int>(k), col));
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace kampen
