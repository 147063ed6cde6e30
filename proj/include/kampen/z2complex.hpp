#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <string>
#include <vector>

#include "kampen/core.hpp"
#include "kampen/linalg.hpp"
#include "kampen/simplicial.hpp"

namespace kampen {

// Cell of a product complex: an ordered pair of disjoint simplices.
struct ProductCell {
  VertexList a, b;
  auto operator<=>(const ProductCell&) const = default;
  int dim() const {
    return static_cast<int>(a.size()) + static_cast<int>(b.size()) - 2;
  }
};

// Finite free Z/2 cell complex: cells carry a canonical orientation, the
// involution sends cell i to tau_sign[i] * cell tau_partner[i], and in_fd
// marks one cell per orbit (the fundamental domain).
template <typename Cell>
struct Z2Complex {
  std::string name;
  int dim = -1;
  std::vector<std::vector<Cell>> cells;
  std::vector<std::map<Cell, int>> index;
  std::vector<std::vector<int>> tau_partner;
  std::vector<std::vector<int>> tau_sign;
  std::vector<std::vector<char>> in_fd;
  std::vector<SparseIntMatrix> bnd;  // bnd[d] : C_d -> C_{d-1}

  bool empty() const { return dim < 0; }

  int ncells(int d) const {
    if (d < 0 || d > dim) return 0;
    return static_cast<int>(cells[d].size());
  }

  std::vector<int> f_vector() const {
    std::vector<int> f;
    for (int d = 0; d <= dim; ++d) f.push_back(ncells(d));
    return f;
  }

  Vec boundary(int d, const Vec& x) const {
    if (d <= 0 || d > dim) return Vec(ncells(d - 1), 0);
    return bnd[d].apply(x);
  }

  Vec coboundary(int d, const Vec& phi) const {
    if (d + 1 > dim) return Vec(0);
    return bnd[d + 1].apply_transpose(phi);
  }

  // Same formula serves chains and cochains: the involution is an
  // orthogonal permutation-with-signs in the cell basis.
  Vec tau_map(int d, const Vec& x) const {
    Vec out(ncells(d), 0);
    for (int i = 0; i < ncells(d); ++i)
      out[i] = Int(tau_sign[d][i]) * x[tau_partner[d][i]];
    return out;
  }

  void validate() const {
    for (int d = 0; d <= dim; ++d) {
      const int n = ncells(d);
      for (int i = 0; i < n; ++i) {
        int p = tau_partner[d][i];
        if (p == i) throw invariant_error("involution has a fixed cell");
        if (tau_partner[d][p] != i || tau_sign[d][p] != tau_sign[d][i])
          throw invariant_error("involution is not a signed pairing");
        if (in_fd[d][i] == in_fd[d][p])
          throw invariant_error("fundamental domain misses or doubles an orbit");
      }
    }
    for (int d = 2; d <= dim; ++d) {
      for (int j = 0; j < ncells(d); ++j) {
        Vec e(ncells(d), 0);
        e[j] = 1;
        Vec dd = boundary(d - 1, boundary(d, e));
        for (const Int& v : dd)
          if (v != 0) throw invariant_error("boundary of boundary is nonzero");
      }
    }
    for (int d = 1; d <= dim; ++d) {
      for (int j = 0; j < ncells(d); ++j) {
        Vec e(ncells(d), 0);
        e[j] = 1;
        Vec lhs = boundary(d, tau_map(d, e));
        Vec rhs = tau_map(d - 1, boundary(d, e));
        if (lhs != rhs) throw invariant_error("involution does not commute with boundary");
      }
    }
  }
};

inline std::pair<ProductCell, int> product_cell_involution(const ProductCell& c) {
  int d1 = static_cast<int>(c.a.size()) - 1;
  int d2 = static_cast<int>(c.b.size()) - 1;
  int sign = (d1 * d2) % 2 == 0 ? 1 : -1;
  return {ProductCell{c.b, c.a}, sign};
}

inline bool vertex_disjoint(const VertexList& a, const VertexList& b) {
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return false;
    if (a[i] < b[j])
      ++i;
    else
      ++j;
  }
  return true;
}

// boundary(s1 x s2) = boundary(s1) x s2 + (-1)^{dim s1} s1 x boundary(s2)
inline std::map<ProductCell, Int> product_cell_boundary(const ProductCell& c) {
  std::map<ProductCell, Int> out;
  int d1 = static_cast<int>(c.a.size()) - 1;
  for (const auto& [face, coeff] : simplex_boundary(OrientedSimplex{c.a, 1}))
    out[ProductCell{face, c.b}] += coeff;
  Int s = d1 % 2 == 0 ? 1 : -1;
  for (const auto& [face, coeff] : simplex_boundary(OrientedSimplex{c.b, 1}))
    out[ProductCell{c.a, face}] += s * coeff;
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

// Deleted product: ordered pairs of vertex-disjoint simplices of K, with the
// swap involution. Fundamental domain: first factor lexicographically below
// the second (the factors are never equal, being disjoint).
inline Z2Complex<ProductCell> build_deleted_product(const SimplicialComplex& K) {
  Z2Complex<ProductCell> Z;
  Z.name = "D(" + K.name + ")";
  std::map<int, std::vector<ProductCell>> by_dim;
  for (int d1 = 0; d1 <= K.dim(); ++d1)
    for (int d2 = 0; d2 <= K.dim(); ++d2)
      for (const auto& s1 : K.dim_cells(d1))
        for (const auto& s2 : K.dim_cells(d2))
          if (vertex_disjoint(s1, s2)) by_dim[d1 + d2].push_back(ProductCell{s1, s2});
  if (by_dim.empty()) return Z;

  Z.dim = by_dim.rbegin()->first;
  Z.cells.resize(Z.dim + 1);
  Z.index.resize(Z.dim + 1);
  Z.tau_partner.resize(Z.dim + 1);
  Z.tau_sign.resize(Z.dim + 1);
  Z.in_fd.resize(Z.dim + 1);
  Z.bnd.resize(Z.dim + 1);

  for (int d = 0; d <= Z.dim; ++d) {
    auto& v = by_dim[d];
    std::sort(v.begin(), v.end());
    Z.cells[d] = v;
    for (int i = 0; i < static_cast<int>(v.size()); ++i) Z.index[d].emplace(v[i], i);
  }
  for (int d = 0; d <= Z.dim; ++d) {
    const int n = Z.ncells(d);
    Z.tau_partner[d].resize(n);
    Z.tau_sign[d].resize(n);
    Z.in_fd[d].resize(n);
    for (int i = 0; i < n; ++i) {
      auto [partner, sign] = product_cell_involution(Z.cells[d][i]);
      Z.tau_partner[d][i] = Z.index[d].at(partner);
      Z.tau_sign[d][i] = sign;
      Z.in_fd[d][i] = Z.cells[d][i].a < Z.cells[d][i].b ? 1 : 0;
    }
  }
  for (int d = 1; d <= Z.dim; ++d) {
    SparseIntMatrix m(Z.ncells(d - 1), Z.ncells(d));
    for (int j = 0; j < Z.ncells(d); ++j)
      for (const auto& [face, coeff] : product_cell_boundary(Z.cells[d][j]))
        m.add(Z.index[d - 1].at(face), j, coeff);
    Z.bnd[d] = std::move(m);
  }
  Z.bnd[0] = SparseIntMatrix(0, Z.ncells(0));
  return Z;
}

// Minimal free Z/2 CW structure on the n-sphere: two cells per dimension,
// swapped by the antipode with sign +1 in this basis. Cell 0 of each
// dimension forms the fundamental domain.
inline Z2Complex<int> build_sphere(int n) {
  if (n < 0) throw input_error("sphere dimension must be nonnegative");
  Z2Complex<int> Z;
  Z.name = "S^" + std::to_string(n);
  Z.dim = n;
  Z.cells.assign(n + 1, {0, 1});
  Z.index.assign(n + 1, {{0, 0}, {1, 1}});
  Z.tau_partner.assign(n + 1, {1, 0});
  Z.tau_sign.assign(n + 1, {1, 1});
  Z.in_fd.assign(n + 1, {1, 0});
  Z.bnd.resize(n + 1);
  Z.bnd[0] = SparseIntMatrix(0, 2);
  for (int d = 1; d <= n; ++d) {
    SparseIntMatrix m(2, 2);
    Int s = d % 2 == 0 ? 1 : -1;
    m.add(0, 0, 1);
    m.add(1, 0, s);
    m.add(0, 1, s);
    m.add(1, 1, 1);
    Z.bnd[d] = std::move(m);
  }
  return Z;
}

// Quotient by the free involution. Cells are the fundamental-domain cells,
// oriented by their chosen representatives.
struct QuotientComplex {
  std::string name;
  int dim = -1;
  std::vector<std::vector<int>> src_of;    // per dim: quotient idx -> source idx of rep
  std::vector<std::vector<int>> rep_q;     // per dim: source idx -> quotient idx
  std::vector<std::vector<int>> rep_sign;  // per dim: source idx -> sign of projection
  std::vector<SparseIntMatrix> bnd;

  int ncells(int d) const {
    if (d < 0 || d > dim) return 0;
    return static_cast<int>(src_of[d].size());
  }

  std::vector<int> f_vector() const {
    std::vector<int> f;
    for (int d = 0; d <= dim; ++d) f.push_back(ncells(d));
    return f;
  }

  Vec boundary(int d, const Vec& x) const {
    if (d <= 0 || d > dim) return Vec(ncells(d - 1), 0);
    return bnd[d].apply(x);
  }

  Vec coboundary(int d, const Vec& phi) const {
    if (d + 1 > dim) return Vec(0);
    return bnd[d + 1].apply_transpose(phi);
  }
};

// Projection on chains: the fundamental-domain rep maps to its class with
// sign +1, its partner maps with the involution sign.
template <typename Cell>
QuotientComplex build_quotient(const Z2Complex<Cell>& Z) {
  QuotientComplex Q;
  Q.name = Z.name + "/t";
  Q.dim = Z.dim;
  if (Z.empty()) return Q;
  Q.src_of.resize(Z.dim + 1);
  Q.rep_q.resize(Z.dim + 1);
  Q.rep_sign.resize(Z.dim + 1);
  Q.bnd.resize(Z.dim + 1);
  for (int d = 0; d <= Z.dim; ++d) {
    const int n = Z.ncells(d);
    Q.rep_q[d].assign(n, -1);
    Q.rep_sign[d].assign(n, 0);
    for (int i = 0; i < n; ++i) {
      if (!Z.in_fd[d][i]) continue;
      int q = static_cast<int>(Q.src_of[d].size());
      Q.src_of[d].push_back(i);
      Q.rep_q[d][i] = q;
      Q.rep_sign[d][i] = 1;
      Q.rep_q[d][Z.tau_partner[d][i]] = q;
      Q.rep_sign[d][Z.tau_partner[d][i]] = Z.tau_sign[d][i];
    }
  }
  for (int d = 1; d <= Z.dim; ++d) {
    SparseIntMatrix m(Q.ncells(d - 1), Q.ncells(d));
    for (int q = 0; q < Q.ncells(d); ++q) {
      int i = Q.src_of[d][q];
      for (const auto& [r, v] : Z.bnd[d].column[i])
        m.add(Q.rep_q[d - 1][r], q, Int(Q.rep_sign[d - 1][r]) * v);
    }
    Q.bnd[d] = std::move(m);
  }
  Q.bnd[0] = SparseIntMatrix(0, Q.ncells(0));
  return Q;
}

inline Vec project_chain(const QuotientComplex& Q, int d, const Vec& x) {
  Vec out(Q.ncells(d), 0);
  for (int i = 0; i < static_cast<int>(x.size()); ++i)
    if (x[i] != 0) out[Q.rep_q[d][i]] += Int(Q.rep_sign[d][i]) * x[i];
  return out;
}

// Transfer of chains: class of the rep goes to rep + (involution of rep).
template <typename Cell>
Vec transfer_chain(const Z2Complex<Cell>& Z, const QuotientComplex& Q, int d,
                   const Vec& xq) {
  Vec out(Z.ncells(d), 0);
  for (int q = 0; q < Q.ncells(d); ++q) {
    if (xq[q] == 0) continue;
    int i = Q.src_of[d][q];
    out[i] += xq[q];
    out[Z.tau_partner[d][i]] += Int(Z.tau_sign[d][i]) * xq[q];
  }
  return out;
}

inline Vec pullback_cochain(const QuotientComplex& Q, int d, const Vec& phi_q) {
  Vec out(Q.rep_q[d].size(), 0);
  for (int i = 0; i < static_cast<int>(out.size()); ++i)
    out[i] = Int(Q.rep_sign[d][i]) * phi_q[Q.rep_q[d][i]];
  return out;
}

// Transfer of cochains: evaluate on both members of the orbit.
template <typename Cell>
Vec transfer_cochain(const Z2Complex<Cell>& Z, const QuotientComplex& Q, int d,
                     const Vec& psi) {
  Vec out(Q.ncells(d), 0);
  for (int q = 0; q < Q.ncells(d); ++q) {
    int i = Q.src_of[d][q];
    out[q] = psi[i] + Int(Z.tau_sign[d][i]) * psi[Z.tau_partner[d][i]];
  }
  return out;
}

// Inverse of the cochain pullback; defined only on invariant cochains.
template <typename Cell>
Vec pullback_inverse_cochain(const Z2Complex<Cell>& Z, const QuotientComplex& Q,
                             int d, const Vec& phi) {
  if (phi != Z.tau_map(d, phi))
    throw invariant_error("cochain is not invariant, so it is not a pullback");
  Vec out(Q.ncells(d), 0);
  for (int q = 0; q < Q.ncells(d); ++q) out[q] = phi[Q.src_of[d][q]];
  return out;
}

}  // namespace kampen
