#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kampen/certificates.hpp"
#include "kampen/core.hpp"
#include "kampen/simplicial.hpp"
#include "kampen/smith.hpp"
#include "kampen/z2complex.hpp"

namespace kampen {

// General position failed for a concrete pair of simplices; carries the pair
// in the message. Input-level condition: a different parameter vector fixes it.
struct degeneracy_error : input_error {
  using input_error::input_error;
};

using RatRow = std::vector<Rat>;
using RatMat = std::vector<RatRow>;

inline Rat rat_det(RatMat M) {
  const int n = static_cast<int>(M.size());
  Rat det = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int i = col; i < n; ++i)
      if (M[i][col] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) return Rat(0);
    if (piv != col) {
      std::swap(M[col], M[piv]);
      det = -det;
    }
    det *= M[col][col];
    Rat inv = Rat(1) / M[col][col];
    for (int i = col + 1; i < n; ++i) {
      if (M[i][col] == 0) continue;
      Rat f = M[i][col] * inv;
      for (int j = col; j < n; ++j) M[i][j] -= f * M[col][j];
    }
  }
  return det;
}

inline int rat_rank(RatMat M) {
  if (M.empty()) return 0;
  const int r = static_cast<int>(M.size());
  const int c = static_cast<int>(M[0].size());
  int rank = 0;
  for (int col = 0; col < c && rank < r; ++col) {
    int piv = -1;
    for (int i = rank; i < r; ++i)
      if (M[i][col] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(M[rank], M[piv]);
    Rat inv = Rat(1) / M[rank][col];
    for (int i = 0; i < r; ++i) {
      if (i == rank || M[i][col] == 0) continue;
      Rat f = M[i][col] * inv;
      for (int j = col; j < c; ++j) M[i][j] -= f * M[rank][j];
    }
    ++rank;
  }
  return rank;
}

// Kernel vector of an r x c matrix whose kernel is one-dimensional;
// nullopt when the kernel dimension differs from 1.
inline std::optional<RatRow> rat_kernel_1d(RatMat A) {
  const int r = static_cast<int>(A.size());
  const int c = static_cast<int>(A[0].size());
  std::vector<int> piv_cols;
  int row = 0;
  for (int col = 0; col < c && row < r; ++col) {
    int sel = -1;
    for (int i = row; i < r; ++i)
      if (A[i][col] != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(A[row], A[sel]);
    Rat inv = Rat(1) / A[row][col];
    for (int j = col; j < c; ++j) A[row][j] *= inv;
    for (int i = 0; i < r; ++i) {
      if (i == row || A[i][col] == 0) continue;
      Rat f = A[i][col];
      for (int j = col; j < c; ++j) A[i][j] -= f * A[row][j];
    }
    piv_cols.push_back(col);
    ++row;
  }
  if (c - static_cast<int>(piv_cols.size()) != 1) return std::nullopt;
  int free_col = 0;
  for (int col = 0; col < c; ++col) {
    if (std::find(piv_cols.begin(), piv_cols.end(), col) == piv_cols.end()) {
      free_col = col;
      break;
    }
  }
  RatRow v(c, Rat(0));
  v[free_col] = 1;
  for (size_t k = 0; k < piv_cols.size(); ++k) v[piv_cols[k]] = -A[k][free_col];
  return v;
}

// Simplexwise-linear map into R^m with vertices on the moment curve
// t -> (t, t^2, ..., t^m).
struct EmbeddingMap {
  int m = 0;
  std::vector<int> vertices;  // ascending
  std::map<int, Int> param;

  RatRow point(int v) const {
    const Int& t = param.at(v);
    RatRow p(m);
    Rat acc = 1;
    for (int k = 0; k < m; ++k) {
      acc *= Rat(t);
      p[k] = acc;
    }
    return p;
  }
};

inline std::string format_pair(const VertexList& a, const VertexList& b) {
  std::ostringstream os;
  auto put = [&](const VertexList& s) {
    os << "(";
    for (size_t i = 0; i < s.size(); ++i) os << (i ? " " : "") << s[i];
    os << ")";
  };
  put(a);
  os << "x";
  put(b);
  return os.str();
}

inline EmbeddingMap moment_curve_map(const SimplicialComplex& K, int m,
                                     const std::vector<Int>& params = {}) {
  if (m < 1) throw input_error("moment curve: target dimension must be positive");
  EmbeddingMap f;
  f.m = m;
  f.vertices = K.vertices;
  if (!params.empty() && params.size() != K.vertices.size())
    throw input_error("moment curve: parameter count does not match vertex count");
  for (size_t i = 0; i < K.vertices.size(); ++i)
    f.param[K.vertices[i]] = params.empty() ? Int(i + 1) : params[i];
  std::set<Int> uniq;
  for (const auto& [v, t] : f.param)
    if (!uniq.insert(t).second)
      throw input_error("moment curve: duplicate parameter values");

  // Spot-check affine independence on windows of min(m+1, #vertices) points.
  const int r = std::min<int>(m + 1, static_cast<int>(f.vertices.size()));
  if (r >= 2) {
    for (size_t start = 0; start + r <= f.vertices.size(); ++start) {
      RatMat M;
      RatRow p0 = f.point(f.vertices[start]);
      for (int i = 1; i < r; ++i) {
        RatRow pi = f.point(f.vertices[start + i]);
        for (int j = 0; j < m; ++j) pi[j] -= p0[j];
        M.push_back(std::move(pi));
      }
      if (rat_rank(M) != r - 1)
        throw invariant_error("moment curve: sampled points are affinely dependent");
    }
  }
  return f;
}

// Signed intersection number of the images of two disjoint simplices with
// complementary dimensions; 0 or +-1 for moment-curve maps. The sign is the
// orientation of the m edge vectors of the first simplex followed by the
// second, against the standard orientation of R^m.
inline int simplex_pair_intersection(const EmbeddingMap& f, const VertexList& s1,
                                     const VertexList& s2) {
  const int l = static_cast<int>(s1.size()) - 1;
  const int k = static_cast<int>(s2.size()) - 1;
  const int m = f.m;
  if (l + k != m) throw input_error("intersection: dimensions are not complementary");
  std::vector<RatRow> pts1, pts2;
  for (int v : s1) pts1.push_back(f.point(v));
  for (int v : s2) pts2.push_back(f.point(v));

  // Affine intersection: one kernel vector of the (m+1) x (m+2) matrix whose
  // columns are the points with an appended row of ones.
  RatMat M(m + 1, RatRow(m + 2, Rat(0)));
  for (int j = 0; j < l + 1; ++j) {
    for (int i = 0; i < m; ++i) M[i][j] = pts1[j][i];
    M[m][j] = 1;
  }
  for (int j = 0; j < k + 1; ++j) {
    for (int i = 0; i < m; ++i) M[i][l + 1 + j] = pts2[j][i];
    M[m][l + 1 + j] = 1;
  }
  auto g = rat_kernel_1d(M);
  if (!g)
    throw degeneracy_error("affinely degenerate pair " + format_pair(s1, s2));
  Rat s = 0;
  for (int j = 0; j < l + 1; ++j) s += (*g)[j];
  if (s == 0) return 0;  // parallel affine hulls never meet
  std::vector<Rat> lam(l + 1), mu(k + 1);
  for (int j = 0; j < l + 1; ++j) lam[j] = (*g)[j] / s;
  for (int j = 0; j < k + 1; ++j) mu[j] = -(*g)[l + 1 + j] / s;
  bool neg = false, zero = false;
  for (const Rat& x : lam) {
    if (x < 0) neg = true;
    if (x == 0) zero = true;
  }
  for (const Rat& x : mu) {
    if (x < 0) neg = true;
    if (x == 0) zero = true;
  }
  if (neg) return 0;
  if (zero)
    throw degeneracy_error("boundary contact for pair " + format_pair(s1, s2));

  RatMat rows;
  for (int i = 1; i <= l; ++i) {
    RatRow r(m);
    for (int j = 0; j < m; ++j) r[j] = pts1[i][j] - pts1[0][j];
    rows.push_back(std::move(r));
  }
  for (int i = 1; i <= k; ++i) {
    RatRow r(m);
    for (int j = 0; j < m; ++j) r[j] = pts2[i][j] - pts2[0][j];
    rows.push_back(std::move(r));
  }
  Rat d = rat_det(std::move(rows));
  if (d == 0)
    throw degeneracy_error("degenerate crossing frame for pair " + format_pair(s1, s2));
  return d > 0 ? 1 : -1;
}

// theta^m_f(s1 x s2) = (-1)^{dim s1} * intersection(f(s1), f(s2)) on the
// m-cells of the deleted product.
inline Vec embedding_cocycle(const Z2Complex<ProductCell>& Z, const EmbeddingMap& f) {
  const int m = f.m;
  Vec theta(Z.ncells(m), 0);
  for (int i = 0; i < Z.ncells(m); ++i) {
    const ProductCell& cell = Z.cells[m][i];
    int l = static_cast<int>(cell.a.size()) - 1;
    int val = simplex_pair_intersection(f, cell.a, cell.b);
    theta[i] = Int(l % 2 == 0 ? val : -val);
  }
  return theta;
}

// tau^# theta = (-1)^m theta and delta theta = 0; both are theorems for
// general-position maps, so failure is an internal error.
inline void check_cocycle_equivariance(const Z2Complex<ProductCell>& Z, int m,
                                       const Vec& theta) {
  Vec t = Z.tau_map(m, theta);
  Int sg = m % 2 == 0 ? 1 : -1;
  for (int i = 0; i < Z.ncells(m); ++i)
    if (t[i] != sg * theta[i])
      throw invariant_error("embedding cocycle is not equivariant");
  if (m + 1 <= Z.dim) {
    Vec d = Z.coboundary(m, theta);
    for (const Int& x : d)
      if (x != 0) throw invariant_error("embedding cochain is not a cocycle");
  }
}

struct CocycleResult {
  Vec theta;
  EmbeddingMap map;
  Int scale = 1;
};

// Retry policy for degeneracies: multiply all parameters by the next prime.
inline CocycleResult embedding_cocycle_with_retry(const SimplicialComplex& K,
                                                  const Z2Complex<ProductCell>& Z,
                                                  int m,
                                                  const std::vector<Int>& params = {}) {
  static const int primes[] = {1, 2, 3, 5, 7, 11};
  std::vector<Int> base = params;
  if (base.empty())
    for (size_t i = 0; i < K.vertices.size(); ++i) base.push_back(Int(i + 1));
  Int mult = 1;
  std::string last;
  for (int p : primes) {
    mult *= p;
    std::vector<Int> scaled;
    for (const Int& t : base) scaled.push_back(t * mult);
    try {
      EmbeddingMap f = moment_curve_map(K, m, scaled);
      CocycleResult out{embedding_cocycle(Z, f), std::move(f), mult};
      check_cocycle_equivariance(Z, m, out.theta);
      return out;
    } catch (const degeneracy_error& e) {
      last = e.what();
    }
  }
  throw degeneracy_error(last + " (after all retry scales)");
}

// Sum of |theta| over fundamental-domain edge-x-edge cells: for a graph drawn
// in the plane this is the number of crossings between independent edge pairs.
inline Int fd_edge_crossing_total(const Z2Complex<ProductCell>& Z, const Vec& theta) {
  Int tot = 0;
  for (int i = 0; i < Z.ncells(2); ++i) {
    if (!Z.in_fd[2][i]) continue;
    const ProductCell& cell = Z.cells[2][i];
    if (cell.a.size() == 2 && cell.b.size() == 2) tot += abs(theta[i]);
  }
  return tot;
}

struct ObstructionReport {
  std::string name;
  int m = 0;
  bool trivial_general_position = false;  // m > 2*dim(K): no obstruction
  std::vector<Int> params;                // parameters actually used
  std::vector<int> f_dp;                  // deleted-product cell counts
  Vec theta;                              // representative on the deleted product
  bool vanishes = true;                   // integer class in the special complex
  bool smith_vanishes = true;             // independent Smith route (must agree)
  Vec reduced;                            // quotient representative (mod 2 for odd m)
  bool reduced_vanishes = true;
  bool mod2_vanishes = true;
  std::optional<TorsionCertificate> torsion;
  std::optional<Vec> mod2_witness;        // quotient cycle pairing to 1
};

inline ObstructionReport embedding_class_report(const SimplicialComplex& K, int m,
                                                const std::vector<Int>& params = {}) {
  if (m < 1) throw input_error("obstruction report: m must be positive");
  ObstructionReport rep;
  rep.name = K.name;
  rep.m = m;
  if (m > 2 * K.dim()) {
    // A map to general position removes all intersections of complementary cells.
    rep.trivial_general_position = true;
    return rep;
  }
  Z2Complex<ProductCell> Z = build_deleted_product(K);
  if (Z.empty()) throw input_error("obstruction report: deleted product is empty");
  rep.f_dp = Z.f_vector();
  if (m > Z.dim) {
    rep.vanishes = true;
    return rep;
  }
  CocycleResult cr = embedding_cocycle_with_retry(K, Z, m, params);
  rep.theta = cr.theta;
  for (int v : K.vertices) rep.params.push_back(cr.map.param.at(v));

  Rho rho = rho_of_degree(m);
  rep.vanishes = class_vanishes(Z, m, rep.theta, rho);
  SmithReport smith = smith_classes_and_index(Z, m);
  rep.smith_vanishes = smith.vanish[m];
  if (rep.smith_vanishes != rep.vanishes)
    throw invariant_error("embedding route and Smith route disagree");

  QuotientComplex Q = build_quotient(Z);
  if (m % 2 == 0) {
    rep.reduced = pullback_inverse_cochain(Z, Q, m, rep.theta);
    rep.reduced_vanishes = quotient_class_vanishes(Q, m, rep.reduced, false);
    Vec r2(rep.reduced.size());
    for (size_t i = 0; i < r2.size(); ++i) r2[i] = pos_mod(rep.reduced[i], 2);
    rep.mod2_vanishes = quotient_class_vanishes(Q, m, r2, true);
    if (!rep.mod2_vanishes) {
      rep.mod2_witness = mod2_cycle_certificate(Q, m, r2);
      if (!rep.mod2_witness)
        throw invariant_error("nonzero mod-2 class has no cycle witness");
    }
    if (!rep.vanishes) rep.torsion = ext_certificate_search(Q, m, rep.reduced);
  } else {
    // Odd m: theta is anti-invariant, so its mod-2 reduction is invariant and
    // descends to the quotient.
    Vec t = Z.tau_map(m, rep.theta);
    for (int i = 0; i < Z.ncells(m); ++i)
      if (pos_mod(rep.theta[i] - t[i], 2) != 0)
        throw invariant_error("odd-m cochain is not invariant mod 2");
    rep.reduced.assign(Q.ncells(m), 0);
    for (int q = 0; q < Q.ncells(m); ++q)
      rep.reduced[q] = pos_mod(rep.theta[Q.src_of[m][q]], 2);
    rep.reduced_vanishes = quotient_class_vanishes(Q, m, rep.reduced, true);
    rep.mod2_vanishes = rep.reduced_vanishes;
    if (!rep.mod2_vanishes) {
      rep.mod2_witness = mod2_cycle_certificate(Q, m, rep.reduced);
      if (!rep.mod2_witness)
        throw invariant_error("nonzero mod-2 class has no cycle witness");
    }
  }
  return rep;
}

}  // namespace kampen
