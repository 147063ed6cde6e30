#pragma once

#include <vector>

#include "kampen/core.hpp"
#include "kampen/linalg.hpp"
#include "kampen/z2complex.hpp"

namespace kampen {

// The two special cochain types: delta-cochains are invariant under the
// involution pullback, s-cochains are anti-invariant.
enum class Rho { Delta, S };

inline const char* rho_name(Rho r) { return r == Rho::Delta ? "delta" : "s"; }

// phi of type rho factors as (1 + sign*tau^#)(psi) with this sign.
inline int rho_sign(Rho r) { return r == Rho::Delta ? 1 : -1; }

inline Rho rho_of_degree(int k) { return k % 2 == 0 ? Rho::Delta : Rho::S; }

// One generator per orbit: e_rep + sign(rho) * eps * e_partner. The same
// vectors serve as a basis on the chain side.
template <typename Cell>
std::vector<Vec> special_cochain_basis(const Z2Complex<Cell>& Z, int d, Rho rho) {
  std::vector<Vec> out;
  const int n = Z.ncells(d);
  for (int i = 0; i < n; ++i) {
    if (!Z.in_fd[d][i]) continue;
    Vec v(n, 0);
    v[i] = 1;
    v[Z.tau_partner[d][i]] = Int(rho_sign(rho) * Z.tau_sign[d][i]);
    out.push_back(std::move(v));
  }
  return out;
}

template <typename Cell>
bool is_special_cochain(const Z2Complex<Cell>& Z, int d, const Vec& phi, Rho rho,
                        bool mod2 = false) {
  Vec t = Z.tau_map(d, phi);
  for (size_t i = 0; i < phi.size(); ++i) {
    Int diff = rho == Rho::Delta ? Int(phi[i] - t[i]) : Int(phi[i] + t[i]);
    if (mod2 ? (diff % 2 != 0) : (diff != 0)) return false;
  }
  return true;
}

// Closed-form solve of (1 + sign*tau^#) psi = phi for phi in
// ker(1 - sign*tau^#): restrict phi to the fundamental domain (or to its
// complement, giving an independent second solution).
template <typename Cell>
Vec solve_special(const Z2Complex<Cell>& Z, int d, int sign, const Vec& phi,
                  bool alt = false) {
  (void)sign;
  const int n = Z.ncells(d);
  Vec psi(n, 0);
  for (int i = 0; i < n; ++i)
    if (static_cast<bool>(Z.in_fd[d][i]) != alt) psi[i] = phi[i];
  return psi;
}

template <typename Cell>
bool check_special_solve(const Z2Complex<Cell>& Z, int d, int sign, const Vec& psi,
                         const Vec& phi, bool mod2 = false) {
  Vec t = Z.tau_map(d, psi);
  for (size_t i = 0; i < phi.size(); ++i) {
    Int lhs = psi[i] + Int(sign) * t[i] - phi[i];
    if (mod2 ? (lhs % 2 != 0) : (lhs != 0)) return false;
  }
  return true;
}

// Is chi the coboundary of a special (d-1)-cochain of type rho?
template <typename Cell>
bool class_vanishes(const Z2Complex<Cell>& Z, int d, const Vec& chi, Rho rho,
                    bool mod2 = false) {
  if (d == 0 || Z.ncells(d) == 0) {
    for (const Int& x : chi)
      if (mod2 ? (x % 2 != 0) : (x != 0)) return false;
    return true;
  }
  auto basis = special_cochain_basis(Z, d - 1, rho);
  DenseMat M(Z.ncells(d), static_cast<int>(basis.size()));
  for (int j = 0; j < static_cast<int>(basis.size()); ++j) {
    Vec col = Z.coboundary(d - 1, basis[j]);
    for (int i = 0; i < M.rows; ++i) M.at(i, j) = col[i];
  }
  if (mod2) {
    BitVec b(chi.size());
    for (size_t i = 0; i < chi.size(); ++i)
      b[i] = static_cast<std::uint8_t>(pos_mod(chi[i], 2));
    return mod2_solve(Gf2Matrix::from_dense(M), b).has_value();
  }
  return image_membership(M, chi);
}

// One Smith special homomorphism: phi is a rho-cocycle of dimension d; the
// result is delta(psi) for a psi with (1 + rho_sign*tau^#) psi = phi, a
// cocycle of the opposite type in dimension d+1.
struct MuStep {
  Vec psi;        // dimension d
  Vec delta_psi;  // dimension d+1, representative of the image class
};

template <typename Cell>
MuStep mu_step(const Z2Complex<Cell>& Z, int d, const Vec& phi, Rho rho,
               bool alt = false, bool mod2 = false) {
  if (!is_special_cochain(Z, d, phi, rho, mod2))
    throw input_error("mu_step: cochain is not in the stated special subgroup");
  if (d + 1 <= Z.dim) {
    Vec dphi = Z.coboundary(d, phi);
    for (const Int& x : dphi)
      if (mod2 ? (x % 2 != 0) : (x != 0))
        throw input_error("mu_step: input is not a cocycle");
  }
  MuStep out;
  out.psi = solve_special(Z, d, rho_sign(rho), phi, alt);
  if (mod2)
    for (Int& x : out.psi) x = pos_mod(x, 2);
  if (!check_special_solve(Z, d, rho_sign(rho), out.psi, phi, mod2))
    throw invariant_error("mu_step: closed-form solve failed");
  out.delta_psi = Z.coboundary(d, out.psi);
  if (mod2)
    for (Int& x : out.delta_psi) x = pos_mod(x, 2);
  return out;
}

// phi_0..phi_N with transfer(phi_0) = 1 and (1+(-1)^i tau^#) phi_i = delta phi_{i-1}.
template <typename Cell>
std::vector<Vec> resolution_of_one(const Z2Complex<Cell>& Z, int N, bool alt = false,
                                   bool mod2 = false) {
  if (N > Z.dim) throw input_error("resolution_of_one: length exceeds dimension");
  std::vector<Vec> phis;
  const int n0 = Z.ncells(0);
  Vec phi0(n0, 0);
  for (int i = 0; i < n0; ++i)
    if (static_cast<bool>(Z.in_fd[0][i]) != alt) phi0[i] = 1;
  Vec ones = Z.tau_map(0, phi0);
  for (int i = 0; i < n0; ++i) ones[i] += phi0[i];
  for (const Int& x : ones)
    if (x != 1) throw invariant_error("resolution: transfer of phi_0 is not 1");
  phis.push_back(std::move(phi0));
  for (int i = 1; i <= N; ++i) {
    Vec dprev = Z.coboundary(i - 1, phis.back());
    if (mod2)
      for (Int& x : dprev) x = pos_mod(x, 2);
    int sign = i % 2 == 0 ? 1 : -1;
    if (!is_special_cochain(Z, i, dprev, rho_of_degree(i), mod2))
      throw invariant_error("resolution: coboundary is not special");
    Vec psi = solve_special(Z, i, sign, dprev, alt);
    if (mod2)
      for (Int& x : psi) x = pos_mod(x, 2);
    if (!check_special_solve(Z, i, sign, psi, dprev, mod2))
      throw invariant_error("resolution: solve failed");
    phis.push_back(std::move(psi));
  }
  return phis;
}

// Special classes A^k = [delta phi_{k-1}] and the index: first k with A^k = 0.
struct SmithReport {
  int max_k = 0;
  bool mod2 = false;
  std::vector<Vec> reps;
  std::vector<char> vanish;
  int index = -1;  // -1: exceeds max_k
  std::vector<Vec> phis;
};

template <typename Cell>
SmithReport smith_classes_and_index(const Z2Complex<Cell>& Z, int max_k = -1,
                                    bool mod2 = false) {
  if (Z.empty()) throw input_error("smith: empty complex (fewer than two vertices?)");
  if (max_k < 0) max_k = Z.dim + 2;
  SmithReport rep;
  rep.max_k = max_k;
  rep.mod2 = mod2;
  rep.phis = resolution_of_one(Z, std::min(max_k, Z.dim), false, mod2);
  for (int k = 0; k <= max_k; ++k) {
    Vec r;
    if (k == 0) {
      r.assign(Z.ncells(0), 1);
    } else if (k - 1 < static_cast<int>(rep.phis.size())) {
      r = Z.coboundary(k - 1, rep.phis[k - 1]);
    } else {
      r.assign(Z.ncells(k), 0);
    }
    if (mod2)
      for (Int& x : r) x = pos_mod(x, 2);
    bool v = class_vanishes(Z, k, r, rho_of_degree(k), mod2);
    rep.reps.push_back(std::move(r));
    rep.vanish.push_back(v ? 1 : 0);
    if (v && rep.index < 0) rep.index = k;
  }
  return rep;
}

// Coboundary matrix of the quotient: rows are d-cells, columns (d-1)-cells.
inline DenseMat coboundary_matrix(const QuotientComplex& Q, int d) {
  DenseMat M(Q.ncells(d), Q.ncells(d - 1));
  if (d <= 0 || d > Q.dim) return M;
  for (int j = 0; j < Q.ncells(d); ++j)
    for (const auto& [i, v] : Q.bnd[d].column[j]) M.at(j, i) = v;
  return M;
}

inline bool quotient_class_vanishes(const QuotientComplex& Q, int d, const Vec& nu,
                                    bool mod2) {
  if (d == 0 || Q.ncells(d) == 0) {
    for (const Int& x : nu)
      if (mod2 ? (x % 2 != 0) : (x != 0)) return false;
    return true;
  }
  DenseMat M = coboundary_matrix(Q, d);
  if (mod2) {
    BitVec b(nu.size());
    for (size_t i = 0; i < nu.size(); ++i)
      b[i] = static_cast<std::uint8_t>(pos_mod(nu[i], 2));
    return mod2_solve(Gf2Matrix::from_dense(M), b).has_value();
  }
  return image_membership(M, nu);
}

// Reduced classes over the quotient: transfer of phi_k, an integer class for
// k even and a mod-2 class for k odd.
struct ReducedReport {
  int max_k = 0;
  std::vector<Vec> reps;  // entries for odd k are already reduced mod 2
  std::vector<char> vanish;
  int index = -1;
};

template <typename Cell>
ReducedReport reduced_classes(const Z2Complex<Cell>& Z, const QuotientComplex& Q,
                              const std::vector<Vec>& phis, int max_k) {
  ReducedReport out;
  out.max_k = max_k;
  for (int k = 0; k <= max_k; ++k) {
    Vec nu;
    bool v;
    if (k < static_cast<int>(phis.size())) {
      nu = transfer_cochain(Z, Q, k, phis[k]);
      if (k % 2 == 1)
        for (Int& x : nu) x = pos_mod(x, 2);
      v = quotient_class_vanishes(Q, k, nu, k % 2 == 1);
    } else {
      nu.assign(Q.ncells(k), 0);
      v = true;
    }
    out.reps.push_back(std::move(nu));
    out.vanish.push_back(v ? 1 : 0);
    if (v && out.index < 0) out.index = k;
  }
  return out;
}

}  // namespace kampen
