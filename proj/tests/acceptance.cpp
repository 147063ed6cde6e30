// Acceptance checks, one verdict line each. Exits nonzero if any fail.
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "kampen/certificates.hpp"
#include "kampen/embedding.hpp"
#include "kampen/json_io.hpp"

using namespace kampen;

namespace {

int failures = 0;

void criterion(int num, const std::string& label, const std::function<bool()>& body) {
  bool ok = false;
  std::string note;
  try {
    ok = body();
  } catch (const std::exception& e) {
    note = std::string(" (") + e.what() + ")";
  }
  std::printf("%s  %d: %s%s\n", ok ? "PASS" : "FAIL", num, label.c_str(), note.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

Int det_int(std::vector<Vec> M) {
  // Bareiss elimination
  const int n = static_cast<int>(M.size());
  Int prev = 1, sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (M[k][k] == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (M[i][k] != 0) {
          p = i;
          break;
        }
      if (p < 0) return 0;
      std::swap(M[k], M[p]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
    prev = M[k][k];
  }
  return sign * M[n - 1][n - 1];
}

// gcd of all k x k minors, the classical invariant-factor oracle
Int minors_gcd(const DenseMat& A, int k) {
  std::vector<int> rows(k), cols(k);
  Int g = 0;
  std::function<void(int, int)> pick_cols = [&](int start, int depth) {
    if (depth == k) {
      std::vector<Vec> sub(k, Vec(k));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub[i][j] = A.at(rows[i], cols[j]);
      Int d = det_int(std::move(sub));
      if (d < 0) d = -d;
      g = g == 0 ? d : gcd(g, d);
      return;
    }
    for (int c = start; c < A.cols; ++c) {
      cols[depth] = c;
      pick_cols(c + 1, depth + 1);
    }
  };
  std::function<void(int, int)> pick_rows = [&](int start, int depth) {
    if (depth == k) {
      pick_cols(0, 0);
      return;
    }
    for (int r = start; r < A.rows; ++r) {
      rows[depth] = r;
      pick_rows(r + 1, depth + 1);
    }
  };
  pick_rows(0, 0);
  return g;
}

bool identity(const DenseMat& M) {
  for (int i = 0; i < M.rows; ++i)
    for (int j = 0; j < M.cols; ++j)
      if (M.at(i, j) != (i == j ? 1 : 0)) return false;
  return M.rows == M.cols;
}

Vec random_vec(Rng& rng, int n, int lo = -4, int hi = 4) {
  Vec x(n);
  for (Int& v : x) v = Int(rng.range(lo, hi));
  return x;
}

bool sphere_indexes() {
  for (int n = 1; n <= 4; ++n) {
    auto S = build_sphere(n);
    SmithReport sr = smith_classes_and_index(S, n + 2);
    for (int k = 0; k <= n + 2; ++k)
      if (static_cast<bool>(sr.vanish[k]) != (k > n)) return false;
    if (sr.index != n + 1) return false;
    auto Q = build_quotient(S);
    ReducedReport red = reduced_classes(S, Q, sr.phis, n + 2);
    for (int k = 0; k <= n + 2; ++k)
      if (static_cast<bool>(red.vanish[k]) != (k > n)) return false;
    if (red.index != n + 1) return false;
    // the projective quotient has one cell per dimension; each surviving
    // reduced class is represented by the single generator
    for (int k = 0; k <= n; ++k) {
      if (red.reps[k].size() != 1) return false;
      Int v = red.reps[k][0];
      if (k % 2 == 1) v = pos_mod(v, 2);
      if (v != 1 && v != -1) return false;
    }
    SmithReport m2 = smith_classes_and_index(S, n + 2, true);
    if (m2.index != n + 1) return false;
  }
  return true;
}

bool graph_completeness() {
  struct Case {
    SimplicialComplex K;
    bool vanishes;
  };
  for (const Case& c : {Case{complete_graph(4), true}, Case{complete_graph(5), false},
                        Case{complete_bipartite(3, 3), false}}) {
    ObstructionReport rep = embedding_class_report(c.K, 2);
    // the report builder cross-checks the two routes and throws on mismatch
    if (rep.vanishes != c.vanishes) return false;
    if (rep.smith_vanishes != c.vanishes) return false;
    if (rep.mod2_vanishes != c.vanishes) return false;
  }
  return true;
}

bool flagship() {
  auto K = skeleton(2, 6);
  ObstructionReport rep = embedding_class_report(K, 4);
  if (rep.vanishes || rep.reduced_vanishes || rep.mod2_vanishes) return false;
  if (!rep.torsion || !rep.mod2_witness) return false;
  auto Z = build_deleted_product(K);
  auto Q = build_quotient(Z);
  if (!ext_certificate_verify(Q, 4, rep.reduced, *rep.torsion)) return false;
  // mod-2 cycle witness pairs to 1
  Int pairing = 0;
  for (size_t i = 0; i < rep.mod2_witness->size(); ++i)
    pairing += (*rep.mod2_witness)[i] * rep.reduced[i];
  if (pos_mod(pairing, 2) != 1) return false;
  // order two: twice the representative bounds
  Vec twice(rep.reduced.size());
  for (size_t i = 0; i < twice.size(); ++i) twice[i] = 2 * rep.reduced[i];
  if (!quotient_class_vanishes(Q, 4, twice, false)) return false;
  // zero on every integer 4-cycle of the quotient
  for (const Vec& z : kernel_basis(DenseMat::from_sparse(Q.bnd[4]))) {
    Int v = 0;
    for (size_t i = 0; i < z.size(); ++i) v += rep.reduced[i] * z[i];
    if (v != 0) return false;
  }
  return true;
}

bool hanani_tutte() {
  auto K5 = complete_graph(5);
  auto Z = build_deleted_product(K5);
  CocycleResult cr = embedding_cocycle_with_retry(K5, Z, 2);
  Int total = fd_edge_crossing_total(Z, cr.theta);
  return pos_mod(total, 2) == 1 && total == 5;
}

bool join_desk_check() {
  for (const auto& K : {complete_graph(5), complete_bipartite(3, 3)}) {
    JoinReport rep = verify_join_theorem(K, 2);
    if (!rep.hypothesis_holds || !rep.certified || !rep.mod2_certified) return false;
    if (!rep.direct_nonzero) return false;
    if (pos_mod(rep.eval, rep.n) == 0) return false;
    for (const TraceStep& s : rep.trace)
      if (!s.ok) return false;
  }
  return true;
}

bool converse_consistency() {
  ObstructionReport r2 = embedding_class_report(complete_graph(4), 2);
  if (!r2.vanishes || !r2.mod2_vanishes) return false;
  ObstructionReport r4 = embedding_class_report(join3(complete_graph(4)), 4);
  return r4.vanishes && r4.mod2_vanishes;
}

bool property_suites() {
  Rng rng(2026);
  // boundary, involution, and naturality identities on corpus complexes
  for (const auto& K : {complete_graph(5), complete_bipartite(3, 3), skeleton(2, 6)}) {
    auto Z = build_deleted_product(K);
    for (int d = 0; d <= Z.dim; ++d) {
      Vec x = random_vec(rng, Z.ncells(d));
      if (d >= 2) {
        Vec bb = Z.boundary(d - 1, Z.boundary(d, x));
        for (const Int& v : bb)
          if (v != 0) return false;
      }
      if (d >= 1) {
        Vec a = Z.tau_map(d - 1, Z.boundary(d, x));
        Vec b = Z.boundary(d, Z.tau_map(d, x));
        if (a != b) return false;
      }
      if (Z.tau_map(d, Z.tau_map(d, x)) != x) return false;
    }
  }

  // exactness of the four (1 +- tau) sequences on the deleted product of K5
  {
    auto Z = build_deleted_product(complete_graph(5));
    for (int d = 0; d <= Z.dim; ++d) {
      const int n = Z.ncells(d);
      auto one_plus = [&](int sign) {
        DenseMat P(n, n);
        for (int j = 0; j < n; ++j) {
          Vec e(n, 0);
          e[j] = 1;
          Vec t = Z.tau_map(d, e);
          for (int i = 0; i < n; ++i) P.at(i, j) = (i == j ? 1 : 0) + Int(sign) * t[i];
        }
        return P;
      };
      for (int sign : {1, -1}) {
        DenseMat P = one_plus(sign);
        DenseMat O = one_plus(-sign);
        // exactness: image(1 - s*tau) = kernel(1 + s*tau), both of rank n/2
        SnfResult s = smith_normal_form(P);
        if (s.rank != n / 2) return false;
        auto ker = kernel_basis(P, &s);
        if (static_cast<int>(ker.size()) != n / 2) return false;
        for (const Vec& k : ker)
          if (!image_membership(O, k)) return false;
        // cochain side: restriction to a fundamental domain solves exactly
        Rho rho = sign == 1 ? Rho::Delta : Rho::S;
        Vec y = random_vec(rng, n);
        Vec ty = Z.tau_map(d, y);
        Vec phi(n);
        for (int i = 0; i < n; ++i) phi[i] = y[i] + Int(sign) * ty[i];
        if (!is_special_cochain(Z, d, phi, rho)) return false;
        Vec psi = solve_special(Z, d, sign, phi, false);
        if (!check_special_solve(Z, d, sign, psi, phi)) return false;
      }
    }
  }

  // the four projection/transfer identities
  {
    auto Z = build_deleted_product(complete_bipartite(3, 3));
    auto Q = build_quotient(Z);
    for (int d = 0; d <= Z.dim; ++d) {
      Vec x = random_vec(rng, Z.ncells(d));
      if (project_chain(Q, d, Z.tau_map(d, x)) != project_chain(Q, d, x)) return false;
      Vec pp = transfer_chain(Z, Q, d, project_chain(Q, d, x));
      Vec tx = Z.tau_map(d, x);
      for (int i = 0; i < Z.ncells(d); ++i)
        if (pp[i] != x[i] + tx[i]) return false;
      Vec q = random_vec(rng, Q.ncells(d));
      Vec pq = project_chain(Q, d, transfer_chain(Z, Q, d, q));
      for (int i = 0; i < Q.ncells(d); ++i)
        if (pq[i] != 2 * q[i]) return false;
      Vec phi = random_vec(rng, Q.ncells(d));
      Vec tp = transfer_cochain(Z, Q, d, pullback_cochain(Q, d, phi));
      for (int i = 0; i < Q.ncells(d); ++i)
        if (tp[i] != 2 * phi[i]) return false;
      Vec psi = random_vec(rng, Z.ncells(d));
      Vec pt = pullback_cochain(Q, d, transfer_cochain(Z, Q, d, psi));
      Vec tpsi = Z.tau_map(d, psi);
      for (int i = 0; i < Z.ncells(d); ++i)
        if (pt[i] != psi[i] + tpsi[i]) return false;
    }
  }

  // cone and prism boundary laws on at least 200 cells
  {
    auto Z = build_deleted_product(skeleton(2, 6));
    const int v = 100, w = 101;
    int tested = 0;
    for (int d = 2; d <= Z.dim && tested < 260; ++d) {
      for (int i = 0; i < Z.ncells(d) && tested < 260; ++i) {
        const ProductCell& c = Z.cells[d][i];
        if (c.a.size() < 2 || c.b.size() < 2) continue;
        ++tested;
        PChain x;
        x.emplace(c, Int(1 + static_cast<int>(rng.below(3))));
        PChain lhs = pchain_boundary(cone_chain(v, x));
        PChain rhs =
            pchain_add(x, pchain_scale(Int(-1), cone_chain(v, pchain_boundary(x))));
        if (lhs != rhs) return false;
        PChain plhs = pchain_boundary(prism_chain(v, w, x));
        PChain prhs = pchain_tau(cone_chain(w, pchain_tau(x)));
        prhs = pchain_add(prhs, pchain_scale(Int(-1), cone_chain(v, x)));
        prhs = pchain_add(prhs, prism_chain(v, w, pchain_boundary(x)));
        if (plhs != prhs) return false;
      }
    }
    if (tested < 200) return false;
  }

  // resolution independence of the reduced classes
  {
    auto Z = build_deleted_product(complete_graph(5));
    auto Q = build_quotient(Z);
    auto phis1 = resolution_of_one(Z, Z.dim, false);
    auto phis2 = resolution_of_one(Z, Z.dim, true);
    ReducedReport r1 = reduced_classes(Z, Q, phis1, Z.dim);
    ReducedReport r2 = reduced_classes(Z, Q, phis2, Z.dim);
    for (int k = 0; k <= Z.dim; ++k) {
      if (r1.vanish[k] != r2.vanish[k]) return false;
      Vec diff(r1.reps[k].size());
      for (size_t i = 0; i < diff.size(); ++i) diff[i] = r1.reps[k][i] - r2.reps[k][i];
      if (!quotient_class_vanishes(Q, k, diff, k % 2 == 1)) return false;
    }
  }

  // map independence of the embedding class: a permuted parameter order
  // changes the cochain but not its class
  {
    auto K5 = complete_graph(5);
    auto Z = build_deleted_product(K5);
    CocycleResult a = embedding_cocycle_with_retry(K5, Z, 2);
    CocycleResult b = embedding_cocycle_with_retry(K5, Z, 2, {1, 4, 2, 5, 3});
    Vec diff(a.theta.size());
    bool differ = false;
    for (size_t i = 0; i < diff.size(); ++i) {
      diff[i] = a.theta[i] - b.theta[i];
      differ = differ || diff[i] != 0;
    }
    if (!differ) return false;
    if (!class_vanishes(Z, 2, diff, Rho::Delta)) return false;
  }

  // restriction-of-resolution lemma for the join
  {
    JoinContext ctx = build_join_context(complete_graph(4));
    auto psis = resolution_of_one(ctx.ZL, 2);
    Vec r0 = restrict_cochain(ctx.ZL, ctx.ZK, 0, psis[0]);
    Vec one = transfer_cochain(ctx.ZK, ctx.QK, 0, r0);
    for (const Int& x : one)
      if (x != 1) return false;
    for (int i = 1; i <= 2; ++i) {
      Vec ri = restrict_cochain(ctx.ZL, ctx.ZK, i, psis[i]);
      Vec rprev = restrict_cochain(ctx.ZL, ctx.ZK, i - 1, psis[i - 1]);
      Vec dprev = ctx.ZK.coboundary(i - 1, rprev);
      if (!check_special_solve(ctx.ZK, i, i % 2 == 0 ? 1 : -1, ri, dprev)) return false;
    }
  }
  return true;
}

bool linear_algebra_oracle() {
  Rng rng(424242);
  for (int trial = 0; trial < 500; ++trial) {
    int r = 1 + static_cast<int>(rng.below(20));
    int c = 1 + static_cast<int>(rng.below(20));
    DenseMat A(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) A.at(i, j) = Int(rng.range(-9, 9));
    SnfResult s = smith_normal_form(A);
    DenseMat UAV = s.U.mul(A).mul(s.V);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) {
        Int want = (i == j && i < static_cast<int>(s.diag.size())) ? s.diag[i] : Int(0);
        if (UAV.at(i, j) != want) return false;
      }
    if (!identity(s.U.mul(s.Uinv)) || !identity(s.Uinv.mul(s.U))) return false;
    if (!identity(s.V.mul(s.Vinv)) || !identity(s.Vinv.mul(s.V))) return false;
    for (size_t i = 0; i + 1 < s.diag.size(); ++i) {
      if (s.diag[i] < 0) return false;
      if (s.diag[i] != 0 && s.diag[i + 1] % s.diag[i] != 0) return false;
    }
  }
  // invariant factors against the gcd-of-minors oracle on small matrices
  for (int trial = 0; trial < 60; ++trial) {
    int r = 1 + static_cast<int>(rng.below(8));
    int c = 1 + static_cast<int>(rng.below(8));
    DenseMat A(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) A.at(i, j) = Int(rng.range(-4, 4));
    SnfResult s = smith_normal_form(A);
    Int prod = 1;
    for (int k = 1; k <= std::min(r, c); ++k) {
      Int g = minors_gcd(A, k);
      if (k <= s.rank) {
        prod *= s.diag[k - 1];
        if (g != prod) return false;
      } else if (g != 0) {
        return false;
      }
    }
  }
  return true;
}

bool certificate_soundness() {
  // projective plane model: the certificate is the single 2-cell with n = 2
  auto S2 = build_sphere(2);
  auto Q2 = build_quotient(S2);
  SmithReport sr = smith_classes_and_index(S2, 2);
  ReducedReport red = reduced_classes(S2, Q2, sr.phis, 2);
  TorsionCertificate rp = ext_certificate_search(Q2, 2, red.reps[2]);
  if (rp.n != 2) return false;
  if (rp.c.size() != 1 || (rp.c[0] != 1 && rp.c[0] != -1)) return false;
  if (!ext_certificate_verify(Q2, 2, red.reps[2], rp)) return false;
  if (quotient_class_vanishes(Q2, 2, red.reps[2], false)) return false;

  // every certificate produced across the graph corpus verifies
  for (const auto& K : {complete_graph(5), complete_bipartite(3, 3)}) {
    ObstructionReport rep = embedding_class_report(K, 2);
    if (!rep.torsion) return false;
    auto Q = build_quotient(build_deleted_product(K));
    if (!ext_certificate_verify(Q, 2, rep.reduced, *rep.torsion)) return false;
    if (quotient_class_vanishes(Q, 2, rep.reduced, false)) return false;
  }

  // the flagship certificate
  auto K = skeleton(2, 6);
  ObstructionReport rep = embedding_class_report(K, 4);
  if (!rep.torsion) return false;
  auto Q = build_quotient(build_deleted_product(K));
  if (!ext_certificate_verify(Q, 4, rep.reduced, *rep.torsion)) return false;

  // tampering is rejected
  TorsionCertificate bad = *rep.torsion;
  for (Int& x : bad.c) x = 0;
  if (ext_certificate_verify(Q, 4, rep.reduced, bad)) return false;
  return true;
}

}  // namespace

int main() {
  criterion(1, "sphere and projective space index", sphere_indexes);
  criterion(2, "graph planarity obstruction completeness", graph_completeness);
  criterion(3, "flagship obstruction of the 2-skeleton of the 6-simplex", flagship);
  criterion(4, "crossing parity of the straight-line K5 drawing", hanani_tutte);
  criterion(5, "join theorem desk check for K5 and K33", join_desk_check);
  criterion(6, "converse consistency for K4 and its join", converse_consistency);
  criterion(7, "structural property suites", property_suites);
  criterion(8, "integer linear algebra oracle", linear_algebra_oracle);
  criterion(9, "certificate soundness", certificate_soundness);
  if (failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", failures);
  return 1;
}
