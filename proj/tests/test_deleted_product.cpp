#include <catch2/catch_amalgamated.hpp>

#include "kampen/linalg.hpp"
#include "kampen/simplicial.hpp"
#include "kampen/z2complex.hpp"

using namespace kampen;

namespace {

Vec random_vec(Rng& rng, int n, long long lo = -4, long long hi = 4) {
  Vec x(n);
  for (auto& v : x) v = rng.range(lo, hi);
  return x;
}

}  // namespace

TEST_CASE("cell counts of corpus deleted products") {
  CHECK(build_deleted_product(complete_graph(5)).f_vector() ==
        std::vector<int>{20, 60, 30});
  CHECK(build_deleted_product(complete_graph(4)).f_vector() ==
        std::vector<int>{12, 24, 6});
  CHECK(build_deleted_product(complete_bipartite(3, 3)).f_vector() ==
        std::vector<int>{30, 72, 36});
  CHECK(build_deleted_product(skeleton(2, 6)).f_vector() ==
        std::vector<int>{42, 210, 490, 420, 140});
  CHECK(build_deleted_product(join3(complete_graph(5))).f_vector() ==
        std::vector<int>{56, 300, 630, 540, 180});
  CHECK(build_deleted_product(join3(complete_graph(4))).f_vector() ==
        std::vector<int>{42, 180, 294, 180, 36});
}

TEST_CASE("structural validation across the corpus") {
  for (const auto& K :
       {complete_graph(5), complete_graph(4), complete_bipartite(3, 3), skeleton(2, 6),
        path_graph(4), cycle_graph(5), join3(complete_graph(4))}) {
    auto Z = build_deleted_product(K);
    REQUIRE_NOTHROW(Z.validate());
  }
  for (int n = 1; n <= 4; ++n) REQUIRE_NOTHROW(build_sphere(n).validate());
}

TEST_CASE("involution is free with the product sign rule") {
  auto Z = build_deleted_product(complete_graph(5));
  // tau on an edge x edge cell carries (-1)^{1*1}
  ProductCell c{{0, 1}, {2, 3}};
  int i = Z.index[2].at(c);
  int p = Z.tau_partner[2][i];
  CHECK(Z.cells[2][p].a == VertexList{2, 3});
  CHECK(Z.cells[2][p].b == VertexList{0, 1});
  CHECK(Z.tau_sign[2][i] == -1);
  // vertex x edge: sign +1
  ProductCell ve{{0}, {1, 2}};
  int j = Z.index[1].at(ve);
  CHECK(Z.tau_sign[1][j] == 1);
  for (int d = 0; d <= Z.dim; ++d)
    for (int k = 0; k < Z.ncells(d); ++k) {
      CHECK(Z.tau_partner[d][k] != k);
      CHECK(Z.tau_partner[d][Z.tau_partner[d][k]] == k);
      CHECK(static_cast<int>(Z.in_fd[d][k]) + static_cast<int>(Z.in_fd[d][Z.tau_partner[d][k]]) == 1);
    }
}

TEST_CASE("boundary squares to zero and commutes with tau") {
  Rng rng(4242);
  for (const auto& K : {complete_graph(5), skeleton(2, 6)}) {
    auto Z = build_deleted_product(K);
    for (int d = 2; d <= Z.dim; ++d) {
      Vec x = random_vec(rng, Z.ncells(d));
      Vec dd = Z.boundary(d - 1, Z.boundary(d, x));
      for (const Int& v : dd) REQUIRE(v == 0);
    }
    for (int d = 1; d <= Z.dim; ++d) {
      Vec x = random_vec(rng, Z.ncells(d));
      CHECK(Z.boundary(d, Z.tau_map(d, x)) == Z.tau_map(d - 1, Z.boundary(d, x)));
    }
    for (int d = 0; d <= Z.dim; ++d) {
      Vec x = random_vec(rng, Z.ncells(d));
      CHECK(Z.tau_map(d, Z.tau_map(d, x)) == x);
    }
  }
}

TEST_CASE("quotient halves the cell counts") {
  auto Z = build_deleted_product(skeleton(2, 6));
  auto Q = build_quotient(Z);
  CHECK(Q.f_vector() == std::vector<int>{21, 105, 245, 210, 70});
  auto ZK5 = build_deleted_product(complete_graph(5));
  CHECK(build_quotient(ZK5).f_vector() == std::vector<int>{10, 30, 15});
}

TEST_CASE("projection and transfer identities") {
  Rng rng(777);
  auto Z = build_deleted_product(complete_graph(5));
  auto Q = build_quotient(Z);
  for (int d = 0; d <= Z.dim; ++d) {
    Vec x = random_vec(rng, Z.ncells(d));
    Vec xq = random_vec(rng, Q.ncells(d));

    // pi(tau x) = pi(x)
    CHECK(project_chain(Q, d, Z.tau_map(d, x)) == project_chain(Q, d, x));
    // pi(pibar(xq)) = 2 xq
    Vec pp = project_chain(Q, d, transfer_chain(Z, Q, d, xq));
    for (int q = 0; q < Q.ncells(d); ++q) REQUIRE(pp[q] == 2 * xq[q]);
    // pibar(pi(x)) = (1 + tau) x
    Vec tp = transfer_chain(Z, Q, d, project_chain(Q, d, x));
    Vec want = Z.tau_map(d, x);
    for (int i = 0; i < Z.ncells(d); ++i) REQUIRE(tp[i] == x[i] + want[i]);

    if (d >= 1) {
      // both transfers are chain maps
      CHECK(project_chain(Q, d - 1, Z.boundary(d, x)) ==
            Q.boundary(d, project_chain(Q, d, x)));
      CHECK(transfer_chain(Z, Q, d - 1, Q.boundary(d, xq)) ==
            Z.boundary(d, transfer_chain(Z, Q, d, xq)));
    }
  }
}

TEST_CASE("cochain pullback and transfer identities") {
  Rng rng(778);
  auto Z = build_deleted_product(complete_bipartite(3, 3));
  auto Q = build_quotient(Z);
  for (int d = 0; d <= Z.dim; ++d) {
    Vec psi = random_vec(rng, Z.ncells(d));
    Vec phiq = random_vec(rng, Q.ncells(d));
    Vec x = random_vec(rng, Z.ncells(d));
    Vec xq = random_vec(rng, Q.ncells(d));

    // pullbacks are tau-invariant
    Vec pb = pullback_cochain(Q, d, phiq);
    CHECK(Z.tau_map(d, pb) == pb);
    // adjointness: <pullback(phi), x> = <phi, project(x)>
    Int lhs = 0, rhs = 0;
    for (int i = 0; i < Z.ncells(d); ++i) lhs += pb[i] * x[i];
    Vec px = project_chain(Q, d, x);
    for (int q = 0; q < Q.ncells(d); ++q) rhs += phiq[q] * px[q];
    CHECK(lhs == rhs);
    // adjointness: <transfer(psi), xq> = <psi, transfer(xq)>
    Vec tc = transfer_cochain(Z, Q, d, psi);
    Vec tx = transfer_chain(Z, Q, d, xq);
    lhs = 0;
    rhs = 0;
    for (int q = 0; q < Q.ncells(d); ++q) lhs += tc[q] * xq[q];
    for (int i = 0; i < Z.ncells(d); ++i) rhs += psi[i] * tx[i];
    CHECK(lhs == rhs);
    // round trips
    Vec ptb = transfer_cochain(Z, Q, d, pb);
    for (int q = 0; q < Q.ncells(d); ++q) REQUIRE(ptb[q] == 2 * phiq[q]);
    Vec tpb = pullback_cochain(Q, d, tc);
    Vec tpsi = Z.tau_map(d, psi);
    for (int i = 0; i < Z.ncells(d); ++i) REQUIRE(tpb[i] == psi[i] + tpsi[i]);
    // inverting the pullback
    CHECK(pullback_inverse_cochain(Z, Q, d, pb) == phiq);

    if (d + 1 <= Z.dim) {
      // coboundary naturality on both sides
      CHECK(Z.coboundary(d, pb) == pullback_cochain(Q, d + 1, Q.coboundary(d, phiq)));
      CHECK(transfer_cochain(Z, Q, d + 1, Z.coboundary(d, psi)) ==
            Q.coboundary(d, tc));
    }
  }
  // a generic cochain is not invariant, so the inverse pullback must refuse
  Vec bad(Z.ncells(1), 0);
  bad[0] = 1;
  CHECK_THROWS_AS(pullback_inverse_cochain(Z, Q, 1, bad), invariant_error);
}

TEST_CASE("sphere model and its projective quotient") {
  for (int n = 1; n <= 4; ++n) {
    auto S = build_sphere(n);
    CHECK(S.dim == n);
    for (int d = 0; d <= n; ++d) CHECK(S.ncells(d) == 2);
    // homology of the quotient RP^n in degree 1: Z2 for n >= 2
    if (n >= 2) {
      auto Q = build_quotient(S);
      auto h = homology_with_torsion_lifts(DenseMat::from_sparse(Q.bnd[1]),
                                           DenseMat::from_sparse(Q.bnd[2]));
      CHECK(h.betti == 0);
      REQUIRE(h.torsion.size() == 1);
      CHECK(h.torsion[0].order == 2);
    }
  }
}

TEST_CASE("first homology of quotient deleted products") {
  // H_1(dp(K5)/tau) = Z^6 + Z_2 and H_1(dp(K3_3)/tau) = Z^4 + Z_2
  struct Case {
    SimplicialComplex K;
    int betti;
  };
  for (const auto& [K, betti] :
       {Case{complete_graph(5), 6}, Case{complete_bipartite(3, 3), 4}}) {
    auto Q = build_quotient(build_deleted_product(K));
    auto h = homology_with_torsion_lifts(DenseMat::from_sparse(Q.bnd[1]),
                                         DenseMat::from_sparse(Q.bnd[2]));
    CHECK(h.betti == betti);
    REQUIRE(h.torsion.size() == 1);
    CHECK(h.torsion[0].order == 2);
  }
}

TEST_CASE("degenerate inputs") {
  // a single vertex has no disjoint pairs
  auto P = SimplicialComplex::from_maximal("pt", {{0}});
  CHECK(build_deleted_product(P).empty());
  // a single triangle yields the hexagon
  auto K = SimplicialComplex::from_maximal("tri", {{0, 1, 2}});
  auto Z = build_deleted_product(K);
  CHECK(Z.f_vector() == std::vector<int>{6, 6});
  REQUIRE_NOTHROW(Z.validate());
  // two disjoint edges: deleted product is edge x edge pairs only
  auto E = SimplicialComplex::from_maximal("ee", {{0, 1}, {2, 3}});
  auto ZE = build_deleted_product(E);
  CHECK(ZE.f_vector() == std::vector<int>{12, 8, 2});
  REQUIRE_NOTHROW(ZE.validate());
}
