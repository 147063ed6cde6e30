#include <catch2/catch_amalgamated.hpp>

#include "kampen/linalg.hpp"

using namespace kampen;

namespace {

DenseMat random_matrix(Rng& rng, int max_side, long long lo, long long hi) {
  int r = 1 + static_cast<int>(rng.below(max_side));
  int c = 1 + static_cast<int>(rng.below(max_side));
  DenseMat M(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) M.at(i, j) = rng.range(lo, hi);
  return M;
}

// determinant by fraction-free Gaussian elimination (Bareiss)
Int det_int(DenseMat M) {
  const int n = M.rows;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (M.at(k, k) == 0) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (M.at(i, k) != 0) {
          piv = i;
          break;
        }
      if (piv < 0) return Int(0);
      for (int j = 0; j < n; ++j) std::swap(M.at(k, j), M.at(piv, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        M.at(i, j) = (M.at(i, j) * M.at(k, k) - M.at(i, k) * M.at(k, j)) / prev;
    prev = M.at(k, k);
  }
  return Int(sign) * M.at(n - 1, n - 1);
}

// gcd of all k x k minors; the SNF diagonal must satisfy d_1*...*d_k = g_k
Int minors_gcd(const DenseMat& M, int k) {
  Int g = 0;
  std::vector<int> ri(k), ci(k);
  for (int i = 0; i < k; ++i) ri[i] = i;
  while (true) {
    for (int i = 0; i < k; ++i) ci[i] = i;
    while (true) {
      DenseMat sub(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub.at(i, j) = M.at(ri[i], ci[j]);
      g = boost::multiprecision::gcd(g, det_int(sub));
      int p = k - 1;
      while (p >= 0 && ci[p] == M.cols - k + p) --p;
      if (p < 0) break;
      ++ci[p];
      for (int q = p + 1; q < k; ++q) ci[q] = ci[q - 1] + 1;
    }
    int p = k - 1;
    while (p >= 0 && ri[p] == M.rows - k + p) --p;
    if (p < 0) break;
    ++ri[p];
    for (int q = p + 1; q < k; ++q) ri[q] = ri[q - 1] + 1;
  }
  return g < 0 ? Int(-g) : g;
}

}  // namespace

TEST_CASE("smith normal form fixed examples") {
  DenseMat M(2, 2);
  M.at(0, 0) = 2;
  M.at(1, 1) = 3;
  auto s = smith_normal_form(M);
  REQUIRE(s.rank == 2);
  CHECK(s.diag[0] == 1);
  CHECK(s.diag[1] == 6);

  DenseMat Z(3, 2);
  auto sz = smith_normal_form(Z);
  CHECK(sz.rank == 0);
  CHECK(sz.diag == std::vector<Int>{0, 0});
}

TEST_CASE("smith normal form random suite") {
  Rng rng(20240816);
  for (int trial = 0; trial < 500; ++trial) {
    DenseMat M = random_matrix(rng, 20, -9, 9);
    SnfResult s = smith_normal_form(M);

    DenseMat D = s.U.mul(M).mul(s.V);
    for (int i = 0; i < M.rows; ++i)
      for (int j = 0; j < M.cols; ++j) {
        Int want = (i == j && i < static_cast<int>(s.diag.size())) ? s.diag[i] : Int(0);
        REQUIRE(D.at(i, j) == want);
      }

    // unimodularity via the tracked inverses
    REQUIRE(s.U.mul(s.Uinv).is_identity());
    REQUIRE(s.Uinv.mul(s.U).is_identity());
    REQUIRE(s.V.mul(s.Vinv).is_identity());
    REQUIRE(s.Vinv.mul(s.V).is_identity());

    for (int i = 0; i < static_cast<int>(s.diag.size()); ++i) {
      REQUIRE(s.diag[i] >= 0);
      REQUIRE((i < s.rank) == (s.diag[i] != 0));
      if (i + 1 < s.rank) REQUIRE(s.diag[i + 1] % s.diag[i] == 0);
    }
  }
}

TEST_CASE("smith diagonal matches the minors oracle") {
  Rng rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    DenseMat M = random_matrix(rng, 8, -4, 4);
    SnfResult s = smith_normal_form(M);
    Int prod = 1;
    for (int k = 1; k <= std::min(M.rows, M.cols); ++k) {
      Int g = minors_gcd(M, k);
      if (k <= s.rank) {
        prod *= s.diag[k - 1];
        REQUIRE(g == prod);
      } else {
        REQUIRE(g == 0);
      }
    }
  }
}

TEST_CASE("integer solve and image membership") {
  DenseMat M(2, 2);
  M.at(0, 0) = 2;
  M.at(1, 1) = 3;
  CHECK(solve_integer(M, Vec{2, 3}).has_value());
  CHECK(!solve_integer(M, Vec{1, 0}).has_value());
  CHECK(image_membership(M, Vec{4, -9}));
  CHECK(!image_membership(M, Vec{4, -8}));

  auto x = solve_integer(M, Vec{-6, 12});
  REQUIRE(x);
  Vec mx = M.apply(*x);
  CHECK(mx == Vec{-6, 12});

  Rng rng(5150);
  for (int trial = 0; trial < 100; ++trial) {
    DenseMat A = random_matrix(rng, 10, -6, 6);
    Vec y(A.cols);
    for (auto& v : y) v = rng.range(-5, 5);
    Vec b = A.apply(y);
    auto sol = solve_integer(A, b);
    REQUIRE(sol);
    REQUIRE(A.apply(*sol) == b);
  }
}

TEST_CASE("kernel basis spans the kernel") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    DenseMat A = random_matrix(rng, 10, -5, 5);
    auto ker = kernel_basis(A);
    SnfResult s = smith_normal_form(A);
    REQUIRE(static_cast<int>(ker.size()) == A.cols - s.rank);
    for (const Vec& k : ker) {
      Vec out = A.apply(k);
      for (const Int& v : out) REQUIRE(v == 0);
    }
    // the kernel columns extend to a basis, so they are primitive and independent
    if (!ker.empty()) {
      DenseMat K(A.cols, static_cast<int>(ker.size()));
      for (int j = 0; j < K.cols; ++j)
        for (int i = 0; i < K.rows; ++i) K.at(i, j) = ker[j][i];
      REQUIRE(smith_normal_form(K).rank == K.cols);
    }
  }
}

TEST_CASE("homology with torsion lifts on closed surfaces") {
  // RP^2: one cell per dimension, d2 = 2, d1 = 0
  DenseMat d1(1, 1), d2(1, 1);
  d2.at(0, 0) = 2;
  auto h = homology_with_torsion_lifts(d1, d2);
  CHECK(h.betti == 0);
  REQUIRE(h.torsion.size() == 1);
  CHECK(h.torsion[0].order == 2);
  REQUIRE(h.torsion[0].cycle.size() == 1);
  CHECK(abs(h.torsion[0].cycle[0]) == 1);
  REQUIRE(h.torsion[0].lift.size() == 1);
  CHECK(d2.apply(h.torsion[0].lift) ==
        Vec{h.torsion[0].order * h.torsion[0].cycle[0]});

  // torus: two 1-cells, both boundary maps zero
  DenseMat t1(1, 2), t2(2, 1);
  auto ht = homology_with_torsion_lifts(t1, t2);
  CHECK(ht.betti == 2);
  CHECK(ht.torsion.empty());

  // Klein bottle: d2 = (0, 2)^T
  DenseMat k1(1, 2), k2(2, 1);
  k2.at(1, 0) = 2;
  auto hk = homology_with_torsion_lifts(k1, k2);
  CHECK(hk.betti == 1);
  REQUIRE(hk.torsion.size() == 1);
  CHECK(hk.torsion[0].order == 2);
  Vec bl = k2.apply(hk.torsion[0].lift);
  for (size_t i = 0; i < bl.size(); ++i)
    CHECK(bl[i] == hk.torsion[0].order * hk.torsion[0].cycle[i]);
}

TEST_CASE("mod-2 linear algebra") {
  DenseMat M(3, 3);
  M.at(0, 0) = 1;
  M.at(0, 1) = 1;
  M.at(1, 1) = 1;
  M.at(1, 2) = 1;
  M.at(2, 0) = 1;
  M.at(2, 2) = 1;  // rank 2 mod 2: rows sum to 0
  Gf2Matrix G = Gf2Matrix::from_dense(M);
  CHECK(mod2_rank(G) == 2);

  BitVec b{1, 1, 0};
  auto x = mod2_solve(G, b);
  REQUIRE(x);
  // check G x = b by hand
  for (int i = 0; i < 3; ++i) {
    int acc = 0;
    for (int j = 0; j < 3; ++j) acc ^= (G.get(i, j) & (*x)[j]);
    CHECK(acc == b[i]);
  }
  CHECK(!mod2_solve(G, BitVec{1, 0, 0}).has_value());

  auto ker = mod2_kernel_basis(G);
  REQUIRE(ker.size() == 1);
  for (int i = 0; i < 3; ++i) {
    int acc = 0;
    for (int j = 0; j < 3; ++j) acc ^= (G.get(i, j) & ker[0][j]);
    CHECK(acc == 0);
  }

  Rng rng(31337);
  for (int trial = 0; trial < 50; ++trial) {
    DenseMat A = random_matrix(rng, 12, 0, 1);
    Gf2Matrix GA = Gf2Matrix::from_dense(A);
    int rk = mod2_rank(GA);
    auto kb = mod2_kernel_basis(GA);
    REQUIRE(static_cast<int>(kb.size()) == A.cols - rk);
    for (const BitVec& k : kb)
      for (int i = 0; i < A.rows; ++i) {
        int acc = 0;
        for (int j = 0; j < A.cols; ++j) acc ^= (GA.get(i, j) & k[j]);
        REQUIRE(acc == 0);
      }
  }
}
