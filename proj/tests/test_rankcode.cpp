#include "doctest.h"

#include <algorithm>
#include <random>
#include <vector>

#include "rktensor/rankcode.hpp"
#include "test_util.hpp"

using namespace rkt;
using namespace rkt::rankcode;
using linalg::Mat;
using testutil::oracle_min_distance;
using testutil::oracle_rank;
using testutil::random_code;

namespace {

Mat mat(uint32_t r, uint32_t c, std::vector<uint32_t> vals) {
  Mat M(r, c);
  M.a = std::move(vals);
  return M;
}

}  // namespace

TEST_CASE("make_code canonicalizes the generator") {
  auto F3 = gf::make_field(3, 1);
  // Two different bases of the same 2-dimensional space of 2x2 matrices.
  Mat A = mat(2, 2, {1, 0, 0, 1});
  Mat B = mat(2, 2, {0, 1, 2, 0});
  Mat A2 = mat(2, 2, {2, 1, 2, 2});  // 2A + B
  Mat B2 = mat(2, 2, {1, 2, 1, 1});  // A + 2B
  MatrixCode C1 = make_code(F3, 2, 2, {A, B});
  MatrixCode C2 = make_code(F3, 2, 2, {A2, B2, A});
  REQUIRE(C1.k() == 2);
  REQUIRE(C2.k() == 2);
  REQUIRE(C1.gen == C2.gen);
  // The generator is its own reduced echelon form.
  REQUIRE(linalg::rref(*F3, C1.gen).R == C1.gen);
  // basis_matrix unpacks generator rows.
  for (uint32_t i = 0; i < C1.k(); ++i) {
    Mat M = C1.basis_matrix(i);
    for (uint32_t t = 0; t < 4; ++t) REQUIRE(M.a[t] == C1.gen.at(i, t));
  }
  REQUIRE_THROWS_AS(make_code(F3, 2, 2, {mat(2, 3, {1, 0, 0, 0, 0, 0})}),
                    UsageError);
  REQUIRE_THROWS_AS(from_vectorized(F3, 2, 2, mat(1, 3, {1, 0, 0})),
                    UsageError);
}

TEST_CASE("codeword and contains agree with the span") {
  std::mt19937_64 rng(41);
  for (auto [p, e] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1}, {3, 1},
                                                                {2, 2}}) {
    auto Fp = gf::make_field(p, e);
    const gf::Field& F = *Fp;
    for (int t = 0; t < 20; ++t) {
      uint32_t n = 2 + uint32_t(rng() % 2), m = 2 + uint32_t(rng() % 2);
      uint32_t k = 1 + uint32_t(rng() % 3);
      MatrixCode C = random_code(Fp, n, m, k, rng);
      testutil::for_all_nonzero_coeffs(F.q(), k,
                                       [&](const std::vector<uint32_t>& c) {
        REQUIRE(contains(C, codeword(C, c)));
      });
      // A vector outside the span is rejected.
      if (k < n * m) {
        for (int probe = 0; probe < 50; ++probe) {
          Mat M = linalg::random_matrix(F, n, m, rng);
          if (!contains(C, M)) {
            Mat stacked(k + 1, n * m);
            for (uint32_t i = 0; i < k; ++i)
              for (uint32_t s = 0; s < n * m; ++s)
                stacked.at(i, s) = C.gen.at(i, s);
            for (uint32_t s = 0; s < n * m; ++s) stacked.at(k, s) = M.a[s];
            REQUIRE(oracle_rank(F, stacked) == k + 1);
            break;
          }
        }
      }
    }
  }
}

TEST_CASE("min_distance matches exhaustive scan on small codes") {
  std::mt19937_64 rng(43);
  for (auto [p, e] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1}, {3, 1},
                                                                {2, 2}}) {
    auto Fp = gf::make_field(p, e);
    for (int t = 0; t < 25; ++t) {
      uint32_t n = 2 + uint32_t(rng() % 3), m = 2 + uint32_t(rng() % 3);
      uint32_t kmax = std::min(4u, n * m);
      uint32_t k = 1 + uint32_t(rng() % kmax);
      MatrixCode C = random_code(Fp, n, m, k, rng);
      DistResult r = min_distance(C);
      REQUIRE(r.exact);
      REQUIRE(r.d == oracle_min_distance(C));
      REQUIRE(r.lower == r.d);
      REQUIRE(r.upper == r.d);
      REQUIRE(!linalg::is_zero(r.witness));
      REQUIRE(contains(C, r.witness));
      REQUIRE(oracle_rank(*Fp, r.witness) == r.d);
      // Dimension bound for the attained distance.
      REQUIRE(uint64_t(k) <= singleton_dim_bound(n, m, r.d));
    }
  }
}

TEST_CASE("min_distance frozen examples") {
  auto F2 = gf::make_field(2, 1);
  auto F3 = gf::make_field(3, 1);
  // Scalar multiples of the identity: distance n.
  MatrixCode CI = make_code(F3, 3, 3,
                            {mat(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1})});
  REQUIRE(min_distance(CI).d == 3);
  // Full matrix space: distance 1.
  std::vector<Mat> full;
  for (uint32_t t = 0; t < 4; ++t) {
    Mat E(2, 2);
    E.a[t] = 1;
    full.push_back(E);
  }
  REQUIRE(min_distance(make_code(F2, 2, 2, full)).d == 1);
  // span{I, [[0,1],[2,0]]} over GF(3): aI+bJ has determinant a^2+b^2, which
  // vanishes only at a=b=0, so every nonzero codeword is invertible.
  MatrixCode CJ = make_code(F3, 2, 2, {mat(2, 2, {1, 0, 0, 1}),
                                       mat(2, 2, {0, 1, 2, 0})});
  REQUIRE(min_distance(CJ).d == 2);
  REQUIRE(uint64_t(CJ.k()) == singleton_dim_bound(2, 2, 2));  // maximum rank distance
}

TEST_CASE("min_distance sampled bounds over the cap stay honest") {
  auto F3 = gf::make_field(3, 1);
  std::mt19937_64 rng(47);
  MatrixCode C = random_code(F3, 2, 2, 3, rng);
  uint32_t truth = oracle_min_distance(C);
  DistResult r = min_distance(C, /*cap=*/5, /*samples=*/4000, /*seed=*/7);
  REQUIRE(!r.exact);
  REQUIRE(r.lower == 1);
  REQUIRE(r.upper >= truth);
  REQUIRE(r.upper <= 2);
  REQUIRE(!r.note.empty());
  REQUIRE(contains(C, r.witness));
  REQUIRE(!linalg::is_zero(r.witness));
}

TEST_CASE("singleton_dim_bound values") {
  REQUIRE(singleton_dim_bound(4, 4, 4) == 4);
  REQUIRE(singleton_dim_bound(4, 4, 1) == 16);
  REQUIRE(singleton_dim_bound(2, 3, 2) == 3);
  REQUIRE(singleton_dim_bound(5, 3, 2) == 10);
  REQUIRE_THROWS_AS(singleton_dim_bound(3, 4, 4), UsageError);
  REQUIRE_THROWS_AS(singleton_dim_bound(3, 4, 0), UsageError);
}

TEST_CASE("dual dimension, orthogonality, involution") {
  std::mt19937_64 rng(53);
  for (auto [p, e] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1}, {3, 1},
                                                                {2, 2}}) {
    auto Fp = gf::make_field(p, e);
    const gf::Field& F = *Fp;
    for (int t = 0; t < 20; ++t) {
      uint32_t n = 2 + uint32_t(rng() % 2), m = 2 + uint32_t(rng() % 3);
      uint32_t k = uint32_t(rng() % (n * m + 1));
      MatrixCode C = k ? random_code(Fp, n, m, k, rng)
                       : from_vectorized(Fp, n, m, Mat(0, n * m));
      MatrixCode D = dual(C);
      REQUIRE(D.k() == n * m - k);
      for (uint32_t i = 0; i < C.k(); ++i)
        for (uint32_t j = 0; j < D.k(); ++j)
          REQUIRE(linalg::trace_product(F, C.basis_matrix(i),
                                        D.basis_matrix(j)) == 0);
      REQUIRE(dual(D).gen == C.gen);
    }
  }
}

TEST_CASE("dual of an equivalent code is the inverse-transpose equivalent dual") {
  std::mt19937_64 rng(59);
  for (auto [p, e] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1}, {3, 1}}) {
    auto Fp = gf::make_field(p, e);
    const gf::Field& F = *Fp;
    for (int t = 0; t < 15; ++t) {
      uint32_t n = 2 + uint32_t(rng() % 2), m = 2 + uint32_t(rng() % 2);
      uint32_t k = 1 + uint32_t(rng() % (n * m - 1));
      MatrixCode C = random_code(Fp, n, m, k, rng);
      Mat A = linalg::random_invertible(F, n, rng);
      Mat B = linalg::random_invertible(F, m, rng);
      MatrixCode lhs = dual(apply_equivalence(C, A, B, false));
      Mat Ai = linalg::inverse(F, linalg::transpose(A));
      Mat Bi = linalg::inverse(F, linalg::transpose(B));
      MatrixCode rhs = apply_equivalence(dual(C), Ai, Bi, false);
      REQUIRE(lhs.gen == rhs.gen);
    }
  }
}

TEST_CASE("supports and tensor slice dimensions") {
  auto F2 = gf::make_field(2, 1);
  // Both basis matrices live in row 0; rows of the codewords span e0, e1.
  Mat E00 = mat(3, 3, {1, 0, 0, 0, 0, 0, 0, 0, 0});
  Mat E01 = mat(3, 3, {0, 1, 0, 0, 0, 0, 0, 0, 0});
  MatrixCode C = make_code(F2, 3, 3, {E00, E01});
  SupportPair S = supports(C);
  REQUIRE(S.col.dim() == 1);
  REQUIRE(S.row.dim() == 2);
  REQUIRE(!S.nondegenerate);

  std::mt19937_64 rng(61);
  for (auto [p, e] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1}, {3, 1}}) {
    auto Fp = gf::make_field(p, e);
    for (int t = 0; t < 20; ++t) {
      uint32_t n = 2 + uint32_t(rng() % 2), m = 2 + uint32_t(rng() % 2);
      uint32_t k = 1 + uint32_t(rng() % (n * m));
      MatrixCode D = random_code(Fp, n, m, k, rng);
      SupportPair SD = supports(D);
      Tensor3 G = generator_tensor(D);
      REQUIRE(G.n1 == k);
      REQUIRE(G.n2 == n);
      REQUIRE(G.n3 == m);
      // Slice space dimensions of the generator tensor read off the code
      // dimension and the two supports.
      REQUIRE(tensor::slice_dim(*Fp, G, 1) == k);
      REQUIRE(tensor::slice_dim(*Fp, G, 2) == SD.col.dim());
      REQUIRE(tensor::slice_dim(*Fp, G, 3) == SD.row.dim());
      REQUIRE(SD.nondegenerate ==
              (SD.col.dim() == n && SD.row.dim() == m));
    }
  }
}

TEST_CASE("generator and parity tensors pair to zero") {
  std::mt19937_64 rng(67);
  for (auto [p, e] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1}, {3, 1},
                                                                {2, 2}}) {
    auto Fp = gf::make_field(p, e);
    for (int t = 0; t < 15; ++t) {
      uint32_t n = 2 + uint32_t(rng() % 2), m = 2 + uint32_t(rng() % 2);
      uint32_t k = 1 + uint32_t(rng() % (n * m - 1));
      MatrixCode C = random_code(Fp, n, m, k, rng);
      Tensor3 G = generator_tensor(C);
      Tensor3 P = parity_tensor(C);
      REQUIRE(P.n1 == n * m - k);
      Mat Z = tensor::double_dot(*Fp, G, P);
      REQUIRE(linalg::is_zero(Z));
    }
  }
}

TEST_CASE("apply_equivalence preserves dimension and distance") {
  std::mt19937_64 rng(71);
  for (auto [p, e] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1}, {3, 1}}) {
    auto Fp = gf::make_field(p, e);
    const gf::Field& F = *Fp;
    for (int t = 0; t < 15; ++t) {
      uint32_t n = 2 + uint32_t(rng() % 2);
      uint32_t m = n;  // square so the transpose branch is exercised too
      uint32_t k = 1 + uint32_t(rng() % (n * m - 1));
      MatrixCode C = random_code(Fp, n, m, k, rng);
      Mat A = linalg::random_invertible(F, n, rng);
      Mat B = linalg::random_invertible(F, m, rng);
      bool tr = rng() & 1;
      MatrixCode E = apply_equivalence(C, A, B, tr);
      REQUIRE(E.k() == C.k());
      REQUIRE(min_distance(E).d == min_distance(C).d);
      // Composition folds into a single equivalence.
      Mat A2 = linalg::random_invertible(F, n, rng);
      Mat B2 = linalg::random_invertible(F, m, rng);
      MatrixCode lhs = apply_equivalence(apply_equivalence(C, A, B, false), A2,
                                         B2, false);
      MatrixCode rhs = apply_equivalence(C, linalg::mat_mul(F, A2, A),
                                         linalg::mat_mul(F, B, B2), false);
      REQUIRE(lhs.gen == rhs.gen);
    }
  }
  auto F2 = gf::make_field(2, 1);
  MatrixCode C = make_code(F2, 2, 3, {mat(2, 3, {1, 0, 0, 0, 0, 0})});
  Mat I2 = linalg::identity(2), I3 = linalg::identity(3);
  REQUIRE_THROWS_AS(apply_equivalence(C, I2, I3, true), UsageError);
  Mat S(2, 2);  // singular
  REQUIRE_THROWS_AS(apply_equivalence(C, S, I3, false), UsageError);
}

TEST_CASE("puncture and shorten shapes and a hand-checked example") {
  auto F2 = gf::make_field(2, 1);
  MatrixCode C = make_code(F2, 2, 2, {mat(2, 2, {1, 0, 0, 1})});
  Mat I2 = linalg::identity(2);
  MatrixCode P = puncture(C, Side::row, I2, {1});
  REQUIRE(P.n == 1);
  REQUIRE(P.m == 2);
  REQUIRE(P.k() == 1);
  REQUIRE(P.gen == mat(1, 2, {1, 0}));
  MatrixCode S = shorten(C, Side::row, I2, {0});
  REQUIRE(S.n == 1);
  REQUIRE(S.m == 2);
  REQUIRE(S.k() == 0);
  MatrixCode Pc = puncture(C, Side::col, I2, {0});
  REQUIRE(Pc.n == 2);
  REQUIRE(Pc.m == 1);
  REQUIRE(Pc.gen == mat(1, 2, {0, 1}));

  REQUIRE_THROWS_AS(puncture(C, Side::row, I2, {}), UsageError);
  REQUIRE_THROWS_AS(puncture(C, Side::row, I2, {0, 1}), UsageError);
  REQUIRE_THROWS_AS(puncture(C, Side::row, I2, {2}), UsageError);
  REQUIRE_THROWS_AS(shorten(C, Side::row, Mat(2, 2), {0}), UsageError);
}

TEST_CASE("punctured dual equals shortened dual") {
  std::mt19937_64 rng(73);
  for (auto [p, e] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1}, {3, 1}}) {
    auto Fp = gf::make_field(p, e);
    const gf::Field& F = *Fp;
    for (int t = 0; t < 30; ++t) {
      uint32_t n = 2 + uint32_t(rng() % 3), m = 2 + uint32_t(rng() % 3);
      uint32_t k = 1 + uint32_t(rng() % (n * m - 1));
      MatrixCode C = random_code(Fp, n, m, k, rng);
      Side side = (rng() & 1) ? Side::row : Side::col;
      uint32_t nd = side == Side::row ? n : m;
      uint32_t isz = 1 + uint32_t(rng() % (nd - 1));
      std::vector<uint32_t> I;
      for (uint32_t i = 0; i < nd; ++i) I.push_back(i);
      for (uint32_t i = nd - 1; i > 0; --i)
        std::swap(I[i], I[uint32_t(rng() % (i + 1))]);
      I.resize(isz);
      std::sort(I.begin(), I.end());
      Mat T = linalg::random_invertible(F, nd, rng);
      Mat Ti = linalg::inverse(F, linalg::transpose(T));
      MatrixCode lhs = dual(puncture(C, side, T, I));
      MatrixCode rhs = shorten(dual(C), side, Ti, I);
      REQUIRE(lhs.gen == rhs.gen);
    }
  }
}

TEST_CASE("distance criteria agree with the computed distance") {
  std::mt19937_64 rng(79);
  for (auto [p, e] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1}, {3, 1}}) {
    auto Fp = gf::make_field(p, e);
    for (int t = 0; t < 25; ++t) {
      uint32_t n = 2 + uint32_t(rng() % 2), m = 2 + uint32_t(rng() % 2);
      uint32_t k = 1 + uint32_t(rng() % (n * m));
      MatrixCode C = random_code(Fp, n, m, k, rng);
      uint32_t dist = min_distance(C).d;
      for (uint32_t d = 2; d <= std::min(n, m); ++d) {
        DistanceCriteria res = distance_criteria(C, d);
        REQUIRE(res.holds == (dist >= d));
        REQUIRE(res.via_puncture == res.holds);
        REQUIRE(res.via_shorten == res.holds);
        REQUIRE(res.via_parity == res.holds);
        REQUIRE(res.has_witness == !res.holds);
        if (res.has_witness) {
          REQUIRE(!linalg::is_zero(res.witness));
          REQUIRE(contains(C, res.witness));
          REQUIRE(oracle_rank(*Fp, res.witness) < d);
        }
      }
    }
  }
  // The full space fails d = 2 through all three routes, including the empty
  // parity tensor.
  auto F2 = gf::make_field(2, 1);
  std::vector<Mat> full;
  for (uint32_t t = 0; t < 4; ++t) {
    Mat E(2, 2);
    E.a[t] = 1;
    full.push_back(E);
  }
  MatrixCode FULL = make_code(F2, 2, 2, full);
  DistanceCriteria res = distance_criteria(FULL, 2);
  REQUIRE(!res.holds);
  // A maximum rank distance code passes.
  auto F3 = gf::make_field(3, 1);
  MatrixCode CJ = make_code(F3, 2, 2, {mat(2, 2, {1, 0, 0, 1}),
                                       mat(2, 2, {0, 1, 2, 0})});
  REQUIRE(distance_criteria(CJ, 2).holds);
  REQUIRE_THROWS_AS(distance_criteria(CJ, 2, /*cap=*/1), UsageError);
  REQUIRE_THROWS_AS(distance_criteria(CJ, 1), UsageError);
  REQUIRE_THROWS_AS(distance_criteria(CJ, 3), UsageError);
}
