#include "doctest.h"

#include <algorithm>
#include <random>
#include <vector>

#include "rktensor/blockcode.hpp"
#include "test_util.hpp"

using namespace rkt;
using namespace rkt::blockcode;
using linalg::Mat;
using testutil::oracle_rank;

namespace {

Mat mat(uint32_t r, uint32_t c, std::vector<uint32_t> vals) {
  Mat M(r, c);
  M.a = std::move(vals);
  return M;
}

// Minimum Hamming weight by scanning every nonzero codeword.
uint32_t oracle_hamming(const BlockCode& C) {
  uint32_t best = UINT32_MAX;
  testutil::for_all_nonzero_coeffs(C.field->q(), C.k(),
                                   [&](const std::vector<uint32_t>& c) {
    best = std::min(best, hamming_weight(codeword(C, c)));
  });
  return best;
}

std::vector<EvalPoint> power_points(const gf::Field& F, uint32_t count) {
  std::vector<EvalPoint> alpha;
  for (uint32_t i = 0; i < count; ++i) alpha.push_back(ev(F.pow(F.generator(), i)));
  return alpha;
}

}  // namespace

TEST_CASE("block code canonicalization, membership, dual") {
  auto F3 = gf::make_field(3, 1);
  BlockCode C = make_block_code(F3, 4, mat(3, 4, {1, 1, 0, 2,
                                                  2, 2, 0, 1,
                                                  0, 0, 1, 1}));
  REQUIRE(C.k() == 2);  // second row is a multiple of the first
  REQUIRE(linalg::rref(*F3, C.gen).R == C.gen);
  REQUIRE(contains(C, codeword(C, {1, 2})));
  REQUIRE(!contains(C, {1, 0, 0, 0}));
  BlockCode D = dual(C);
  REQUIRE(D.k() == 2);
  for (uint32_t i = 0; i < C.k(); ++i)
    for (uint32_t j = 0; j < D.k(); ++j) {
      uint32_t dot = 0;
      for (uint32_t t = 0; t < 4; ++t)
        dot = F3->add(dot, F3->mul(C.gen.at(i, t), D.gen.at(j, t)));
      REQUIRE(dot == 0);
    }
  REQUIRE(dual(D).gen == C.gen);
  // Zero and full codes dualize to each other.
  BlockCode Z = make_block_code(F3, 3, Mat(0, 3));
  REQUIRE(Z.k() == 0);
  REQUIRE(dual(Z).k() == 3);
  REQUIRE(dual(dual(Z)).k() == 0);
}

TEST_CASE("hamming_min_distance basics and oracle agreement") {
  auto F2 = gf::make_field(2, 1);
  auto F5 = gf::make_field(5, 1);
  // Repetition code.
  BlockCode rep = make_block_code(F5, 6, mat(1, 6, {1, 1, 1, 1, 1, 1}));
  REQUIRE(hamming_min_distance(rep) == 6);
  // Full space.
  BlockCode full = make_block_code(F2, 3, linalg::identity(3));
  REQUIRE(hamming_min_distance(full) == 1);
  std::mt19937_64 rng(83);
  for (auto [p, e] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1}, {3, 1},
                                                                {2, 2}}) {
    auto Fp = gf::make_field(p, e);
    for (int t = 0; t < 25; ++t) {
      uint32_t N = 3 + uint32_t(rng() % 4);
      uint32_t k = 1 + uint32_t(rng() % std::min(4u, N));
      BlockCode C = make_block_code(Fp, N, linalg::random_matrix(*Fp, k, N, rng));
      if (C.k() == 0) continue;
      REQUIRE(hamming_min_distance(C) == oracle_hamming(C));
    }
  }
  REQUIRE_THROWS_AS(hamming_min_distance(make_block_code(F2, 3, Mat(0, 3))),
                    UsageError);
  REQUIRE_THROWS_AS(hamming_min_distance(full, /*cap=*/2), UsageError);
}

TEST_CASE("evaluate handles finite points and infinity") {
  auto F8 = gf::make_field(2, 3);
  const gf::Field& F = *F8;
  uint32_t w = F.generator();
  REQUIRE(w == 2);
  // x^5 + x^2 + 1 evaluated at successive powers of the generator.
  std::vector<uint32_t> f = {1, 0, 1, 0, 0, 1};
  std::vector<uint32_t> expect = {1, w, F.pow(w, 2), F.pow(w, 4),
                                  F.pow(w, 4), F.pow(w, 2), w};
  for (uint32_t i = 0; i < 7; ++i)
    REQUIRE(evaluate(F, f, ev(F.pow(w, i))) == expect[i]);
  // Infinity reads the top coefficient.
  REQUIRE(evaluate(F, f, ev_inf()) == 1);
  REQUIRE(evaluate(F, {3, 7}, ev_inf()) == 7);
  REQUIRE(evaluate(F, {3, 7}, ev(0)) == 3);
  REQUIRE_THROWS_AS(evaluate(F, {}, ev(1)), UsageError);
  REQUIRE_THROWS_AS(evaluate(F, {1}, ev(8)), UsageError);
}

TEST_CASE("cauchy_code generator evaluations and the seven point code") {
  auto F2 = gf::make_field(2, 1);
  // Points {0, 1, inf}, dimension 2: rows evaluate 1 and x.
  BlockCode C = cauchy_code(F2, {ev(0), ev(1), ev_inf()}, {1, 1, 1}, 2);
  REQUIRE(C.k() == 2);
  REQUIRE(C.gen == make_block_code(F2, 3, mat(2, 3, {1, 1, 0,
                                                     0, 1, 1})).gen);
  REQUIRE(hamming_min_distance(C) == 2);

  auto F8 = gf::make_field(2, 3);
  BlockCode C5 = cauchy_code(F8, power_points(*F8, 7),
                             std::vector<uint32_t>(7, 1), 5);
  REQUIRE(C5.k() == 5);
  REQUIRE(hamming_min_distance(C5) == 3);

  REQUIRE_THROWS_AS(cauchy_code(F2, {ev(0), ev(0), ev(1)}, {1, 1, 1}, 2),
                    UsageError);
  REQUIRE_THROWS_AS(
      cauchy_code(F2, {ev_inf(), ev(1), ev_inf()}, {1, 1, 1}, 2), UsageError);
  REQUIRE_THROWS_AS(cauchy_code(F2, {ev(0), ev(1)}, {1, 1}, 2), UsageError);
  REQUIRE_THROWS_AS(cauchy_code(F2, {ev(0), ev(1), ev_inf()}, {1, 1}, 2),
                    UsageError);
  REQUIRE_THROWS_AS(cauchy_code(F2, {ev(0), ev(2)}, {1, 1}, 1), UsageError);
}

TEST_CASE("cauchy codes with nonzero weights are MDS") {
  std::mt19937_64 rng(89);
  for (auto [p, e] : std::vector<std::pair<uint32_t, uint32_t>>{
           {2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}, {11, 1},
           {13, 1}, {2, 4}}) {
    auto Fp = gf::make_field(p, e);
    const gf::Field& F = *Fp;
    uint32_t q = F.q();
    uint32_t N = std::min(q + 1, 8u);
    // Shuffle the projective line and take the first N points.
    std::vector<EvalPoint> line;
    for (uint32_t v = 0; v < q; ++v) line.push_back(ev(v));
    line.push_back(ev_inf());
    for (uint32_t i = uint32_t(line.size()) - 1; i > 0; --i)
      std::swap(line[i], line[uint32_t(rng() % (i + 1))]);
    std::vector<EvalPoint> alpha(line.begin(), line.begin() + N);
    for (uint32_t k = 1; k < N; ++k) {
      long double classes =
          (std::pow((long double)q, (long double)k) - 1) / (q - 1);
      if (classes > (1 << 20)) continue;
      std::vector<uint32_t> beta(N);
      for (auto& b : beta) b = 1 + uint32_t(rng() % (q - 1));
      BlockCode C = cauchy_code(Fp, alpha, beta, k);
      REQUIRE(C.k() == k);
      REQUIRE(hamming_min_distance(C, uint64_t(1) << 21) == N - k + 1);
    }
  }
  // A zero weight kills its column: distance drops accordingly.
  auto F4 = gf::make_field(2, 2);
  BlockCode Z = cauchy_code(F4, {ev(0), ev(1), ev(2)}, {1, 1, 0}, 2);
  REQUIRE(hamming_min_distance(Z) == 1);
}

TEST_CASE("nq_bounds certified values") {
  NqBounds b = nq_bounds(8, 5, 3);
  REQUIRE(b.lower == 7);
  REQUIRE(b.upper == 7);
  REQUIRE(b.exact);

  for (uint64_t q : {2, 3, 4, 9}) {
    NqBounds t = nq_bounds(q, 4, 1);
    REQUIRE(t.lower == 4);
    REQUIRE(t.upper == 4);
    REQUIRE(t.exact);
    NqBounds r = nq_bounds(q, 1, 6);
    REQUIRE(r.lower == 6);
    REQUIRE(r.upper == 6);
    REQUIRE(r.exact);
    NqBounds s = nq_bounds(q, 5, 2);
    REQUIRE(s.lower == 6);
    REQUIRE(s.upper == 6);
    REQUIRE(s.exact);
  }

  // Small binary cases, pinned against independent reasoning: lengths 5 and
  // 6 from concatenated parity blocks, 6/7/7 confirmed by complete search.
  NqBounds c23 = nq_bounds(2, 2, 3);
  REQUIRE(c23.lower == 5);
  REQUIRE(c23.upper == 5);
  REQUIRE(c23.exact);
  NqBounds c24 = nq_bounds(2, 2, 4);
  REQUIRE(c24.lower == 6);
  REQUIRE(c24.upper == 6);
  REQUIRE(c24.exact);
  NqBounds c33 = nq_bounds(2, 3, 3);
  REQUIRE(c33.lower == 6);
  REQUIRE(c33.upper == 6);
  REQUIRE(c33.exact);
  NqBounds c43 = nq_bounds(2, 4, 3);  // attained by the classic [7,4] code
  REQUIRE(c43.lower == 7);
  REQUIRE(c43.upper == 7);
  REQUIRE(c43.exact);
  NqBounds c34 = nq_bounds(2, 3, 4);
  REQUIRE(c34.lower == 7);
  REQUIRE(c34.upper == 7);
  REQUIRE(c34.exact);

  // No length-5 ternary [5,3] code reaches distance 3 (it would be MDS past
  // the longest arc), so the complete search must push the lower bound to 6.
  NqBounds t33 = nq_bounds(3, 3, 3);
  REQUIRE(t33.lower == 6);
  REQUIRE(t33.upper == 6);
  REQUIRE(t33.exact);

  NqBounds e43 = nq_bounds(4, 3, 3);
  REQUIRE(e43.lower == 5);
  REQUIRE(e43.upper == 5);
  REQUIRE(e43.exact);

  // Out of search reach: keep an honest interval.
  NqBounds big = nq_bounds(2, 6, 5, /*search_budget=*/1 << 10);
  REQUIRE(big.lower == 13);
  REQUIRE(big.upper == 30);
  REQUIRE(!big.exact);
  REQUIRE(big.lower <= big.upper);

  REQUIRE_THROWS_AS(nq_bounds(6, 2, 2), UsageError);
  REQUIRE_THROWS_AS(nq_bounds(1, 2, 2), UsageError);
  REQUIRE_THROWS_AS(nq_bounds(0, 2, 2), UsageError);
  REQUIRE_THROWS_AS(nq_bounds(4, 0, 2), UsageError);
  REQUIRE_THROWS_AS(nq_bounds(4, 2, 0), UsageError);
}

TEST_CASE("psi coordinates over rank-one lists") {
  auto F3 = gf::make_field(3, 1);
  const gf::Field& F = *F3;
  std::mt19937_64 rng(97);
  for (int t = 0; t < 30; ++t) {
    uint32_t n = 2 + uint32_t(rng() % 2), m = 2 + uint32_t(rng() % 2);
    uint32_t R = 2 + uint32_t(rng() % (n * m - 1));
    // Independent rank-one list from random vector pairs.
    std::vector<Mat> A;
    Mat stacked(R, n * m);
    while (true) {
      A.clear();
      for (uint32_t r = 0; r < R; ++r) {
        std::vector<uint32_t> v(n), w(m);
        do {
          for (auto& x : v) x = uint32_t(rng() % 3);
        } while (std::all_of(v.begin(), v.end(), [](uint32_t x) { return !x; }));
        do {
          for (auto& x : w) x = uint32_t(rng() % 3);
        } while (std::all_of(w.begin(), w.end(), [](uint32_t x) { return !x; }));
        A.push_back(linalg::outer(F, v, w));
        for (uint32_t s = 0; s < n * m; ++s) stacked.at(r, s) = A[r].a[s];
      }
      if (linalg::rank(F, stacked) == R) break;
    }
    REQUIRE(psi(F3, A, A[0]) ==
            [&] {
              std::vector<uint32_t> e(R, 0);
              e[0] = 1;
              return e;
            }());
    REQUIRE(psi(F3, A, Mat(n, m)) == std::vector<uint32_t>(R, 0));
    // Round trip through random coordinates, and the weight bound.
    std::vector<uint32_t> mu(R);
    for (auto& x : mu) x = uint32_t(rng() % 3);
    Mat M(n, m);
    for (uint32_t r = 0; r < R; ++r)
      if (mu[r]) M = linalg::mat_add(F, M, linalg::mat_scale(F, mu[r], A[r]));
    std::vector<uint32_t> back = psi(F3, A, M);
    REQUIRE(back == mu);
    REQUIRE(oracle_rank(F, M) <= hamming_weight(mu));
  }
  // Dependent lists and rank violations are rejected.
  Mat E00 = mat(2, 2, {1, 0, 0, 0});
  Mat E11 = mat(2, 2, {0, 0, 0, 1});
  REQUIRE_THROWS_AS(psi(F3, {E00, E00}, E00), UsageError);
  REQUIRE_THROWS_AS(psi(F3, {mat(2, 2, {1, 0, 0, 1})}, E00), UsageError);
  REQUIRE_THROWS_AS(psi(F3, {E00, E11}, mat(2, 2, {0, 1, 0, 0})), UsageError);
}

TEST_CASE("phi maps unit vectors to column outer products") {
  auto F4 = gf::make_field(2, 2);
  const gf::Field& F = *F4;
  std::mt19937_64 rng(101);
  for (int t = 0; t < 20; ++t) {
    uint32_t n = 2 + uint32_t(rng() % 3), m = 2 + uint32_t(rng() % 3);
    uint32_t R = 1 + uint32_t(rng() % 5);
    Mat V = linalg::random_matrix(F, n, R, rng);
    Mat W = linalg::random_matrix(F, m, R, rng);
    for (uint32_t r = 0; r < R; ++r) {
      std::vector<uint32_t> x(R, 0);
      x[r] = 1;
      std::vector<uint32_t> v(n), w(m);
      for (uint32_t i = 0; i < n; ++i) v[i] = V.at(i, r);
      for (uint32_t j = 0; j < m; ++j) w[j] = W.at(j, r);
      REQUIRE(phi(F, V, W, x) == linalg::outer(F, v, w));
    }
    // Linearity.
    std::vector<uint32_t> x(R), y(R), s(R);
    for (uint32_t r = 0; r < R; ++r) {
      x[r] = uint32_t(rng() % 4);
      y[r] = uint32_t(rng() % 4);
      s[r] = F.add(x[r], y[r]);
    }
    REQUIRE(phi(F, V, W, s) ==
            linalg::mat_add(F, phi(F, V, W, x), phi(F, V, W, y)));
  }
  // Identity factors give diagonal matrices.
  Mat I3 = linalg::identity(3);
  REQUIRE(phi(F, I3, I3, {1, 3, 2}) == linalg::diag({1, 3, 2}));
  REQUIRE_THROWS_AS(phi(F, I3, linalg::identity(2), {1, 0, 0}), UsageError);
}

TEST_CASE("phi and psi invert each other over matching columns") {
  std::mt19937_64 rng(103);
  for (auto [p, e] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1}, {3, 1},
                                                                {2, 2}}) {
    auto Fp = gf::make_field(p, e);
    const gf::Field& F = *Fp;
    for (int t = 0; t < 20; ++t) {
      uint32_t n = 2 + uint32_t(rng() % 2), m = 2 + uint32_t(rng() % 2);
      uint32_t R = 2 + uint32_t(rng() % 3);
      // Columns must produce an independent rank-one list.
      Mat V(n, R), W(m, R);
      std::vector<Mat> A;
      while (true) {
        V = linalg::random_matrix(F, n, R, rng);
        W = linalg::random_matrix(F, m, R, rng);
        A.clear();
        Mat stacked(R, n * m);
        bool ok = true;
        for (uint32_t r = 0; r < R && ok; ++r) {
          std::vector<uint32_t> v(n), w(m);
          for (uint32_t i = 0; i < n; ++i) v[i] = V.at(i, r);
          for (uint32_t j = 0; j < m; ++j) w[j] = W.at(j, r);
          Mat O = linalg::outer(F, v, w);
          ok = !linalg::is_zero(O);
          A.push_back(O);
          for (uint32_t s = 0; s < n * m; ++s) stacked.at(r, s) = O.a[s];
        }
        if (ok && linalg::rank(F, stacked) == R) break;
      }
      std::vector<uint32_t> x(R);
      for (auto& v : x) v = uint32_t(rng() % F.q());
      Mat M = phi(F, V, W, x);
      REQUIRE(phi(F, V, W, psi(Fp, A, M)) == M);
    }
  }
}

TEST_CASE("phi_rank agrees with the direct rank") {
  std::mt19937_64 rng(107);
  int checked = 0;
  for (auto [p, e] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1}, {3, 1},
                                                                {2, 2}}) {
    auto Fp = gf::make_field(p, e);
    const gf::Field& F = *Fp;
    for (int t = 0; t < 350; ++t) {
      uint32_t n = 1 + uint32_t(rng() % 4), m = 1 + uint32_t(rng() % 4);
      uint32_t R = 1 + uint32_t(rng() % 6);
      Mat V = linalg::random_matrix(F, n, R, rng);
      Mat W = linalg::random_matrix(F, m, R, rng);
      if (rng() % 4 == 0) {
        // Force rank deficiency: overwrite a row with a multiple of another.
        if (n >= 2)
          for (uint32_t c = 0; c < R; ++c) V.at(n - 1, c) = V.at(0, c);
      }
      std::vector<uint32_t> cvec(R);
      for (auto& v : cvec) v = uint32_t(rng() % F.q());
      uint32_t r = phi_rank(F, V, W, cvec);
      REQUIRE(r == oracle_rank(F, phi(F, V, W, cvec)));
      ++checked;
    }
  }
  REQUIRE(checked >= 1000);
}

TEST_CASE("rank_weight_transfer on identity factors") {
  auto F3 = gf::make_field(3, 1);
  BlockCode full = make_block_code(F3, 3, linalg::identity(3));
  Mat I3 = linalg::identity(3);
  TransferResult tr = rank_weight_transfer(full, I3, I3);
  REQUIRE(tr.dim == 3);
  REQUIRE(tr.injective);
  REQUIRE(tr.min_rank == 1);
  REQUIRE(tr.trk_upper == 3);
  REQUIRE(rankcode::min_distance(tr.image).d == 1);
  // Rank-deficient factors are rejected with a pointer to the reduction.
  Mat V(2, 3);
  for (uint32_t c = 0; c < 3; ++c) V.at(0, c) = V.at(1, c) = 1;
  REQUIRE_THROWS_AS(rank_weight_transfer(full, V, I3), UsageError);
}

TEST_CASE("rank_weight_transfer random cross-check") {
  std::mt19937_64 rng(109);
  for (auto [p, e] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1}, {3, 1}}) {
    auto Fp = gf::make_field(p, e);
    const gf::Field& F = *Fp;
    for (int t = 0; t < 20; ++t) {
      uint32_t R = 3 + uint32_t(rng() % 3);
      uint32_t n = 2 + uint32_t(rng() % 2), m = 2 + uint32_t(rng() % 2);
      uint32_t k = 1 + uint32_t(rng() % std::min(3u, R - 1));
      Mat V(n, R), W(m, R);
      do {
        V = linalg::random_matrix(F, n, R, rng);
      } while (linalg::rank(F, V) < n);
      do {
        W = linalg::random_matrix(F, m, R, rng);
      } while (linalg::rank(F, W) < m);
      BlockCode C = make_block_code(Fp, R, linalg::random_matrix(F, k, R, rng));
      if (C.k() == 0) continue;
      TransferResult tr = rank_weight_transfer(C, V, W);
      uint32_t best = UINT32_MAX;
      testutil::for_all_nonzero_coeffs(F.q(), C.k(),
                                       [&](const std::vector<uint32_t>& c) {
        best = std::min(best, oracle_rank(F, phi(F, V, W, codeword(C, c))));
      });
      REQUIRE(tr.min_rank == best);
      REQUIRE((tr.min_rank == 0) == !tr.injective);
      REQUIRE(tr.dim == tr.image.k());
      REQUIRE(tr.trk_upper <= R);
      if (tr.injective) {
        REQUIRE(tr.dim == C.k());
        REQUIRE(rankcode::min_distance(tr.image).d == tr.min_rank);
      }
    }
  }
}

TEST_CASE("seven point triple transfers to a five by three code") {
  auto F8 = gf::make_field(2, 3);
  const gf::Field& F = *F8;
  uint32_t w = F.generator();
  auto pw = [&](uint32_t i) { return F.pow(w, i); };
  std::vector<EvalPoint> alpha = power_points(F, 7);
  BlockCode C5 = cauchy_code(F8, alpha, std::vector<uint32_t>(7, 1), 5);

  Mat V = mat(5, 7, {1, 0, 0, 0, 0, pw(6), pw(2),
                     0, 1, 0, 0, 0, pw(3), pw(5),
                     0, 0, 1, 0, 0, pw(6), pw(3),
                     0, 0, 0, 1, 0, pw(5), pw(4),
                     0, 0, 0, 0, 1, pw(4), pw(2)});
  Mat W = mat(3, 7, {1, 0, 0, pw(3), pw(1), 1, pw(3),
                     0, 1, 0, pw(6), pw(6), 1, pw(2),
                     0, 0, 1, pw(5), pw(4), 1, pw(4)});

  // V spans the dual of the weighted dimension-2 evaluation code whose
  // weights are the values of x^5 + x^2 + 1 on the points.
  std::vector<uint32_t> fvals;
  for (uint32_t i = 0; i < 7; ++i)
    fvals.push_back(evaluate(F, {1, 0, 1, 0, 0, 1}, alpha[i]));
  REQUIRE(fvals == std::vector<uint32_t>({1, pw(1), pw(2), pw(4), pw(4),
                                          pw(2), pw(1)}));
  BlockCode C2f = cauchy_code(F8, alpha, fvals, 2);
  REQUIRE(dual(C2f).gen == make_block_code(F8, 7, V).gen);
  // W is the canonical generator of the dimension-3 evaluation code with
  // unit weights.
  BlockCode C3 = cauchy_code(F8, alpha, std::vector<uint32_t>(7, 1), 3);
  REQUIRE(C3.gen == make_block_code(F8, 7, W).gen);

  TransferResult tr = rank_weight_transfer(C5, V, W);
  REQUIRE(tr.dim == 5);
  REQUIRE(tr.injective);
  REQUIRE(tr.min_rank == 3);
  REQUIRE(tr.trk_upper == 7);
  // The image is a 5x3 code meeting the dimension bound for distance 3.
  REQUIRE(uint64_t(tr.image.k()) == rankcode::singleton_dim_bound(5, 3, 3));

  // Sensitivity: the transfer depends on every entry of W. Perturbing the
  // last entry of the first row off the evaluation code drops the minimum
  // rank to 2, so that variant is no longer extremal.
  Mat Wbad = W;
  Wbad.at(0, 6) = pw(2);
  TransferResult trb = rank_weight_transfer(C5, V, Wbad);
  REQUIRE(trb.min_rank == 2);
}
