#include "doctest.h"

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "rktensor/construct.hpp"
#include "rktensor/trank.hpp"
#include "test_util.hpp"

using namespace rkt;
using namespace rkt::trank;
using linalg::Mat;
using rankcode::MatrixCode;
using tensor::Tensor3;
using testutil::oracle_rank;
using testutil::random_code;

namespace {

Mat mat(uint32_t r, uint32_t c, std::vector<uint32_t> vals) {
  Mat M(r, c);
  M.a = std::move(vals);
  return M;
}

// Smallest number of rank-one matrices whose span contains C, by direct
// subset search over one representative per rank-one span class (scaling a
// spanning matrix never changes the span). Exponential, so tiny codes only.
uint32_t oracle_trk(const MatrixCode& C, uint32_t hard_cap) {
  const gf::Field& F = *C.field;
  auto ones = linalg::enumerate_rank_one(F, C.n, C.m, uint64_t(1) << 20);
  uint32_t nm = C.n * C.m;
  auto covers = [&](const std::vector<uint32_t>& idx) {
    Mat chosen(uint32_t(idx.size()), nm);
    for (uint32_t i = 0; i < idx.size(); ++i)
      for (uint32_t t = 0; t < nm; ++t) chosen.at(i, t) = ones[idx[i]].a[t];
    uint32_t base = oracle_rank(F, chosen);
    Mat both(uint32_t(idx.size()) + C.k(), nm);
    for (uint32_t i = 0; i < idx.size(); ++i)
      for (uint32_t t = 0; t < nm; ++t) both.at(i, t) = ones[idx[i]].a[t];
    for (uint32_t i = 0; i < C.k(); ++i)
      for (uint32_t t = 0; t < nm; ++t)
        both.at(uint32_t(idx.size()) + i, t) = C.gen.at(i, t);
    return oracle_rank(F, both) == base;
  };
  for (uint32_t s = C.k(); s <= hard_cap; ++s) {
    std::vector<uint32_t> idx(s);
    std::function<bool(uint32_t, uint32_t)> walk = [&](uint32_t at,
                                                       uint32_t from) {
      if (at == s) return covers(idx);
      for (uint32_t j = from; j + (s - at) <= ones.size(); ++j) {
        idx[at] = j;
        if (walk(at + 1, j + 1)) return true;
      }
      return false;
    };
    if (walk(0, 0)) return s;
  }
  REQUIRE(false);  // hard_cap below the true rank
  return 0;
}

// Every exact certificate must rebuild the generator tensor from its own
// rank-one terms; inexact ones still must, with a strictly smaller lower
// bound. Shared by most cases below.
void check_certificate(const MatrixCode& C, const TrkResult& r) {
  const gf::Field& F = *C.field;
  tensor::validate(F, r.cert.upper);
  REQUIRE(tensor::to_coordinates(F, r.cert.upper) ==
          rankcode::generator_tensor(C));
  REQUIRE(r.cert.lower >= C.k());
  REQUIRE(r.cert.lower <= r.cert.upper.length());
  bool known_origin = r.cert.lower_origin == "dimension" ||
                      r.cert.lower_origin == "kruskal" ||
                      r.cert.lower_origin == "nq" ||
                      r.cert.lower_origin == "search";
  REQUIRE(known_origin);
  if (r.cert.exact) {
    REQUIRE(r.cert.lower == r.cert.upper.length());
    REQUIRE(r.cert.note.empty());
    REQUIRE(r.levels_ruled_out == r.cert.upper.length() - C.k());
  } else {
    REQUIRE(r.cert.lower < r.cert.upper.length());
    REQUIRE(!r.cert.note.empty());
  }
}

Tensor3 permute_axes(const Tensor3& X, int a, int b, int c) {
  uint32_t dims[3] = {X.n1, X.n2, X.n3};
  Tensor3 Y(dims[a], dims[b], dims[c]);
  for (uint32_t i = 0; i < X.n1; ++i)
    for (uint32_t j = 0; j < X.n2; ++j)
      for (uint32_t l = 0; l < X.n3; ++l) {
        uint32_t src[3] = {i, j, l};
        Y.at(src[a], src[b], src[c]) = X.at(i, j, l);
      }
  return Y;
}

}  // namespace

TEST_CASE("single-matrix spans cost exactly their rank") {
  std::mt19937_64 rng(71);
  for (auto [p, e] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1},
                                                                {3, 1},
                                                                {2, 2}}) {
    auto Fp = gf::make_field(p, e);
    for (int t = 0; t < 15; ++t) {
      MatrixCode C = random_code(Fp, 2 + t % 2, 2 + t % 3, 1, rng);
      TrkResult r = tensor_rank(C);
      REQUIRE(r.cert.exact);
      REQUIRE(r.cert.upper.length() ==
              oracle_rank(*Fp, C.basis_matrix(0)));
      check_certificate(C, r);
    }
  }
}

TEST_CASE("tensor rank matches the minimal rank-one cover on tiny codes") {
  auto F2 = gf::make_field(2, 1);
  const gf::Field& F = *F2;
  // Every subspace of the 2x2 matrices over GF(2), all dimensions.
  for (uint32_t dim = 1; dim <= 4; ++dim) {
    linalg::enumerate_subspaces(F, 4, dim, [&](const Mat& U) {
      MatrixCode C = rankcode::from_vectorized(F2, 2, 2, U);
      TrkResult r = tensor_rank(C);
      REQUIRE(r.cert.exact);
      REQUIRE(r.cert.upper.length() == oracle_trk(C, 6));
      check_certificate(C, r);
      return true;
    });
  }
  // Random samples over wider shapes and odd characteristic.
  std::mt19937_64 rng(72);
  auto F3 = gf::make_field(3, 1);
  for (int t = 0; t < 25; ++t) {
    MatrixCode C = random_code(F2, 2, 3, 1 + uint32_t(rng() % 4), rng);
    TrkResult r = tensor_rank(C);
    REQUIRE(r.cert.exact);
    REQUIRE(r.cert.upper.length() == oracle_trk(C, 8));
  }
  for (int t = 0; t < 15; ++t) {
    MatrixCode C = random_code(F3, 2, 2, 1 + uint32_t(rng() % 3), rng);
    TrkResult r = tensor_rank(C);
    REQUIRE(r.cert.exact);
    REQUIRE(r.cert.upper.length() == oracle_trk(C, 6));
  }
}

TEST_CASE("all strategies agree on value and certify their answers") {
  std::mt19937_64 rng(73);
  auto F2 = gf::make_field(2, 1);
  auto F4 = gf::make_field(2, 2);
  const Strategy all[] = {Strategy::auto_pick, Strategy::quotient_bfs,
                          Strategy::codim_enum, Strategy::exhaustive};
  for (int t = 0; t < 20; ++t) {
    MatrixCode C = random_code(F2, 2, 3, 1 + uint32_t(rng() % 4), rng);
    uint32_t vals[4];
    int i = 0;
    for (Strategy st : all) {
      SearchConfig cfg;
      cfg.strategy = st;
      TrkResult r = tensor_rank(C, cfg);
      REQUIRE(r.cert.exact);
      check_certificate(C, r);
      vals[i++] = r.cert.upper.length();
    }
    REQUIRE(vals[0] == vals[1]);
    REQUIRE(vals[1] == vals[2]);
    REQUIRE(vals[2] == vals[3]);
  }
  // The generic (q > 2) kernel against the same oracles.
  for (int t = 0; t < 8; ++t) {
    MatrixCode C = random_code(F4, 2, 2, 1 + uint32_t(rng() % 2), rng);
    uint32_t want = oracle_trk(C, 6);
    for (Strategy st : all) {
      SearchConfig cfg;
      cfg.strategy = st;
      TrkResult r = tensor_rank(C, cfg);
      REQUIRE(r.cert.exact);
      REQUIRE(r.cert.upper.length() == want);
    }
  }
}

TEST_CASE("frozen small codes and their categories") {
  auto F2 = gf::make_field(2, 1);

  SUBCASE("identity pair meets the dimension-plus-distance floor") {
    MatrixCode C = rankcode::make_code(F2, 2, 2,
                                       {mat(2, 2, {1, 0, 0, 1})});
    TrkResult r = tensor_rank(C);
    REQUIRE(r.cert.exact);
    REQUIRE(r.cert.upper.length() == 2);
    MtrVerdict v = mtr_verdict(C);
    REQUIRE(v.category == MtrCategory::mtr);
    REQUIRE(v.d == 2);
  }

  SUBCASE("the full matrix space is spanned by units") {
    std::vector<Mat> units;
    for (uint32_t t = 0; t < 4; ++t) {
      Mat M(2, 2);
      M.a[t] = 1;
      units.push_back(M);
    }
    MatrixCode C = rankcode::make_code(F2, 2, 2, units);
    TrkResult r = tensor_rank(C);
    REQUIRE(r.cert.exact);
    REQUIRE(r.cert.upper.length() == 4);
    MtrVerdict v = mtr_verdict(C);
    REQUIRE(v.category == MtrCategory::mtr);  // 4 = 4 + 1 - 1
    GtrProfile p = gen_tensor_ranks(C);
    REQUIRE(p.complete);
    REQUIRE(p.values == std::vector<uint32_t>({1, 2, 3, 4}));
  }

  SUBCASE("field representation pairs are extremal") {
    // Regular representation of GF(8) restricted to span{1, x}: every
    // nonzero codeword is invertible, and the shortest [N, 2, 3] block code
    // has length 5, one above the Kruskal floor 4.
    Mat I3(3, 3);
    for (uint32_t i = 0; i < 3; ++i) I3.at(i, i) = 1;
    Mat M3 = construct::companion_matrix(*F2, {1, 1, 0, 1});
    MatrixCode C = rankcode::make_code(F2, 3, 3, {I3, M3});
    MtrVerdict v = mtr_verdict(C);
    REQUIRE(v.d == 3);
    REQUIRE(v.trk.cert.exact);
    REQUIRE(v.trk.cert.upper.length() == 5);
    REQUIRE(v.category == MtrCategory::tensor_rank_extremal);
    // A dead column changes nothing.
    Mat I3p(3, 4), M3p(3, 4);
    for (uint32_t i = 0; i < 3; ++i)
      for (uint32_t j = 0; j < 3; ++j) {
        I3p.at(i, j) = I3.at(i, j);
        M3p.at(i, j) = M3.at(i, j);
      }
    MtrVerdict vp = mtr_verdict(rankcode::make_code(F2, 3, 4, {I3p, M3p}));
    REQUIRE(vp.trk.cert.upper.length() == 5);
    REQUIRE(vp.category == MtrCategory::tensor_rank_extremal);
  }

  SUBCASE("a code past every short block code is neither") {
    // span{I3, E12 + E33}: any 3-dim rank-one-spanned cover would need three
    // independent rank ones with pairwise sums inside the code, but one of
    // those sums would be the identity, which has rank 3.
    Mat I3(3, 3), N3(3, 3);
    for (uint32_t i = 0; i < 3; ++i) I3.at(i, i) = 1;
    N3.at(0, 1) = 1;
    N3.at(2, 2) = 1;
    MatrixCode C = rankcode::make_code(F2, 3, 3, {I3, N3});
    TrkResult r = tensor_rank(C);
    REQUIRE(r.cert.exact);
    REQUIRE(r.cert.upper.length() == 4);
    REQUIRE(r.cert.lower_origin == "search");
    REQUIRE(r.strategy_used == "quotient_bfs");  // quotient too big to list
    REQUIRE(r.cert.upper.length() == oracle_trk(C, 6));
    MtrVerdict v = mtr_verdict(C);
    REQUIRE(v.d == 2);
    REQUIRE(v.category == MtrCategory::neither);
    REQUIRE(v.evidence.find("exceeds") != std::string::npos);
  }

  SUBCASE("a code not spanned by its own rank ones pays one extra") {
    MatrixCode C = rankcode::make_code(
        F2, 2, 2, {mat(2, 2, {1, 0, 0, 0}), mat(2, 2, {0, 1, 1, 0})});
    TrkResult r = tensor_rank(C);
    REQUIRE(r.cert.exact);
    REQUIRE(r.cert.upper.length() == 3);
    REQUIRE(r.cert.lower_origin == "search");
    REQUIRE(r.strategy_used == "codim_enum");  // two-dim quotient
    REQUIRE(oracle_trk(C, 5) == 3);
  }
}

TEST_CASE("frozen tensors") {
  SUBCASE("a 2x2x3 tensor over GF(3) meeting the Kruskal floor") {
    auto F3 = gf::make_field(3, 1);
    Tensor3 X(2, 2, 3);
    X.at(0, 0, 0) = 1;
    X.at(0, 1, 1) = 1;
    X.at(1, 0, 1) = 1;
    X.at(1, 1, 2) = 1;
    TrkResult r = tensor_rank(F3, X);
    REQUIRE(r.cert.exact);
    REQUIRE(r.cert.upper.length() == 3);
    REQUIRE(r.cert.lower == 3);  // k = 2 and every nonzero slice combo
    REQUIRE(r.cert.lower_origin == "kruskal");  // has rank 2
  }

  SUBCASE("polynomial product modulo a quadratic over GF(2)") {
    auto F2 = gf::make_field(2, 1);
    Tensor3 T = construct::poly_mult_tensor(F2, 2, 2, 2, {1, 1, 1});
    TrkResult r = tensor_rank(F2, T);
    REQUIRE(r.cert.exact);
    REQUIRE(r.cert.upper.length() == 3);
    // The slice code is the GF(4) representation: two-dim, distance 2.
    MatrixCode C = rankcode::make_code(
        F2, 2, 2, {tensor::slice1(T, 0), tensor::slice1(T, 1)});
    MtrVerdict v = mtr_verdict(C);
    REQUIRE(v.category == MtrCategory::mtr);
  }

  SUBCASE("polynomial product modulo a cubic over GF(4)") {
    auto F4 = gf::make_field(2, 2);
    // x^3 + w has no root (cubes in GF(4) are only 0 and 1), so it is
    // irreducible and the product tensor is 3x3x3 with distance 3.
    Tensor3 T = construct::poly_mult_tensor(F4, 3, 3, 3, {2, 0, 0, 1});
    TrkResult r = tensor_rank(F4, T);
    REQUIRE(r.cert.exact);
    REQUIRE(r.cert.upper.length() == 5);
    REQUIRE(r.cert.lower == 5);
  }
}

TEST_CASE("axis permutations preserve tensor rank") {
  std::mt19937_64 rng(74);
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (auto [p, e] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1},
                                                                {3, 1}}) {
    auto Fp = gf::make_field(p, e);
    for (int t = 0; t < 8; ++t) {
      Tensor3 X(2, 2, 1 + uint32_t(rng() % 3));
      bool nonzero = false;
      for (auto& v : X.a) {
        v = uint32_t(rng() % Fp->q());
        nonzero |= v != 0;
      }
      if (!nonzero) X.a[0] = 1;
      uint32_t first = 0;
      for (int pi = 0; pi < 6; ++pi) {
        Tensor3 Y = permute_axes(X, perms[pi][0], perms[pi][1], perms[pi][2]);
        TrkResult r = tensor_rank(Fp, Y);
        REQUIRE(r.cert.exact);
        if (pi == 0)
          first = r.cert.upper.length();
        else
          REQUIRE(r.cert.upper.length() == first);
      }
    }
  }
}

TEST_CASE("equivalence transformations preserve tensor rank") {
  std::mt19937_64 rng(75);
  for (auto [p, e] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1},
                                                                {3, 1}}) {
    auto Fp = gf::make_field(p, e);
    for (int t = 0; t < 10; ++t) {
      uint32_t n = 2, m = 2 + uint32_t(rng() % 2);
      MatrixCode C = random_code(Fp, n, m, 1 + uint32_t(rng() % 3), rng);
      uint32_t want = tensor_rank(C).cert.upper.length();
      Mat A = linalg::random_invertible(*Fp, n, rng);
      Mat B = linalg::random_invertible(*Fp, m, rng);
      bool tr = n == m && (rng() & 1);
      MatrixCode D = rankcode::apply_equivalence(C, A, B, tr);
      REQUIRE(tensor_rank(D).cert.upper.length() == want);
    }
  }
}

TEST_CASE("worker count changes nothing observable") {
  auto F2 = gf::make_field(2, 1);
  Mat I3(3, 3), N3(3, 3);
  for (uint32_t i = 0; i < 3; ++i) I3.at(i, i) = 1;
  N3.at(0, 1) = 1;
  N3.at(2, 2) = 1;
  std::vector<MatrixCode> codes;
  codes.push_back(rankcode::make_code(F2, 3, 3, {I3, N3}));
  std::mt19937_64 rng(76);
  for (int t = 0; t < 6; ++t)
    codes.push_back(random_code(F2, 3, 3, 2, rng));
  for (const MatrixCode& C : codes) {
    SearchConfig one, three;
    one.worker_count = 1;
    three.worker_count = 3;
    TrkResult a = tensor_rank(C, one);
    TrkResult b = tensor_rank(C, three);
    REQUIRE(a.cert.upper.length() == b.cert.upper.length());
    REQUIRE(a.cert.lower == b.cert.lower);
    REQUIRE(a.cert.exact == b.cert.exact);
    REQUIRE(a.nodes_explored == b.nodes_explored);
    REQUIRE(a.levels_ruled_out == b.levels_ruled_out);
    REQUIRE(a.cert.upper.triples.size() == b.cert.upper.triples.size());
    for (size_t i = 0; i < a.cert.upper.triples.size(); ++i) {
      REQUIRE(a.cert.upper.triples[i].u == b.cert.upper.triples[i].u);
      REQUIRE(a.cert.upper.triples[i].v == b.cert.upper.triples[i].v);
      REQUIRE(a.cert.upper.triples[i].w == b.cert.upper.triples[i].w);
    }
  }
}

TEST_CASE("an exhausted node budget reports honest bounds") {
  auto F2 = gf::make_field(2, 1);
  Mat I3(3, 3), N3(3, 3);
  for (uint32_t i = 0; i < 3; ++i) I3.at(i, i) = 1;
  N3.at(0, 1) = 1;
  N3.at(2, 2) = 1;
  MatrixCode C = rankcode::make_code(F2, 3, 3, {I3, N3});  // true rank 4
  for (Strategy st : {Strategy::quotient_bfs, Strategy::codim_enum,
                      Strategy::exhaustive}) {
    SearchConfig cfg;
    cfg.strategy = st;
    cfg.node_budget = 1;
    TrkResult r = tensor_rank(C, cfg);
    REQUIRE(!r.cert.exact);
    REQUIRE(r.cert.note.find("node budget exhausted") != std::string::npos);
    REQUIRE(r.cert.lower >= 3);
    REQUIRE(r.cert.lower <= 4);
    REQUIRE(r.cert.upper.length() >= 4);
    check_certificate(C, r);
  }
}

TEST_CASE("generalized profile agrees with per-subcode search") {
  std::mt19937_64 rng(77);
  auto F2 = gf::make_field(2, 1);
  for (int t = 0; t < 6; ++t) {
    MatrixCode C = random_code(F2, 2, 3, 3, rng);
    GtrProfile p = gen_tensor_ranks(C);
    REQUIRE(p.complete);
    REQUIRE(p.values.size() == 3);
    REQUIRE(p.certificates.size() == 3);
    // Brute force: minimum over every r-dim subcode, searched directly.
    for (uint32_t r = 1; r <= 3; ++r) {
      uint32_t best = UINT32_MAX;
      linalg::enumerate_subspaces(*F2, 3, r, [&](const Mat& U) {
        Mat rows = linalg::mat_mul(*F2, U, C.gen);
        MatrixCode S = rankcode::from_vectorized(F2, 2, 3, rows);
        best = std::min(best, tensor_rank(S).cert.upper.length());
        return true;
      });
      REQUIRE(p.values[r - 1] == best);
      REQUIRE(p.certificates[r - 1].exact);
      REQUIRE(p.certificates[r - 1].upper.length() == best);
    }
    // Bound chain: strict increase, unit floor steps, trk ceiling.
    uint32_t d = rankcode::min_distance(C).d;
    REQUIRE(p.values[0] == d);
    for (uint32_t r = 1; r <= 3; ++r) {
      REQUIRE(p.values[r - 1] >= d + r - 1);
      REQUIRE(p.values[r - 1] + (3 - r) <= p.values[2]);
    }
  }
}

TEST_CASE("profile stops honestly past the subcode cap") {
  auto F2 = gf::make_field(2, 1);
  // Twelve-dimensional code: 4095 lines are fine, pairs are millions.
  Mat rows(12, 16);
  for (uint32_t i = 0; i < 12; ++i) rows.at(i, i) = 1;
  MatrixCode C = rankcode::from_vectorized(F2, 4, 4, rows);
  GtrProfile p = gen_tensor_ranks(C);
  REQUIRE(!p.complete);
  REQUIRE(p.values.size() == 1);
  REQUIRE(p.values[0] == 1);  // the code holds rank-one units
  REQUIRE(p.note.find("r = 2") != std::string::npos);
  REQUIRE(p.note.find("exceed the enumeration cap") != std::string::npos);
}

TEST_CASE("verdicts degrade to unknown when starved") {
  auto F2 = gf::make_field(2, 1);
  Mat I3(3, 3), N3(3, 3);
  for (uint32_t i = 0; i < 3; ++i) I3.at(i, i) = 1;
  N3.at(0, 1) = 1;
  N3.at(2, 2) = 1;
  MatrixCode C = rankcode::make_code(F2, 3, 3, {I3, N3});
  SearchConfig cfg;
  cfg.node_budget = 1;
  MtrVerdict v = mtr_verdict(C, cfg);
  REQUIRE(v.category == MtrCategory::unknown);
  REQUIRE(v.evidence.find("only known between") != std::string::npos);
}

TEST_CASE("rank spectrum matches the exhaustive scan") {
  std::mt19937_64 rng(78);
  for (auto [p, e] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1},
                                                                {3, 1},
                                                                {2, 2}}) {
    auto Fp = gf::make_field(p, e);
    for (int t = 0; t < 10; ++t) {
      uint32_t n = 2 + uint32_t(rng() % 2), m = 2 + uint32_t(rng() % 2);
      MatrixCode C = random_code(Fp, n, m, 1 + uint32_t(rng() % 3), rng);
      std::vector<uint64_t> got = rank_spectrum(C);
      std::vector<uint64_t> want(std::min(n, m) + 1, 0);
      testutil::for_all_nonzero_coeffs(
          Fp->q(), C.k(), [&](const std::vector<uint32_t>& c) {
            ++want[oracle_rank(*Fp, rankcode::codeword(C, c))];
          });
      REQUIRE(got == want);
      REQUIRE(got[0] == 0);
    }
  }
  auto F3 = gf::make_field(3, 1);
  MatrixCode C = random_code(F3, 2, 2, 2, rng);
  REQUIRE_THROWS_AS(rank_spectrum(C, 1), BudgetError);
}

TEST_CASE("inequivalence ladder reports the first separating invariant") {
  auto F2 = gf::make_field(2, 1);
  MatrixCode one = rankcode::make_code(F2, 2, 2, {mat(2, 2, {1, 0, 0, 1})});
  MatrixCode two = rankcode::make_code(
      F2, 2, 2, {mat(2, 2, {1, 0, 0, 0}), mat(2, 2, {0, 0, 0, 1})});

  SUBCASE("dimension") {
    InequivResult r = inequivalence_witness(one, two);
    REQUIRE(r.distinguished);
    REQUIRE(r.invariant == "dimension");
    REQUIRE(r.value1 == std::vector<uint64_t>({1}));
    REQUIRE(r.value2 == std::vector<uint64_t>({2}));
  }

  SUBCASE("minimum rank") {
    MatrixCode low = rankcode::make_code(F2, 2, 2, {mat(2, 2, {1, 0, 0, 0})});
    InequivResult r = inequivalence_witness(one, low);
    REQUIRE(r.distinguished);
    REQUIRE(r.invariant == "min_rank");
    REQUIRE(r.value1 == std::vector<uint64_t>({2}));
    REQUIRE(r.value2 == std::vector<uint64_t>({1}));
  }

  SUBCASE("rank spectrum") {
    // Both two-dimensional with minimum rank 1; one is all rank ones, the
    // other holds an invertible coset.
    MatrixCode flat = rankcode::make_code(
        F2, 2, 2, {mat(2, 2, {1, 0, 0, 0}), mat(2, 2, {0, 1, 0, 0})});
    InequivResult r = inequivalence_witness(flat, two);
    REQUIRE(r.distinguished);
    REQUIRE(r.invariant == "rank_spectrum");
    REQUIRE(r.value1 == std::vector<uint64_t>({0, 3, 0}));
    REQUIRE(r.value2 == std::vector<uint64_t>({0, 2, 1}));
  }

  SUBCASE("transposed partners exhaust the ladder") {
    // Diagonal span versus antidiagonal span: equivalent via transpose and
    // permutation, so every invariant agrees and the climb is logged.
    MatrixCode anti = rankcode::make_code(
        F2, 2, 2, {mat(2, 2, {0, 1, 0, 0}), mat(2, 2, {0, 0, 1, 0})});
    InequivResult r = inequivalence_witness(two, anti);
    REQUIRE(!r.distinguished);
    REQUIRE(r.invariant.empty());
    REQUIRE(r.note.find("indistinguishable through") != std::string::npos);
  }

  SUBCASE("mismatched ambients are a usage error") {
    MatrixCode wide = rankcode::make_code(F2, 2, 3,
                                          {mat(2, 3, {1, 0, 0, 0, 1, 0})});
    REQUIRE_THROWS_AS(inequivalence_witness(one, wide), UsageError);
  }
}

TEST_CASE("tensor argument accepts dependent and zero slices") {
  auto F2 = gf::make_field(2, 1);
  Mat A = mat(2, 2, {1, 0, 0, 1});
  Mat B = mat(2, 2, {0, 1, 0, 0});
  Mat Z(2, 2);
  Mat AB = mat(2, 2, {1, 1, 0, 1});
  Tensor3 X = tensor::from_slices({A, Z, B, AB});
  MatrixCode C = rankcode::make_code(F2, 2, 2, {A, B});
  TrkResult rx = tensor_rank(F2, X);
  TrkResult rc = tensor_rank(C);
  REQUIRE(rx.cert.exact);
  REQUIRE(rx.cert.upper.length() == rc.cert.upper.length());
  // The certificate lives on the span, two-dimensional here.
  REQUIRE(tensor::to_coordinates(*F2, rx.cert.upper) ==
          rankcode::generator_tensor(C));
}

TEST_CASE("usage guards") {
  auto F2 = gf::make_field(2, 1);
  MatrixCode C = rankcode::make_code(F2, 2, 2, {mat(2, 2, {1, 0, 0, 1})});
  SearchConfig bad;
  bad.node_budget = 0;
  REQUIRE_THROWS_AS(tensor_rank(C, bad), UsageError);
  bad.node_budget = 1;
  bad.worker_count = 0;
  REQUIRE_THROWS_AS(tensor_rank(C, bad), UsageError);
  MatrixCode zero = rankcode::make_code(F2, 2, 2, {Mat(2, 2)});
  REQUIRE_THROWS_AS(tensor_rank(zero), UsageError);
  REQUIRE_THROWS_AS(gen_tensor_ranks(zero), UsageError);
  REQUIRE_THROWS_AS(mtr_verdict(zero), UsageError);
  REQUIRE_THROWS_AS(rank_spectrum(zero), UsageError);
  REQUIRE_THROWS_AS(tensor_rank(F2, Tensor3()), UsageError);
}
