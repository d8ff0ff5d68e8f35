#include "rktensor/blockcode.hpp"

#include <algorithm>
#include <cmath>

namespace rkt::blockcode {

BlockCode make_block_code(const FieldPtr& F, uint32_t N, const Mat& rows) {
  require(F != nullptr, "null field");
  require(N >= 1, "block length must be positive");
  require(rows.cols == N || rows.rows == 0, "generator rows must have length N");
  linalg::Subspace S =
      linalg::make_subspace(*F, rows.rows ? rows : Mat(0, N), N);
  BlockCode C;
  C.field = F;
  C.N = N;
  C.gen = S.basis;
  return C;
}

std::vector<uint32_t> codeword(const BlockCode& C,
                               const std::vector<uint32_t>& coeff) {
  require(coeff.size() == C.k(), "coefficient length mismatch");
  const Field& F = *C.field;
  std::vector<uint32_t> v(C.N, 0);
  for (uint32_t i = 0; i < C.k(); ++i) {
    if (!coeff[i]) continue;
    for (uint32_t t = 0; t < C.N; ++t)
      v[t] = F.add(v[t], F.mul(coeff[i], C.gen.at(i, t)));
  }
  return v;
}

bool contains(const BlockCode& C, const std::vector<uint32_t>& v) {
  require(v.size() == C.N, "vector length mismatch");
  linalg::Subspace S = linalg::make_subspace(*C.field, C.gen, C.N);
  return linalg::contains_vec(*C.field, S, v);
}

BlockCode dual(const BlockCode& C) {
  Mat K = C.k() ? linalg::right_kernel(*C.field, C.gen)
                : linalg::identity(C.N);
  return make_block_code(C.field, C.N, K);
}

uint32_t hamming_weight(const std::vector<uint32_t>& v) {
  uint32_t w = 0;
  for (uint32_t x : v) w += x != 0;
  return w;
}

uint32_t hamming_min_distance(const BlockCode& C, uint64_t cap) {
  require(C.k() >= 1, "nonzero code required");
  const Field& F = *C.field;
  long double classes =
      (std::pow((long double)F.q(), (long double)C.k()) - 1) / (F.q() - 1);
  require(classes <= (long double)cap, "codeword enumeration exceeds cap");
  uint32_t best = UINT32_MAX;
  linalg::enumerate_projective(F, C.k(), [&](const std::vector<uint32_t>& c) {
    best = std::min(best, hamming_weight(codeword(C, c)));
    return best > 1;
  });
  return best;
}

uint32_t evaluate(const Field& F, const std::vector<uint32_t>& f,
                  const EvalPoint& theta) {
  require(!f.empty(), "empty coefficient vector");
  if (theta.inf) return f.back();
  require(theta.val < F.q(), "evaluation point outside the field");
  uint32_t r = 0;
  for (size_t j = f.size(); j-- > 0;) r = F.add(F.mul(r, theta.val), f[j]);
  return r;
}

BlockCode cauchy_code(const FieldPtr& F, const std::vector<EvalPoint>& alpha,
                      const std::vector<uint32_t>& beta, uint32_t k) {
  require(F != nullptr, "null field");
  uint32_t N = uint32_t(alpha.size());
  require(N >= 2, "need at least two evaluation points");
  require(beta.size() == alpha.size(), "alpha and beta length mismatch");
  require(k >= 1 && k <= N - 1, "need 1 <= k <= N-1");
  uint32_t infs = 0;
  for (uint32_t i = 0; i < N; ++i) {
    require(beta[i] < F->q(), "beta entry outside the field");
    if (alpha[i].inf) {
      ++infs;
      continue;
    }
    require(alpha[i].val < F->q(), "alpha entry outside the field");
    for (uint32_t j = i + 1; j < N; ++j)
      require(alpha[j].inf || alpha[j].val != alpha[i].val,
              "evaluation points must be distinct");
  }
  require(infs <= 1, "evaluation points must be distinct");
  // Row j evaluates the monomial with x-degree j; at infinity only the top
  // monomial survives.
  Mat G(k, N);
  for (uint32_t j = 0; j < k; ++j)
    for (uint32_t i = 0; i < N; ++i)
      G.at(j, i) = alpha[i].inf
                       ? (j == k - 1 ? beta[i] : 0)
                       : F->mul(beta[i], F->pow(alpha[i].val, j));
  return make_block_code(F, N, G);
}

namespace {

bool factor_prime_power(uint64_t q, uint32_t* p, uint32_t* e) {
  if (q < 2) return false;
  uint64_t base = 0;
  for (uint64_t t = 2; t * t <= q; ++t)
    if (q % t == 0) {
      base = t;
      break;
    }
  if (base == 0) base = q;  // q itself prime
  uint32_t exp = 0;
  uint64_t rest = q;
  while (rest % base == 0) {
    rest /= base;
    ++exp;
  }
  if (rest != 1) return false;
  *p = uint32_t(base);
  *e = exp;
  return true;
}

uint64_t griesmer(uint64_t q, uint32_t k, uint32_t d) {
  uint64_t total = 0, denom = 1;
  for (uint32_t i = 0; i < k; ++i) {
    total += (d + denom - 1) / denom;
    if (denom <= (uint64_t(1) << 62) / q) denom *= q;
    // once the denominator passes d each remaining term is 1
  }
  return total;
}

enum class SearchOutcome { found, none, over_budget };

// Complete search for an [N,k] code with minimum weight >= d: every linear
// code is permutation equivalent to one with a systematic generator, so
// scanning [I | P] over all P decides existence.
SearchOutcome search_systematic(const Field& F, uint32_t N, uint32_t k,
                                uint32_t d, uint64_t budget) {
  const uint64_t q = F.q();
  uint32_t free_entries = k * (N - k);
  long double classes =
      (std::pow((long double)q, (long double)k) - 1) / (q - 1);
  long double cost = std::pow((long double)q, (long double)free_entries) *
                     classes * N;
  if (cost > (long double)budget) return SearchOutcome::over_budget;
  Mat P(k, N - k);
  while (true) {
    bool ok = true;
    linalg::enumerate_projective(F, k, [&](const std::vector<uint32_t>& x) {
      uint32_t w = 0;
      for (uint32_t i = 0; i < k; ++i) w += x[i] != 0;
      // stop once the weight already clears d, more columns only add
      for (uint32_t c = 0; c < N - k && w < d; ++c) {
        uint32_t s = 0;
        for (uint32_t i = 0; i < k; ++i)
          if (x[i]) s = F.add(s, F.mul(x[i], P.at(i, c)));
        w += s != 0;
      }
      if (w < d) ok = false;
      return ok;
    });
    if (ok) return SearchOutcome::found;
    // next P, odometer over the entries
    uint32_t t = 0;
    while (t < free_entries) {
      if (++P.a[t] < q) break;
      P.a[t++] = 0;
    }
    if (t == free_entries) return SearchOutcome::none;
  }
}

}  // namespace

NqBounds nq_bounds(uint64_t q, uint32_t k, uint32_t d, uint64_t search_budget) {
  require(q < (uint64_t(1) << 32), "q too large");
  uint32_t p = 0, e = 0;
  require(factor_prime_power(q, &p, &e), "q must be a prime power");
  require(k >= 1 && d >= 1, "k and d must be positive");
  require(uint64_t(k) + d - 1 <= (uint64_t(1) << 32), "parameters too large");
  NqBounds out;
  uint64_t singleton = uint64_t(k) + d - 1;
  out.lower = std::max(singleton, griesmer(q, k, d));
  if (d == 1) {
    out.upper = k;
    out.method = "full space";
  } else if (k == 1) {
    out.upper = d;
    out.method = "repetition";
  } else if (d == 2) {
    out.upper = uint64_t(k) + 1;
    out.method = "single parity check";
  } else if (q >= uint64_t(k) + d - 2) {
    // Evaluation code on k+d-1 projective points, MDS.
    out.upper = singleton;
    out.method = "projective evaluation code";
  } else {
    // Concatenate evaluation-code blocks of dimension k: each block of
    // distance d_i <= q-k+2 contributes k+d_i-1 columns, and distances add
    // across blocks. d_i = 1 blocks are identity copies, so this covers
    // plain replication when q < k.
    uint64_t dmax = q + 2 > uint64_t(k) ? q + 2 - k : 1;
    uint64_t t = (d + dmax - 1) / dmax;
    out.upper = t * uint64_t(k - 1) + d;
    out.method = dmax > 1 ? "concatenated evaluation blocks"
                          : "replicated identity";
    auto F = gf::make_field(p, e);
    for (uint64_t N = out.lower; N < out.upper; ++N) {
      SearchOutcome r =
          search_systematic(*F, uint32_t(N), k, d, search_budget);
      if (r == SearchOutcome::over_budget) break;
      if (r == SearchOutcome::found) {
        out.upper = N;
        out.method = "exhaustive search";
        break;
      }
      out.lower = N + 1;  // completed search ruled length N out
    }
  }
  internal_check(out.lower <= out.upper, "bound inversion");
  out.exact = out.lower == out.upper;
  return out;
}

std::vector<uint32_t> psi(const FieldPtr& F, const std::vector<Mat>& A,
                          const Mat& M) {
  require(F != nullptr, "null field");
  require(!A.empty(), "empty rank-one list");
  uint32_t n = A[0].rows, m = A[0].cols;
  uint32_t R = uint32_t(A.size());
  Mat rows(R, n * m);
  for (uint32_t r = 0; r < R; ++r) {
    require(A[r].rows == n && A[r].cols == m, "rank-one shapes differ");
    require(linalg::rank(*F, A[r]) == 1, "list entries must have rank one");
    for (uint32_t t = 0; t < n * m; ++t) rows.at(r, t) = A[r].a[t];
  }
  linalg::RrefTransform RT = linalg::rref_with_transform(*F, rows);
  require(RT.rank == R, "rank-one list must be linearly independent");
  require(M.rows == n && M.cols == m, "matrix shape mismatch");
  std::vector<uint32_t> coeffs;
  require(linalg::express_in_rows(*F, RT, M.a, &coeffs),
          "matrix outside the span of the list");
  return coeffs;
}

Mat phi(const Field& F, const Mat& V, const Mat& W,
        const std::vector<uint32_t>& x) {
  require(V.cols == W.cols && V.cols == x.size(), "shape mismatch");
  Mat out(V.rows, W.rows);
  for (uint32_t r = 0; r < V.cols; ++r) {
    if (!x[r]) continue;
    for (uint32_t i = 0; i < V.rows; ++i) {
      uint32_t vi = F.mul(V.at(i, r), x[r]);
      if (!vi) continue;
      for (uint32_t j = 0; j < W.rows; ++j)
        out.at(i, j) = F.add(out.at(i, j), F.mul(vi, W.at(j, r)));
    }
  }
  return out;
}

uint32_t phi_rank(const Field& F, const Mat& V, const Mat& W,
                  const std::vector<uint32_t>& c) {
  require(V.cols == W.cols && V.cols == c.size(), "shape mismatch");
  uint32_t direct = linalg::rank(F, phi(F, V, W, c));
  uint32_t R = V.cols;
  Mat Wc(W.rows, R);
  for (uint32_t i = 0; i < W.rows; ++i)
    for (uint32_t r = 0; r < R; ++r) Wc.at(i, r) = F.mul(W.at(i, r), c[r]);
  linalg::Subspace CV = linalg::make_subspace(F, V, R);
  linalg::Subspace CWc = linalg::make_subspace(F, Wc, R);
  uint32_t via_v =
      CV.dim() -
      linalg::intersect(F, CV, linalg::dual_complement(F, CWc)).dim();
  uint32_t via_w =
      CWc.dim() -
      linalg::intersect(F, CWc, linalg::dual_complement(F, CV)).dim();
  internal_check(direct == via_v && direct == via_w,
                 "rank formulas disagree");
  return direct;
}

TransferResult rank_weight_transfer(const BlockCode& C, const Mat& V,
                                    const Mat& W, uint64_t cap) {
  const Field& F = *C.field;
  require(C.k() >= 1, "nonzero code required");
  require(V.rows >= 1 && W.rows >= 1, "V and W need at least one row");
  require(V.cols == C.N && W.cols == C.N, "V and W must have R columns");
  require(linalg::rank(F, V) == V.rows && linalg::rank(F, W) == W.rows,
          "V and W must have full row rank; factor through full-rank "
          "matrices first");
  long double classes =
      (std::pow((long double)F.q(), (long double)C.k()) - 1) / (F.q() - 1);
  require(classes <= (long double)cap, "codeword enumeration exceeds cap");

  TransferResult out;
  std::vector<Mat> images;
  for (uint32_t i = 0; i < C.k(); ++i) {
    std::vector<uint32_t> g(C.N);
    for (uint32_t t = 0; t < C.N; ++t) g[t] = C.gen.at(i, t);
    images.push_back(phi(F, V, W, g));
  }
  out.image = rankcode::make_code(C.field, V.rows, W.rows, images);
  out.dim = out.image.k();
  out.injective = out.dim == C.k();

  uint32_t best = UINT32_MAX;
  linalg::enumerate_projective(F, C.k(), [&](const std::vector<uint32_t>& c) {
    best = std::min(best, phi_rank(F, V, W, codeword(C, c)));
    return best > 0;
  });
  out.min_rank = best;

  // Rank-one expansion over the columns: only positions live in the code and
  // in both factors contribute a term.
  uint32_t terms = 0;
  for (uint32_t r = 0; r < C.N; ++r) {
    bool code_live = false, v_live = false, w_live = false;
    for (uint32_t i = 0; i < C.k(); ++i) code_live |= C.gen.at(i, r) != 0;
    for (uint32_t i = 0; i < V.rows; ++i) v_live |= V.at(i, r) != 0;
    for (uint32_t i = 0; i < W.rows; ++i) w_live |= W.at(i, r) != 0;
    terms += code_live && v_live && w_live;
  }
  out.trk_upper = terms;
  return out;
}

}  // namespace rkt::blockcode
