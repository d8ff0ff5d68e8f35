#include "rktensor/rankcode.hpp"

#include <algorithm>
#include <random>

namespace rkt::rankcode {

Mat MatrixCode::basis_matrix(uint32_t i) const {
  Mat M(n, m);
  for (uint32_t t = 0; t < n * m; ++t) M.a[t] = gen.at(i, t);
  return M;
}

MatrixCode from_vectorized(const FieldPtr& F, uint32_t n, uint32_t m,
                           const Mat& rows) {
  require(F != nullptr, "null field");
  require(n >= 1 && m >= 1, "code needs positive matrix dimensions");
  require(rows.cols == n * m || rows.rows == 0,
          "vectorized rows must have length n*m");
  Subspace S = linalg::make_subspace(*F, rows.rows ? rows : Mat(0, n * m), n * m);
  MatrixCode C;
  C.field = F;
  C.n = n;
  C.m = m;
  C.gen = S.basis;
  return C;
}

MatrixCode make_code(const FieldPtr& F, uint32_t n, uint32_t m,
                     const std::vector<Mat>& basis) {
  Mat rows(uint32_t(basis.size()), n * m);
  for (uint32_t i = 0; i < basis.size(); ++i) {
    require(basis[i].rows == n && basis[i].cols == m,
            "basis matrix shape mismatch");
    for (uint32_t t = 0; t < n * m; ++t) rows.at(i, t) = basis[i].a[t];
  }
  return from_vectorized(F, n, m, rows);
}

Mat codeword(const MatrixCode& C, const std::vector<uint32_t>& coeff) {
  require(coeff.size() == C.k(), "coefficient length mismatch");
  const Field& F = *C.field;
  Mat M(C.n, C.m);
  for (uint32_t i = 0; i < C.k(); ++i) {
    if (!coeff[i]) continue;
    for (uint32_t t = 0; t < C.n * C.m; ++t)
      M.a[t] = F.add(M.a[t], F.mul(coeff[i], C.gen.at(i, t)));
  }
  return M;
}

bool contains(const MatrixCode& C, const Mat& M) {
  require(M.rows == C.n && M.cols == C.m, "matrix shape mismatch");
  Subspace S;
  S.ambient = C.n * C.m;
  S.basis = C.gen;
  S.pivots.clear();
  // Recover pivots from the canonical generator.
  for (uint32_t r = 0; r < C.gen.rows; ++r) {
    for (uint32_t c = 0; c < C.gen.cols; ++c)
      if (C.gen.at(r, c)) {
        S.pivots.push_back(c);
        break;
      }
  }
  return linalg::contains_vec(*C.field, S, M.a);
}

uint64_t singleton_dim_bound(uint32_t n, uint32_t m, uint32_t d) {
  uint32_t mn = std::min(n, m), mx = std::max(n, m);
  require(d >= 1 && d <= mn, "distance out of range");
  return uint64_t(mx) * (mn - d + 1);
}

namespace {

// Exact scan for characteristic-2 prime fields: codeword rows bit packed,
// Gray-code walk over nonzero coefficient patterns.
DistResult min_distance_gf2(const MatrixCode& C) {
  const uint32_t k = C.k(), n = C.n, m = C.m;
  std::vector<std::vector<uint64_t>> basis(k, std::vector<uint64_t>(n, 0));
  for (uint32_t i = 0; i < k; ++i)
    for (uint32_t j = 0; j < n; ++j)
      for (uint32_t l = 0; l < m; ++l)
        if (C.gen.at(i, j * m + l)) basis[i][j] |= uint64_t(1) << l;
  std::vector<uint64_t> cur(n, 0);
  uint64_t total = (uint64_t(1) << k) - 1;
  uint32_t best = UINT32_MAX;
  std::vector<uint64_t> best_words(n, 0);
  uint64_t gray_prev = 0;
  std::vector<uint64_t> scratch(n);
  for (uint64_t it = 1; it <= total; ++it) {
    uint64_t gray = it ^ (it >> 1);
    uint64_t diff = gray ^ gray_prev;
    gray_prev = gray;
    unsigned idx = unsigned(__builtin_ctzll(diff));
    for (uint32_t j = 0; j < n; ++j) cur[j] ^= basis[idx][j];
    // rank of the packed n x m matrix
    scratch = cur;
    uint32_t r = 0;
    for (uint32_t col = 0; col < m && r < n; ++col) {
      uint64_t bit = uint64_t(1) << col;
      uint32_t piv = n;
      for (uint32_t i2 = r; i2 < n; ++i2)
        if (scratch[i2] & bit) {
          piv = i2;
          break;
        }
      if (piv == n) continue;
      std::swap(scratch[piv], scratch[r]);
      for (uint32_t i2 = r + 1; i2 < n; ++i2)
        if (scratch[i2] & bit) scratch[i2] ^= scratch[r];
      ++r;
    }
    if (r < best) {
      best = r;
      best_words = cur;
      if (best == 1) break;
    }
  }
  DistResult res;
  res.exact = true;
  res.d = res.lower = res.upper = best;
  res.witness = Mat(n, m);
  for (uint32_t j = 0; j < n; ++j)
    for (uint32_t l = 0; l < m; ++l)
      res.witness.at(j, l) = uint32_t((best_words[j] >> l) & 1u);
  return res;
}

}  // namespace

DistResult min_distance(const MatrixCode& C, uint64_t cap, uint64_t samples,
                        uint64_t seed) {
  require(C.k() >= 1, "nonzero code required");
  const Field& F = *C.field;
  const uint32_t k = C.k();
  // Number of projective classes (q^k-1)/(q-1), overflow-safely.
  long double classes = (std::pow((long double)F.q(), (long double)k) - 1) /
                        (F.q() - 1);
  if (classes <= (long double)cap) {
    if (F.q() == 2 && C.m <= 64 && k <= 62) return min_distance_gf2(C);
    DistResult res;
    uint32_t best = UINT32_MAX;
    Mat bw;
    linalg::enumerate_projective(F, k, [&](const std::vector<uint32_t>& c) {
      Mat M = codeword(C, c);
      uint32_t r = linalg::rank(F, M);
      if (r < best) {
        best = r;
        bw = M;
      }
      return best > 1;
    });
    res.exact = true;
    res.d = res.lower = res.upper = best;
    res.witness = std::move(bw);
    return res;
  }
  // Sampled upper bound plus the dimension-derived ceiling; never exact.
  DistResult res;
  res.exact = false;
  std::mt19937_64 rng(seed);
  uint32_t best = UINT32_MAX;
  Mat bw;
  for (uint64_t s = 0; s < samples; ++s) {
    std::vector<uint32_t> c(k, 0);
    bool nz = false;
    while (!nz) {
      for (auto& x : c) x = uint32_t(rng() % F.q());
      for (uint32_t x : c) nz = nz || x;
    }
    Mat M = codeword(C, c);
    uint32_t r = linalg::rank(F, M);
    if (r < best) {
      best = r;
      bw = M;
      if (best == 1) break;
    }
  }
  uint32_t mn = std::min(C.n, C.m), mx = std::max(C.n, C.m);
  uint32_t singleton_d = mn - uint32_t((k + mx - 1) / mx) + 1;
  res.lower = 1;
  res.upper = std::min(best, singleton_d);
  res.witness = std::move(bw);
  res.note = "class count exceeds cap; sampled upper bound with dimension ceiling";
  return res;
}

MatrixCode dual(const MatrixCode& C) {
  Mat K = linalg::right_kernel(*C.field, C.gen.rows ? C.gen : Mat(0, C.n * C.m));
  if (C.gen.rows == 0) K = linalg::identity(C.n * C.m);
  return from_vectorized(C.field, C.n, C.m, K);
}

SupportPair supports(const MatrixCode& C) {
  const Field& F = *C.field;
  Mat cols(C.k() * C.m, C.n);
  Mat rows(C.k() * C.n, C.m);
  for (uint32_t i = 0; i < C.k(); ++i) {
    Mat M = C.basis_matrix(i);
    for (uint32_t l = 0; l < C.m; ++l)
      for (uint32_t j = 0; j < C.n; ++j) cols.at(i * C.m + l, j) = M.at(j, l);
    for (uint32_t j = 0; j < C.n; ++j)
      for (uint32_t l = 0; l < C.m; ++l) rows.at(i * C.n + j, l) = M.at(j, l);
  }
  SupportPair S;
  S.col = linalg::make_subspace(F, cols, C.n);
  S.row = linalg::make_subspace(F, rows, C.m);
  S.nondegenerate = S.col.dim() == C.n && S.row.dim() == C.m;
  return S;
}

Tensor3 generator_tensor(const MatrixCode& C) {
  require(C.k() >= 1, "nonzero code required");
  std::vector<Mat> slices;
  for (uint32_t i = 0; i < C.k(); ++i) slices.push_back(C.basis_matrix(i));
  return tensor::from_slices(slices);
}

Tensor3 parity_tensor(const MatrixCode& C) { return generator_tensor(dual(C)); }

MatrixCode apply_equivalence(const MatrixCode& C, const Mat& A, const Mat& B,
                             bool transpose) {
  const Field& F = *C.field;
  uint32_t n = C.n, m = C.m;
  if (transpose) {
    require(n == m, "transpose equivalence needs square matrices");
  }
  uint32_t rn = transpose ? m : n;  // row count after optional transpose
  uint32_t rm = transpose ? n : m;
  require(A.rows == rn && A.cols == rn && linalg::rank(F, A) == rn,
          "left transform must be invertible of matching size");
  require(B.rows == rm && B.cols == rm && linalg::rank(F, B) == rm,
          "right transform must be invertible of matching size");
  std::vector<Mat> basis;
  for (uint32_t i = 0; i < C.k(); ++i) {
    Mat M = C.basis_matrix(i);
    if (transpose) M = linalg::transpose(M);
    basis.push_back(linalg::mat_mul(F, linalg::mat_mul(F, A, M), B));
  }
  return make_code(C.field, rn, rm, basis);
}

namespace {

void check_index_set(const std::vector<uint32_t>& I, uint32_t bound) {
  require(!I.empty() && I.size() < bound, "index set size out of range");
  for (size_t i = 0; i < I.size(); ++i) {
    require(I[i] < bound, "index out of range");
    if (i) require(I[i] > I[i - 1], "index set must be strictly increasing");
  }
}

}  // namespace

MatrixCode puncture(const MatrixCode& C, Side side, const Mat& T,
                    const std::vector<uint32_t>& I) {
  const Field& F = *C.field;
  uint32_t nd = side == Side::row ? C.n : C.m;
  check_index_set(I, nd);
  require(T.rows == nd && T.cols == nd && linalg::rank(F, T) == nd,
          "transform must be invertible");
  std::vector<bool> drop(nd, false);
  for (uint32_t i : I) drop[i] = true;
  std::vector<Mat> basis;
  for (uint32_t i = 0; i < C.k(); ++i) {
    Mat M = C.basis_matrix(i);
    Mat TM = side == Side::row ? linalg::mat_mul(F, T, M)
                               : linalg::mat_mul(F, M, T);
    uint32_t keep = nd - uint32_t(I.size());
    Mat P = side == Side::row ? Mat(keep, C.m) : Mat(C.n, keep);
    uint32_t t = 0;
    for (uint32_t idx = 0; idx < nd; ++idx) {
      if (drop[idx]) continue;
      if (side == Side::row) {
        for (uint32_t l = 0; l < C.m; ++l) P.at(t, l) = TM.at(idx, l);
      } else {
        for (uint32_t j = 0; j < C.n; ++j) P.at(j, t) = TM.at(j, idx);
      }
      ++t;
    }
    basis.push_back(std::move(P));
  }
  uint32_t nn = side == Side::row ? nd - uint32_t(I.size()) : C.n;
  uint32_t nm = side == Side::row ? C.m : nd - uint32_t(I.size());
  return make_code(C.field, nn, nm, basis);
}

MatrixCode shorten(const MatrixCode& C, Side side, const Mat& T,
                   const std::vector<uint32_t>& I) {
  const Field& F = *C.field;
  uint32_t nd = side == Side::row ? C.n : C.m;
  check_index_set(I, nd);
  require(T.rows == nd && T.cols == nd && linalg::rank(F, T) == nd,
          "transform must be invertible");
  // Constraints: the I-part of the transformed codeword vanishes.
  uint32_t other = side == Side::row ? C.m : C.n;
  Mat K(C.k(), uint32_t(I.size()) * other);
  for (uint32_t i = 0; i < C.k(); ++i) {
    Mat M = C.basis_matrix(i);
    Mat TM = side == Side::row ? linalg::mat_mul(F, T, M)
                               : linalg::mat_mul(F, M, T);
    uint32_t t = 0;
    for (uint32_t idx : I) {
      for (uint32_t s = 0; s < other; ++s) {
        K.at(i, t++) = side == Side::row ? TM.at(idx, s) : TM.at(s, idx);
      }
    }
  }
  Mat null_basis = linalg::right_kernel(F, linalg::transpose(K));
  // Rows of null_basis are coefficient vectors of the vanishing subcode.
  std::vector<bool> drop(nd, false);
  for (uint32_t i : I) drop[i] = true;
  std::vector<Mat> basis;
  for (uint32_t r = 0; r < null_basis.rows; ++r) {
    std::vector<uint32_t> coeff(null_basis.a.begin() + size_t(r) * C.k(),
                                null_basis.a.begin() + size_t(r + 1) * C.k());
    Mat M = codeword(C, coeff);
    Mat TM = side == Side::row ? linalg::mat_mul(F, T, M)
                               : linalg::mat_mul(F, M, T);
    uint32_t keep = nd - uint32_t(I.size());
    Mat P = side == Side::row ? Mat(keep, C.m) : Mat(C.n, keep);
    uint32_t t = 0;
    for (uint32_t idx = 0; idx < nd; ++idx) {
      if (drop[idx]) continue;
      if (side == Side::row) {
        for (uint32_t l = 0; l < C.m; ++l) P.at(t, l) = TM.at(idx, l);
      } else {
        for (uint32_t j = 0; j < C.n; ++j) P.at(j, t) = TM.at(j, idx);
      }
      ++t;
    }
    basis.push_back(std::move(P));
  }
  uint32_t nn = side == Side::row ? nd - uint32_t(I.size()) : C.n;
  uint32_t nm = side == Side::row ? C.m : nd - uint32_t(I.size());
  return make_code(C.field, nn, nm, basis);
}

DistanceCriteria distance_criteria(const MatrixCode& C, uint32_t d,
                                   uint64_t cap) {
  const Field& F = *C.field;
  require(C.k() >= 1, "nonzero code required");
  require(d >= 2 && d <= std::min(C.n, C.m), "need 2 <= d <= min(n,m)");
  uint32_t r_big = C.n - d + 1;   // compressed row count, puncture/shorten
  uint32_t r_small = d - 1;       // compression width, parity route
  require(linalg::gaussian_binomial(F.q(), C.n, r_big) <= cap &&
              linalg::gaussian_binomial(F.q(), C.n, r_small) <= cap,
          "criteria enumeration exceeds cap");

  DistanceCriteria out;
  out.via_puncture = true;
  out.via_shorten = true;
  out.via_parity = true;

  // Invertible completion of a canonical r x n subspace basis: append unit
  // rows on the non-pivot columns.
  auto complete = [&](const Mat& U) {
    std::vector<bool> piv(C.n, false);
    for (uint32_t r = 0; r < U.rows; ++r)
      for (uint32_t c = 0; c < C.n; ++c)
        if (U.at(r, c)) {
          piv[c] = true;
          break;
        }
    Mat T(C.n, C.n);
    for (uint32_t r = 0; r < U.rows; ++r)
      for (uint32_t c = 0; c < C.n; ++c) T.at(r, c) = U.at(r, c);
    uint32_t t = U.rows;
    for (uint32_t c = 0; c < C.n; ++c)
      if (!piv[c]) T.at(t++, c) = 1;
    internal_check(t == C.n, "completion failed");
    return T;
  };

  // Route 1: every puncture onto n-d+1 transformed rows keeps dimension k.
  linalg::enumerate_subspaces(F, C.n, r_big, [&](const Mat& U) {
    Mat T = complete(U);
    std::vector<uint32_t> I;
    for (uint32_t i = r_big; i < C.n; ++i) I.push_back(i);
    MatrixCode P = puncture(C, Side::row, T, I);
    if (P.k() != C.k()) out.via_puncture = false;
    return out.via_puncture;
  });

  // Route 2: every shortening on n-d+1 transformed rows is the zero code.
  linalg::enumerate_subspaces(F, C.n, r_big, [&](const Mat& U) {
    Mat T = complete(U);
    std::vector<uint32_t> I;
    for (uint32_t i = 0; i < r_big; ++i) I.push_back(i);
    MatrixCode S = shorten(C, Side::row, T, I);
    if (S.k() != 0) {
      out.via_shorten = false;
      // Recover a witness codeword: a nonzero M with U M = 0 has rank < d.
      Mat K(C.k(), r_big * C.m);
      for (uint32_t i = 0; i < C.k(); ++i) {
        Mat M = C.basis_matrix(i);
        Mat UM = linalg::mat_mul(F, U, M);
        for (uint32_t t = 0; t < r_big * C.m; ++t) K.at(i, t) = UM.a[t];
      }
      Mat nulls = linalg::right_kernel(F, linalg::transpose(K));
      internal_check(nulls.rows > 0, "shorten witness retrieval failed");
      std::vector<uint32_t> coeff(nulls.a.begin(), nulls.a.begin() + C.k());
      out.witness = codeword(C, coeff);
      out.has_witness = true;
    }
    return out.via_shorten;
  });

  // Route 3: every d-1 row compression of the parity tensor has full frontal
  // slice space. The full matrix space has an empty parity tensor and never
  // satisfies d >= 2.
  MatrixCode D = dual(C);
  if (D.k() == 0) {
    out.via_parity = false;
  } else {
    Tensor3 Y = generator_tensor(D);
    linalg::enumerate_subspaces(F, C.n, r_small, [&](const Mat& A) {
      Tensor3 YA = tensor::tensor_mult(F, 2, A, Y);
      if (tensor::slice_dim(F, YA, 1) != r_small * C.m) out.via_parity = false;
      return out.via_parity;
    });
  }

  internal_check(out.via_puncture == out.via_shorten &&
                     out.via_shorten == out.via_parity,
                 "distance criteria disagree");
  out.holds = out.via_puncture;
  return out;
}

}  // namespace rkt::rankcode
