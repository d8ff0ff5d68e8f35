#include "rktensor/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace rkt::linalg {

Mat identity(uint32_t n) {
  Mat I(n, n);
  for (uint32_t i = 0; i < n; ++i) I.at(i, i) = 1;
  return I;
}

Mat transpose(const Mat& A) {
  Mat T(A.cols, A.rows);
  for (uint32_t i = 0; i < A.rows; ++i)
    for (uint32_t j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
  return T;
}

Mat mat_add(const Field& F, const Mat& A, const Mat& B) {
  require(A.rows == B.rows && A.cols == B.cols, "shape mismatch in add");
  Mat C(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = F.add(A.a[i], B.a[i]);
  return C;
}

Mat mat_sub(const Field& F, const Mat& A, const Mat& B) {
  require(A.rows == B.rows && A.cols == B.cols, "shape mismatch in sub");
  Mat C(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = F.sub(A.a[i], B.a[i]);
  return C;
}

Mat mat_mul(const Field& F, const Mat& A, const Mat& B) {
  require(A.cols == B.rows, "shape mismatch in mul");
  Mat C(A.rows, B.cols);
  for (uint32_t i = 0; i < A.rows; ++i) {
    for (uint32_t k = 0; k < A.cols; ++k) {
      uint32_t a = A.at(i, k);
      if (!a) continue;
      for (uint32_t j = 0; j < B.cols; ++j) {
        uint32_t b = B.at(k, j);
        if (b) C.at(i, j) = F.add(C.at(i, j), F.mul(a, b));
      }
    }
  }
  return C;
}

Mat mat_scale(const Field& F, uint32_t c, const Mat& A) {
  Mat B(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) B.a[i] = F.mul(c, A.a[i]);
  return B;
}

bool is_zero(const Mat& A) {
  for (uint32_t x : A.a)
    if (x) return false;
  return true;
}

Mat outer(const Field& F, const std::vector<uint32_t>& v,
          const std::vector<uint32_t>& w) {
  Mat M(uint32_t(v.size()), uint32_t(w.size()));
  for (uint32_t i = 0; i < M.rows; ++i) {
    if (!v[i]) continue;
    for (uint32_t j = 0; j < M.cols; ++j) M.at(i, j) = F.mul(v[i], w[j]);
  }
  return M;
}

Mat diag(const std::vector<uint32_t>& c) {
  Mat D(uint32_t(c.size()), uint32_t(c.size()));
  for (uint32_t i = 0; i < D.rows; ++i) D.at(i, i) = c[i];
  return D;
}

RrefResult rref(const Field& F, Mat A) {
  RrefResult res;
  uint32_t r = 0;
  std::vector<uint32_t> pivots;
  for (uint32_t col = 0; col < A.cols && r < A.rows; ++col) {
    uint32_t piv = A.rows;
    for (uint32_t i = r; i < A.rows; ++i)
      if (A.at(i, col)) {
        piv = i;
        break;
      }
    if (piv == A.rows) continue;
    if (piv != r)
      for (uint32_t j = 0; j < A.cols; ++j) std::swap(A.at(piv, j), A.at(r, j));
    uint32_t s = F.inv(A.at(r, col));
    if (s != 1)
      for (uint32_t j = col; j < A.cols; ++j) A.at(r, j) = F.mul(s, A.at(r, j));
    for (uint32_t i = 0; i < A.rows; ++i) {
      if (i == r) continue;
      uint32_t c0 = A.at(i, col);
      if (!c0) continue;
      for (uint32_t j = col; j < A.cols; ++j)
        A.at(i, j) = F.sub(A.at(i, j), F.mul(c0, A.at(r, j)));
    }
    pivots.push_back(col);
    ++r;
  }
  res.R = std::move(A);
  res.pivots = std::move(pivots);
  res.rank = r;
  return res;
}

uint32_t rank(const Field& F, const Mat& A) { return rref(F, A).rank; }

Mat inverse(const Field& F, const Mat& A) {
  require(A.rows == A.cols, "inverse of a non-square matrix");
  uint32_t n = A.rows;
  Mat aug(n, 2 * n);
  for (uint32_t i = 0; i < n; ++i) {
    for (uint32_t j = 0; j < n; ++j) aug.at(i, j) = A.at(i, j);
    aug.at(i, n + i) = 1;
  }
  RrefResult rr = rref(F, aug);
  require(rr.rank == n && (n == 0 || rr.pivots[n - 1] == n - 1),
          "matrix is singular");
  Mat inv(n, n);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j < n; ++j) inv.at(i, j) = rr.R.at(i, n + j);
  return inv;
}

RrefTransform rref_with_transform(const Field& F, const Mat& A) {
  uint32_t n = A.rows;
  Mat aug(n, A.cols + n);
  for (uint32_t i = 0; i < n; ++i) {
    for (uint32_t j = 0; j < A.cols; ++j) aug.at(i, j) = A.at(i, j);
    aug.at(i, A.cols + i) = 1;
  }
  // Eliminate on the left block only; the right block records the transform.
  RrefTransform out;
  uint32_t r = 0;
  for (uint32_t col = 0; col < A.cols && r < n; ++col) {
    uint32_t piv = n;
    for (uint32_t i = r; i < n; ++i)
      if (aug.at(i, col)) {
        piv = i;
        break;
      }
    if (piv == n) continue;
    if (piv != r)
      for (uint32_t j = 0; j < aug.cols; ++j) std::swap(aug.at(piv, j), aug.at(r, j));
    uint32_t s = F.inv(aug.at(r, col));
    if (s != 1)
      for (uint32_t j = 0; j < aug.cols; ++j) aug.at(r, j) = F.mul(s, aug.at(r, j));
    for (uint32_t i = 0; i < n; ++i) {
      if (i == r) continue;
      uint32_t c0 = aug.at(i, col);
      if (!c0) continue;
      for (uint32_t j = 0; j < aug.cols; ++j)
        aug.at(i, j) = F.sub(aug.at(i, j), F.mul(c0, aug.at(r, j)));
    }
    out.pivots.push_back(col);
    ++r;
  }
  out.rank = r;
  out.R = Mat(n, A.cols);
  out.T = Mat(n, n);
  for (uint32_t i = 0; i < n; ++i) {
    for (uint32_t j = 0; j < A.cols; ++j) out.R.at(i, j) = aug.at(i, j);
    for (uint32_t j = 0; j < n; ++j) out.T.at(i, j) = aug.at(i, A.cols + j);
  }
  return out;
}

bool express_in_rows(const Field& F, const RrefTransform& A,
                     const std::vector<uint32_t>& b,
                     std::vector<uint32_t>* coeffs) {
  require(b.size() == A.R.cols, "vector length mismatch");
  std::vector<uint32_t> res = b;
  std::vector<uint32_t> mu(A.R.rows, 0);
  for (uint32_t r = 0; r < A.rank; ++r) {
    uint32_t c = res[A.pivots[r]];
    if (!c) continue;
    mu[r] = c;
    for (uint32_t j = 0; j < A.R.cols; ++j)
      res[j] = F.sub(res[j], F.mul(c, A.R.at(r, j)));
  }
  for (uint32_t x : res)
    if (x) return false;
  if (coeffs) {
    // b = mu * R = mu * T * A_original.
    coeffs->assign(A.T.rows, 0);
    for (uint32_t j = 0; j < A.T.rows; ++j) {
      uint32_t acc = 0;
      for (uint32_t r = 0; r < A.R.rows; ++r)
        acc = F.add(acc, F.mul(mu[r], A.T.at(r, j)));
      (*coeffs)[j] = acc;
    }
  }
  return true;
}

Mat right_kernel(const Field& F, const Mat& A) {
  RrefResult rr = rref(F, A);
  std::vector<bool> is_pivot(A.cols, false);
  for (uint32_t p : rr.pivots) is_pivot[p] = true;
  std::vector<uint32_t> free_cols;
  for (uint32_t c = 0; c < A.cols; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Mat K(uint32_t(free_cols.size()), A.cols);
  for (uint32_t i = 0; i < K.rows; ++i) {
    uint32_t fc = free_cols[i];
    K.at(i, fc) = 1;
    for (uint32_t r = 0; r < rr.rank; ++r)
      K.at(i, rr.pivots[r]) = F.neg(rr.R.at(r, fc));
  }
  return K;
}

Subspace make_subspace(const Field& F, const Mat& rows, uint32_t ambient) {
  require(rows.cols == ambient || rows.rows == 0,
          "basis width must equal ambient dimension");
  Mat in = rows;
  if (in.rows == 0) in = Mat(0, ambient);
  RrefResult rr = rref(F, in);
  Subspace S;
  S.ambient = ambient;
  S.basis = Mat(rr.rank, ambient);
  for (uint32_t i = 0; i < rr.rank; ++i)
    for (uint32_t j = 0; j < ambient; ++j) S.basis.at(i, j) = rr.R.at(i, j);
  S.pivots = rr.pivots;
  return S;
}

Subspace zero_subspace(uint32_t ambient) {
  Subspace S;
  S.ambient = ambient;
  S.basis = Mat(0, ambient);
  return S;
}

Subspace full_subspace(uint32_t ambient) {
  Subspace S;
  S.ambient = ambient;
  S.basis = identity(ambient);
  S.pivots.resize(ambient);
  for (uint32_t i = 0; i < ambient; ++i) S.pivots[i] = i;
  return S;
}

namespace {

Mat stack_rows(const Mat& A, const Mat& B) {
  Mat C(A.rows + B.rows, A.cols);
  std::copy(A.a.begin(), A.a.end(), C.a.begin());
  std::copy(B.a.begin(), B.a.end(), C.a.begin() + A.a.size());
  return C;
}

}  // namespace

Subspace sum(const Field& F, const Subspace& a, const Subspace& b) {
  require(a.ambient == b.ambient, "ambient mismatch in sum");
  return make_subspace(F, stack_rows(a.basis, b.basis), a.ambient);
}

Subspace intersect(const Field& F, const Subspace& a, const Subspace& b) {
  require(a.ambient == b.ambient, "ambient mismatch in intersect");
  // Zassenhaus: rref of [A|A; B|0]; rows with zero left half carry the
  // intersection in their right half.
  uint32_t n = a.ambient;
  Mat Z(a.dim() + b.dim(), 2 * n);
  for (uint32_t i = 0; i < a.dim(); ++i)
    for (uint32_t j = 0; j < n; ++j) {
      Z.at(i, j) = a.basis.at(i, j);
      Z.at(i, n + j) = a.basis.at(i, j);
    }
  for (uint32_t i = 0; i < b.dim(); ++i)
    for (uint32_t j = 0; j < n; ++j) Z.at(a.dim() + i, j) = b.basis.at(i, j);
  RrefResult rr = rref(F, Z);
  Mat inter(0, n);
  std::vector<uint32_t> rows;
  for (uint32_t i = 0; i < rr.rank; ++i) {
    bool left_zero = true;
    for (uint32_t j = 0; j < n; ++j)
      if (rr.R.at(i, j)) {
        left_zero = false;
        break;
      }
    if (left_zero) rows.push_back(i);
  }
  inter = Mat(uint32_t(rows.size()), n);
  for (uint32_t i = 0; i < inter.rows; ++i)
    for (uint32_t j = 0; j < n; ++j) inter.at(i, j) = rr.R.at(rows[i], n + j);
  return make_subspace(F, inter, n);
}

bool contains_vec(const Field& F, const Subspace& S,
                  const std::vector<uint32_t>& v) {
  require(v.size() == S.ambient, "vector length mismatch");
  std::vector<uint32_t> res = v;
  for (uint32_t r = 0; r < S.dim(); ++r) {
    uint32_t c = res[S.pivots[r]];
    if (!c) continue;
    for (uint32_t j = 0; j < S.ambient; ++j)
      res[j] = F.sub(res[j], F.mul(c, S.basis.at(r, j)));
  }
  for (uint32_t x : res)
    if (x) return false;
  return true;
}

bool contains(const Field& F, const Subspace& outer, const Subspace& inner) {
  require(outer.ambient == inner.ambient, "ambient mismatch in contains");
  for (uint32_t i = 0; i < inner.dim(); ++i) {
    std::vector<uint32_t> row(inner.basis.a.begin() + size_t(i) * inner.ambient,
                              inner.basis.a.begin() + size_t(i + 1) * inner.ambient);
    if (!contains_vec(F, outer, row)) return false;
  }
  return true;
}

bool subspace_equal(const Subspace& a, const Subspace& b) {
  return a.ambient == b.ambient && a.basis == b.basis;
}

Subspace dual_complement(const Field& F, const Subspace& S) {
  Mat K = right_kernel(F, S.basis);
  return make_subspace(F, K, S.ambient);
}

std::string canonical_key(const Subspace& S) {
  std::string key;
  key.reserve(8 + S.basis.a.size() * 4);
  auto push32 = [&key](uint32_t x) {
    for (int i = 0; i < 4; ++i) key.push_back(char((x >> (8 * i)) & 0xff));
  };
  push32(S.ambient);
  push32(S.dim());
  for (uint32_t x : S.basis.a) push32(x);
  return key;
}

void enumerate_projective(const Field& F, uint32_t n,
                          const std::function<bool(const std::vector<uint32_t>&)>& cb) {
  // First nonzero coordinate is 1; free coordinates follow it. Iterate over
  // the position of the leading 1 and odometer the tail.
  std::vector<uint32_t> v(n, 0);
  for (uint32_t lead = 0; lead < n; ++lead) {
    std::fill(v.begin(), v.end(), 0);
    v[lead] = 1;
    uint32_t tail = n - lead - 1;
    while (true) {
      if (!cb(v)) return;
      // increment tail odometer (last coordinate fastest)
      uint32_t i = tail;
      while (i > 0) {
        uint32_t idx = lead + i;
        if (v[idx] + 1 < F.q()) {
          ++v[idx];
          break;
        }
        v[idx] = 0;
        --i;
      }
      if (i == 0) break;
    }
  }
}

std::vector<Mat> enumerate_rank_one(const Field& F, uint32_t n, uint32_t m,
                                    uint64_t cap) {
  require(n >= 1 && m >= 1, "rank-one enumeration needs positive dimensions");
  double logsz = double(n + m) * std::log2(double(F.q()));
  require(logsz <= std::log2(double(cap)) + 1e-9,
          "rank-one enumeration exceeds the configured cap");
  std::vector<Mat> out;
  std::vector<std::vector<uint32_t>> ws;
  enumerate_projective(F, m, [&](const std::vector<uint32_t>& w) {
    ws.push_back(w);
    return true;
  });
  enumerate_projective(F, n, [&](const std::vector<uint32_t>& v) {
    for (const auto& w : ws) out.push_back(outer(F, v, w));
    return true;
  });
  return out;
}

uint32_t trace_product(const Field& F, const Mat& X, const Mat& Y) {
  require(X.rows == Y.rows && X.cols == Y.cols, "shape mismatch in trace product");
  uint32_t acc = 0;
  for (size_t i = 0; i < X.a.size(); ++i)
    if (X.a[i] && Y.a[i]) acc = F.add(acc, F.mul(X.a[i], Y.a[i]));
  return acc;
}

Mat random_matrix(const Field& F, uint32_t rows, uint32_t cols,
                  std::mt19937_64& rng) {
  Mat A(rows, cols);
  for (auto& x : A.a) x = uint32_t(rng() % F.q());
  return A;
}

Mat random_invertible(const Field& F, uint32_t n, std::mt19937_64& rng) {
  for (int tries = 0; tries < 10000; ++tries) {
    Mat A = random_matrix(F, n, n, rng);
    if (rank(F, A) == n) return A;
  }
  throw InternalError("random invertible sampling failed");
}

uint64_t gaussian_binomial(uint64_t q, uint32_t n, uint32_t d) {
  if (d > n) return 0;
  // Product over i<d of (q^{n-i}-1)/(q^{i+1}-1), computed as exact integers.
  unsigned __int128 num = 1;
  const unsigned __int128 cap128 = ~(uint64_t)0;
  std::vector<uint64_t> denom;
  for (uint32_t i = 0; i < d; ++i) {
    uint64_t t = 1;
    for (uint32_t j = 0; j < n - i; ++j) {
      t *= q;
      require(t != 0, "gaussian binomial overflow");
    }
    num *= (unsigned __int128)(t - 1);
    uint64_t u = 1;
    for (uint32_t j = 0; j < i + 1; ++j) u *= q;
    denom.push_back(u - 1);
    // Divide greedily to keep the accumulator small.
    for (auto& dd : denom) {
      if (dd != 1 && num % dd == 0) {
        num /= dd;
        dd = 1;
      }
    }
    require(num <= cap128, "gaussian binomial overflow");
  }
  for (uint64_t dd : denom)
    if (dd != 1) {
      internal_check(num % dd == 0, "gaussian binomial divisibility");
      num /= dd;
    }
  require(num <= (unsigned __int128)(~(uint64_t)0), "gaussian binomial overflow");
  return uint64_t(num);
}

void enumerate_subspaces(const Field& F, uint32_t ambient, uint32_t d,
                         const std::function<bool(const Mat&)>& cb) {
  require(d <= ambient, "subspace dimension exceeds ambient");
  if (d == 0) {
    cb(Mat(0, ambient));
    return;
  }
  // Pivot columns: lexicographically ascending combinations.
  std::vector<uint32_t> piv(d);
  for (uint32_t i = 0; i < d; ++i) piv[i] = i;
  auto next_comb = [&]() -> bool {
    int i = int(d) - 1;
    while (i >= 0 && piv[i] == ambient - d + i) --i;
    if (i < 0) return false;
    ++piv[i];
    for (uint32_t j = uint32_t(i) + 1; j < d; ++j) piv[j] = piv[j - 1] + 1;
    return true;
  };
  while (true) {
    // Free positions: (r, c) with c > piv[r], c not a pivot column.
    std::vector<bool> is_piv(ambient, false);
    for (uint32_t p : piv) is_piv[p] = true;
    std::vector<std::pair<uint32_t, uint32_t>> free_pos;
    for (uint32_t r = 0; r < d; ++r)
      for (uint32_t c = piv[r] + 1; c < ambient; ++c)
        if (!is_piv[c]) free_pos.emplace_back(r, c);
    Mat B(d, ambient);
    for (uint32_t r = 0; r < d; ++r) B.at(r, piv[r]) = 1;
    std::vector<uint32_t> vals(free_pos.size(), 0);
    while (true) {
      for (size_t i = 0; i < free_pos.size(); ++i)
        B.at(free_pos[i].first, free_pos[i].second) = vals[i];
      if (!cb(B)) return;
      size_t i = vals.size();
      while (i > 0) {
        if (vals[i - 1] + 1 < F.q()) {
          ++vals[i - 1];
          break;
        }
        vals[i - 1] = 0;
        --i;
      }
      if (i == 0) break;
    }
    if (!next_comb()) break;
  }
}

Mat2 pack2(const Mat& A) {
  require(A.cols <= 64, "pack2 supports at most 64 columns");
  Mat2 B;
  B.rows = A.rows;
  B.cols = A.cols;
  B.r.resize(A.rows, 0);
  for (uint32_t i = 0; i < A.rows; ++i)
    for (uint32_t j = 0; j < A.cols; ++j)
      if (A.at(i, j)) B.r[i] |= uint64_t(1) << j;
  return B;
}

Mat unpack2(const Mat2& A) {
  Mat B(A.rows, A.cols);
  for (uint32_t i = 0; i < A.rows; ++i)
    for (uint32_t j = 0; j < A.cols; ++j)
      B.at(i, j) = uint32_t((A.r[i] >> j) & 1u);
  return B;
}

uint32_t rank2(Mat2 A) {
  uint32_t r = 0;
  for (uint32_t col = 0; col < A.cols && r < A.rows; ++col) {
    uint64_t bit = uint64_t(1) << col;
    uint32_t piv = A.rows;
    for (uint32_t i = r; i < A.rows; ++i)
      if (A.r[i] & bit) {
        piv = i;
        break;
      }
    if (piv == A.rows) continue;
    std::swap(A.r[piv], A.r[r]);
    for (uint32_t i = 0; i < A.rows; ++i)
      if (i != r && (A.r[i] & bit)) A.r[i] ^= A.r[r];
    ++r;
  }
  return r;
}

}  // namespace rkt::linalg
