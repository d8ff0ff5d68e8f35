#pragma once

// Helpers shared by the test binaries. Everything here is written against the
// public headers only and independently of the implementation it checks, so a
// bug in the library cannot hide behind the same bug in a test oracle.

#include <random>
#include <vector>

#include "rktensor/rankcode.hpp"

namespace testutil {

using rkt::gf::Field;
using rkt::linalg::Mat;

// Rank by plain forward elimination on a copy, no pivoting cleverness.
inline uint32_t oracle_rank(const Field& F, Mat A) {
  uint32_t rk = 0;
  for (uint32_t c = 0; c < A.cols; ++c) {
    uint32_t sel = A.rows;
    for (uint32_t r = rk; r < A.rows; ++r)
      if (A.at(r, c)) {
        sel = r;
        break;
      }
    if (sel == A.rows) continue;
    for (uint32_t j = 0; j < A.cols; ++j) std::swap(A.at(sel, j), A.at(rk, j));
    for (uint32_t r = rk + 1; r < A.rows; ++r) {
      if (!A.at(r, c)) continue;
      uint32_t f = F.div(A.at(r, c), A.at(rk, c));
      for (uint32_t j = 0; j < A.cols; ++j)
        A.at(r, j) = F.sub(A.at(r, j), F.mul(f, A.at(rk, j)));
    }
    ++rk;
  }
  return rk;
}

// Visit every nonzero coefficient vector of length k over F_q.
template <typename Fn>
void for_all_nonzero_coeffs(uint32_t q, uint32_t k, Fn&& fn) {
  std::vector<uint32_t> c(k, 0);
  while (true) {
    uint32_t i = 0;
    while (i < k) {
      if (++c[i] < q) break;
      c[i++] = 0;
    }
    if (i == k) return;  // wrapped around to all zeros
    fn(c);
  }
}

// Random code of exactly dimension k (retries until a random span hits it).
inline rkt::rankcode::MatrixCode random_code(const rkt::gf::FieldPtr& F,
                                             uint32_t n, uint32_t m, uint32_t k,
                                             std::mt19937_64& rng) {
  while (true) {
    Mat rows = rkt::linalg::random_matrix(*F, k, n * m, rng);
    auto C = rkt::rankcode::from_vectorized(F, n, m, rows);
    if (C.k() == k) return C;
  }
}

// Minimum rank over all nonzero codewords, by exhaustive scan.
inline uint32_t oracle_min_distance(const rkt::rankcode::MatrixCode& C) {
  uint32_t best = UINT32_MAX;
  for_all_nonzero_coeffs(C.field->q(), C.k(), [&](const std::vector<uint32_t>& c) {
    uint32_t r = oracle_rank(*C.field, rkt::rankcode::codeword(C, c));
    if (r < best) best = r;
  });
  return best;
}

}  // namespace testutil
