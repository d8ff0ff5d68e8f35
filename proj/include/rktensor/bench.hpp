#pragma once

#include <cstdint>

#include "rktensor/common.hpp"

// Operation-count comparison between the two evaluation schemes for a k-dim
// code of n x m matrices: classical encoding through a k x (nm-k) systematic
// generator versus encoding through a length-R rank-one decomposition in
// standard form (the k unit-vector factors stored implicitly). Counts are
// field operations, storage is field elements.
namespace rkt::bench {

struct ComplexityReport {
  uint32_t k = 0, n = 0, m = 0, R = 0;
  int64_t matrix_storage = 0;
  int64_t tensor_storage = 0;
  int64_t matrix_adds = 0;
  int64_t tensor_adds = 0;
  int64_t matrix_mults = 0;
  int64_t tensor_mults = 0;
  // Decomposition encoding does strictly fewer total operations exactly when
  // R (k+n+m) < k n m + n^2 + m^2.
  bool threshold_holds = false;
};

inline ComplexityReport complexity_report(uint32_t k, uint32_t n, uint32_t m,
                                          uint32_t R) {
  require(k >= 1 && n >= 1 && m >= 1, "dimensions must be positive");
  require(uint64_t(k) <= uint64_t(n) * m, "dimension k exceeds the ambient n*m");
  require(R >= k, "decomposition length R below the dimension k");

  ComplexityReport rep;
  rep.k = k;
  rep.n = n;
  rep.m = m;
  rep.R = R;
  int64_t K = k, N = n, M = m, L = R;
  rep.matrix_storage = K * (N * M - K);
  rep.tensor_storage = L * (K + N + M) - K * K - N * N - M * M;
  rep.matrix_adds = (K - 1) * (N * M - K);
  rep.tensor_adds = (K - 1) * (L - K);
  rep.matrix_mults = K * (N * M - K);
  rep.tensor_mults = K * (L - K);
  rep.threshold_holds = L * (K + N + M) < K * N * M + N * N + M * M;
  return rep;
}

}  // namespace rkt::bench
