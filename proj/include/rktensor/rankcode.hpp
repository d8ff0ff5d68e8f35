#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rktensor/tensor.hpp"

// Linear spaces of n x m matrices with the rank metric. A code is stored by
// the canonical reduced-row-echelon basis of its row-major vectorization, so
// equal codes have bytewise equal generators.
namespace rkt::rankcode {

using gf::Field;
using gf::FieldPtr;
using linalg::Mat;
using linalg::Subspace;
using tensor::Tensor3;

struct MatrixCode {
  FieldPtr field;
  uint32_t n = 0, m = 0;
  Mat gen;  // k x (n*m), canonical RREF, full row rank

  uint32_t k() const { return gen.rows; }
  Mat basis_matrix(uint32_t i) const;
};

MatrixCode make_code(const FieldPtr& F, uint32_t n, uint32_t m,
                     const std::vector<Mat>& basis);
MatrixCode from_vectorized(const FieldPtr& F, uint32_t n, uint32_t m,
                           const Mat& rows);
// Codeword from a coefficient vector over the canonical basis.
Mat codeword(const MatrixCode& C, const std::vector<uint32_t>& coeff);
bool contains(const MatrixCode& C, const Mat& M);

struct DistResult {
  bool exact = true;
  uint32_t d = 0;  // meaningful when exact
  uint32_t lower = 0, upper = 0;
  Mat witness;  // nonzero codeword attaining the best known rank
  std::string note;
};

// Minimum rank over nonzero codewords, by projective enumeration when the
// class count fits the cap, otherwise honest sampled bounds (never tagged
// exact). Characteristic-2 prime fields run bit packed.
DistResult min_distance(const MatrixCode& C, uint64_t cap = uint64_t(1) << 24,
                        uint64_t samples = 20000, uint64_t seed = 1);

// Largest dimension a (possibly oriented) code of minimum distance d can
// have: max(n,m) * (min(n,m) - d + 1).
uint64_t singleton_dim_bound(uint32_t n, uint32_t m, uint32_t d);

MatrixCode dual(const MatrixCode& C);  // trace form Tr(X Y^T)

struct SupportPair {
  Subspace col;  // sum of codeword column spaces, ambient n
  Subspace row;  // sum of codeword row spaces, ambient m
  bool nondegenerate = false;
};
SupportPair supports(const MatrixCode& C);

// Frontal slices = canonical basis matrices.
Tensor3 generator_tensor(const MatrixCode& C);
Tensor3 parity_tensor(const MatrixCode& C);

// M -> A M B after an optional transpose (transpose needs n = m); A and B
// invertible.
MatrixCode apply_equivalence(const MatrixCode& C, const Mat& A, const Mat& B,
                             bool transpose);

enum class Side { row, col };

// Row side: codewords T M with the rows in I dropped (T invertible n x n).
// Column side: M T with the columns in I dropped (T invertible m x m).
MatrixCode puncture(const MatrixCode& C, Side side, const Mat& T,
                    const std::vector<uint32_t>& I);
// Same transforms restricted to the subcode vanishing on I before dropping.
MatrixCode shorten(const MatrixCode& C, Side side, const Mat& T,
                   const std::vector<uint32_t>& I);

// Three independent characterizations of "minimum distance >= d", evaluated
// by quantifying over canonical subspace representatives:
//   puncture route: every puncture to n-d+1 rows preserves the dimension;
//   shorten route: every shortening on n-d+1 rows is the zero code;
//   parity route: every (d-1)-row compression of the parity tensor has full
//   frontal slice space.
// The three verdicts must coincide; disagreement is an internal error.
struct DistanceCriteria {
  bool holds = false;
  bool via_puncture = false;
  bool via_shorten = false;
  bool via_parity = false;
  bool has_witness = false;
  Mat witness;  // nonzero codeword of rank < d when the criteria fail
};
DistanceCriteria distance_criteria(const MatrixCode& C, uint32_t d,
                                   uint64_t cap = uint64_t(1) << 20);

}  // namespace rkt::rankcode
