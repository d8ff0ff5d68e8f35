#pragma once

#include <cstdint>
#include <vector>

#include "rktensor/linalg.hpp"

// Order-3 tensors over a finite field, axis conventions fixed project-wide:
// axis 1 indexes frontal slices (n2 x n3 matrices), axis 2 rows, axis 3
// columns. Slice spaces vectorize their matrices row major, consistent with
// the global flattening.
namespace rkt::tensor {

using gf::Field;
using linalg::Mat;
using linalg::Subspace;

struct Tensor3 {
  uint32_t n1 = 0, n2 = 0, n3 = 0;
  std::vector<uint32_t> a;  // [i][j][l] at ((i*n2)+j)*n3+l

  Tensor3() = default;
  Tensor3(uint32_t d1, uint32_t d2, uint32_t d3)
      : n1(d1), n2(d2), n3(d3), a(size_t(d1) * d2 * d3, 0) {}

  uint32_t& at(uint32_t i, uint32_t j, uint32_t l) {
    return a[(size_t(i) * n2 + j) * n3 + l];
  }
  uint32_t at(uint32_t i, uint32_t j, uint32_t l) const {
    return a[(size_t(i) * n2 + j) * n3 + l];
  }
  bool operator==(const Tensor3& o) const {
    return n1 == o.n1 && n2 == o.n2 && n3 == o.n3 && a == o.a;
  }
};

Tensor3 from_slices(const std::vector<Mat>& slices);
Mat slice1(const Tensor3& X, uint32_t i);  // n2 x n3
Mat slice2(const Tensor3& X, uint32_t j);  // n1 x n3
Mat slice3(const Tensor3& X, uint32_t l);  // n1 x n2

bool is_zero(const Tensor3& X);

// Sum of elementary (rank-one) tensors u ⊗ v ⊗ w.
struct SimpleSum {
  uint32_t n1 = 0, n2 = 0, n3 = 0;
  struct Triple {
    std::vector<uint32_t> u, v, w;
  };
  std::vector<Triple> triples;

  uint32_t length() const { return uint32_t(triples.size()); }
};

// Shape and no-zero-component validation.
void validate(const Field& F, const SimpleSum& S);
Tensor3 to_coordinates(const Field& F, const SimpleSum& S);

// Multiplication along one axis: A has shape s x n_axis; the result replaces
// that axis dimension by s. Composition law: mult(axis, A*B, X) =
// mult(axis, A, mult(axis, B, X)).
Tensor3 tensor_mult(const Field& F, uint32_t axis, const Mat& A,
                    const Tensor3& X);
// Collapse with a single covector: the s = 1 case, returned as a matrix over
// the two remaining axes in their natural order.
Mat tensor_mult_vec(const Field& F, uint32_t axis,
                    const std::vector<uint32_t>& u, const Tensor3& X);

// Span of the axis-i slices inside the vectorized ambient space.
Subspace slice_space(const Field& F, const Tensor3& X, uint32_t axis);
uint32_t slice_dim(const Field& F, const Tensor3& X, uint32_t axis);
// Nondegenerate along an axis: slices independent (slice dim = axis dim).
bool nondegenerate(const Field& F, const Tensor3& X, uint32_t axis);

// (X : Y)_{is} = sum_{j,l} X_{ijl} Y_{sjl}; trailing shapes must agree.
Mat double_dot(const Field& F, const Tensor3& X, const Tensor3& Y);

// dim_1 + (min rank over nonzero members of the axis-1 slice space) - 1.
// On 1-degenerate input the bound is computed on the nondegenerate quotient
// and flagged. Enumerates the projective classes of the slice space; cap
// guards the q^{dim_1} blowup.
struct KruskalBound {
  uint32_t value = 0;
  uint32_t min_slice_rank = 0;
  bool degenerate = false;
};
KruskalBound kruskal_lower_bound(const Field& F, const Tensor3& X,
                                 uint64_t cap = uint64_t(1) << 22);

}  // namespace rkt::tensor
