#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rktensor/gf.hpp"
#include "rktensor/mat.hpp"

// Dense exact linear algebra over a finite field. Matrices vectorize row
// major: entry (j, l) of an n x m matrix maps to coordinate j*m + l (0-based),
// and every module in this project uses that same flattening.
namespace rkt::linalg {

using gf::Field;

Mat identity(uint32_t n);
Mat transpose(const Mat& A);
Mat mat_add(const Field& F, const Mat& A, const Mat& B);
Mat mat_sub(const Field& F, const Mat& A, const Mat& B);
Mat mat_mul(const Field& F, const Mat& A, const Mat& B);
Mat mat_scale(const Field& F, uint32_t c, const Mat& A);
bool is_zero(const Mat& A);
Mat outer(const Field& F, const std::vector<uint32_t>& v,
          const std::vector<uint32_t>& w);
// diag(c) as a matrix, c a vector.
Mat diag(const std::vector<uint32_t>& c);

struct RrefResult {
  Mat R;
  std::vector<uint32_t> pivots;
  uint32_t rank = 0;
};

RrefResult rref(const Field& F, Mat A);
uint32_t rank(const Field& F, const Mat& A);
Mat inverse(const Field& F, const Mat& A);  // UsageError when singular

// RREF with the transform recorded: R = T * A (T square invertible).
struct RrefTransform {
  Mat R;
  Mat T;
  std::vector<uint32_t> pivots;
  uint32_t rank = 0;
};
RrefTransform rref_with_transform(const Field& F, const Mat& A);

// Coefficients x with x * A = b, if b lies in the row space of A.
bool express_in_rows(const Field& F, const RrefTransform& A,
                     const std::vector<uint32_t>& b,
                     std::vector<uint32_t>* coeffs);

// Basis (as rows) of { v : A v^T = 0 }.
Mat right_kernel(const Field& F, const Mat& A);

// Row space in canonical reduced-row-echelon form. Two subspaces are equal
// exactly when their canonical data match bytewise.
struct Subspace {
  uint32_t ambient = 0;
  Mat basis;  // RREF, one row per dimension
  std::vector<uint32_t> pivots;

  uint32_t dim() const { return basis.rows; }
};

Subspace make_subspace(const Field& F, const Mat& rows, uint32_t ambient);
Subspace zero_subspace(uint32_t ambient);
Subspace full_subspace(uint32_t ambient);
Subspace sum(const Field& F, const Subspace& a, const Subspace& b);
Subspace intersect(const Field& F, const Subspace& a, const Subspace& b);
bool contains_vec(const Field& F, const Subspace& S,
                  const std::vector<uint32_t>& v);
bool contains(const Field& F, const Subspace& outer, const Subspace& inner);
bool subspace_equal(const Subspace& a, const Subspace& b);
// Orthogonal space under the standard dot product.
Subspace dual_complement(const Field& F, const Subspace& S);
std::string canonical_key(const Subspace& S);

// One representative per 1-dimensional span of rank-one n x m matrices:
// both factors normalized to leading coefficient 1, enumerated in
// lexicographic (v, w) order. Count is (q^n-1)(q^m-1)/(q-1)^2.
std::vector<Mat> enumerate_rank_one(const Field& F, uint32_t n, uint32_t m,
                                    uint64_t cap = uint64_t(1) << 24);

// Tr(X Y^T) = sum_{j,l} X[j][l] * Y[j][l]; X and Y same shape.
uint32_t trace_product(const Field& F, const Mat& X, const Mat& Y);

Mat random_matrix(const Field& F, uint32_t rows, uint32_t cols,
                  std::mt19937_64& rng);
Mat random_invertible(const Field& F, uint32_t n, std::mt19937_64& rng);

// Number of d-dimensional subspaces of F_q^n; UsageError on uint64 overflow.
uint64_t gaussian_binomial(uint64_t q, uint32_t n, uint32_t d);

// Visit every d-dimensional subspace of F^ambient as a canonical RREF basis
// matrix, in a fixed deterministic order (pivot sets lexicographic, then free
// entries in odometer order). Callback returns false to stop early.
void enumerate_subspaces(const Field& F, uint32_t ambient, uint32_t d,
                         const std::function<bool(const Mat&)>& cb);

// Visit one representative per projective class of nonzero vectors in F^n
// (first nonzero coordinate = 1), lexicographic order.
void enumerate_projective(const Field& F, uint32_t n,
                          const std::function<bool(const std::vector<uint32_t>&)>& cb);

// Bit-packed GF(2) rows, one word per row (cols <= 64). Internal fast path;
// semantics always match the generic routines.
struct Mat2 {
  uint32_t rows = 0;
  uint32_t cols = 0;
  std::vector<uint64_t> r;
};

Mat2 pack2(const Mat& A);
Mat unpack2(const Mat2& A);
uint32_t rank2(Mat2 A);

}  // namespace rkt::linalg
