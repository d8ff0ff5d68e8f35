#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rktensor/rankcode.hpp"

// Linear block codes over GF(q) with the Hamming metric, plus the two maps
// that carry block codewords to matrices and back: phi sends a length-R
// vector x to V diag(x) W^T, psi reads off coordinates over a basis of
// rank-one matrices.
namespace rkt::blockcode {

using gf::Field;
using gf::FieldPtr;
using linalg::Mat;

struct BlockCode {
  FieldPtr field;
  uint32_t N = 0;
  Mat gen;  // k x N, canonical RREF, full row rank

  uint32_t k() const { return gen.rows; }
};

BlockCode make_block_code(const FieldPtr& F, uint32_t N, const Mat& rows);
std::vector<uint32_t> codeword(const BlockCode& C,
                               const std::vector<uint32_t>& coeff);
bool contains(const BlockCode& C, const std::vector<uint32_t>& v);
BlockCode dual(const BlockCode& C);  // standard dot product

uint32_t hamming_weight(const std::vector<uint32_t>& v);
// Exact minimum weight by projective enumeration. Throws when the class
// count exceeds the cap; block lengths here stay small.
uint32_t hamming_min_distance(const BlockCode& C,
                              uint64_t cap = uint64_t(1) << 24);

// Point on the projective line over GF(q): a field element or infinity.
struct EvalPoint {
  bool inf = false;
  uint32_t val = 0;
};
inline EvalPoint ev(uint32_t v) { return EvalPoint{false, v}; }
inline EvalPoint ev_inf() { return EvalPoint{true, 0}; }

// Evaluate sum_j f[j] x^j y^(deg-j) homogenized to degree f.size()-1: finite
// theta plugs (theta, 1), infinity plugs (1, 0) and picks the top coefficient.
uint32_t evaluate(const Field& F, const std::vector<uint32_t>& f,
                  const EvalPoint& theta);

// Codewords (beta_i f(alpha_i))_i over all polynomials of degree < k. All
// alpha_i distinct on the projective line; beta entries may be zero.
BlockCode cauchy_code(const FieldPtr& F, const std::vector<EvalPoint>& alpha,
                      const std::vector<uint32_t>& beta, uint32_t k);

// Shortest length of a linear code over GF(q) with dimension k and minimum
// distance at least d. The lower bound is the larger of Singleton and
// Griesmer; the upper bound always comes from a code this routine can
// actually build (or from a completed exhaustive search), so exactness is
// never claimed without a certificate.
struct NqBounds {
  uint64_t lower = 0, upper = 0;
  bool exact = false;
  std::string method;  // construction certifying the upper bound
};
NqBounds nq_bounds(uint64_t q, uint32_t k, uint32_t d,
                   uint64_t search_budget = uint64_t(1) << 22);

// Coordinates of M over an independent list of rank-one matrices.
std::vector<uint32_t> psi(const FieldPtr& F, const std::vector<Mat>& A,
                          const Mat& M);

// V diag(x) W^T.
Mat phi(const Field& F, const Mat& V, const Mat& W,
        const std::vector<uint32_t>& x);

// Rank of V diag(c) W^T computed three ways: directly, and through the two
// row-space intersection formulas
//   rk(V) - dim(rowsp(V) ∩ rowsp(W diag c)^perp)
//   dim(rowsp(W diag c)) - dim(rowsp(W diag c) ∩ rowsp(V)^perp).
// The three values must agree; disagreement is an internal error. Valid for
// rank-deficient V and W too.
uint32_t phi_rank(const Field& F, const Mat& V, const Mat& W,
                  const std::vector<uint32_t>& c);

// Push a block code through phi and report what survives.
struct TransferResult {
  uint32_t dim = 0;        // dimension of the image matrix code
  bool injective = false;  // phi restricted to C is injective
  uint32_t min_rank = 0;   // minimum rank over nonzero codewords of C
  uint32_t trk_upper = 0;  // R, from the defining rank-one sum
  rankcode::MatrixCode image;
};
TransferResult rank_weight_transfer(const BlockCode& C, const Mat& V,
                                    const Mat& W,
                                    uint64_t cap = uint64_t(1) << 24);

}  // namespace rkt::blockcode
