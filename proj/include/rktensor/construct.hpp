#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rktensor/blockcode.hpp"

// Constructions of rank-metric codes with certified tensor rank: verified
// (C, V, W) triples, the Cauchy evaluation family meeting the k + d - 1
// floor, Delsarte-Gabidulin codes and their subfield expansions, polynomial
// multiplication tensors, and the peeled small-tensor-rank family. All
// constructions are deterministic; randomness enters only through caller
// seeds.
namespace rkt::construct {

using blockcode::BlockCode;
using gf::Field;
using gf::FieldPtr;
using linalg::Mat;
using rankcode::MatrixCode;

// Two-sided tensor rank evidence. The upper half is a rank-one expansion:
// the second/third components of each triple span a matrix space containing
// the code, and the first components express a generator list of the code
// over those rank-one matrices, so converting the sum to coordinates yields
// a generator tensor. The lower half is a tagged value from an argument that
// cannot be faked: dimension plus minimum distance, shortest block code
// length, or a completed search level.
struct TrkCertificate {
  tensor::SimpleSum upper;
  uint32_t lower = 0;
  std::string lower_origin;
  bool exact = false;  // lower == upper.length()
  std::string note;    // why the gap remains, when not exact
};

// One verification record: a codeword class representative and the rank of
// its image V diag(c) W^T.
struct VerifyEntry {
  std::vector<uint32_t> codeword;
  uint32_t rank = 0;
};

// Block code plus factor pair. verified means every nonzero codeword class
// passed rank(V diag(c) W^T) >= d. Each class is judged five ways: the rank
// directly, two subspace intersection bounds and two subspace sum bounds on
// the row spaces of V and W diag(c). The five verdicts must coincide;
// disagreement aborts as an internal error.
struct ExtremalTriple {
  BlockCode C;
  Mat V;  // n x R, R = C length
  Mat W;  // m x R
  uint32_t d = 0;
  bool verified = false;
  std::vector<VerifyEntry> log;  // one entry per class while small enough
  bool log_complete = false;
  std::vector<uint32_t> witness;  // failing codeword when not verified
  uint32_t witness_rank = 0;
};

// Classes kept in the log; past this only verdict and witness survive.
inline constexpr uint64_t kVerifyLogCap = 8192;

// Checks the rank condition on every projective class of nonzero codewords,
// stopping at the first failure and recording it as witness. V and W must
// have full rank; rank-deficient factors are rejected (factor through
// full-rank matrices first). Throws BudgetError when the class count
// exceeds cap.
ExtremalTriple verify_triple(const BlockCode& C, const Mat& V, const Mat& W,
                             uint32_t d, uint64_t cap = uint64_t(1) << 22);

// Evaluation-code triple over k+d-1 distinct field elements alpha:
// C = C_k(alpha, 1), V a parity check matrix of C_{d-1}(alpha, ev_alpha(f))
// for an irreducible f of degree k, W a generator matrix of C_d(alpha, 1).
// The image phi_{V,W}(C) is a [k x d, k, d] code whose generator tensor
// splits into exactly k+d-1 rank-one terms, meeting the dimension plus
// distance floor, so the code is MTR; the k x d ambient also makes the
// Singleton dimension bound equal k, so it is MRD as well.
struct RsConstruction {
  ExtremalTriple triple;
  MatrixCode code;  // in F_q^{k x d}
  TrkCertificate cert;
  gf::Poly f;  // the degree-k irreducible actually used
  bool mtr = false;
  bool mrd = false;
  uint64_t storage = 0;  // field elements stored beyond unit-vector factors
};

// Pre: 0 < d < k and k+d-1 <= q. The seed variant draws f through
// find_irreducible, so runs are reproducible from (q, k, d, seed). cap
// bounds the codeword class count the self-verification is willing to walk;
// q^k past it raises BudgetError rather than returning unchecked output.
RsConstruction rs_extremal_triple(uint64_t q, uint32_t k, uint32_t d,
                                  uint64_t seed,
                                  uint64_t cap = uint64_t(1) << 22);
RsConstruction rs_extremal_triple_with_poly(uint64_t q, uint32_t k, uint32_t d,
                                            const gf::Poly& f,
                                            uint64_t cap = uint64_t(1) << 22);

// Triple with V, W generator matrices of MDS evaluation codes of dimensions
// n and m. When n+m >= R+d with R = k+d-1 and d <= n, m < R, the Frobenius
// rank inequality gives rank(V diag(c) W^T) >= min{n,w} + min{m,w} - w >= d
// for every weight-w codeword, so verification always succeeds. Needs
// q+1 >= R projective points.
ExtremalTriple maxsum_triple(uint64_t q, uint32_t n, uint32_t m, uint32_t k,
                             uint32_t d);

// Zero-pads V and W to n2 and m2 rows and reruns verification. Padding
// leaves every image rank unchanged, so the verdict carries over; the
// rerun uses the general path that tolerates the now rank-deficient
// factors.
ExtremalTriple extend_triple(const ExtremalTriple& T, uint32_t n2,
                             uint32_t m2);

// q^s-linearized evaluation code: the span of x^(q^(s i)), i < K, evaluated
// at n F_q-independent points of GF(q^m), plus its expansion to n x m
// matrices over the power basis of the extension generator. The expansion
// is MRD: dimension K*m, minimum rank distance n-K+1.
struct GabidulinCode {
  gf::Tower tower;
  uint32_t K = 0;
  uint32_t s = 1;
  std::vector<uint32_t> points;  // extension codes, independent over F_q
  Mat vec_gen;  // K x n extension codes: row i evaluates x^(q^(s i))
  MatrixCode expanded;  // [n x m, K m] over the base field
};

// Default points: 1, g, ..., g^(n-1) for the extension generator g. Pre:
// 1 <= K <= n <= m, 1 <= s < m, gcd(s, m) = 1, points independent.
GabidulinCode gabidulin(uint64_t q, uint32_t m, uint32_t n, uint32_t K,
                        uint32_t s);
GabidulinCode gabidulin(uint64_t q, uint32_t m, uint32_t n, uint32_t K,
                        uint32_t s, const std::vector<uint32_t>& points);

// Multiplication-by-x matrix modulo f (degree k): row j holds the
// coefficients of x^(j+1) mod f, so row-vector coefficient images compose
// as c -> c M_f.
Mat companion_matrix(const Field& F, const gf::Poly& f);

// Coordinate tensor of (g, h) -> g h mod f on monomial bases: entry
// (i, j, l) is the x^l coefficient of x^(i+j) mod f, for i < m, j < n,
// l < k = deg f. For m = n = k the frontal slices are I, M_f, ...,
// M_f^(m-1).
tensor::Tensor3 poly_mult_tensor(const FieldPtr& F, uint32_t m, uint32_t n,
                                 uint32_t k, const gf::Poly& f);

// Length m+n-1 rank-one expansion of the same tensor by evaluation at
// m+n-1 distinct projective points and interpolation of the product;
// the point at infinity is used exactly when q = m+n-2 (the smallest
// field where this length is possible). Terms whose interpolation basis
// polynomial vanishes mod f are dropped, so the result can be shorter.
tensor::SimpleSum poly_mult_certificate(const FieldPtr& F, uint32_t m,
                                        uint32_t n, const gf::Poly& f);

// A [n x m, k, >= d] code with a short rank-one certificate, built by
// expanding a Delsarte-Gabidulin code over GF(q^m) at mu = ceil(k/m)+d-1
// power-basis points, embedding into the ambient, and peeling one dimension
// at a time. Certificate length is at most
//   bound = k + min{m(d-1), ceil(k/m)(mu-1)};
// when the length lands on k+d-1 the code is MTR.
struct SmallTrankResult {
  MatrixCode code;
  TrkCertificate cert;
  uint32_t bound = 0;
  bool mtr = false;
};

// Pre: d <= n <= m, k <= m(n-d+1), q >= m + ceil(k/m) + d - 3, and q^m
// within the field size cap.
SmallTrankResult small_trank_code(uint64_t q, uint32_t n, uint32_t m,
                                  uint32_t k, uint32_t d);

// Square variant: Delsarte-Gabidulin over GF(q^rho) with
// rho = min{s : s(s-d+1) >= k}. Pre: rho <= n, q >= 2 rho - 2. Bound
// k + min{rho(d-1), (rho-d+1)(rho-1)}; never beats the rectangular
// construction, kept for comparison.
SmallTrankResult square_trank_code(uint64_t q, uint32_t n, uint32_t m,
                                   uint32_t k, uint32_t d);

// One peeling step on any code with a covering rank-one expansion: returns
// a subcode of dimension k-1 with a certificate at least one term shorter.
// Dropping to a subcode cannot decrease the minimum distance.
struct PeelResult {
  MatrixCode code;
  tensor::SimpleSum cert;
};
PeelResult peel_subcode(const MatrixCode& code, const tensor::SimpleSum& cert);

enum class Region { impossible, mtr_known, open };

struct Classification {
  Region region = Region::open;
  std::string rule;  // the argument or construction certifying the label
};

// Decides whether an MTR code of dimension k and minimum rank distance d
// can live in F_q^{n x m}: impossible only on rigorous grounds (ambient
// rank, Singleton dimension bound, Griesmer length bound), mtr_known only
// when a catalog construction applies at this field size, open otherwise.
Classification classify_parameters(uint32_t k, uint32_t d, uint32_t n,
                                   uint32_t m, uint64_t q);

}  // namespace rkt::construct
