#include "rktensor/construct.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "rktensor/common.hpp"

namespace rkt::construct {
namespace {

using blockcode::EvalPoint;
using linalg::Subspace;

struct PrimePower {
  uint64_t p = 0;
  uint32_t e = 0;
};

PrimePower factor_prime_power(uint64_t q) {
  require(q >= 2, "field order must be at least 2");
  uint64_t p = 0;
  for (uint64_t t = 2; t * t <= q; ++t) {
    if (q % t == 0) {
      p = t;
      break;
    }
  }
  if (p == 0) p = q;
  uint32_t e = 0;
  uint64_t r = q;
  while (r % p == 0) {
    r /= p;
    ++e;
  }
  require(r == 1, "field order must be a prime power");
  return {p, e};
}

FieldPtr field_of_order(uint64_t q) {
  require(q <= gf::kFieldCap, "field order exceeds the size cap");
  PrimePower pp = factor_prime_power(q);
  return gf::make_field(uint32_t(pp.p), pp.e);
}

uint64_t powmod(uint64_t b, uint64_t e, uint64_t mod) {
  uint64_t r = 1 % mod;
  b %= mod;
  while (e) {
    if (e & 1) r = r * b % mod;
    b = b * b % mod;
    e >>= 1;
  }
  return r;
}

// Order: 1, g, g^2, ..., then 0, then infinity. Generator powers first keeps
// small instances aligned across the evaluation-code constructions.
std::vector<EvalPoint> distinct_points(const Field& F, uint32_t R,
                                       bool allow_inf) {
  require(R >= 1, "need at least one evaluation point");
  uint64_t avail = uint64_t(F.q()) + (allow_inf ? 1 : 0);
  require(R <= avail, "not enough distinct evaluation points in this field");
  std::vector<EvalPoint> pts;
  pts.reserve(R);
  uint32_t g = F.generator();
  uint32_t cur = 1;
  for (uint32_t i = 0; i + 1 < F.q() && pts.size() < R; ++i) {
    pts.push_back(blockcode::ev(cur));
    cur = F.mul(cur, g);
  }
  if (pts.size() < R) pts.push_back(blockcode::ev(0));
  if (pts.size() < R) pts.push_back(blockcode::ev_inf());
  internal_check(pts.size() == R, "point list has the wrong length");
  return pts;
}

std::vector<uint32_t> ones_vec(uint32_t R) {
  return std::vector<uint32_t>(R, 1);
}

std::vector<uint32_t> point_powers(const Field& F, uint32_t theta,
                                   uint32_t len) {
  std::vector<uint32_t> v(len);
  uint32_t cur = 1;
  for (uint32_t i = 0; i < len; ++i) {
    v[i] = cur;
    cur = F.mul(cur, theta);
  }
  return v;
}

BlockCode full_block_code(const FieldPtr& F, uint32_t R) {
  return blockcode::make_block_code(F, R, linalg::identity(R));
}

struct RankVerdict {
  uint32_t rank = 0;
  bool pass = false;
};

// Judge one codeword five ways: the image rank directly, then intersection
// and sum criteria against the row spaces of V and of W diag(c). The rank
// of V diag(c) W^T equals rank(V) minus the overlap of row(V) with the
// orthogonal of row(W diag(c)), and symmetrically, so all five verdicts must
// coincide; disagreement means the linear algebra underneath is broken.
RankVerdict judge_codeword(const Field& F, const Mat& V, const Mat& W,
                           const Subspace& rowV, const Subspace& rowVperp,
                           const std::vector<uint32_t>& c, uint32_t d) {
  uint32_t R = V.cols;
  Mat Wc(W.rows, R);
  for (uint32_t r = 0; r < W.rows; ++r)
    for (uint32_t j = 0; j < R; ++j) Wc.at(r, j) = F.mul(W.at(r, j), c[j]);
  Subspace rowWc = linalg::make_subspace(F, Wc, R);
  Subspace rowWcperp = linalg::dual_complement(F, rowWc);
  int64_t v = rowV.dim();
  int64_t tc = rowWc.dim();
  int64_t dd = d;

  uint32_t rk = linalg::rank(F, blockcode::phi(F, V, W, c));
  bool c1 = rk >= d;
  bool c2 = int64_t(linalg::intersect(F, rowVperp, rowWc).dim()) <= tc - dd;
  bool c3 = int64_t(linalg::intersect(F, rowV, rowWcperp).dim()) <= v - dd;
  bool c4 = int64_t(linalg::sum(F, rowVperp, rowWc).dim()) >=
            int64_t(R) - v + dd;
  bool c5 = int64_t(linalg::sum(F, rowV, rowWcperp).dim()) >=
            int64_t(R) - tc + dd;
  internal_check(c1 == c2 && c1 == c3 && c1 == c4 && c1 == c5,
                 "rank criteria disagree on a codeword");
  return {rk, c1};
}

// Shared by verify_triple (full-rank factors) and extend_triple (zero-padded
// factors): the five criteria are valid at any factor rank.
ExtremalTriple verify_general(const BlockCode& C, const Mat& V, const Mat& W,
                              uint32_t d, uint64_t cap) {
  require(C.field != nullptr, "block code carries no field");
  const Field& F = *C.field;
  uint32_t R = C.N;
  require(d >= 1, "distance target must be positive");
  require(C.k() >= 1, "the block code must be nonzero");
  require(V.cols == R && W.cols == R,
          "V and W must have one column per code position");
  require(V.rows >= 1 && W.rows >= 1, "V and W must have at least one row");

  uint64_t classes = 0;
  for (uint32_t i = 0; i < C.k(); ++i) {
    if (classes > cap / F.q()) {
      classes = cap + 1;
      break;
    }
    classes = classes * F.q() + 1;
    if (classes > cap) break;
  }
  if (classes > cap)
    throw BudgetError("codeword class count exceeds the verification cap");

  ExtremalTriple out;
  out.C = C;
  out.V = V;
  out.W = W;
  out.d = d;
  out.verified = true;
  out.log_complete = classes <= kVerifyLogCap;

  Subspace rowV = linalg::make_subspace(F, V, R);
  Subspace rowVperp = linalg::dual_complement(F, rowV);

  linalg::enumerate_projective(
      F, C.k(), [&](const std::vector<uint32_t>& x) {
        std::vector<uint32_t> c = blockcode::codeword(C, x);
        RankVerdict rv = judge_codeword(F, V, W, rowV, rowVperp, c, d);
        if (out.log.size() < kVerifyLogCap)
          out.log.push_back(VerifyEntry{c, rv.rank});
        if (!rv.pass) {
          out.verified = false;
          out.witness = c;
          out.witness_rank = rv.rank;
          return false;
        }
        return true;
      });
  if (!out.verified) out.log_complete = false;
  return out;
}

// x^t mod f for t < count, f monic.
std::vector<gf::Poly> x_power_table(const Field& F, const gf::Poly& fm,
                                    uint32_t count) {
  std::vector<gf::Poly> out;
  out.reserve(count);
  gf::Poly cur{1};
  gf::Poly x{0, 1};
  for (uint32_t t = 0; t < count; ++t) {
    out.push_back(cur);
    cur = gf::poly_mod(F, gf::poly_mul(F, cur, x), fm);
  }
  return out;
}

bool all_zero(const std::vector<uint32_t>& v) {
  return std::all_of(v.begin(), v.end(), [](uint32_t x) { return x == 0; });
}

// Storage cost of one expansion component: unit vectors are free (they index
// a position instead of storing coefficients), anything else costs its full
// length.
uint64_t component_cost(const std::vector<uint32_t>& v) {
  uint32_t nz = 0;
  uint32_t last = 0;
  for (uint32_t x : v)
    if (x != 0) {
      ++nz;
      last = x;
    }
  if (nz == 1 && last == 1) return 0;
  return v.size();
}

void rs_validate(const Field& F, uint32_t k, uint32_t d) {
  require(k >= 1 && d >= 1, "dimension and distance must be positive");
  require(d < k, "this construction needs d < k");
  require(uint64_t(k) + d - 1 <= F.q(),
          "need k+d-1 distinct field elements: k+d-1 <= q");
}

RsConstruction rs_core(const FieldPtr& Fp, uint32_t k, uint32_t d,
                       gf::Poly f, uint64_t cap) {
  const Field& F = *Fp;
  rs_validate(F, k, d);
  uint32_t R = k + d - 1;
  f = gf::poly_trim(std::move(f));
  require(gf::poly_deg(f) == int(k), "f must have degree k");
  require(f.back() == 1, "f must be monic");
  for (uint32_t c : f) require(c < F.q(), "f has coefficients outside the field");
  require(gf::is_irreducible(F, f), "f must be irreducible");

  auto alpha = distinct_points(F, R, false);
  // deg f = k >= 2, so irreducibility rules out roots: the twist vector
  // below is nonzero everywhere and the twisted code keeps full support.
  std::vector<uint32_t> fev(R);
  for (uint32_t i = 0; i < R; ++i) {
    fev[i] = blockcode::evaluate(F, f, alpha[i]);
    internal_check(fev[i] != 0, "irreducible numerator vanished at a point");
  }

  BlockCode C = (k == R) ? full_block_code(Fp, R)
                         : blockcode::cauchy_code(Fp, alpha, ones_vec(R), k);
  Mat V = (d == 1)
              ? linalg::identity(R)
              : blockcode::dual(blockcode::cauchy_code(Fp, alpha, fev, d - 1))
                    .gen;
  internal_check(V.rows == k, "parity factor has the wrong dimension");
  Mat W = blockcode::cauchy_code(Fp, alpha, ones_vec(R), d).gen;

  RsConstruction out;
  out.f = f;
  out.triple = verify_triple(C, V, W, d, cap);
  internal_check(out.triple.verified,
                 "construction failed its own rank criteria");

  auto tr = blockcode::rank_weight_transfer(C, V, W, cap);
  internal_check(tr.injective && tr.dim == k, "image dimension dropped");
  internal_check(tr.min_rank == d, "image distance is off target");
  out.code = tr.image;

  // One rank-one term per evaluation point: column r of the generator,
  // column r of V, column r of W.
  tensor::SimpleSum S;
  S.n1 = k;
  S.n2 = k;
  S.n3 = d;
  for (uint32_t r = 0; r < R; ++r) {
    tensor::SimpleSum::Triple t;
    t.u.resize(k);
    t.v.resize(k);
    t.w.resize(d);
    for (uint32_t i = 0; i < k; ++i) {
      t.u[i] = C.gen.at(i, r);
      t.v[i] = V.at(i, r);
    }
    for (uint32_t j = 0; j < d; ++j) t.w[j] = W.at(j, r);
    S.triples.push_back(std::move(t));
  }
  tensor::validate(F, S);
  tensor::Tensor3 X = tensor::to_coordinates(F, S);
  std::vector<Mat> slices;
  for (uint32_t i = 0; i < k; ++i) slices.push_back(tensor::slice1(X, i));
  internal_check(rankcode::make_code(Fp, k, d, slices).gen == out.code.gen,
                 "certificate slices span the wrong code");

  for (const auto& t : S.triples)
    out.storage +=
        component_cost(t.u) + component_cost(t.v) + component_cost(t.w);
  internal_check(out.storage <= uint64_t(3) * k * d - 2 * k - d,
                 "storage exceeds the closed form");

  out.cert.upper = std::move(S);
  out.cert.lower = R;
  out.cert.lower_origin = "kruskal";
  out.cert.exact = true;
  out.mtr = true;
  out.mrd = rankcode::singleton_dim_bound(k, d, d) == k;
  internal_check(out.mrd, "k x d ambient must make the code MRD");
  return out;
}

// Drop dependent rank-one terms (first-come) and re-express the generator
// list over the kept ones; terms no generator uses are dropped too. gens
// must lie in the span of the incoming terms.
tensor::SimpleSum reduce_cert(const FieldPtr& Fp, const std::vector<Mat>& gens,
                              const tensor::SimpleSum& in) {
  const Field& F = *Fp;
  uint32_t n = in.n2, m = in.n3;
  uint32_t k = uint32_t(gens.size());
  uint32_t nm = n * m;

  std::vector<uint32_t> keep;
  Mat kept(0, nm);
  for (uint32_t t = 0; t < in.length(); ++t) {
    Mat P = linalg::outer(F, in.triples[t].v, in.triples[t].w);
    Mat trial(kept.rows + 1, nm);
    std::copy(kept.a.begin(), kept.a.end(), trial.a.begin());
    std::copy(P.a.begin(), P.a.end(),
              trial.a.begin() + size_t(kept.rows) * nm);
    if (linalg::rank(F, trial) == trial.rows) {
      keep.push_back(t);
      kept = std::move(trial);
    }
  }

  auto RT = linalg::rref_with_transform(F, kept);
  std::vector<std::vector<uint32_t>> coords(k);
  for (uint32_t s = 0; s < k; ++s) {
    std::vector<uint32_t> b(nm);
    for (uint32_t r = 0; r < n; ++r)
      for (uint32_t c = 0; c < m; ++c) b[r * m + c] = gens[s].at(r, c);
    internal_check(linalg::express_in_rows(F, RT, b, &coords[s]),
                   "generator escaped the span of the rank-one terms");
  }

  tensor::SimpleSum out;
  out.n1 = k;
  out.n2 = n;
  out.n3 = m;
  for (uint32_t idx = 0; idx < keep.size(); ++idx) {
    tensor::SimpleSum::Triple t;
    t.u.resize(k);
    bool used = false;
    for (uint32_t s = 0; s < k; ++s) {
      t.u[s] = coords[s][idx];
      used = used || t.u[s] != 0;
    }
    if (!used) continue;
    t.v = in.triples[keep[idx]].v;
    t.w = in.triples[keep[idx]].w;
    out.triples.push_back(std::move(t));
  }
  tensor::validate(F, out);
  internal_check(tensor::to_coordinates(F, out) == tensor::from_slices(gens),
                 "reduced certificate does not rebuild the generator list");
  return out;
}

// Elementary fallback certificate: one term per matrix position any
// generator touches.
tensor::SimpleSum elementary_cert(const FieldPtr& Fp,
                                  const std::vector<Mat>& gens, uint32_t n,
                                  uint32_t m) {
  tensor::SimpleSum S;
  S.n1 = uint32_t(gens.size());
  S.n2 = n;
  S.n3 = m;
  for (uint32_t j = 0; j < n; ++j)
    for (uint32_t l = 0; l < m; ++l) {
      tensor::SimpleSum::Triple t;
      t.u.resize(gens.size());
      bool used = false;
      for (uint32_t s = 0; s < gens.size(); ++s) {
        t.u[s] = gens[s].at(j, l);
        used = used || t.u[s] != 0;
      }
      if (!used) continue;
      t.v.assign(n, 0);
      t.v[j] = 1;
      t.w.assign(m, 0);
      t.w[l] = 1;
      S.triples.push_back(std::move(t));
    }
  tensor::validate(*Fp, S);
  return S;
}

SmallTrankResult unit_result(uint64_t q) {
  // 1 x 1 ambient: the only parameters are k = d = 1.
  FieldPtr Fp = field_of_order(q);
  Mat one(1, 1);
  one.at(0, 0) = 1;
  SmallTrankResult out;
  out.code = rankcode::make_code(Fp, 1, 1, {one});
  out.cert.upper.n1 = out.cert.upper.n2 = out.cert.upper.n3 = 1;
  out.cert.upper.triples.push_back({{1}, {1}, {1}});
  out.cert.lower = 1;
  out.cert.lower_origin = "kruskal";
  out.cert.exact = true;
  out.bound = 1;
  out.mtr = true;
  return out;
}

// Shared pipeline: expand a Delsarte-Gabidulin code of dimension K over
// GF(q^deg), evaluated at len power-basis points, to len x deg matrices;
// transfer the polynomial multiplication certificate through K Frobenius
// twists; embed into n x m; peel down to dimension k. The caller supplies
// the certificate-length bound its parameters guarantee.
SmallTrankResult dg_peeled(uint64_t q, uint32_t deg, uint32_t len, uint32_t K,
                           uint32_t n, uint32_t m, uint32_t k, uint32_t d,
                           uint32_t bound) {
  internal_check(deg >= 2 && K >= 1 && K <= len && len <= n && deg <= m &&
                     k >= 1 && uint64_t(k) <= uint64_t(K) * deg,
                 "expansion parameters out of shape");
  FieldPtr Fp = field_of_order(q);
  const Field& F = *Fp;

  GabidulinCode dg = gabidulin(q, deg, len, K, 1);
  const Field& E = *dg.tower.ext;
  gf::SubfieldBasis B = gf::power_basis(dg.tower);
  uint32_t g = E.generator();
  gf::Poly f = gf::minimal_polynomial(dg.tower, g);
  internal_check(gf::poly_deg(f) == int(deg),
                 "extension generator must have full degree");
  tensor::SimpleSum T = poly_mult_certificate(Fp, deg, len, f);
  uint64_t qm1 = uint64_t(E.q()) - 1;

  // Block i holds the expansions of g^((a+j) q^i): the same multiplication
  // tensor seen through the Frobenius twist x -> x^(q^i), pulled back to the
  // power basis by the change-of-basis matrix Bi.
  std::vector<Mat> gens;
  tensor::SimpleSum S;
  S.n1 = K * deg;
  S.n2 = len;
  S.n3 = deg;
  for (uint32_t i = 0; i < K; ++i) {
    uint64_t ei = powmod(q, i, qm1);
    Mat Bi(deg, deg);
    for (uint32_t a = 0; a < deg; ++a) {
      auto row = B.coords(E.pow(g, int64_t(uint64_t(a) * ei % qm1)));
      for (uint32_t x = 0; x < deg; ++x) Bi.at(a, x) = row[x];
    }
    for (uint32_t a = 0; a < deg; ++a) {
      std::vector<uint32_t> vec(len);
      for (uint32_t j = 0; j < len; ++j)
        vec[j] = E.pow(g, int64_t((uint64_t(a) + j) * ei % qm1));
      gens.push_back(gf::subfield_expand(B, vec));
    }
    for (const auto& t : T.triples) {
      tensor::SimpleSum::Triple nt;
      nt.u.assign(size_t(K) * deg, 0);
      for (uint32_t a = 0; a < deg; ++a) nt.u[size_t(i) * deg + a] = t.u[a];
      nt.v = t.v;
      nt.w.assign(deg, 0);
      for (uint32_t x = 0; x < deg; ++x) {
        uint32_t acc = 0;
        for (uint32_t y = 0; y < deg; ++y)
          acc = F.add(acc, F.mul(Bi.at(y, x), t.w[y]));
        nt.w[x] = acc;
      }
      internal_check(!all_zero(nt.w), "basis change crushed a component");
      S.triples.push_back(std::move(nt));
    }
  }
  // Ties the Frobenius transfer, the basis change, and the subfield
  // expansion together; any convention slip between them breaks this.
  internal_check(tensor::to_coordinates(F, S) == tensor::from_slices(gens),
                 "transferred certificate does not match the expansion");
  internal_check(rankcode::make_code(Fp, len, deg, gens).gen ==
                     dg.expanded.gen,
                 "expansion bases disagree");

  // Embed into the requested ambient: extra rows below, extra columns right.
  std::vector<Mat> padded;
  for (const Mat& G : gens) {
    Mat P(n, m);
    for (uint32_t r = 0; r < len; ++r)
      for (uint32_t c = 0; c < deg; ++c) P.at(r, c) = G.at(r, c);
    padded.push_back(std::move(P));
  }
  S.n2 = n;
  S.n3 = m;
  for (auto& t : S.triples) {
    t.v.resize(n, 0);
    t.w.resize(m, 0);
  }

  tensor::SimpleSum cand = reduce_cert(Fp, padded, S);
  tensor::SimpleSum triv =
      reduce_cert(Fp, padded, elementary_cert(Fp, padded, n, m));
  if (triv.length() < cand.length()) cand = std::move(triv);

  rankcode::MatrixCode cur = rankcode::make_code(Fp, n, m, padded);
  internal_check(cur.k() == uint64_t(K) * deg, "expanded dimension dropped");
  for (uint32_t step = K * deg; step > k; --step) {
    PeelResult pr = peel_subcode(cur, cand);
    cur = std::move(pr.code);
    cand = std::move(pr.cert);
    internal_check(cur.k() == step - 1, "peel dropped the wrong dimension");
  }

  SmallTrankResult out;
  out.code = std::move(cur);
  out.bound = bound;
  out.cert.upper = std::move(cand);
  out.cert.lower = k + d - 1;
  out.cert.lower_origin = "kruskal";
  out.cert.exact = out.cert.upper.length() == k + d - 1;
  out.mtr = out.cert.exact;
  if (!out.cert.exact)
    out.cert.note =
        "peeled expansion leaves a gap above the dimension plus distance "
        "floor";
  internal_check(out.cert.upper.length() <= bound,
                 "certificate exceeds the promised bound");
  internal_check(out.cert.upper.length() >= k,
                 "certificate cannot be shorter than the dimension");
  return out;
}

}  // namespace

ExtremalTriple verify_triple(const BlockCode& C, const Mat& V, const Mat& W,
                             uint32_t d, uint64_t cap) {
  require(C.field != nullptr, "block code carries no field");
  const Field& F = *C.field;
  require(V.cols == C.N && W.cols == C.N,
          "V and W must have one column per code position");
  require(V.rows >= 1 && W.rows >= 1, "V and W must have at least one row");
  require(linalg::rank(F, V) == std::min(V.rows, V.cols),
          "V must have full rank; factor through a full-rank matrix first");
  require(linalg::rank(F, W) == std::min(W.rows, W.cols),
          "W must have full rank; factor through a full-rank matrix first");
  return verify_general(C, V, W, d, cap);
}

RsConstruction rs_extremal_triple(uint64_t q, uint32_t k, uint32_t d,
                                  uint64_t seed, uint64_t cap) {
  FieldPtr Fp = field_of_order(q);
  rs_validate(*Fp, k, d);
  return rs_core(Fp, k, d, gf::find_irreducible(*Fp, k, seed), cap);
}

RsConstruction rs_extremal_triple_with_poly(uint64_t q, uint32_t k, uint32_t d,
                                            const gf::Poly& f, uint64_t cap) {
  return rs_core(field_of_order(q), k, d, f, cap);
}

ExtremalTriple maxsum_triple(uint64_t q, uint32_t n, uint32_t m, uint32_t k,
                             uint32_t d) {
  FieldPtr Fp = field_of_order(q);
  const Field& F = *Fp;
  require(k >= 1 && d >= 1, "dimension and distance must be positive");
  uint32_t R = k + d - 1;
  require(d <= n && d <= m, "factor dimensions must reach the distance");
  require(n < R && m < R,
          "use a full-rank factor directly when n or m reaches k+d-1");
  require(uint64_t(n) + m >= uint64_t(R) + d,
          "need n + m >= k + 2d - 1 for the rank sum argument");
  require(R <= uint64_t(F.q()) + 1,
          "need k+d-1 distinct projective evaluation points");
  auto alpha = distinct_points(F, R, true);
  BlockCode C = (k == R) ? full_block_code(Fp, R)
                         : blockcode::cauchy_code(Fp, alpha, ones_vec(R), k);
  Mat V = blockcode::cauchy_code(Fp, alpha, ones_vec(R), n).gen;
  Mat W = blockcode::cauchy_code(Fp, alpha, ones_vec(R), m).gen;
  ExtremalTriple T = verify_triple(C, V, W, d);
  internal_check(T.verified, "rank sum argument failed unexpectedly");
  return T;
}

ExtremalTriple extend_triple(const ExtremalTriple& T, uint32_t n2,
                             uint32_t m2) {
  require(T.C.field != nullptr, "triple carries no code");
  require(n2 >= T.V.rows && m2 >= T.W.rows,
          "extension cannot drop rows of V or W");
  Mat V2(n2, T.V.cols);
  std::copy(T.V.a.begin(), T.V.a.end(), V2.a.begin());
  Mat W2(m2, T.W.cols);
  std::copy(T.W.a.begin(), T.W.a.end(), W2.a.begin());
  return verify_general(T.C, V2, W2, T.d, uint64_t(1) << 22);
}

GabidulinCode gabidulin(uint64_t q, uint32_t m, uint32_t n, uint32_t K,
                        uint32_t s, const std::vector<uint32_t>& points) {
  FieldPtr base = field_of_order(q);
  require(m >= 2, "extension degree must be at least 2");
  require(n >= 1 && n <= m, "need 1 <= n <= m evaluation points");
  require(K >= 1 && K <= n, "need 1 <= K <= n");
  require(s >= 1 && s < m, "need 1 <= s < m");
  require(std::gcd(s, m) == 1, "s must be coprime to the extension degree");
  gf::Tower tw = gf::make_tower(base, m);
  const Field& E = *tw.ext;
  gf::SubfieldBasis B = gf::power_basis(tw);

  require(points.size() == n, "need exactly n evaluation points");
  for (uint32_t z : points)
    require(z >= 1 && z < E.q(),
            "evaluation points must be nonzero extension elements");
  require(linalg::rank(*base, gf::subfield_expand(B, points)) == n,
          "evaluation points must be independent over the base field");

  uint64_t qm1 = uint64_t(E.q()) - 1;
  Mat vg(K, n);
  for (uint32_t i = 0; i < K; ++i) {
    // x -> x^(q^(s i)) is a base-fixing field automorphism.
    uint64_t ei = powmod(q, uint64_t(s) * i, qm1);
    for (uint32_t j = 0; j < n; ++j)
      vg.at(i, j) = E.pow(points[j], int64_t(ei));
  }

  std::vector<Mat> mats;
  mats.reserve(size_t(K) * m);
  for (uint32_t i = 0; i < K; ++i)
    for (uint32_t l = 0; l < m; ++l) {
      std::vector<uint32_t> row(n);
      for (uint32_t j = 0; j < n; ++j)
        row[j] = E.mul(B.gamma()[l], vg.at(i, j));
      mats.push_back(gf::subfield_expand(B, row));
    }

  GabidulinCode out;
  out.tower = std::move(tw);
  out.K = K;
  out.s = s;
  out.points = points;
  out.vec_gen = std::move(vg);
  out.expanded = rankcode::make_code(base, n, m, mats);
  internal_check(out.expanded.k() == uint64_t(K) * m,
                 "expanded dimension dropped");
  return out;
}

GabidulinCode gabidulin(uint64_t q, uint32_t m, uint32_t n, uint32_t K,
                        uint32_t s) {
  FieldPtr base = field_of_order(q);
  require(m >= 2, "extension degree must be at least 2");
  require(n >= 1 && n <= m, "need 1 <= n <= m evaluation points");
  gf::Tower tw = gf::make_tower(base, m);
  gf::SubfieldBasis B = gf::power_basis(tw);
  std::vector<uint32_t> pts(B.gamma().begin(), B.gamma().begin() + n);
  return gabidulin(q, m, n, K, s, pts);
}

Mat companion_matrix(const Field& F, const gf::Poly& f) {
  gf::Poly ft = gf::poly_trim(f);
  int k = gf::poly_deg(ft);
  require(k >= 1, "modulus must have positive degree");
  for (uint32_t c : ft) require(c < F.q(), "f has coefficients outside the field");
  gf::Poly fm = gf::poly_make_monic(F, ft);
  auto xp = x_power_table(F, fm, uint32_t(k) + 1);
  Mat M{uint32_t(k), uint32_t(k)};
  for (uint32_t j = 0; j < uint32_t(k); ++j)
    for (uint32_t l = 0; l < xp[j + 1].size(); ++l) M.at(j, l) = xp[j + 1][l];
  return M;
}

tensor::Tensor3 poly_mult_tensor(const FieldPtr& F, uint32_t m, uint32_t n,
                                 uint32_t k, const gf::Poly& f) {
  require(F != nullptr, "null field");
  require(m >= 1 && n >= 1 && k >= 1, "tensor dimensions must be positive");
  gf::Poly ft = gf::poly_trim(f);
  require(gf::poly_deg(ft) == int(k), "f must have degree k");
  for (uint32_t c : ft) require(c < F->q(), "f has coefficients outside the field");
  gf::Poly fm = gf::poly_make_monic(*F, ft);
  auto xp = x_power_table(*F, fm, m + n - 1);
  tensor::Tensor3 T(m, n, k);
  for (uint32_t i = 0; i < m; ++i)
    for (uint32_t j = 0; j < n; ++j) {
      const gf::Poly& p = xp[i + j];
      for (uint32_t l = 0; l < p.size(); ++l) T.at(i, j, l) = p[l];
    }
  return T;
}

tensor::SimpleSum poly_mult_certificate(const FieldPtr& F, uint32_t m,
                                        uint32_t n, const gf::Poly& f) {
  require(F != nullptr, "null field");
  require(m >= 1 && n >= 1, "tensor dimensions must be positive");
  gf::Poly ft = gf::poly_trim(f);
  int kd = gf::poly_deg(ft);
  require(kd >= 1, "modulus must have positive degree");
  uint32_t k = uint32_t(kd);
  for (uint32_t c : ft) require(c < F->q(), "f has coefficients outside the field");
  const Field& Fr = *F;
  gf::Poly fm = gf::poly_make_monic(Fr, ft);
  uint32_t N = m + n - 1;
  require(uint64_t(Fr.q()) + 1 >= N, "field too small: need q >= m+n-2");

  // Evaluate the product at N distinct projective points and interpolate;
  // infinity enters only at the minimum field size q = m+n-2, where it
  // contributes the top-coefficient term.
  bool use_inf = uint64_t(Fr.q()) + 1 == N;
  uint32_t nf = use_inf ? N - 1 : N;
  auto pts = distinct_points(Fr, nf, false);

  tensor::SimpleSum S;
  S.n1 = m;
  S.n2 = n;
  S.n3 = k;
  for (uint32_t t = 0; t < nf; ++t) {
    gf::Poly num{1};
    uint32_t den = 1;
    for (uint32_t s = 0; s < nf; ++s) {
      if (s == t) continue;
      num = gf::poly_mul(Fr, num, gf::Poly{Fr.neg(pts[s].val), 1});
      den = Fr.mul(den, Fr.sub(pts[t].val, pts[s].val));
    }
    uint32_t scale = Fr.inv(den);
    for (uint32_t& c : num) c = Fr.mul(c, scale);
    gf::Poly w = gf::poly_mod(Fr, num, fm);
    if (gf::poly_deg(w) < 0) continue;  // this basis polynomial dies mod f
    tensor::SimpleSum::Triple tr;
    tr.u = point_powers(Fr, pts[t].val, m);
    tr.v = point_powers(Fr, pts[t].val, n);
    tr.w = w;
    tr.w.resize(k, 0);
    S.triples.push_back(std::move(tr));
  }
  if (use_inf) {
    gf::Poly L{1};
    for (uint32_t s = 0; s < nf; ++s)
      L = gf::poly_mul(Fr, L, gf::Poly{Fr.neg(pts[s].val), 1});
    gf::Poly w = gf::poly_mod(Fr, L, fm);
    if (gf::poly_deg(w) >= 0) {
      tensor::SimpleSum::Triple tr;
      tr.u.assign(m, 0);
      tr.u[m - 1] = 1;
      tr.v.assign(n, 0);
      tr.v[n - 1] = 1;
      tr.w = w;
      tr.w.resize(k, 0);
      S.triples.push_back(std::move(tr));
    }
  }
  tensor::validate(Fr, S);
  internal_check(tensor::to_coordinates(Fr, S) ==
                     poly_mult_tensor(F, m, n, k, fm),
                 "interpolation certificate does not rebuild the tensor");
  return S;
}

PeelResult peel_subcode(const MatrixCode& code,
                        const tensor::SimpleSum& cert) {
  require(code.field != nullptr, "code carries no field");
  const FieldPtr& Fp = code.field;
  const Field& F = *Fp;
  require(code.k() >= 2, "peeling needs dimension at least 2");
  require(cert.n2 == code.n && cert.n3 == code.m,
          "certificate shape does not match the code ambient");
  require(cert.n1 == code.k(),
          "certificate must cover the code's generator list");

  std::vector<Mat> gens;
  for (uint32_t i = 0; i < code.k(); ++i)
    gens.push_back(code.basis_matrix(i));
  tensor::SimpleSum S = reduce_cert(Fp, gens, cert);
  uint32_t k = code.k();
  uint32_t L = S.length();

  // Coefficient rows: generator s over the independent rank-one terms.
  // After row reduction, every generator below the first avoids the first
  // pivot term entirely, so dropping the first row drops one term.
  Mat U(k, L);
  for (uint32_t s = 0; s < k; ++s)
    for (uint32_t t = 0; t < L; ++t) U.at(s, t) = S.triples[t].u[s];
  auto rr = linalg::rref(F, U);
  internal_check(rr.rank == k, "coefficient rows must stay independent");

  std::vector<Mat> sub;
  for (uint32_t s = 1; s < k; ++s) {
    Mat M(code.n, code.m);
    for (uint32_t t = 0; t < L; ++t) {
      uint32_t c = rr.R.at(s, t);
      if (c == 0) continue;
      for (uint32_t r = 0; r < code.n; ++r) {
        uint32_t vr = S.triples[t].v[r];
        if (vr == 0) continue;
        uint32_t cv = F.mul(c, vr);
        for (uint32_t cc = 0; cc < code.m; ++cc)
          M.at(r, cc) =
              F.add(M.at(r, cc), F.mul(cv, S.triples[t].w[cc]));
      }
    }
    sub.push_back(std::move(M));
  }

  PeelResult out;
  out.cert.n1 = k - 1;
  out.cert.n2 = code.n;
  out.cert.n3 = code.m;
  for (uint32_t t = 0; t < L; ++t) {
    tensor::SimpleSum::Triple nt;
    nt.u.resize(k - 1);
    bool used = false;
    for (uint32_t s = 1; s < k; ++s) {
      nt.u[s - 1] = rr.R.at(s, t);
      used = used || nt.u[s - 1] != 0;
    }
    if (!used) continue;
    nt.v = S.triples[t].v;
    nt.w = S.triples[t].w;
    out.cert.triples.push_back(std::move(nt));
  }
  internal_check(out.cert.length() < L, "peel must shorten the certificate");
  tensor::validate(F, out.cert);
  internal_check(tensor::to_coordinates(F, out.cert) ==
                     tensor::from_slices(sub),
                 "peeled certificate does not rebuild the subcode");
  out.code = rankcode::make_code(Fp, code.n, code.m, sub);
  internal_check(out.code.k() == k - 1, "peeled dimension is off by more");
  return out;
}

SmallTrankResult small_trank_code(uint64_t q, uint32_t n, uint32_t m,
                                  uint32_t k, uint32_t d) {
  require(k >= 1 && d >= 1, "dimension and distance must be positive");
  require(d <= n && n <= m, "need d <= n <= m");
  uint32_t K = (k + m - 1) / m;
  uint32_t mu = K + d - 1;
  require(mu <= n, "dimension too large: need ceil(k/m) + d - 1 <= n");
  if (m == 1) return unit_result(q);
  require(uint64_t(q) >= uint64_t(m) + mu - 2,
          "field too small: need q >= m + ceil(k/m) + d - 3");
  uint64_t bound =
      uint64_t(k) +
      std::min(uint64_t(m) * (d - 1), uint64_t(K) * (mu - 1));
  return dg_peeled(q, m, mu, K, n, m, k, d, uint32_t(bound));
}

SmallTrankResult square_trank_code(uint64_t q, uint32_t n, uint32_t m,
                                   uint32_t k, uint32_t d) {
  require(k >= 1 && d >= 1, "dimension and distance must be positive");
  require(d <= n && n <= m, "need d <= n <= m");
  uint32_t rho = 0;
  for (uint32_t s = d; s <= n; ++s)
    if (uint64_t(s) * (s - d + 1) >= k) {
      rho = s;
      break;
    }
  require(rho != 0, "no side length s <= n with s(s-d+1) >= k");
  if (rho == 1) return unit_result(q);
  require(uint64_t(q) >= 2 * uint64_t(rho) - 2,
          "field too small: need q >= 2 rho - 2");
  uint32_t K = rho - d + 1;
  uint64_t bound =
      uint64_t(k) +
      std::min(uint64_t(rho) * (d - 1), uint64_t(K) * (rho - 1));
  return dg_peeled(q, rho, rho, K, n, m, k, d, uint32_t(bound));
}

Classification classify_parameters(uint32_t k, uint32_t d, uint32_t n,
                                   uint32_t m, uint64_t q) {
  require(k >= 1 && d >= 1 && n >= 1 && m >= 1,
          "parameters must be positive");
  require(q < (uint64_t(1) << 32), "field order out of range");
  factor_prime_power(q);
  uint64_t R = uint64_t(k) + d - 1;

  if (d > std::min(n, m))
    return {Region::impossible,
            "every matrix in the ambient has rank at most min(n, m)"};
  if (uint64_t(k) > rankcode::singleton_dim_bound(n, m, d))
    return {Region::impossible,
            "dimension exceeds the Singleton bound at this distance"};
  // The code's image under any verified pair would be a [k+d-1, k, d] block
  // code; the Griesmer bound can rule that length out entirely.
  {
    uint64_t need = 0;
    uint64_t qi = 1;
    bool over = false;
    for (uint32_t i = 0; i < k && !over; ++i) {
      need += (d + qi - 1) / qi;
      if (need > R) over = true;
      if (qi < d) qi *= q;
    }
    if (over)
      return {Region::impossible,
              "no block code of length k+d-1 meets the Griesmer bound"};
  }
  if (k == 1)
    return {Region::mtr_known,
            "a single rank-d generator splits into d rank-one terms"};
  if (d == 1)
    return {Region::mtr_known,
            "k independent elementary matrices span an MTR code"};

  bool mds_cauchy = q + 1 >= R;
  // An optimal block code of length k+d-1 exists via evaluation codes when
  // the projective line is long enough, and via the parity code at d = 2
  // over every field.
  bool optimal_exists = mds_cauchy || d == 2;
  if (n >= R && m >= R && optimal_exists)
    return {Region::mtr_known,
            "ambient covers length k+d-1 on both sides: any full-rank "
            "factors verify"};
  if ((n >= R || m >= R) && mds_cauchy)
    return {Region::mtr_known,
            "one side covers length k+d-1: evaluation factors verify"};
  if (d < k && std::min(n, m) >= d && std::max(n, m) >= k &&
      q >= uint64_t(k) + d - 2)
    return {Region::mtr_known,
            "irreducible numerator evaluation triple in the k x d corner"};
  if (d >= k && q >= 2 * uint64_t(d) - 2)
    return {Region::mtr_known,
            "peeled linearized evaluation code in the d x d corner"};
  if (uint64_t(n) + m >= R + d && mds_cauchy)
    return {Region::mtr_known,
            "factor dimension sum n + m >= k + 2d - 1 forces rank d"};

  bool geometric = n >= R || m >= R || (d < k && std::max(n, m) >= k) ||
                   d >= k || uint64_t(n) + m >= R + d;
  if (geometric)
    return {Region::open,
            "a catalog construction would apply but the field is too small"};
  return {Region::open,
          "between the Singleton bounds and the known constructions"};
}

}  // namespace rkt::construct
