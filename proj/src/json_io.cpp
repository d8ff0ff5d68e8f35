#include "rktensor/json_io.hpp"

#include <algorithm>
#include <initializer_list>
#include <string>
#include <vector>

namespace rkt::jsonio {

using construct::Classification;
using construct::ExtremalTriple;
using construct::GabidulinCode;
using construct::Region;
using construct::RsConstruction;
using construct::SmallTrankResult;
using construct::TrkCertificate;
using construct::VerifyEntry;
using gf::Field;
using gf::FieldPtr;
using linalg::Mat;
using rankcode::MatrixCode;
using tensor::SimpleSum;
using tensor::Tensor3;
using trank::GtrProfile;
using trank::InequivResult;
using trank::MtrCategory;
using trank::MtrVerdict;
using trank::SearchConfig;
using trank::Strategy;
using trank::TrkResult;

namespace {

[[noreturn]] void fail(const std::string& at, const std::string& why) {
  throw UsageError(at + ": " + why);
}

std::string idx(const std::string& at, size_t i) {
  return at + "[" + std::to_string(i) + "]";
}

const json& member(const json& j, const std::string& at, const char* key) {
  if (!j.is_object()) fail(at, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(at + "." + key, "missing");
  return *it;
}

// Closed formats: a key the parser does not know is a typo, not an
// extension point.
void only_keys(const json& j, const std::string& at,
               std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(at, "expected an object");
  for (const auto& kv : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || kv.key() == k;
    if (!known) fail(at + "." + kv.key(), "unknown field");
  }
}

uint64_t get_uint(const json& j, const std::string& at,
                  uint64_t hi = UINT64_MAX) {
  if (!j.is_number_unsigned()) fail(at, "expected a nonnegative integer");
  uint64_t v = j.get<uint64_t>();
  if (v > hi) fail(at, "value exceeds " + std::to_string(hi));
  return v;
}

uint32_t get_u32(const json& j, const std::string& at) {
  return uint32_t(get_uint(j, at, UINT32_MAX));
}

int64_t get_int(const json& j, const std::string& at) {
  if (!j.is_number_integer()) fail(at, "expected an integer");
  return j.get<int64_t>();
}

bool get_bool(const json& j, const std::string& at) {
  if (!j.is_boolean()) fail(at, "expected a boolean");
  return j.get<bool>();
}

std::string get_str(const json& j, const std::string& at) {
  if (!j.is_string()) fail(at, "expected a string");
  return j.get<std::string>();
}

void need_array(const json& j, const std::string& at) {
  if (!j.is_array()) fail(at, "expected an array");
}

std::vector<uint64_t> u64s_from_json(const json& j, const std::string& at) {
  need_array(j, at);
  std::vector<uint64_t> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(get_uint(j[i], idx(at, i)));
  return out;
}

std::vector<uint32_t> u32s_from_json(const json& j, const std::string& at) {
  need_array(j, at);
  std::vector<uint32_t> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) out.push_back(get_u32(j[i], idx(at, i)));
  return out;
}

}  // namespace

json parse_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    // Re-parse with exceptions for the position diagnostics.
    try {
      return json::parse(text);
    } catch (const json::parse_error& ex) {
      throw UsageError(std::string("input is not valid JSON: ") + ex.what());
    }
  }
  return j;
}

json field_to_json(const Field& F) {
  return json{{"p", F.p()}, {"e", F.e()}, {"modulus", F.modulus()}};
}

FieldPtr field_from_json(const json& j, const std::string& at) {
  only_keys(j, at, {"p", "e", "modulus"});
  uint32_t p = get_u32(member(j, at, "p"), at + ".p");
  uint32_t e = get_u32(member(j, at, "e"), at + ".e");
  try {
    if (!j.contains("modulus")) return gf::make_field(p, e);
    const json& jm = j["modulus"];
    need_array(jm, at + ".modulus");
    gf::Poly mod;
    for (size_t i = 0; i < jm.size(); ++i)
      mod.push_back(get_u32(jm[i], idx(at + ".modulus", i)));
    return gf::make_field_with_modulus(p, e, std::move(mod));
  } catch (const UsageError& ex) {
    fail(at, ex.what());
  }
}

json elt_to_json(const Field& F, uint32_t code) {
  json arr = json::array();
  for (uint32_t i = 0; i < F.e(); ++i) {
    arr.push_back(code % F.p());
    code /= F.p();
  }
  return arr;
}

uint32_t elt_from_json(const Field& F, const json& j, const std::string& at) {
  // A bare integer is the element code, which is the coefficient array read
  // as a base-p number, so the two input forms can never disagree.
  if (j.is_number_unsigned()) {
    uint64_t v = j.get<uint64_t>();
    if (v >= F.q()) fail(at, "element code must be below " + std::to_string(F.q()));
    return uint32_t(v);
  }
  need_array(j, at);
  if (j.size() > F.e())
    fail(at, "more than " + std::to_string(F.e()) + " coefficients");
  uint32_t code = 0;
  uint64_t scale = 1;
  for (size_t i = 0; i < j.size(); ++i) {
    uint64_t c = get_uint(j[i], idx(at, i), F.p() - 1);
    code += uint32_t(c * scale);
    scale *= F.p();
  }
  return code;
}

json vec_to_json(const Field& F, const std::vector<uint32_t>& v) {
  json arr = json::array();
  for (uint32_t x : v) arr.push_back(elt_to_json(F, x));
  return arr;
}

std::vector<uint32_t> vec_from_json(const Field& F, const json& j,
                                    const std::string& at) {
  need_array(j, at);
  std::vector<uint32_t> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(elt_from_json(F, j[i], idx(at, i)));
  return out;
}

json mat_to_json(const Field& F, const Mat& M) {
  json rows = json::array();
  for (uint32_t r = 0; r < M.rows; ++r) {
    json row = json::array();
    for (uint32_t c = 0; c < M.cols; ++c)
      row.push_back(elt_to_json(F, M.at(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const Field& F, const json& j, const std::string& at,
                  int64_t cols) {
  need_array(j, at);
  if (j.empty()) return Mat(0, cols < 0 ? 0 : uint32_t(cols));
  std::vector<std::vector<uint32_t>> rows;
  for (size_t r = 0; r < j.size(); ++r) {
    rows.push_back(vec_from_json(F, j[r], idx(at, r)));
    if (rows.back().size() != rows.front().size())
      fail(idx(at, r), "rows must all have the same length");
  }
  if (cols >= 0 && int64_t(rows.front().size()) != cols)
    fail(at, "expected " + std::to_string(cols) + " columns");
  Mat M(uint32_t(rows.size()), uint32_t(rows.front().size()));
  for (uint32_t r = 0; r < M.rows; ++r)
    for (uint32_t c = 0; c < M.cols; ++c) M.at(r, c) = rows[r][c];
  return M;
}

json code_to_json(const MatrixCode& C) {
  json basis = json::array();
  for (uint32_t i = 0; i < C.k(); ++i)
    basis.push_back(mat_to_json(*C.field, C.basis_matrix(i)));
  return json{{"field", field_to_json(*C.field)},
              {"n", C.n},
              {"m", C.m},
              {"basis", std::move(basis)}};
}

MatrixCode code_from_json(const json& j, const std::string& at) {
  only_keys(j, at, {"field", "n", "m", "basis"});
  FieldPtr F = field_from_json(member(j, at, "field"), at + ".field");
  uint32_t n = get_u32(member(j, at, "n"), at + ".n");
  uint32_t m = get_u32(member(j, at, "m"), at + ".m");
  const json& jb = member(j, at, "basis");
  need_array(jb, at + ".basis");
  std::vector<Mat> basis;
  for (size_t i = 0; i < jb.size(); ++i) {
    Mat M = mat_from_json(*F, jb[i], idx(at + ".basis", i), m);
    if (M.rows != n)
      fail(idx(at + ".basis", i),
           "expected " + std::to_string(n) + " rows");
    basis.push_back(std::move(M));
  }
  try {
    return rankcode::make_code(F, n, m, basis);
  } catch (const UsageError& ex) {
    fail(at, ex.what());
  }
}

json block_to_json(const blockcode::BlockCode& C) {
  return json{{"field", field_to_json(*C.field)},
              {"N", C.N},
              {"k", C.k()},
              {"generator", mat_to_json(*C.field, C.gen)}};
}

blockcode::BlockCode block_from_json(const json& j, const std::string& at) {
  only_keys(j, at, {"field", "N", "k", "generator"});
  FieldPtr F = field_from_json(member(j, at, "field"), at + ".field");
  uint32_t N = get_u32(member(j, at, "N"), at + ".N");
  uint32_t k = get_u32(member(j, at, "k"), at + ".k");
  Mat gen = mat_from_json(*F, member(j, at, "generator"), at + ".generator",
                          int64_t(N));
  blockcode::BlockCode C;
  try {
    C = blockcode::make_block_code(F, N, gen);
  } catch (const UsageError& ex) {
    fail(at, ex.what());
  }
  if (C.k() != k)
    fail(at + ".k", "generator spans dimension " + std::to_string(C.k()) +
                        ", not " + std::to_string(k));
  return C;
}

json point_to_json(const Field& F, const blockcode::EvalPoint& pt) {
  if (pt.inf) return json("inf");
  return elt_to_json(F, pt.val);
}

blockcode::EvalPoint point_from_json(const Field& F, const json& j,
                                     const std::string& at) {
  if (j.is_string()) {
    if (j.get<std::string>() != "inf")
      fail(at, "the only string form is \"inf\"");
    return blockcode::ev_inf();
  }
  return blockcode::ev(elt_from_json(F, j, at));
}

json tensor_to_json(const Field& F, const Tensor3& X) {
  json entries = json::array();
  for (uint32_t i = 0; i < X.n1; ++i) {
    json slab = json::array();
    for (uint32_t jj = 0; jj < X.n2; ++jj) {
      json row = json::array();
      for (uint32_t l = 0; l < X.n3; ++l)
        row.push_back(elt_to_json(F, X.at(i, jj, l)));
      slab.push_back(std::move(row));
    }
    entries.push_back(std::move(slab));
  }
  return json{{"n1", X.n1}, {"n2", X.n2}, {"n3", X.n3},
              {"entries", std::move(entries)}};
}

Tensor3 tensor_from_json(const Field& F, const json& j,
                         const std::string& at) {
  only_keys(j, at, {"n1", "n2", "n3", "entries"});
  uint32_t n1 = get_u32(member(j, at, "n1"), at + ".n1");
  uint32_t n2 = get_u32(member(j, at, "n2"), at + ".n2");
  uint32_t n3 = get_u32(member(j, at, "n3"), at + ".n3");
  const json& je = member(j, at, "entries");
  need_array(je, at + ".entries");
  if (je.size() != n1) fail(at + ".entries", "expected " + std::to_string(n1) + " slices");
  Tensor3 X(n1, n2, n3);
  for (uint32_t i = 0; i < n1; ++i) {
    const std::string ai = idx(at + ".entries", i);
    need_array(je[i], ai);
    if (je[i].size() != n2) fail(ai, "expected " + std::to_string(n2) + " rows");
    for (uint32_t jj = 0; jj < n2; ++jj) {
      const std::string aj = idx(ai, jj);
      need_array(je[i][jj], aj);
      if (je[i][jj].size() != n3)
        fail(aj, "expected " + std::to_string(n3) + " entries");
      for (uint32_t l = 0; l < n3; ++l)
        X.at(i, jj, l) = elt_from_json(F, je[i][jj][l], idx(aj, l));
    }
  }
  return X;
}

json sum_to_json(const Field& F, const SimpleSum& S) {
  json triples = json::array();
  for (const auto& t : S.triples)
    triples.push_back(json{{"u", vec_to_json(F, t.u)},
                           {"v", vec_to_json(F, t.v)},
                           {"w", vec_to_json(F, t.w)}});
  return json{{"n1", S.n1}, {"n2", S.n2}, {"n3", S.n3},
              {"triples", std::move(triples)}};
}

SimpleSum sum_from_json(const Field& F, const json& j, const std::string& at) {
  only_keys(j, at, {"n1", "n2", "n3", "triples"});
  SimpleSum S;
  S.n1 = get_u32(member(j, at, "n1"), at + ".n1");
  S.n2 = get_u32(member(j, at, "n2"), at + ".n2");
  S.n3 = get_u32(member(j, at, "n3"), at + ".n3");
  const json& jt = member(j, at, "triples");
  need_array(jt, at + ".triples");
  for (size_t i = 0; i < jt.size(); ++i) {
    const std::string ai = idx(at + ".triples", i);
    only_keys(jt[i], ai, {"u", "v", "w"});
    SimpleSum::Triple t;
    t.u = vec_from_json(F, member(jt[i], ai, "u"), ai + ".u");
    t.v = vec_from_json(F, member(jt[i], ai, "v"), ai + ".v");
    t.w = vec_from_json(F, member(jt[i], ai, "w"), ai + ".w");
    S.triples.push_back(std::move(t));
  }
  try {
    tensor::validate(F, S);
  } catch (const UsageError& ex) {
    fail(at, ex.what());
  }
  return S;
}

json cert_to_json(const Field& F, const TrkCertificate& c) {
  return json{{"upper", sum_to_json(F, c.upper)},
              {"lower", c.lower},
              {"lower_origin", c.lower_origin},
              {"exact", c.exact},
              {"note", c.note}};
}

TrkCertificate cert_from_json(const Field& F, const json& j,
                              const std::string& at) {
  only_keys(j, at, {"upper", "lower", "lower_origin", "exact", "note"});
  TrkCertificate c;
  c.upper = sum_from_json(F, member(j, at, "upper"), at + ".upper");
  c.lower = get_u32(member(j, at, "lower"), at + ".lower");
  c.lower_origin = get_str(member(j, at, "lower_origin"), at + ".lower_origin");
  c.exact = get_bool(member(j, at, "exact"), at + ".exact");
  c.note = get_str(member(j, at, "note"), at + ".note");
  if (c.lower > c.upper.length())
    fail(at + ".lower", "exceeds the expansion length");
  if (c.exact != (c.lower == c.upper.length()))
    fail(at + ".exact", "inconsistent with lower and the expansion length");
  return c;
}

json trk_to_json(const Field& F, const TrkResult& r) {
  return json{{"certificate", cert_to_json(F, r.cert)},
              {"provenance",
               json{{"strategy", r.strategy_used},
                    {"nodes_explored", r.nodes_explored},
                    {"levels_ruled_out", r.levels_ruled_out}}}};
}

TrkResult trk_from_json(const Field& F, const json& j, const std::string& at) {
  only_keys(j, at, {"certificate", "provenance"});
  TrkResult r;
  r.cert = cert_from_json(F, member(j, at, "certificate"), at + ".certificate");
  const json& jp = member(j, at, "provenance");
  const std::string ap = at + ".provenance";
  only_keys(jp, ap, {"strategy", "nodes_explored", "levels_ruled_out"});
  r.strategy_used = get_str(member(jp, ap, "strategy"), ap + ".strategy");
  r.nodes_explored =
      get_uint(member(jp, ap, "nodes_explored"), ap + ".nodes_explored");
  r.levels_ruled_out =
      get_u32(member(jp, ap, "levels_ruled_out"), ap + ".levels_ruled_out");
  return r;
}

json nq_to_json(const blockcode::NqBounds& b) {
  return json{{"lower", b.lower}, {"upper", b.upper}, {"exact", b.exact},
              {"method", b.method}};
}

blockcode::NqBounds nq_from_json(const json& j, const std::string& at) {
  only_keys(j, at, {"lower", "upper", "exact", "method"});
  blockcode::NqBounds b;
  b.lower = get_uint(member(j, at, "lower"), at + ".lower");
  b.upper = get_uint(member(j, at, "upper"), at + ".upper");
  b.exact = get_bool(member(j, at, "exact"), at + ".exact");
  b.method = get_str(member(j, at, "method"), at + ".method");
  if (b.lower > b.upper) fail(at + ".lower", "exceeds upper");
  if (b.exact && b.lower != b.upper)
    fail(at + ".exact", "claimed with lower != upper");
  return b;
}

json dist_to_json(const Field& F, const rankcode::DistResult& d) {
  return json{{"exact", d.exact},  {"d", d.d},
              {"lower", d.lower},  {"upper", d.upper},
              {"witness", mat_to_json(F, d.witness)}, {"note", d.note}};
}

rankcode::DistResult dist_from_json(const Field& F, const json& j,
                                    const std::string& at) {
  only_keys(j, at, {"exact", "d", "lower", "upper", "witness", "note"});
  rankcode::DistResult d;
  d.exact = get_bool(member(j, at, "exact"), at + ".exact");
  d.d = get_u32(member(j, at, "d"), at + ".d");
  d.lower = get_u32(member(j, at, "lower"), at + ".lower");
  d.upper = get_u32(member(j, at, "upper"), at + ".upper");
  d.witness = mat_from_json(F, member(j, at, "witness"), at + ".witness");
  d.note = get_str(member(j, at, "note"), at + ".note");
  return d;
}

json triple_to_json(const ExtremalTriple& T) {
  const Field& F = *T.C.field;
  json log = json::array();
  for (const auto& ent : T.log)
    log.push_back(json{{"codeword", vec_to_json(F, ent.codeword)},
                       {"rank", ent.rank}});
  return json{{"C", block_to_json(T.C)},
              {"V", mat_to_json(F, T.V)},
              {"W", mat_to_json(F, T.W)},
              {"d", T.d},
              {"verified", T.verified},
              {"log", std::move(log)},
              {"log_complete", T.log_complete},
              {"witness", vec_to_json(F, T.witness)},
              {"witness_rank", T.witness_rank}};
}

ExtremalTriple triple_from_json(const json& j, const std::string& at) {
  only_keys(j, at, {"C", "V", "W", "d", "verified", "log", "log_complete",
                    "witness", "witness_rank"});
  ExtremalTriple T;
  T.C = block_from_json(member(j, at, "C"), at + ".C");
  const Field& F = *T.C.field;
  T.V = mat_from_json(F, member(j, at, "V"), at + ".V", int64_t(T.C.N));
  T.W = mat_from_json(F, member(j, at, "W"), at + ".W", int64_t(T.C.N));
  T.d = get_u32(member(j, at, "d"), at + ".d");
  T.verified = get_bool(member(j, at, "verified"), at + ".verified");
  const json& jl = member(j, at, "log");
  need_array(jl, at + ".log");
  for (size_t i = 0; i < jl.size(); ++i) {
    const std::string ai = idx(at + ".log", i);
    only_keys(jl[i], ai, {"codeword", "rank"});
    VerifyEntry ent;
    ent.codeword = vec_from_json(F, member(jl[i], ai, "codeword"),
                                 ai + ".codeword");
    if (ent.codeword.size() != T.C.N)
      fail(ai + ".codeword", "expected length " + std::to_string(T.C.N));
    ent.rank = get_u32(member(jl[i], ai, "rank"), ai + ".rank");
    T.log.push_back(std::move(ent));
  }
  T.log_complete = get_bool(member(j, at, "log_complete"), at + ".log_complete");
  T.witness = vec_from_json(F, member(j, at, "witness"), at + ".witness");
  if (!T.witness.empty() && T.witness.size() != T.C.N)
    fail(at + ".witness", "expected length " + std::to_string(T.C.N));
  T.witness_rank = get_u32(member(j, at, "witness_rank"), at + ".witness_rank");
  return T;
}

json profile_to_json(const Field& F, const GtrProfile& P) {
  json certs = json::array();
  for (const auto& c : P.certificates) certs.push_back(cert_to_json(F, c));
  return json{{"values", P.values},
              {"certificates", std::move(certs)},
              {"complete", P.complete},
              {"note", P.note}};
}

GtrProfile profile_from_json(const Field& F, const json& j,
                             const std::string& at) {
  only_keys(j, at, {"values", "certificates", "complete", "note"});
  GtrProfile P;
  P.values = u32s_from_json(member(j, at, "values"), at + ".values");
  for (size_t i = 1; i < P.values.size(); ++i)
    if (P.values[i] <= P.values[i - 1])
      fail(idx(at + ".values", i), "profile values must increase strictly");
  const json& jc = member(j, at, "certificates");
  need_array(jc, at + ".certificates");
  if (jc.size() != P.values.size())
    fail(at + ".certificates", "expected one certificate per value");
  for (size_t i = 0; i < jc.size(); ++i)
    P.certificates.push_back(
        cert_from_json(F, jc[i], idx(at + ".certificates", i)));
  P.complete = get_bool(member(j, at, "complete"), at + ".complete");
  P.note = get_str(member(j, at, "note"), at + ".note");
  return P;
}

namespace {

const char* category_name(MtrCategory c) {
  switch (c) {
    case MtrCategory::mtr: return "mtr";
    case MtrCategory::tensor_rank_extremal: return "tensor_rank_extremal";
    case MtrCategory::neither: return "neither";
    case MtrCategory::unknown: return "unknown";
  }
  throw InternalError("unhandled verdict category");
}

MtrCategory category_from_name(const std::string& s, const std::string& at) {
  if (s == "mtr") return MtrCategory::mtr;
  if (s == "tensor_rank_extremal") return MtrCategory::tensor_rank_extremal;
  if (s == "neither") return MtrCategory::neither;
  if (s == "unknown") return MtrCategory::unknown;
  fail(at, "unknown category '" + s + "'");
}

}  // namespace

json verdict_to_json(const Field& F, const MtrVerdict& v) {
  return json{{"category", category_name(v.category)},
              {"d", v.d},
              {"trk", trk_to_json(F, v.trk)},
              {"nq", nq_to_json(v.nq)},
              {"evidence", v.evidence}};
}

MtrVerdict verdict_from_json(const Field& F, const json& j,
                             const std::string& at) {
  only_keys(j, at, {"category", "d", "trk", "nq", "evidence"});
  MtrVerdict v;
  v.category = category_from_name(
      get_str(member(j, at, "category"), at + ".category"), at + ".category");
  v.d = get_u32(member(j, at, "d"), at + ".d");
  v.trk = trk_from_json(F, member(j, at, "trk"), at + ".trk");
  v.nq = nq_from_json(member(j, at, "nq"), at + ".nq");
  v.evidence = get_str(member(j, at, "evidence"), at + ".evidence");
  return v;
}

json inequiv_to_json(const InequivResult& r) {
  return json{{"distinguished", r.distinguished},
              {"invariant", r.invariant},
              {"value1", r.value1},
              {"value2", r.value2},
              {"note", r.note}};
}

InequivResult inequiv_from_json(const json& j, const std::string& at) {
  only_keys(j, at, {"distinguished", "invariant", "value1", "value2", "note"});
  InequivResult r;
  r.distinguished = get_bool(member(j, at, "distinguished"),
                             at + ".distinguished");
  r.invariant = get_str(member(j, at, "invariant"), at + ".invariant");
  r.value1 = u64s_from_json(member(j, at, "value1"), at + ".value1");
  r.value2 = u64s_from_json(member(j, at, "value2"), at + ".value2");
  r.note = get_str(member(j, at, "note"), at + ".note");
  return r;
}

namespace {

const char* region_name(Region r) {
  switch (r) {
    case Region::impossible: return "impossible";
    case Region::mtr_known: return "mtr_known";
    case Region::open: return "open";
  }
  throw InternalError("unhandled classification region");
}

}  // namespace

json classification_to_json(const Classification& c) {
  return json{{"region", region_name(c.region)}, {"rule", c.rule}};
}

Classification classification_from_json(const json& j, const std::string& at) {
  only_keys(j, at, {"region", "rule"});
  Classification c;
  std::string s = get_str(member(j, at, "region"), at + ".region");
  if (s == "impossible") c.region = Region::impossible;
  else if (s == "mtr_known") c.region = Region::mtr_known;
  else if (s == "open") c.region = Region::open;
  else fail(at + ".region", "unknown region '" + s + "'");
  c.rule = get_str(member(j, at, "rule"), at + ".rule");
  return c;
}

json report_to_json(const bench::ComplexityReport& r) {
  return json{{"k", r.k},
              {"n", r.n},
              {"m", r.m},
              {"R", r.R},
              {"matrix_storage", r.matrix_storage},
              {"tensor_storage", r.tensor_storage},
              {"matrix_adds", r.matrix_adds},
              {"tensor_adds", r.tensor_adds},
              {"matrix_mults", r.matrix_mults},
              {"tensor_mults", r.tensor_mults},
              {"threshold_holds", r.threshold_holds}};
}

bench::ComplexityReport report_from_json(const json& j, const std::string& at) {
  only_keys(j, at,
            {"k", "n", "m", "R", "matrix_storage", "tensor_storage",
             "matrix_adds", "tensor_adds", "matrix_mults", "tensor_mults",
             "threshold_holds"});
  uint32_t k = get_u32(member(j, at, "k"), at + ".k");
  uint32_t n = get_u32(member(j, at, "n"), at + ".n");
  uint32_t m = get_u32(member(j, at, "m"), at + ".m");
  uint32_t R = get_u32(member(j, at, "R"), at + ".R");
  bench::ComplexityReport rep;
  try {
    rep = bench::complexity_report(k, n, m, R);
  } catch (const UsageError& ex) {
    fail(at, ex.what());
  }
  // Stored counts must match the closed forms; a mismatch means the file was
  // edited by hand.
  auto check = [&](const char* key, int64_t want) {
    if (get_int(member(j, at, key), at + "." + key) != want)
      fail(at + "." + key, "does not match the cost formula");
  };
  check("matrix_storage", rep.matrix_storage);
  check("tensor_storage", rep.tensor_storage);
  check("matrix_adds", rep.matrix_adds);
  check("tensor_adds", rep.tensor_adds);
  check("matrix_mults", rep.matrix_mults);
  check("tensor_mults", rep.tensor_mults);
  if (get_bool(member(j, at, "threshold_holds"), at + ".threshold_holds") !=
      rep.threshold_holds)
    fail(at + ".threshold_holds", "does not match the cost formula");
  return rep;
}

json rs_to_json(const RsConstruction& r) {
  const Field& F = *r.code.field;
  return json{{"triple", triple_to_json(r.triple)},
              {"code", code_to_json(r.code)},
              {"certificate", cert_to_json(F, r.cert)},
              {"f", vec_to_json(F, r.f)},
              {"mtr", r.mtr},
              {"mrd", r.mrd},
              {"storage", r.storage}};
}

RsConstruction rs_from_json(const json& j, const std::string& at) {
  only_keys(j, at, {"triple", "code", "certificate", "f", "mtr", "mrd",
                    "storage"});
  RsConstruction r;
  r.triple = triple_from_json(member(j, at, "triple"), at + ".triple");
  r.code = code_from_json(member(j, at, "code"), at + ".code");
  const Field& F = *r.code.field;
  r.cert = cert_from_json(F, member(j, at, "certificate"), at + ".certificate");
  r.f = vec_from_json(F, member(j, at, "f"), at + ".f");
  r.mtr = get_bool(member(j, at, "mtr"), at + ".mtr");
  r.mrd = get_bool(member(j, at, "mrd"), at + ".mrd");
  r.storage = get_uint(member(j, at, "storage"), at + ".storage");
  return r;
}

json small_to_json(const SmallTrankResult& r) {
  return json{{"code", code_to_json(r.code)},
              {"certificate", cert_to_json(*r.code.field, r.cert)},
              {"bound", r.bound},
              {"mtr", r.mtr}};
}

SmallTrankResult small_from_json(const json& j, const std::string& at) {
  only_keys(j, at, {"code", "certificate", "bound", "mtr"});
  SmallTrankResult r;
  r.code = code_from_json(member(j, at, "code"), at + ".code");
  r.cert = cert_from_json(*r.code.field, member(j, at, "certificate"),
                          at + ".certificate");
  r.bound = get_u32(member(j, at, "bound"), at + ".bound");
  r.mtr = get_bool(member(j, at, "mtr"), at + ".mtr");
  return r;
}

json gab_to_json(const GabidulinCode& g) {
  const Field& ext = *g.tower.ext;
  return json{{"base_field", field_to_json(*g.tower.base)},
              {"m", g.tower.m},
              {"n", uint32_t(g.points.size())},
              {"K", g.K},
              {"s", g.s},
              {"points", vec_to_json(ext, g.points)},
              {"vec_gen", mat_to_json(ext, g.vec_gen)},
              {"expanded", code_to_json(g.expanded)}};
}

GabidulinCode gab_from_json(const json& j, const std::string& at) {
  only_keys(j, at, {"base_field", "m", "n", "K", "s", "points", "vec_gen",
                    "expanded"});
  FieldPtr base = field_from_json(member(j, at, "base_field"),
                                  at + ".base_field");
  uint32_t m = get_u32(member(j, at, "m"), at + ".m");
  uint32_t n = get_u32(member(j, at, "n"), at + ".n");
  uint32_t K = get_u32(member(j, at, "K"), at + ".K");
  uint32_t s = get_u32(member(j, at, "s"), at + ".s");
  GabidulinCode g;
  std::vector<uint32_t> points;
  try {
    gf::Tower tw = gf::make_tower(base, m);
    points = vec_from_json(*tw.ext, member(j, at, "points"), at + ".points");
    if (points.size() != n)
      fail(at + ".n", "does not match the point count");
    g = construct::gabidulin(base->q(), m, n, K, s, points);
  } catch (const UsageError& ex) {
    fail(at, ex.what());
  }
  Mat vg = mat_from_json(*g.tower.ext, member(j, at, "vec_gen"),
                         at + ".vec_gen");
  if (!(vg == g.vec_gen))
    fail(at + ".vec_gen", "does not match the evaluation data");
  MatrixCode exp = code_from_json(member(j, at, "expanded"), at + ".expanded");
  if (!exp.field->same(*g.expanded.field) || exp.n != g.expanded.n ||
      exp.m != g.expanded.m || !(exp.gen == g.expanded.gen))
    fail(at + ".expanded", "does not match the evaluation data");
  return g;
}

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::auto_pick: return "auto";
    case Strategy::quotient_bfs: return "quotient_bfs";
    case Strategy::codim_enum: return "codim_enum";
    case Strategy::exhaustive: return "exhaustive";
  }
  throw InternalError("unhandled strategy");
}

Strategy strategy_from_name(const std::string& name, const std::string& at) {
  if (name == "auto") return Strategy::auto_pick;
  if (name == "quotient_bfs") return Strategy::quotient_bfs;
  if (name == "codim_enum") return Strategy::codim_enum;
  if (name == "exhaustive") return Strategy::exhaustive;
  fail(at, "unknown strategy '" + name + "'");
}

json config_to_json(const SearchConfig& cfg) {
  return json{{"strategy", strategy_name(cfg.strategy)},
              {"workers", cfg.worker_count},
              {"node_budget", cfg.node_budget},
              {"time_budget_ms", cfg.time_budget_ms}};
}

SearchConfig config_from_json(const json& j, const std::string& at) {
  only_keys(j, at, {"strategy", "workers", "node_budget", "time_budget_ms"});
  SearchConfig cfg;
  if (j.contains("strategy"))
    cfg.strategy = strategy_from_name(
        get_str(j["strategy"], at + ".strategy"), at + ".strategy");
  if (j.contains("workers"))
    cfg.worker_count = get_u32(j["workers"], at + ".workers");
  if (j.contains("node_budget"))
    cfg.node_budget = get_uint(j["node_budget"], at + ".node_budget");
  if (j.contains("time_budget_ms"))
    cfg.time_budget_ms = get_uint(j["time_budget_ms"], at + ".time_budget_ms");
  return cfg;
}

}  // namespace rkt::jsonio
