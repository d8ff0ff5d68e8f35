#include "rktensor.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <utility>

#include "rktensor/json_io.hpp"
#include "rktensor/repro.hpp"

using rkt::BudgetError;
using rkt::InternalError;
using rkt::UsageError;
using rkt::jsonio::json;

struct rkt_code {
  rkt::rankcode::MatrixCode code;
};

namespace {

thread_local std::string tl_error;

void set_error(const std::string& msg) { tl_error = msg; }

// Every entry point funnels through here so the exception-to-status mapping
// cannot drift between functions.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const UsageError& ex) {
    set_error(ex.what());
    return RKT_EUSAGE;
  } catch (const BudgetError& ex) {
    set_error(ex.what());
    return RKT_EBUDGET;
  } catch (const InternalError& ex) {
    set_error(ex.what());
    return RKT_EINTERNAL;
  } catch (const std::exception& ex) {
    set_error(ex.what());
    return RKT_EINTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out_json, const json& j) { *out_json = dup_string(j.dump()); }

void need(const void* p, const char* what) {
  if (!p) throw UsageError(std::string(what) + " must not be null");
}

rkt::trank::SearchConfig parse_config(const char* cfg_json) {
  if (!cfg_json || !*cfg_json) return {};
  return rkt::jsonio::config_from_json(rkt::jsonio::parse_text(cfg_json));
}

// q = p^e for the smallest prime divisor p, or a usage error.
std::pair<uint32_t, uint32_t> factor_order(uint64_t q) {
  rkt::require(q >= 2, "field order must be at least 2");
  uint64_t p = 2;
  while (p * p <= q && q % p != 0) ++p;
  if (q % p != 0) p = q;
  uint32_t e = 0;
  uint64_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++e;
  }
  rkt::require(rest == 1,
               "field order " + std::to_string(q) + " is not a prime power");
  return {uint32_t(p), e};
}

rkt::gf::FieldPtr field_of_order(uint64_t q) {
  auto [p, e] = factor_order(q);
  return rkt::gf::make_field(p, e);
}

json construct_dispatch(const json& spec) {
  using namespace rkt;
  const std::string at = "construction";
  if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string())
    throw UsageError(at + ".kind: missing or not a string");
  std::string kind = spec["kind"].get<std::string>();

  auto u32 = [&](const char* key) {
    if (!spec.contains(key))
      throw UsageError(at + "." + key + ": missing");
    if (!spec[key].is_number_unsigned())
      throw UsageError(at + "." + key + ": expected a nonnegative integer");
    uint64_t v = spec[key].get<uint64_t>();
    if (v > UINT32_MAX) throw UsageError(at + "." + key + ": value too large");
    return uint32_t(v);
  };
  auto u64 = [&](const char* key) {
    if (!spec.contains(key))
      throw UsageError(at + "." + key + ": missing");
    if (!spec[key].is_number_unsigned())
      throw UsageError(at + "." + key + ": expected a nonnegative integer");
    return spec[key].get<uint64_t>();
  };

  if (kind == "rs-extremal") {
    uint64_t q = u64("q");
    uint32_t k = u32("k"), d = u32("d");
    construct::RsConstruction rs;
    if (spec.contains("f")) {
      gf::FieldPtr F = field_of_order(q);
      gf::Poly f = jsonio::vec_from_json(*F, spec["f"], at + ".f");
      rs = construct::rs_extremal_triple_with_poly(q, k, d, f);
    } else {
      if (!spec.contains("seed"))
        throw UsageError(at + ".seed: missing (randomized constructions need "
                         "an explicit seed)");
      rs = construct::rs_extremal_triple(q, k, d, u64("seed"));
    }
    return json{{"kind", kind}, {"result", jsonio::rs_to_json(rs)}};
  }
  if (kind == "maxsum") {
    construct::ExtremalTriple T = construct::maxsum_triple(
        u64("q"), u32("n"), u32("m"), u32("k"), u32("d"));
    return json{{"kind", kind}, {"result", jsonio::triple_to_json(T)}};
  }
  if (kind == "gabidulin") {
    uint64_t q = u64("q");
    uint32_t m = u32("m"), n = u32("n"), K = u32("K"), s = u32("s");
    construct::GabidulinCode g;
    if (spec.contains("points")) {
      gf::FieldPtr base = field_of_order(q);
      gf::Tower tw = gf::make_tower(base, m);
      std::vector<uint32_t> pts =
          jsonio::vec_from_json(*tw.ext, spec["points"], at + ".points");
      g = construct::gabidulin(q, m, n, K, s, pts);
    } else {
      g = construct::gabidulin(q, m, n, K, s);
    }
    return json{{"kind", kind}, {"result", jsonio::gab_to_json(g)}};
  }
  if (kind == "small-trank" || kind == "square-trank") {
    uint64_t q = u64("q");
    uint32_t n = u32("n"), m = u32("m"), k = u32("k"), d = u32("d");
    construct::SmallTrankResult r =
        kind == "small-trank" ? construct::small_trank_code(q, n, m, k, d)
                              : construct::square_trank_code(q, n, m, k, d);
    return json{{"kind", kind}, {"result", jsonio::small_to_json(r)}};
  }
  if (kind == "poly-mult") {
    if (!spec.contains("field"))
      throw UsageError(at + ".field: missing");
    gf::FieldPtr F = jsonio::field_from_json(spec["field"], at + ".field");
    uint32_t m = u32("m"), n = u32("n"), k = u32("k");
    if (!spec.contains("f")) throw UsageError(at + ".f: missing");
    gf::Poly f = jsonio::vec_from_json(*F, spec["f"], at + ".f");
    tensor::Tensor3 X = construct::poly_mult_tensor(F, m, n, k, f);
    tensor::SimpleSum S = construct::poly_mult_certificate(F, m, n, f);
    return json{{"kind", kind},
                {"result", json{{"field", jsonio::field_to_json(*F)},
                                {"tensor", jsonio::tensor_to_json(*F, X)},
                                {"certificate", jsonio::sum_to_json(*F, S)},
                                {"length", S.length()}}}};
  }
  if (kind == "cauchy") {
    if (!spec.contains("field"))
      throw UsageError(at + ".field: missing");
    gf::FieldPtr F = jsonio::field_from_json(spec["field"], at + ".field");
    uint32_t k = u32("k");
    if (!spec.contains("alpha") || !spec["alpha"].is_array())
      throw UsageError(at + ".alpha: missing or not an array");
    std::vector<blockcode::EvalPoint> alpha;
    for (size_t i = 0; i < spec["alpha"].size(); ++i)
      alpha.push_back(jsonio::point_from_json(
          *F, spec["alpha"][i], at + ".alpha[" + std::to_string(i) + "]"));
    if (!spec.contains("beta")) throw UsageError(at + ".beta: missing");
    std::vector<uint32_t> beta =
        jsonio::vec_from_json(*F, spec["beta"], at + ".beta");
    blockcode::BlockCode C = blockcode::cauchy_code(F, alpha, beta, k);
    return json{{"kind", kind}, {"result", jsonio::block_to_json(C)}};
  }
  throw UsageError(at + ".kind: unknown kind '" + kind +
                   "'; known kinds: rs-extremal, maxsum, gabidulin, "
                   "small-trank, square-trank, poly-mult, cauchy");
}

}  // namespace

extern "C" {

const char* rkt_version(void) { return "1.0.0"; }

const char* rkt_last_error(void) { return tl_error.c_str(); }

void rkt_string_free(char* s) { std::free(s); }

int rkt_code_parse(const char* json_text, rkt_code** out) {
  return guarded([&] {
    need(json_text, "json_text");
    need(out, "out");
    json j = rkt::jsonio::parse_text(json_text);
    auto handle = new rkt_code{rkt::jsonio::code_from_json(j)};
    *out = handle;
    return RKT_OK;
  });
}

int rkt_code_emit(const rkt_code* code, char** out_json) {
  return guarded([&] {
    need(code, "code");
    need(out_json, "out_json");
    emit(out_json, rkt::jsonio::code_to_json(code->code));
    return RKT_OK;
  });
}

void rkt_code_free(rkt_code* code) { delete code; }

int rkt_code_from_tensor(const char* json_text, rkt_code** out) {
  return guarded([&] {
    need(json_text, "json_text");
    need(out, "out");
    json j = rkt::jsonio::parse_text(json_text);
    if (!j.is_object() || !j.contains("field"))
      throw UsageError("field: missing");
    rkt::gf::FieldPtr F = rkt::jsonio::field_from_json(j["field"]);
    if (!j.contains("tensor")) throw UsageError("tensor: missing");
    rkt::tensor::Tensor3 X = rkt::jsonio::tensor_from_json(*F, j["tensor"]);
    rkt::require(X.n1 > 0 && X.n2 > 0 && X.n3 > 0,
                 "tensor: all three dimensions must be positive");
    std::vector<rkt::linalg::Mat> slices;
    for (uint32_t i = 0; i < X.n1; ++i)
      slices.push_back(rkt::tensor::slice1(X, i));
    *out = new rkt_code{rkt::rankcode::make_code(F, X.n2, X.n3, slices)};
    return RKT_OK;
  });
}

int rkt_code_dual(const rkt_code* code, rkt_code** out) {
  return guarded([&] {
    need(code, "code");
    need(out, "out");
    *out = new rkt_code{rkt::rankcode::dual(code->code)};
    return RKT_OK;
  });
}

int rkt_tensor_rank(const rkt_code* code, const char* cfg_json,
                    char** out_json) {
  return guarded([&] {
    need(code, "code");
    need(out_json, "out_json");
    rkt::trank::TrkResult r =
        rkt::trank::tensor_rank(code->code, parse_config(cfg_json));
    emit(out_json, rkt::jsonio::trk_to_json(*code->code.field, r));
    return RKT_OK;
  });
}

int rkt_gtr_profile(const rkt_code* code, const char* cfg_json,
                    char** out_json) {
  return guarded([&] {
    need(code, "code");
    need(out_json, "out_json");
    rkt::trank::GtrProfile P =
        rkt::trank::gen_tensor_ranks(code->code, parse_config(cfg_json));
    emit(out_json, rkt::jsonio::profile_to_json(*code->code.field, P));
    return RKT_OK;
  });
}

int rkt_mtr_verdict(const rkt_code* code, const char* cfg_json,
                    char** out_json) {
  return guarded([&] {
    need(code, "code");
    need(out_json, "out_json");
    rkt::trank::MtrVerdict v =
        rkt::trank::mtr_verdict(code->code, parse_config(cfg_json));
    emit(out_json, rkt::jsonio::verdict_to_json(*code->code.field, v));
    return RKT_OK;
  });
}

int rkt_rank_spectrum(const rkt_code* code, uint64_t cap, char** out_json) {
  return guarded([&] {
    need(code, "code");
    need(out_json, "out_json");
    std::vector<uint64_t> counts =
        cap ? rkt::trank::rank_spectrum(code->code, cap)
            : rkt::trank::rank_spectrum(code->code);
    emit(out_json, json(counts));
    return RKT_OK;
  });
}

int rkt_analyze(const rkt_code* code, const char* cfg_json, char** out_json) {
  return guarded([&] {
    need(code, "code");
    need(out_json, "out_json");
    const rkt::rankcode::MatrixCode& C = code->code;
    rkt::require(C.k() > 0, "nonzero code required");
    rkt::trank::SearchConfig cfg = parse_config(cfg_json);
    json out{{"code", rkt::jsonio::code_to_json(C)},
             {"parameters", json{{"q", C.field->q()},
                                 {"n", C.n},
                                 {"m", C.m},
                                 {"k", C.k()}}}};
    rkt::rankcode::DistResult dist = rkt::rankcode::min_distance(C);
    out["distance"] = rkt::jsonio::dist_to_json(*C.field, dist);
    try {
      out["spectrum"] = json(rkt::trank::rank_spectrum(C));
    } catch (const BudgetError& ex) {
      out["spectrum"] = nullptr;
      out["spectrum_note"] = ex.what();
    }
    rkt::trank::MtrVerdict v = rkt::trank::mtr_verdict(C, cfg);
    out["verdict"] = rkt::jsonio::verdict_to_json(*C.field, v);
    emit(out_json, out);
    return RKT_OK;
  });
}

int rkt_inequivalence(const rkt_code* a, const rkt_code* b,
                      const char* cfg_json, char** out_json) {
  return guarded([&] {
    need(a, "first code");
    need(b, "second code");
    need(out_json, "out_json");
    rkt::trank::InequivResult w = rkt::trank::inequivalence_witness(
        a->code, b->code, parse_config(cfg_json));
    emit(out_json, rkt::jsonio::inequiv_to_json(w));
    return RKT_OK;
  });
}

int rkt_construct(const char* spec_json, char** out_json) {
  return guarded([&] {
    need(spec_json, "spec_json");
    need(out_json, "out_json");
    emit(out_json, construct_dispatch(rkt::jsonio::parse_text(spec_json)));
    return RKT_OK;
  });
}

int rkt_verify_triple(const char* triple_json, uint32_t d, uint64_t cap,
                      char** out_json) {
  return guarded([&] {
    need(triple_json, "triple_json");
    need(out_json, "out_json");
    json j = rkt::jsonio::parse_text(triple_json);
    if (!j.is_object()) throw UsageError("triple: expected an object");
    if (!j.contains("C")) throw UsageError("triple.C: missing");
    rkt::blockcode::BlockCode C =
        rkt::jsonio::block_from_json(j["C"], "triple.C");
    if (!j.contains("V")) throw UsageError("triple.V: missing");
    if (!j.contains("W")) throw UsageError("triple.W: missing");
    rkt::linalg::Mat V = rkt::jsonio::mat_from_json(*C.field, j["V"],
                                                    "triple.V", int64_t(C.N));
    rkt::linalg::Mat W = rkt::jsonio::mat_from_json(*C.field, j["W"],
                                                    "triple.W", int64_t(C.N));
    rkt::construct::ExtremalTriple T =
        cap ? rkt::construct::verify_triple(C, V, W, d, cap)
            : rkt::construct::verify_triple(C, V, W, d);
    emit(out_json, rkt::jsonio::triple_to_json(T));
    if (!T.verified) {
      set_error("rank condition fails at the reported witness codeword");
      return RKT_EVERIFY;
    }
    return RKT_OK;
  });
}

int rkt_classify(uint32_t k, uint32_t d, uint32_t n, uint32_t m, uint64_t q,
                 char** out_json) {
  return guarded([&] {
    need(out_json, "out_json");
    rkt::construct::Classification c =
        rkt::construct::classify_parameters(k, d, n, m, q);
    json out{{"parameters",
              json{{"k", k}, {"d", d}, {"n", n}, {"m", m}, {"q", q}}},
             {"classification", rkt::jsonio::classification_to_json(c)}};
    emit(out_json, out);
    return RKT_OK;
  });
}

int rkt_bench(uint32_t k, uint32_t n, uint32_t m, uint32_t R,
              char** out_json) {
  return guarded([&] {
    need(out_json, "out_json");
    emit(out_json,
         rkt::jsonio::report_to_json(rkt::bench::complexity_report(k, n, m, R)));
    return RKT_OK;
  });
}

int rkt_reproduce(const char* target, const char* cfg_json, char** out_json) {
  return guarded([&] {
    need(target, "target");
    need(out_json, "out_json");
    rkt::repro::ReproOutcome out =
        rkt::repro::run_target(target, parse_config(cfg_json));
    emit(out_json, out.report);
    if (!out.ok) {
      set_error(std::string("reproduce target '") + target +
                "' missed its pinned values");
      return RKT_EVERIFY;
    }
    return RKT_OK;
  });
}

int rkt_reproduce_targets(char** out_json) {
  return guarded([&] {
    need(out_json, "out_json");
    emit(out_json, json(rkt::repro::target_names()));
    return RKT_OK;
  });
}

}  // extern "C"
