#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <string>

#include "json.hpp"
#include "rktensor.h"

// Exercises the shared-library boundary only: everything goes through the C
// functions and JSON strings, exactly the way an external caller would use
// the library.

using json = nlohmann::json;

namespace {

// Takes ownership of a C string result and frees it.
std::string take(char* s) {
  std::string out = s ? s : "";
  rkt_string_free(s);
  return out;
}

// The result pointer goes in by address: the call that fills it sits in the
// same argument list, and taking the value there would read it pre-call.
json call_json(int rc_expected, int rc, char** s) {
  REQUIRE(rc == rc_expected);
  std::string text = take(*s);
  REQUIRE(!text.empty());
  return json::parse(text);
}

const char* kIdentity2 = R"({
  "field": {"p": 2, "e": 1, "modulus": [0, 1]},
  "n": 2, "m": 2,
  "basis": [[[1, 0], [0, 1]]]
})";

// <I, N> in 2x2 over GF(2) with N the nilpotent shift: rank profile (1, 2).
const char* kPair2 = R"({
  "field": {"p": 2, "e": 1, "modulus": [0, 1]},
  "n": 2, "m": 2,
  "basis": [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
})";

}  // namespace

TEST_CASE("version and idle error state") {
  REQUIRE(rkt_version() != nullptr);
  REQUIRE(std::string(rkt_version()) == "1.0.0");
  REQUIRE(rkt_last_error() != nullptr);
}

TEST_CASE("code json round trips through parse and emit") {
  rkt_code* c = nullptr;
  REQUIRE(rkt_code_parse(kPair2, &c) == RKT_OK);
  char* out = nullptr;
  REQUIRE(rkt_code_emit(c, &out) == RKT_OK);
  std::string first = take(out);

  rkt_code* c2 = nullptr;
  REQUIRE(rkt_code_parse(first.c_str(), &c2) == RKT_OK);
  char* out2 = nullptr;
  REQUIRE(rkt_code_emit(c2, &out2) == RKT_OK);
  REQUIRE(json::parse(first) == json::parse(take(out2)));
  rkt_code_free(c);
  rkt_code_free(c2);
}

TEST_CASE("rejects malformed input through the boundary") {
  rkt_code* c = nullptr;
  REQUIRE(rkt_code_parse("{not json", &c) == RKT_EUSAGE);
  REQUIRE(std::string(rkt_last_error()).find("not valid JSON") !=
          std::string::npos);
  REQUIRE(rkt_code_parse(nullptr, &c) == RKT_EUSAGE);
  REQUIRE(rkt_code_parse(kIdentity2, nullptr) == RKT_EUSAGE);

  // Structurally valid JSON with an unknown key still gets refused.
  json j = json::parse(kIdentity2);
  j["extra"] = 1;
  REQUIRE(rkt_code_parse(j.dump().c_str(), &c) == RKT_EUSAGE);
  REQUIRE(std::string(rkt_last_error()).find("extra") != std::string::npos);
}

TEST_CASE("analyze refuses the zero code with a usage error") {
  json j = json::parse(kIdentity2);
  j["basis"] = json::array();
  rkt_code* c = nullptr;
  REQUIRE(rkt_code_parse(j.dump().c_str(), &c) == RKT_OK);
  char* out = nullptr;
  REQUIRE(rkt_analyze(c, "", &out) == RKT_EUSAGE);
  REQUIRE(std::string(rkt_last_error()).find("nonzero code required") !=
          std::string::npos);
  rkt_code_free(c);
}

TEST_CASE("tensor rank of the identity span is certified exactly") {
  rkt_code* c = nullptr;
  REQUIRE(rkt_code_parse(kIdentity2, &c) == RKT_OK);
  char* out = nullptr;
  json r = call_json(RKT_OK, rkt_tensor_rank(c, nullptr, &out), &out);
  REQUIRE(r["certificate"]["exact"] == true);
  REQUIRE(r["certificate"]["lower"] == 2);
  REQUIRE(r["certificate"]["upper"]["triples"].size() == 2);
  REQUIRE(r["provenance"].contains("strategy"));
  rkt_code_free(c);
}

TEST_CASE("a starved node budget yields honest bounds, not an error") {
  rkt_code* c = nullptr;
  REQUIRE(rkt_code_parse(kPair2, &c) == RKT_OK);
  char* out = nullptr;
  json r = call_json(
      RKT_OK,
      rkt_tensor_rank(c, R"({"strategy": "quotient_bfs", "node_budget": 1})",
                      &out),
      &out);
  json cert = r["certificate"];
  REQUIRE(cert["lower"] <= cert["upper"]["triples"].size());
  if (cert["exact"] == false) {
    REQUIRE(cert["note"].get<std::string>().find("budget") !=
            std::string::npos);
  }
  rkt_code_free(c);
}

TEST_CASE("config validation happens before any search") {
  rkt_code* c = nullptr;
  REQUIRE(rkt_code_parse(kIdentity2, &c) == RKT_OK);
  char* out = nullptr;
  REQUIRE(rkt_tensor_rank(c, R"({"strategy": "warp"})", &out) == RKT_EUSAGE);
  REQUIRE(rkt_tensor_rank(c, R"({"bogus": 1})", &out) == RKT_EUSAGE);
  REQUIRE(rkt_tensor_rank(c, "{]", &out) == RKT_EUSAGE);
  rkt_code_free(c);
}

TEST_CASE("profile rises from the distance to the full tensor rank") {
  rkt_code* c = nullptr;
  REQUIRE(rkt_code_parse(kPair2, &c) == RKT_OK);
  char* out = nullptr;
  // <I, N> is the 2x2x2 pencil whose rank famously exceeds its dimension:
  // the best single codeword is N with rank 1, the whole space costs 3.
  json p = call_json(RKT_OK, rkt_gtr_profile(c, "", &out), &out);
  REQUIRE(p["complete"] == true);
  REQUIRE(p["values"] == json::array({1, 3}));

  json v = call_json(RKT_OK, rkt_mtr_verdict(c, "", &out), &out);
  REQUIRE(v["category"] == "neither");
  REQUIRE(v["d"] == 1);
  REQUIRE(v["trk"]["certificate"]["exact"] == true);
  REQUIRE(v["trk"]["certificate"]["lower"] == 3);
  rkt_code_free(c);
}

TEST_CASE("rank spectrum counts codewords and respects its cap") {
  rkt_code* c = nullptr;
  REQUIRE(rkt_code_parse(kPair2, &c) == RKT_OK);
  char* out = nullptr;
  json s = call_json(RKT_OK, rkt_rank_spectrum(c, 1u << 20, &out), &out);
  // 4 codewords: 0, I, N, I+N. N has rank 1; the other two nonzero are full.
  REQUIRE(s == json::array({0, 1, 2}));
  REQUIRE(rkt_rank_spectrum(c, 1, &out) == RKT_EBUDGET);
  rkt_code_free(c);
}

TEST_CASE("analyze bundles parameters, distance, spectrum and verdict") {
  rkt_code* c = nullptr;
  REQUIRE(rkt_code_parse(kPair2, &c) == RKT_OK);
  char* out = nullptr;
  json a = call_json(RKT_OK, rkt_analyze(c, "", &out), &out);
  REQUIRE(a["parameters"] == json({{"q", 2}, {"n", 2}, {"m", 2}, {"k", 2}}));
  REQUIRE(a["distance"]["d"] == 1);
  REQUIRE(a["spectrum"] == json::array({0, 1, 2}));
  REQUIRE(a["verdict"]["category"] == "neither");
  rkt_code_free(c);
}

TEST_CASE("dual of the dual returns the original space") {
  rkt_code* c = nullptr;
  REQUIRE(rkt_code_parse(kPair2, &c) == RKT_OK);
  rkt_code* d = nullptr;
  REQUIRE(rkt_code_dual(c, &d) == RKT_OK);
  rkt_code* dd = nullptr;
  REQUIRE(rkt_code_dual(d, &dd) == RKT_OK);
  char *a = nullptr, *b = nullptr;
  REQUIRE(rkt_code_emit(c, &a) == RKT_OK);
  REQUIRE(rkt_code_emit(dd, &b) == RKT_OK);
  REQUIRE(json::parse(take(a)) == json::parse(take(b)));
  rkt_code_free(c);
  rkt_code_free(d);
  rkt_code_free(dd);
}

TEST_CASE("a tensor loads as the span of its frontal slices") {
  const char* text = R"({
    "field": {"p": 3, "e": 1, "modulus": [0, 1]},
    "tensor": {
      "n1": 2, "n2": 2, "n3": 3,
      "entries": [[[1, 0, 0], [0, 1, 0]], [[0, 1, 0], [0, 0, 1]]]
    }
  })";
  rkt_code* c = nullptr;
  REQUIRE(rkt_code_from_tensor(text, &c) == RKT_OK);
  char* out = nullptr;
  json j = call_json(RKT_OK, rkt_code_emit(c, &out), &out);
  REQUIRE(j["n"] == 2);
  REQUIRE(j["m"] == 3);
  REQUIRE(j["basis"].size() == 2);

  json r = call_json(RKT_OK, rkt_tensor_rank(c, "", &out), &out);
  REQUIRE(r["certificate"]["exact"] == true);
  REQUIRE(r["certificate"]["lower"] == 3);
  rkt_code_free(c);
}

TEST_CASE("inequivalence finds no witness for a code against itself") {
  rkt_code* c = nullptr;
  REQUIRE(rkt_code_parse(kPair2, &c) == RKT_OK);
  char* out = nullptr;
  json r = call_json(RKT_OK, rkt_inequivalence(c, c, "", &out), &out);
  REQUIRE(r["distinguished"] == false);
  rkt_code_free(c);
}

TEST_CASE("constructions build through the boundary") {
  char* out = nullptr;
  json rs = call_json(
      RKT_OK,
      rkt_construct(R"({"kind": "rs-extremal", "q": 8, "k": 5, "d": 3,
                        "f": [1, 0, 1, 0, 0, 1]})",
                    &out),
      &out);
  REQUIRE(rs["kind"] == "rs-extremal");
  json r = rs["result"];
  REQUIRE(r["mtr"] == true);
  REQUIRE(r["mrd"] == true);
  REQUIRE(r["storage"] == 32);
  REQUIRE(r["certificate"]["exact"] == true);
  REQUIRE(r["certificate"]["upper"]["triples"].size() == 7);
  REQUIRE(r["triple"]["verified"] == true);

  // Randomized draws must be pinned by a seed to be reproducible.
  REQUIRE(rkt_construct(R"({"kind": "rs-extremal", "q": 8, "k": 5, "d": 3})",
                        &out) == RKT_EUSAGE);
  REQUIRE(std::string(rkt_last_error()).find("seed") != std::string::npos);

  json pm = call_json(
      RKT_OK,
      rkt_construct(
          R"({"kind": "poly-mult",
              "field": {"p": 2, "e": 1, "modulus": [0, 1]},
              "m": 2, "n": 2, "k": 2, "f": [1, 1, 1]})",
          &out),
      &out);
  REQUIRE(pm["result"]["length"] == 3);
  REQUIRE(pm["result"]["certificate"]["triples"].size() == 3);

  json sm = call_json(
      RKT_OK,
      rkt_construct(R"({"kind": "small-trank", "q": 8, "n": 3, "m": 3,
                        "k": 4, "d": 2})",
                    &out),
      &out);
  REQUIRE(sm["result"]["bound"] == 7);
  REQUIRE(sm["result"]["certificate"]["upper"]["triples"].size() == 7);

  REQUIRE(rkt_construct(R"({"kind": "nope"})", &out) == RKT_EUSAGE);
}

TEST_CASE("triple verification flags a violating codeword") {
  char* out = nullptr;
  json spec = json::parse(R"({"kind": "rs-extremal", "q": 4, "k": 3, "d": 2,
                             "seed": 11})");
  json rs = call_json(RKT_OK, rkt_construct(spec.dump().c_str(), &out), &out);
  json triple = rs["result"]["triple"];
  json ok = call_json(RKT_OK, rkt_verify_triple(triple.dump().c_str(), 2,
                                                1u << 20, &out),
                      &out);
  REQUIRE(ok["verified"] == true);

  // Demanding a distance the construction never promised must fail and
  // name a concrete witness.
  int rc = rkt_verify_triple(triple.dump().c_str(), 4, 1u << 20, &out);
  REQUIRE(rc == RKT_EVERIFY);
  json bad = json::parse(take(out));
  REQUIRE(bad["verified"] == false);
  REQUIRE(bad["witness_rank"] < 4);
  REQUIRE(std::string(rkt_last_error()).find("rank condition") !=
          std::string::npos);
}

TEST_CASE("classify and bench answer from closed forms") {
  char* out = nullptr;
  json c = call_json(RKT_OK, rkt_classify(5, 3, 5, 3, 8, &out), &out);
  REQUIRE(c["parameters"]["k"] == 5);
  REQUIRE(c["classification"]["region"] == "mtr_known");

  json b = call_json(RKT_OK, rkt_bench(5, 5, 3, 7, &out), &out);
  REQUIRE(b["tensor_storage"] == 32);
  REQUIRE(b["matrix_storage"] == 50);
  REQUIRE(b["threshold_holds"] == true);

  REQUIRE(rkt_bench(5, 2, 2, 7, &out) == RKT_EUSAGE);  // k > n*m
}

TEST_CASE("reproduce targets are listed and the cheap one passes") {
  char* out = nullptr;
  json names = call_json(RKT_OK, rkt_reproduce_targets(&out), &out);
  REQUIRE(names.is_array());
  REQUIRE(names.size() == 4);
  REQUIRE(names[0] == "rank3-tensor");

  json r = call_json(RKT_OK, rkt_reproduce("rank3-tensor", "", &out), &out);
  REQUIRE(r["pass"] == true);
  for (const auto& chk : r["checks"]) REQUIRE(chk["pass"] == true);

  REQUIRE(rkt_reproduce("sideways", "", &out) == RKT_EUSAGE);
  REQUIRE(std::string(rkt_last_error()).find("unknown reproduce target") !=
          std::string::npos);
}
