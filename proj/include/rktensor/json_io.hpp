#pragma once

#include <string>

#include "json.hpp"
#include "rktensor/bench.hpp"
#include "rktensor/trank.hpp"

// JSON form of every object the tools exchange. Field elements travel as
// coefficient arrays [c0..c_{e-1}] over the prime field; on input a bare
// integer is also accepted as the element code (the same array read as a
// base-p number). Matrices are row arrays; codes carry their field
// descriptor {p, e, modulus}. Parsers validate everything and
// name the offending field in the error, with array positions spelled out,
// so a bad file fails loudly instead of producing a slightly wrong object.
// Emitted objects re-parse to equal values.
namespace rkt::jsonio {

using nlohmann::json;

// UsageError naming the byte position when text is not JSON.
json parse_text(const std::string& text);

json field_to_json(const gf::Field& F);
gf::FieldPtr field_from_json(const json& j, const std::string& at = "field");

json elt_to_json(const gf::Field& F, uint32_t code);
uint32_t elt_from_json(const gf::Field& F, const json& j, const std::string& at);

json vec_to_json(const gf::Field& F, const std::vector<uint32_t>& v);
std::vector<uint32_t> vec_from_json(const gf::Field& F, const json& j,
                                    const std::string& at);

json mat_to_json(const gf::Field& F, const linalg::Mat& M);
// cols pins the width of an empty matrix; nonempty input must match it.
linalg::Mat mat_from_json(const gf::Field& F, const json& j,
                          const std::string& at, int64_t cols = -1);

json code_to_json(const rankcode::MatrixCode& C);
rankcode::MatrixCode code_from_json(const json& j,
                                    const std::string& at = "code");

json block_to_json(const blockcode::BlockCode& C);
blockcode::BlockCode block_from_json(const json& j,
                                     const std::string& at = "code");

// The point at infinity appears as the string "inf".
json point_to_json(const gf::Field& F, const blockcode::EvalPoint& pt);
blockcode::EvalPoint point_from_json(const gf::Field& F, const json& j,
                                     const std::string& at);

json tensor_to_json(const gf::Field& F, const tensor::Tensor3& X);
tensor::Tensor3 tensor_from_json(const gf::Field& F, const json& j,
                                 const std::string& at = "tensor");

json sum_to_json(const gf::Field& F, const tensor::SimpleSum& S);
tensor::SimpleSum sum_from_json(const gf::Field& F, const json& j,
                                const std::string& at = "sum");

json cert_to_json(const gf::Field& F, const construct::TrkCertificate& c);
construct::TrkCertificate cert_from_json(const gf::Field& F, const json& j,
                                         const std::string& at = "certificate");

// Certificate plus the provenance block {strategy, nodes_explored,
// levels_ruled_out}.
json trk_to_json(const gf::Field& F, const trank::TrkResult& r);
trank::TrkResult trk_from_json(const gf::Field& F, const json& j,
                               const std::string& at = "result");

json nq_to_json(const blockcode::NqBounds& b);
blockcode::NqBounds nq_from_json(const json& j, const std::string& at = "nq");

json dist_to_json(const gf::Field& F, const rankcode::DistResult& d);
rankcode::DistResult dist_from_json(const gf::Field& F, const json& j,
                                    const std::string& at = "distance");

json triple_to_json(const construct::ExtremalTriple& T);
construct::ExtremalTriple triple_from_json(const json& j,
                                           const std::string& at = "triple");

json profile_to_json(const gf::Field& F, const trank::GtrProfile& P);
trank::GtrProfile profile_from_json(const gf::Field& F, const json& j,
                                    const std::string& at = "profile");

json verdict_to_json(const gf::Field& F, const trank::MtrVerdict& v);
trank::MtrVerdict verdict_from_json(const gf::Field& F, const json& j,
                                    const std::string& at = "verdict");

json inequiv_to_json(const trank::InequivResult& r);
trank::InequivResult inequiv_from_json(const json& j,
                                       const std::string& at = "witness");

json classification_to_json(const construct::Classification& c);
construct::Classification classification_from_json(
    const json& j, const std::string& at = "classification");

json report_to_json(const bench::ComplexityReport& r);
bench::ComplexityReport report_from_json(const json& j,
                                         const std::string& at = "report");

json rs_to_json(const construct::RsConstruction& r);
construct::RsConstruction rs_from_json(const json& j,
                                       const std::string& at = "construction");

json small_to_json(const construct::SmallTrankResult& r);
construct::SmallTrankResult small_from_json(
    const json& j, const std::string& at = "construction");

// Serialized Delsarte-Gabidulin data is re-derived from (q, m, n, K, s,
// points) on parse and must match the stored matrices.
json gab_to_json(const construct::GabidulinCode& g);
construct::GabidulinCode gab_from_json(const json& j,
                                       const std::string& at = "construction");

std::string strategy_name(trank::Strategy s);
trank::Strategy strategy_from_name(const std::string& name,
                                   const std::string& at);

json config_to_json(const trank::SearchConfig& cfg);
// Accepts a partial object {strategy, workers, node_budget, time_budget_ms};
// absent keys keep their defaults, unknown keys are rejected.
trank::SearchConfig config_from_json(const json& j,
                                     const std::string& at = "config");

}  // namespace rkt::jsonio
