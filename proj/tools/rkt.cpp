// Command-line front end. All real work happens behind the C API in
// libranktensor; this file only moves JSON between files, flags, stdout and
// that boundary, and maps statuses to exit codes:
//   0 success, 1 verification failure, 2 budget exhaustion, 64 usage error,
//   70 internal error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rktensor.h"

namespace {

using nlohmann::json;

int exit_code(int status) {
  switch (status) {
    case RKT_OK: return 0;
    case RKT_EVERIFY: return 1;
    case RKT_EBUDGET: return 2;
    case RKT_EUSAGE: return 64;
    default: return 70;
  }
}

int fail_with(int status) {
  std::cerr << "error: " << rkt_last_error() << "\n";
  return exit_code(status);
}

// A value starting with '{' or '[' is inline JSON; "-" is stdin; anything
// else is a file path.
std::string slurp(const std::string& src) {
  if (!src.empty() && (src[0] == '{' || src[0] == '[')) return src;
  if (src == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(src);
  if (!in) {
    std::cerr << "error: cannot open '" << src << "'\n";
    std::exit(64);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string take(char* s) {
  std::string out = s ? s : "";
  rkt_string_free(s);
  return out;
}

bool scalar(const json& j) {
  return j.is_primitive();
}

void print_table(const json& j, int indent, std::ostream& os) {
  std::string pad(size_t(indent), ' ');
  if (j.is_object()) {
    for (const auto& kv : j.items()) {
      if (scalar(kv.value())) {
        os << pad << kv.key() << ": " << kv.value().dump() << "\n";
      } else if (kv.value().is_array() && !kv.value().empty() &&
                 scalar(kv.value().front())) {
        os << pad << kv.key() << ": " << kv.value().dump() << "\n";
      } else if (kv.value().empty()) {
        os << pad << kv.key() << ": " << (kv.value().is_array() ? "[]" : "{}")
           << "\n";
      } else {
        os << pad << kv.key() << ":\n";
        print_table(kv.value(), indent + 2, os);
      }
    }
  } else if (j.is_array()) {
    for (size_t i = 0; i < j.size(); ++i) {
      if (scalar(j[i]) || (j[i].is_array() && (j[i].empty() || scalar(j[i].front())))) {
        os << pad << "- " << j[i].dump() << "\n";
      } else {
        os << pad << "-\n";
        print_table(j[i], indent + 2, os);
      }
    }
  } else {
    os << pad << j.dump() << "\n";
  }
}

struct Output {
  std::string format = "json";

  void show(const std::string& text) const {
    json j = json::parse(text);
    if (format == "table")
      print_table(j, 0, std::cout);
    else
      std::cout << j.dump(2) << "\n";
  }
};

// Engine options shared by the searching commands, serialized into the
// config object the C API expects. Only flags the user actually set are
// forwarded, so library defaults stay in one place.
struct EngineFlags {
  std::string strategy;
  uint32_t workers = 0;
  uint64_t node_budget = 0;
  uint64_t time_budget = 0;
  bool has_strategy = false, has_workers = false, has_nodes = false,
       has_time = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--strategy", strategy,
                    "search strategy: auto, quotient_bfs, codim_enum, "
                    "exhaustive")
        ->each([this](const std::string&) { has_strategy = true; });
    cmd->add_option("--workers", workers, "worker threads for the search")
        ->each([this](const std::string&) { has_workers = true; });
    cmd->add_option("--node-budget", node_budget,
                    "abort the search after this many candidate subspaces")
        ->each([this](const std::string&) { has_nodes = true; });
    cmd->add_option("--time-budget", time_budget,
                    "wall-clock budget for the search, milliseconds")
        ->each([this](const std::string&) { has_time = true; });
  }

  std::string config() const {
    json cfg = json::object();
    if (has_strategy) cfg["strategy"] = strategy;
    if (has_workers) cfg["workers"] = workers;
    if (has_nodes) cfg["node_budget"] = node_budget;
    if (has_time) cfg["time_budget_ms"] = time_budget;
    return cfg.dump();
  }
};

// "p^e" or a plain prime power; canonical modulus.
json field_descriptor(const std::string& s) {
  auto bad = [&]() -> json {
    std::cerr << "error: --field expects p^e or a prime power, got '" << s
              << "'\n";
    std::exit(64);
  };
  uint64_t p = 0, e = 1;
  size_t caret = s.find('^');
  try {
    if (caret == std::string::npos) {
      uint64_t q = std::stoull(s);
      if (q < 2) return bad();
      p = 2;
      while (p * p <= q && q % p != 0) ++p;
      if (q % p != 0) p = q;
      e = 0;
      uint64_t rest = q;
      while (rest % p == 0) {
        rest /= p;
        ++e;
      }
      if (rest != 1) return bad();
    } else {
      p = std::stoull(s.substr(0, caret));
      e = std::stoull(s.substr(caret + 1));
      if (p < 2 || e < 1) return bad();
    }
  } catch (const std::exception&) {
    return bad();
  }
  return json{{"p", p}, {"e", e}};
}

std::vector<uint64_t> int_list(const std::string& s, const char* flag) {
  std::vector<uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoull(item));
    } catch (const std::exception&) {
      std::cerr << "error: " << flag << " expects comma-separated integers\n";
      std::exit(64);
    }
  }
  return out;
}

int parse_code(const std::string& src, bool as_tensor, bool as_dual,
               rkt_code** out) {
  std::string text = slurp(src);
  rkt_code* base = nullptr;
  int st = as_tensor ? rkt_code_from_tensor(text.c_str(), &base)
                     : rkt_code_parse(text.c_str(), &base);
  if (st != RKT_OK) return st;
  if (!as_dual) {
    *out = base;
    return RKT_OK;
  }
  st = rkt_code_dual(base, out);
  rkt_code_free(base);
  return st;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rank-metric matrix codes: tensor rank certificates, code "
               "constructions, inequivalence evidence, and frozen showcase "
               "reproductions"};
  app.require_subcommand(1);
  Output out;
  app.add_option("--format", out.format, "output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "minimum rank, spectrum, tensor rank and category verdict "
                 "of a code");
  std::string an_in, an_vs;
  bool an_tensor = false, an_dual = false, an_profile = false;
  analyze->add_option("--in", an_in,
                      "code JSON: file, inline {...}, or - for stdin")
      ->required();
  analyze->add_flag("--tensor", an_tensor,
                    "input is {field, tensor} instead; analyze the span of "
                    "its frontal slices");
  analyze->add_flag("--dual", an_dual, "analyze the dual code instead");
  analyze->add_flag("--profile", an_profile,
                    "also compute the full subcode rank profile");
  analyze->add_option("--vs", an_vs,
                      "second code: report the first invariant separating "
                      "the two instead of analyzing");
  EngineFlags an_eng;
  an_eng.attach(analyze);

  // construct
  auto* construct = app.add_subcommand(
      "construct", "build a catalog construction and emit it with its "
                   "certificate");
  std::string co_kind, co_spec, co_poly, co_points, co_field;
  uint64_t co_q = 0, co_seed = 0;
  uint32_t co_n = 0, co_m = 0, co_k = 0, co_d = 0, co_K = 0, co_s = 0;
  bool co_has_seed = false;
  construct->add_option("--kind", co_kind,
                        "rs-extremal | maxsum | gabidulin | small-trank | "
                        "square-trank | poly-mult | cauchy");
  construct->add_option("--spec", co_spec,
                        "full construction spec JSON; overrides the flags");
  construct->add_option("-q,--order", co_q, "field order");
  construct->add_option("-n,--rows", co_n, "matrix rows");
  construct->add_option("-m,--cols", co_m, "matrix columns / extension degree");
  construct->add_option("-k,--dim", co_k, "code dimension / polynomial degree");
  construct->add_option("-d,--dist", co_d, "minimum rank distance");
  construct->add_option("-K,--ext-dim", co_K,
                        "dimension over the extension field (gabidulin)");
  construct->add_option("-s,--frobenius", co_s,
                        "Frobenius twist exponent (gabidulin)");
  construct->add_option("--seed", co_seed,
                        "seed for randomized constructions (required there)")
      ->each([&](const std::string&) { co_has_seed = true; });
  construct->add_option("--poly", co_poly,
                        "polynomial coefficients, low degree first, as "
                        "comma-separated field element codes");
  construct->add_option("--points", co_points,
                        "evaluation points as comma-separated element codes "
                        "of the extension field (gabidulin)");
  construct->add_option("--field", co_field,
                        "coefficient field as p^e (poly-mult, cauchy)");

  // verify
  auto* verify = app.add_subcommand(
      "verify", "check a (C, V, W) triple: every nonzero codeword class "
                "must keep rank at least d");
  std::string ve_in;
  uint32_t ve_d = 0;
  uint64_t ve_cap = 0;
  verify->add_option("--in", ve_in, "triple JSON with C, V, W")->required();
  verify->add_option("-d,--dist", ve_d, "required minimum image rank")
      ->required();
  verify->add_option("--cap", ve_cap, "codeword class enumeration cap");

  // reproduce
  auto* reproduce = app.add_subcommand(
      "reproduce", "rerun a frozen showcase computation against its pinned "
                   "values");
  std::string re_name;
  bool re_all = false;
  reproduce->add_option("--example", re_name,
                        "target: rank3-tensor, f8-mtr, dual-trk, "
                        "gtr-distinguish");
  reproduce->add_flag("--all", re_all, "run every target");
  EngineFlags re_eng;
  re_eng.attach(reproduce);

  // bench
  auto* bench = app.add_subcommand(
      "bench", "field-operation comparison of generator encoding against "
               "length-R decomposition encoding");
  uint32_t be_k = 0, be_n = 0, be_m = 0, be_R = 0;
  bench->add_option("-k,--dim", be_k, "code dimension")->required();
  bench->add_option("-n,--rows", be_n, "matrix rows")->required();
  bench->add_option("-m,--cols", be_m, "matrix columns")->required();
  bench->add_option("-R,--length", be_R, "decomposition length")->required();

  // classify
  auto* classify = app.add_subcommand(
      "classify", "can a code of dimension k and minimum rank d at its "
                  "tensor-rank floor live in GF(q)^{n x m}?");
  uint32_t cl_k = 0, cl_d = 0, cl_n = 0, cl_m = 0;
  uint64_t cl_q = 0;
  classify->add_option("-k,--dim", cl_k, "code dimension")->required();
  classify->add_option("-d,--dist", cl_d, "minimum rank distance")->required();
  classify->add_option("-n,--rows", cl_n, "matrix rows")->required();
  classify->add_option("-m,--cols", cl_m, "matrix columns")->required();
  classify->add_option("-q,--order", cl_q, "field order")->required();

  // Let --format appear after the subcommand name too.
  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 64;
  }

  if (analyze->parsed()) {
    rkt_code* code = nullptr;
    int st = parse_code(an_in, an_tensor, an_dual, &code);
    if (st != RKT_OK) return fail_with(st);
    std::string cfg = an_eng.config();
    char* res = nullptr;
    if (!an_vs.empty()) {
      rkt_code* other = nullptr;
      st = parse_code(an_vs, an_tensor, an_dual, &other);
      if (st != RKT_OK) {
        rkt_code_free(code);
        return fail_with(st);
      }
      st = rkt_inequivalence(code, other, cfg.c_str(), &res);
      rkt_code_free(other);
      rkt_code_free(code);
      if (st != RKT_OK) return fail_with(st);
      out.show(take(res));
      return 0;
    }
    st = rkt_analyze(code, cfg.c_str(), &res);
    if (st != RKT_OK) {
      rkt_code_free(code);
      return fail_with(st);
    }
    json report = json::parse(take(res));
    if (an_profile) {
      char* prof = nullptr;
      st = rkt_gtr_profile(code, cfg.c_str(), &prof);
      rkt_code_free(code);
      if (st != RKT_OK) return fail_with(st);
      report["profile"] = json::parse(take(prof));
    } else {
      rkt_code_free(code);
    }
    out.show(report.dump());
    bool exact = report["verdict"]["trk"]["certificate"]["exact"].get<bool>();
    bool complete = !report.contains("profile") ||
                    report["profile"]["complete"].get<bool>();
    return exact && complete ? 0 : 2;
  }

  if (construct->parsed()) {
    json spec;
    if (!co_spec.empty()) {
      std::string text = slurp(co_spec);
      spec = json::parse(text, nullptr, false);
      if (spec.is_discarded()) {
        std::cerr << "error: --spec is not valid JSON\n";
        return 64;
      }
    } else {
      if (co_kind.empty()) {
        std::cerr << "error: construct needs --kind or --spec\n";
        return 64;
      }
      spec["kind"] = co_kind;
      if (co_q) spec["q"] = co_q;
      if (co_n) spec["n"] = co_n;
      if (co_m) spec["m"] = co_m;
      if (co_k) spec["k"] = co_k;
      if (co_d) spec["d"] = co_d;
      if (co_K) spec["K"] = co_K;
      if (co_s) spec["s"] = co_s;
      if (co_has_seed) spec["seed"] = co_seed;
      if (!co_poly.empty()) spec["f"] = int_list(co_poly, "--poly");
      if (!co_points.empty()) spec["points"] = int_list(co_points, "--points");
      if (!co_field.empty()) spec["field"] = field_descriptor(co_field);
    }
    char* res = nullptr;
    int st = rkt_construct(spec.dump().c_str(), &res);
    if (st != RKT_OK) return fail_with(st);
    out.show(take(res));
    return 0;
  }

  if (verify->parsed()) {
    std::string text = slurp(ve_in);
    char* res = nullptr;
    int st = rkt_verify_triple(text.c_str(), ve_d, ve_cap, &res);
    if (res) out.show(take(res));
    if (st == RKT_OK) return 0;
    return fail_with(st);
  }

  if (reproduce->parsed()) {
    if (re_all != re_name.empty()) {
      std::cerr << "error: reproduce needs exactly one of --example, --all\n";
      return 64;
    }
    std::string cfg = re_eng.config();
    std::vector<std::string> names;
    if (re_all) {
      char* list = nullptr;
      int st = rkt_reproduce_targets(&list);
      if (st != RKT_OK) return fail_with(st);
      for (const auto& n : json::parse(take(list)))
        names.push_back(n.get<std::string>());
    } else {
      names.push_back(re_name);
    }
    json reports = json::array();
    bool all_ok = true;
    int worst = RKT_OK;
    for (const auto& name : names) {
      char* res = nullptr;
      int st = rkt_reproduce(name.c_str(), cfg.c_str(), &res);
      if (st != RKT_OK && st != RKT_EVERIFY) return fail_with(st);
      reports.push_back(json::parse(take(res)));
      if (st != RKT_OK) {
        all_ok = false;
        worst = st;
        std::cerr << "error: " << rkt_last_error() << "\n";
      }
    }
    out.show(re_all ? reports.dump() : reports.front().dump());
    return all_ok ? 0 : exit_code(worst);
  }

  if (bench->parsed()) {
    char* res = nullptr;
    int st = rkt_bench(be_k, be_n, be_m, be_R, &res);
    if (st != RKT_OK) return fail_with(st);
    out.show(take(res));
    return 0;
  }

  if (classify->parsed()) {
    char* res = nullptr;
    int st = rkt_classify(cl_k, cl_d, cl_n, cl_m, cl_q, &res);
    if (st != RKT_OK) return fail_with(st);
    out.show(take(res));
    return 0;
  }

  return 64;
}
