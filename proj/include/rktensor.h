#ifndef RKTENSOR_H
#define RKTENSOR_H

/* C interface to the rank-metric tensor library. Objects cross the boundary
 * either as opaque handles or as JSON strings in the repo formats; every
 * returned string is heap-allocated and must be released with
 * rkt_string_free. Functions return RKT_OK on success and an error code
 * otherwise; rkt_last_error() describes the most recent failure on the
 * calling thread. Handles are immutable after creation and safe to share
 * across threads. */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define RKT_OK 0
/* A check that was supposed to certify something did not: a triple failed
 * its rank condition, or a reproduction target missed its pinned values.
 * The report is still written in these cases. */
#define RKT_EVERIFY 1
/* An enumeration or search cap was hit before an answer was reached. */
#define RKT_EBUDGET 2
/* Bad input: malformed JSON, out-of-range parameters, null arguments. */
#define RKT_EUSAGE 64
/* A library invariant broke; always a bug, never user error. */
#define RKT_EINTERNAL 70

const char* rkt_version(void);

/* Message for the last failing call on this thread; empty string when no
 * call has failed yet. The buffer is owned by the library and stays valid
 * until the next failing call on the same thread. */
const char* rkt_last_error(void);

void rkt_string_free(char* s);

/* A linear space of n x m matrices over a finite field. */
typedef struct rkt_code rkt_code;

/* Parse a code from {field, n, m, basis} JSON. */
int rkt_code_parse(const char* json_text, rkt_code** out);
/* Emit the canonical {field, n, m, basis} form. */
int rkt_code_emit(const rkt_code* code, char** out_json);
void rkt_code_free(rkt_code* code);

/* Span of the frontal slices of a tensor given as
 * {field, n1, n2, n3, entries}. */
int rkt_code_from_tensor(const char* json_text, rkt_code** out);
/* Dual under the trace pairing. */
int rkt_code_dual(const rkt_code* code, rkt_code** out);

/* cfg_json on the functions below is a JSON object
 *   {strategy, workers, node_budget, time_budget_ms}
 * with every key optional; NULL or "" means all defaults. Strategies:
 * "auto", "quotient_bfs", "codim_enum", "exhaustive". */

/* Tensor rank with certificate: {certificate, provenance}. A search that
 * runs out of budget still returns RKT_OK with honest bounds and a note;
 * the exact flag in the certificate says which happened. */
int rkt_tensor_rank(const rkt_code* code, const char* cfg_json,
                    char** out_json);
/* Least tensor rank over r-dimensional subcodes for every r, with one
 * certificate per entry. */
int rkt_gtr_profile(const rkt_code* code, const char* cfg_json,
                    char** out_json);
/* Category verdict: mtr / tensor_rank_extremal / neither / unknown, with
 * the deciding quantities attached. */
int rkt_mtr_verdict(const rkt_code* code, const char* cfg_json,
                    char** out_json);
/* Codeword counts by rank, [0] unused. RKT_EBUDGET past cap. */
int rkt_rank_spectrum(const rkt_code* code, uint64_t cap, char** out_json);
/* One-stop report: parameters, minimum rank, spectrum when affordable,
 * verdict. */
int rkt_analyze(const rkt_code* code, const char* cfg_json, char** out_json);
/* First invariant separating the two codes, or how far the ladder got. */
int rkt_inequivalence(const rkt_code* a, const rkt_code* b,
                      const char* cfg_json, char** out_json);

/* Build one of the catalog constructions. spec_json selects by "kind":
 *   {"kind": "rs-extremal", "q", "k", "d", "seed" | "f"}
 *   {"kind": "maxsum", "q", "n", "m", "k", "d"}
 *   {"kind": "gabidulin", "q", "m", "n", "K", "s", "points"?}
 *   {"kind": "small-trank", "q", "n", "m", "k", "d"}
 *   {"kind": "square-trank", "q", "n", "m", "k", "d"}
 *   {"kind": "poly-mult", "field", "m", "n", "k", "f"}
 *   {"kind": "cauchy", "field", "k", "alpha", "beta"}
 * Randomized kinds require an explicit seed. */
int rkt_construct(const char* spec_json, char** out_json);

/* Check rank(V diag(c) W^T) >= d over every codeword class of C for a
 * {C, V, W, ...} triple object (extra fields are ignored on input). Returns
 * RKT_EVERIFY with the witness in the report when the condition fails. */
int rkt_verify_triple(const char* triple_json, uint32_t d, uint64_t cap,
                      char** out_json);

/* Parameter-space classification: impossible / mtr_known / open plus the
 * rule that decided. */
int rkt_classify(uint32_t k, uint32_t d, uint32_t n, uint32_t m, uint64_t q,
                 char** out_json);

/* Field-operation comparison of generator encoding against length-R
 * rank-one-decomposition encoding. */
int rkt_bench(uint32_t k, uint32_t n, uint32_t m, uint32_t R, char** out_json);

/* Rerun a frozen showcase computation and compare against its pinned
 * values. Targets: "rank3-tensor", "f8-mtr", "dual-trk", "gtr-distinguish".
 * RKT_EVERIFY when any check fails; the report is written either way. */
int rkt_reproduce(const char* target, const char* cfg_json, char** out_json);

/* JSON array of the reproduce target names in recommended order. */
int rkt_reproduce_targets(char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* RKTENSOR_H */
