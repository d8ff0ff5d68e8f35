#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rktensor/blockcode.hpp"
#include "rktensor/construct.hpp"
#include "rktensor/rankcode.hpp"

// Tensor rank of matrix codes. The engine looks for the smallest enlargement
// D of the code that is spanned by its own rank-one matrices; dim D equals
// the tensor rank, and a spanning set of rank ones turns directly into a
// decomposition of the generator tensor. The search walks the quotient
// ambient/code level by level, so dimensions below the proven lower bound
// are never enumerated.
namespace rkt::trank {

using construct::TrkCertificate;
using gf::FieldPtr;
using rankcode::MatrixCode;

enum class Strategy {
  auto_pick,     // codim_enum when the quotient is tiny, else quotient_bfs
  quotient_bfs,  // breadth first over rank-one-spanned quotient subspaces
  codim_enum,    // every quotient subspace by dimension; small quotients
  exhaustive,    // depth first over rank-one supports; validation oracle
};

struct SearchConfig {
  Strategy strategy = Strategy::auto_pick;
  uint32_t worker_count = 1;
  uint64_t node_budget = uint64_t(1) << 42;  // candidate subspace visits
  uint64_t time_budget_ms = 0;               // 0 = no wall-clock limit
};

// Exact results carry a spanning decomposition and a matching lower bound.
// When a budget runs out first the certificate still holds honest bounds and
// the note names the budget; that outcome is a result, not an error.
struct TrkResult {
  TrkCertificate cert;
  std::string strategy_used;
  uint64_t nodes_explored = 0;
  // Quotient dimensions known witness-free, by search or by lower bound.
  uint32_t levels_ruled_out = 0;
};

TrkResult tensor_rank(const MatrixCode& C, const SearchConfig& cfg = {});

// Rank of a 3-tensor: the rank of the matrix code spanned by its frontal
// slices. Dependent or zero slices are fine; the span is what counts.
TrkResult tensor_rank(const FieldPtr& F, const tensor::Tensor3& X,
                      const SearchConfig& cfg = {});

// values[r-1] = least tensor rank over r-dimensional subcodes, so the last
// entry is the tensor rank of the code itself and the first is its minimum
// rank. Values are strictly increasing in r.
struct GtrProfile {
  std::vector<uint32_t> values;
  std::vector<TrkCertificate> certificates;  // one per computed entry
  bool complete = true;
  std::string note;  // what stopped the profile, when incomplete
};

GtrProfile gen_tensor_ranks(const MatrixCode& C, const SearchConfig& cfg = {});

enum class MtrCategory { mtr, tensor_rank_extremal, neither, unknown };

// mtr means the tensor rank meets the floor k + d - 1; extremal means it
// meets the least length of a [*, k, d] block code, which mtr implies.
// unknown is reported whenever the deciding quantity is not pinned down.
struct MtrVerdict {
  MtrCategory category = MtrCategory::unknown;
  uint32_t d = 0;  // minimum rank, when known exactly (0 otherwise)
  TrkResult trk;
  blockcode::NqBounds nq;
  std::string evidence;
};

MtrVerdict mtr_verdict(const MatrixCode& C, const SearchConfig& cfg = {});

// Counts of nonzero codewords by rank; entry r = rank r, entry 0 stays 0.
// BudgetError when the projective class count exceeds the cap.
std::vector<uint64_t> rank_spectrum(const MatrixCode& C,
                                    uint64_t cap = uint64_t(1) << 22);

// First invariant in a fixed ladder separating the two codes: dimension,
// minimum rank, rank spectrum, generalized profile, dual tensor rank, dual
// profile. Both value vectors are reported for the separating invariant.
// Codes the ladder cannot separate are not thereby equivalent; the note
// records how far the climb got and what was skipped.
struct InequivResult {
  bool distinguished = false;
  std::string invariant;
  std::vector<uint64_t> value1, value2;
  std::string note;
};

InequivResult inequivalence_witness(const MatrixCode& C1, const MatrixCode& C2,
                                    const SearchConfig& cfg = {});

}  // namespace rkt::trank
