#pragma once

#include <string>
#include <vector>

#include "rktensor/json_io.hpp"

// Frozen showcase computations. Each target rebuilds its objects from
// scratch, reruns the advertised analysis, and compares against the expected
// values pinned here, reporting one verdict per check. A target that fails is
// a regression in the library, never a tolerable outcome.
namespace rkt::repro {

// Three 4-dimensional spaces of 4x4 binary matrices (which = 1, 2, 3), each
// spanned by the identity and three fixed matrices. The first two share
// dimension, minimum rank 4 and rank spectrum but differ in their subcode
// rank profiles; the last two even share the profile and separate only at
// the tensor rank of their duals.
rankcode::MatrixCode showcase_code(uint32_t which);

// The [5x3, 5, 3] code over GF(8) from seven evaluation points and the fixed
// quintic x^5 + x^2 + 1: dimension-plus-distance floor 7 met exactly, and
// MRD in its 5x3 ambient.
construct::RsConstruction f8_construction();

// 2x2x3 tensor over GF(3) with both frontal slices of rank 2 but rank 3:
// the slice-space bound is sharp here.
tensor::Tensor3 rank3_tensor();

// Order is the --all execution order.
const std::vector<std::string>& target_names();

struct ReproOutcome {
  bool ok = true;
  jsonio::json report;
};

// UsageError on an unknown name. cfg carries worker count and budgets into
// the searches; the default budgets complete every target.
ReproOutcome run_target(const std::string& name,
                        const trank::SearchConfig& cfg = {});

}  // namespace rkt::repro
