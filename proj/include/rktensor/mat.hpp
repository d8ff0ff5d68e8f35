#pragma once

#include <cstdint>
#include <vector>

#include "rktensor/common.hpp"

namespace rkt::linalg {

// Dense matrix of field element codes, row major. Pure data; arithmetic lives
// in linalg.hpp with the field passed explicitly.
struct Mat {
  uint32_t rows = 0;
  uint32_t cols = 0;
  std::vector<uint32_t> a;

  Mat() = default;
  Mat(uint32_t r, uint32_t c) : rows(r), cols(c), a(size_t(r) * c, 0) {}

  uint32_t& at(uint32_t r, uint32_t c) { return a[size_t(r) * cols + c]; }
  uint32_t at(uint32_t r, uint32_t c) const { return a[size_t(r) * cols + c]; }

  bool operator==(const Mat& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

}  // namespace rkt::linalg
