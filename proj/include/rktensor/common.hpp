#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rkt {

// Error taxonomy mirrors the process exit codes: usage errors abort a command
// with status 64, verification failures map to 1, exhausted search budgets to
// 2. InternalError signals a broken invariant inside the library itself and
// is never an expected outcome.
class UsageError : public std::runtime_error {
public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

class BudgetError : public std::runtime_error {
public:
  explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

class InternalError : public std::logic_error {
public:
  explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw UsageError(msg);
}

inline void internal_check(bool cond, const std::string& msg) {
  if (!cond) throw InternalError(msg);
}

}  // namespace rkt
