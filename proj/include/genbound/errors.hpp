#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace genbound {

// Bad input: wrong arity, mismatched fields, malformed files, out-of-range
// parameters. Maps to CLI exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An enumeration was refused because its cost exceeds the configured budget.
// Maps to CLI exit code 2. `required` is the estimated cost in closure-call
// equivalents.
struct BudgetError : std::runtime_error {
  std::uint64_t required;
  std::uint64_t limit;
  BudgetError(std::uint64_t required_, std::uint64_t limit_)
      : std::runtime_error("enumeration budget exceeded: need ~" +
                           std::to_string(required_) + " evaluations, budget is " +
                           std::to_string(limit_)),
        required(required_),
        limit(limit_) {}
};

// Enumeration budget, measured in closure-call equivalents.
struct Budget {
  std::uint64_t limit = 100'000'000ULL;

  void require(std::uint64_t cost) const {
    if (cost > limit) throw BudgetError(cost, limit);
  }
};

}  // namespace genbound
