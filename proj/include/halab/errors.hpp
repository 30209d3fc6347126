#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace halab {

/// Raised when an exact enumeration would exceed its configured work budget.
/// Never downgraded to a heuristic answer.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what_budget, double required, double budget)
        : std::runtime_error(what_budget + ": required " + std::to_string(required) +
                             " exceeds budget " + std::to_string(budget)),
          required_(required), budget_(budget) {}

    double required() const noexcept { return required_; }
    double budget() const noexcept { return budget_; }

private:
    double required_;
    double budget_;
};

/// Raised by exact-phase routines when handed floating-point phase data.
class NonExactPhaseData : public std::invalid_argument {
public:
    explicit NonExactPhaseData(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a search that is guaranteed to succeed under its preconditions
/// comes back empty; this signals a caller bug, not a numerical issue.
class SearchFailed : public std::runtime_error {
public:
    explicit SearchFailed(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace halab
