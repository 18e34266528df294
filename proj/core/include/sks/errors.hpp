#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sks {

/// Raised when an enumeration's index space exceeds the configured budget.
/// Operations refuse to run rather than silently taking hours.
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Raised on malformed inputs (singular moduli, domain violations, ...).
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

inline constexpr std::int64_t kDefaultBudget = 100'000'000;

inline void check_budget(std::int64_t candidates, std::int64_t budget = kDefaultBudget) {
    if (candidates < 0 || candidates > budget)
        throw BudgetExceeded("instance too large");
}

} // namespace sks
