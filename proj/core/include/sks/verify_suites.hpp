#pragma once

#include <string>
#include <vector>

#include "sks/equidist.hpp"
#include "sks/instance_io.hpp"

namespace sks {

struct SuiteResult {
    std::string name;
    bool passed = false;
    long checked = 0;
    std::string detail; // offending instance on failure
};

std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, i64 budget = kDefaultBudget);

SuiteResult suite_snf(i64 budget = kDefaultBudget);
SuiteResult suite_factorization(i64 budget = kDefaultBudget);
SuiteResult suite_symmetry(i64 budget = kDefaultBudget);
SuiteResult suite_taylor(i64 budget = kDefaultBudget);
SuiteResult suite_blockdecomp(i64 budget = kDefaultBudget);
SuiteResult suite_common_divisor(i64 budget = kDefaultBudget);
SuiteResult suite_char_sums(i64 budget = kDefaultBudget);
SuiteResult suite_gauss(i64 budget = kDefaultBudget);
SuiteResult suite_counts(i64 budget = kDefaultBudget);
SuiteResult suite_p2(i64 budget = kDefaultBudget);

} // namespace sks
