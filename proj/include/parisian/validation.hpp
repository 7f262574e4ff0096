#pragma once

#include "parisian/report.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace parisian {

// quick: reduced sample sizes for smoke runs; full: the sizes the checks are
// calibrated for (tens of minutes on one core).
enum class Profile { quick, full };

std::string to_string(Profile p);
Profile parse_profile(const std::string& s);

struct ValidationOptions {
    Profile profile = Profile::quick;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::vector<int> criteria;  // empty runs every criterion
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

inline constexpr int criterion_count = 10;

std::string criterion_name(int id);

// Runs one criterion; numerical failures are reported as a failed result.
CriterionResult run_criterion(int id, const ValidationOptions& opt);

// Runs the selected criteria in increasing id order, calling on_result after each.
std::vector<CriterionResult> run_validation(const ValidationOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

// Columns: criterion, name, profile, seed, passed, detail. Worker count is
// deliberately not recorded.
std::vector<std::string> validation_columns();
std::vector<Record> validation_records(const std::vector<CriterionResult>& results, const ValidationOptions& opt);

}  // namespace parisian
