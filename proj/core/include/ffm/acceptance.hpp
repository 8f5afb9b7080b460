#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ffm {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool soft = false;
    bool pass = false;
    double seconds = 0;
    double time_limit = 0;
    std::string detail;
};

/// Ids 1..13. Soft criteria (12, 13) report but are never counted as failures.
CriterionResult run_criterion(int id, std::uint64_t seed = 20240611);
std::vector<CriterionResult> run_criteria(const std::vector<int>& ids, std::uint64_t seed = 20240611);

/// Groups used by `ffm verify`: exact identities, statistical checks, soft reports.
std::vector<int> criteria_group(const std::string& name);

}  // namespace ffm
