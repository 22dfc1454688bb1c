#pragma once

#include "cnc/congruence.hpp"
#include "cnc/region.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace cnc {

// Quick trims the heaviest scans; Full runs every check at its acceptance scale.
enum class VerifyLevel { Quick, Full };

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    u64 cases = 0;
    u64 failures = 0;
    nlohmann::ordered_json details;  // deterministic: no timings
    double seconds = 0;
};

// Oracle criteria 1..10; determinism (11) needs two processes and lives in the acceptance runner.
inline constexpr int kVerifyCriteria = 10;

// The seed only picks the random sample of the Delta_3 check.
inline constexpr u64 kDefaultSeed = 20240607;

CriterionResult run_criterion(int id, VerifyLevel level, u64 seed = kDefaultSeed);
std::vector<CriterionResult> run_verify(VerifyLevel level, const std::vector<int>& ids, u64 seed = kDefaultSeed);

// {"schema": 1, "level": ..., "criteria": [...]}; seconds appear only with timings.
nlohmann::ordered_json verify_json(const std::vector<CriterionResult>& results, VerifyLevel level, bool timings);

// Both parametrization identities at one xi as a JSON record with "pass".
nlohmann::ordered_json verify_q_decomposition(const BinaryCubicForm& F, u64 q, const RegionSpec& R, long double xi);

} // namespace cnc
