#pragma once

#include <string>
#include <vector>

namespace tp {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::vector<int> only; // empty: all
    int workers = 0;       // 0: hardware concurrency
};

// Runs the acceptance criteria, printing one PASS/FAIL line per criterion.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, bool print = true);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace tp
