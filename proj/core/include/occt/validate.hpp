#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace occt {

// One acceptance criterion outcome: the observed figure of merit, the pinned
// threshold it is compared against, and the verdict.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double observed = 0.0;
    double threshold = 0.0;
    std::string details;
};

struct ValidationReport {
    std::vector<CriterionResult> criteria;
    bool all_pass() const;
    // Stable textual rendering (one line per criterion); byte-identical for
    // identical seeds.
    std::string render() const;
};

// Runs the full validation suite. Runtime is dominated by the Monte Carlo
// oracles (a few minutes on a laptop).
ValidationReport run_validation(std::uint64_t seed);

}  // namespace occt
