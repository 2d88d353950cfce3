#pragma once

// Batch verification suites behind `whlab verify`. Every suite draws from its
// own generator seeded by (seed, suite), so `all` reproduces the single suites.
// Each suite also runs deliberately broken variants; such a case passes when
// the break is detected.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "whlab/io.hpp"

namespace whlab {

struct SuiteConfig {
    std::string suite = "all";
    std::optional<int> dim;  // unset: the suite's default dimension range
    int trials = 20;
    std::uint64_t seed = 1;
    double tol = kDefaultTol;
    int N = 32;
    double grid_step = 0.25;
    std::string model = "all";  // homotopy: halfline, unitary or all

    void validate() const;
};

struct CaseResult {
    std::string name;
    std::string status;  // pass, fail, skipped
    double max_error = 0.0;
    double tolerance = 0.0;
    std::string details;
};

struct SuiteReport {
    std::string suite;
    SuiteConfig config;
    std::vector<CaseResult> cases;  // sorted by name
    double wall_time = 0.0;

    bool passed() const;
};

const std::vector<std::string>& suite_names();  // including "all"

SuiteReport run(const SuiteConfig& config);

io::Json to_json(const SuiteReport& report, bool with_timing = false);

}  // namespace whlab
