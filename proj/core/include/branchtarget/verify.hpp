#pragma once

#include "branchtarget/scenario.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bt {

struct CheckResult {
    std::string name;
    bool ran = true; // false: not applicable to this scenario kind / level
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
};

struct VerifyOptions {
    std::string level = "full"; // "fast": the cheap subset only
    std::uint64_t seed = 20260817;
    int threads = 0;               // 0: environment / hardware
    std::string cli_path;          // binary spawned by the rerun-determinism check
    std::vector<std::string> only; // non-empty: run just these checks by name
};

// Property suite over a scenario.  The fintech-specific checks (analytic
// kernel geometry, closed-form value bracket, branching comparison, surface
// feedback) are skipped for custom scenarios; rerun determinism is skipped
// when no CLI path or scenario file is available.  Skipped checks report
// ran = false and do not affect the verdict.
std::vector<CheckResult> run_checks(const Scenario& scenario, const VerifyOptions& opts);

bool all_passed(const std::vector<CheckResult>& checks);

// machine-readable report (stable key order)
std::string checks_to_json(const std::vector<CheckResult>& checks, const VerifyOptions& opts);

} // namespace bt
