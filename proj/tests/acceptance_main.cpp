// Numbered acceptance gate.  Runs the named release criteria against the
// shipped desk scenario and prints one verdict line each; the exit code is
// the overall verdict.  Invoke with criterion numbers (1..9) or nothing for
// the full gate.
#include "branchtarget/scenario.hpp"
#include "branchtarget/verify.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace {

struct Criterion {
    int number;
    const char* check; // property-suite check that measures it
    const char* statement;
};

const Criterion kCriteria[] = {
    {1, "population-growth",
     "mean of sup_t |population| <= exp(gamma*M*T) + 3 SE over 1e4 paths, under 30 s"},
    {2, "crn-monotonicity",
     "coupled +0.1 level shift is never reordered, at any stop, on 1e3 path pairs"},
    {3, "branching-value",
     "two-claim start within 0.15 of the best singleton start, 4e3 paths, under 2 min"},
    {4, "pde-bracket",
     "grid value at (0, log K) inside the closed-form bracket with 1e-2 slack, under 60 s"},
    {5, "feedback-consistency",
     "surface feedback fails <= 5% from 0.05 above the surface and >= 50% from 0.2 below"},
    {6, "kernel-geometry",
     "numerical mismatch distance equals the analytic form to 1e-12 at 100 random draws"},
    {7, "restart-conditioning",
     "terminal statistics of restart-at-T/2 runs match full runs, every |z| < 4"},
    {8, "vi-structure",
     "obstacle and envelope fixed points hold to 1e-12; refinement deltas contract by <= 0.6"},
    {9, "rerun-determinism", "identical run manifests reproduce byte-identical CSV outputs"},
};

const Criterion* by_number(int n) {
    for (const auto& c : kCriteria)
        if (c.number == n) return &c;
    return nullptr;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<const Criterion*> wanted;
    for (int i = 1; i < argc; ++i) {
        const int n = std::atoi(argv[i]);
        const Criterion* c = by_number(n);
        if (!c) {
            std::fprintf(stderr, "usage: %s [criterion numbers 1..9]\n", argv[0]);
            return 2;
        }
        wanted.push_back(c);
    }
    if (wanted.empty())
        for (const auto& c : kCriteria) wanted.push_back(&c);

    bt::VerifyOptions opts;
    opts.level = "full";
    opts.cli_path = BT_CLI_PATH;
    for (const Criterion* c : wanted) opts.only.emplace_back(c->check);

    std::vector<bt::CheckResult> checks;
    try {
        const bt::Scenario scenario = bt::load_scenario(BT_SCENARIO_FILE);
        checks = bt::run_checks(scenario, opts);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance: cannot run the gate: %s\n", e.what());
        return 2;
    }

    int passed = 0;
    for (const Criterion* c : wanted) {
        const bt::CheckResult* found = nullptr;
        for (const auto& r : checks)
            if (r.name == c->check) found = &r;
        const bool ok = found && found->ran && found->pass;
        if (ok) ++passed;
        std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", c->number, c->statement);
        if (found && found->ran)
            std::printf("       measured: %s (%.2fs)\n", found->detail.c_str(), found->seconds);
        else if (found)
            std::printf("       not run: %s\n", found->detail.c_str());
    }
    if (wanted.size() > 1)
        std::printf("acceptance: %d/%zu criteria pass\n", passed, wanted.size());
    return passed == static_cast<int>(wanted.size()) ? 0 : 1;
}
