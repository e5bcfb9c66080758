#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tugemm/types.hpp"

namespace tugemm {

/// Which properties a single trial upheld. One trial runs both engines and
/// checks them against the binary oracle and the closed-form latency model.
struct TrialChecks {
    bool outputs_match = true;       // serial = parallel = oracle
    bool latency_agrees = true;      // analytic = simulated, both variants
    bool transition_bound = true;    // every line <= 2 transitions per load
    bool activity_conserved = true;  // updates = sum|A||B|, serial = parallel

    bool all_ok() const {
        return outputs_match && latency_agrees && transition_bound && activity_conserved;
    }
};

/// Runs one problem through both engines and every cross-check. Returns an
/// empty string when all checks pass, otherwise a description of the first
/// divergence. `inject_fault` flips the serial sign rule (detector
/// self-test).
std::string check_problem(const GemmProblem& problem, bool inject_fault,
                          TrialChecks* checks = nullptr);

struct VerifyConfig {
    std::uint64_t trials = 10000;
    std::size_t dim_min = 1;
    std::size_t dim_max = 8;
    std::vector<int> widths = {2, 4, 8};
    std::uint64_t seed = 1;
    bool inject_fault = false;
};

struct VerifyReport {
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
    std::uint64_t output_mismatches = 0;
    std::uint64_t latency_mismatches = 0;
    std::uint64_t transition_violations = 0;
    std::uint64_t activity_mismatches = 0;
    std::string first_failure;
    std::optional<GemmProblem> first_failing_problem;
    std::optional<GemmProblem> minimized_problem;

    bool ok() const { return failures == 0; }
};

/// Randomized serial/parallel/oracle equivalence run. Trials cycle through
/// the configured widths; dimensions are drawn from [dim_min, dim_max].
/// Fully deterministic for a given config. On the first failure the problem
/// is shrunk to a minimal reproducer (kept in the report; the CLI writes it
/// to a file).
VerifyReport run_verification(const VerifyConfig& config);

/// Greedy shrink: drops steps/rows/columns and zeroes elements while the
/// failure persists.
GemmProblem minimize_failure(const GemmProblem& problem, bool inject_fault);

}  // namespace tugemm
