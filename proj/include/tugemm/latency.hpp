#pragma once

#include <cstdint>
#include <vector>

#include "tugemm/types.hpp"

namespace tugemm {

enum class Variant { serial, parallel };

const char* variant_name(Variant v);

/// Per-step compute-cycle counts and their aggregation over the two
/// architectures. serial_total = sum L_i, parallel_total = max(max L_i, 1);
/// every L_i >= 1.
struct LatencyBreakdown {
    std::vector<std::uint64_t> per_step;
    std::uint64_t serial_total = 0;
    std::uint64_t parallel_total = 0;

    static LatencyBreakdown from_steps(std::vector<std::uint64_t> steps);
};

/// Closed-form per-problem latency. Step i costs
///   L_i = C_i * max(R_i, 1)  when C_i > 0, else 1,
/// with C_i = max_m |A[m][i]| and R_i = max_p |B[i][p]|: the column counters
/// drain in C_i updates, each gated by a max(R_i,1)-cycle row pass, and a
/// step with all-zero column values still costs one control cycle for the
/// step_done handoff. Must agree exactly with the cycle-accurate engines.
LatencyBreakdown analytic_latency(const GemmProblem& problem);

/// N*(2^(w-1))^2 cycles for serial, (2^(w-1))^2 for parallel: every counter
/// loaded with the maximum magnitude on every step.
std::uint64_t worst_case_latency(std::size_t n, const BitWidth& w, Variant variant);

/// Upper-bound latency estimate given only the maximum operand magnitude:
/// assumes every step's C_i and R_i equal max_value. Serial gives
/// n*max_value^2 (n when max_value = 0), parallel max(max_value^2, 1).
std::uint64_t avg_latency_from_max(std::uint64_t max_value, std::size_t n, Variant variant);

}  // namespace tugemm
