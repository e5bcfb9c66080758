#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tugemm/latency.hpp"
#include "tugemm/sim.hpp"
#include "tugemm/types.hpp"

namespace tugemm {

struct SerialOptions {
    OutputWidthPolicy policy = OutputWidthPolicy::unbounded();
    /// Per-cycle CSV trace (cycle, step, enabled-cell count, counter vectors).
    std::ostream* trace = nullptr;
    /// Test hook: inverts the output-cell sign rule (increment on sign
    /// disagreement instead of agreement). Exists so the mismatch detector
    /// in cmd_verify can be shown to catch a broken engine.
    bool fault_invert_sign = false;
};

/// Optional instrumentation filled by serial_run.
struct SerialProbe {
    /// Observed compute cycles per step; sums to SimResult::cycles.
    std::vector<std::uint64_t> per_step_cycles;
    /// Per-cell counts of +1 and -1 updates, row-major MxP.
    std::vector<std::uint64_t> cell_increments;
    std::vector<std::uint64_t> cell_decrements;
};

/// Cycle-accurate run of the serial architecture: an index counter walks the
/// N steps; per step, M column counters and P row counters convert the
/// binary operands to unary pulses in a nested fashion (rows tick every
/// cycle, columns tick when all rows reach zero, rows then reload), and the
/// MxP output counter array accumulates +/-1 per enabled cell per cycle.
/// Output cells start loaded with C, so the final array holds AB + C.
SimResult serial_run(const GemmProblem& problem, const SerialOptions& options = {},
                     SerialProbe* probe = nullptr);

/// Per-step cycle counts as observed by the cycle-accurate engine (not the
/// closed form); serial_total equals serial_run(problem).cycles.
LatencyBreakdown serial_step_trace(const GemmProblem& problem);

}  // namespace tugemm
