#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tugemm/sim.hpp"
#include "tugemm/types.hpp"

namespace tugemm {

struct ParallelOptions {
    OutputWidthPolicy policy = OutputWidthPolicy::unbounded();
    /// Per-cycle CSV trace; one col_done column per vector counter.
    std::ostream* trace = nullptr;
};

/// Cycle-accurate run of the parallel architecture: N vector counters (each
/// fusing one step's column and row counters) advance concurrently, and each
/// of the MxP output adder cells sums N contributions in {-1, 0, +1} per
/// cycle into its register. A vector counter asserts col_done when its
/// column residuals are all zero; the run completes when every unit is done
/// (one control cycle minimum).
SimResult parallel_run(const GemmProblem& problem, const ParallelOptions& options = {});

/// Per-cycle contribution sums received by output cell (m, q), each in
/// [-N, N]; their total plus C[m][q] equals Y[m][q].
std::vector<std::int64_t> parallel_cell_trace(const GemmProblem& problem, std::size_t m,
                                              std::size_t q);

}  // namespace tugemm
