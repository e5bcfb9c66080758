#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "tugemm/types.hpp"

namespace tugemm {

/// Width of the output accumulators. `unbounded` models ideal (64-bit)
/// registers; `fixed(bits)` raises OverflowError the first cycle any
/// accumulator leaves [-2^(bits-1), 2^(bits-1)-1]. The architecture leaves
/// the hardware register width open; this makes it explorable.
struct OutputWidthPolicy {
    // 0 = unbounded
    int bits = 0;

    static OutputWidthPolicy unbounded() { return {0}; }
    static OutputWidthPolicy fixed(int bits) {
        if (bits < 2 || bits > 63) {
            throw std::invalid_argument("fixed output width must be in [2, 63]");
        }
        return {bits};
    }

    bool is_bounded() const { return bits != 0; }
    std::int64_t min_value() const { return -(std::int64_t{1} << (bits - 1)); }
    std::int64_t max_value() const { return (std::int64_t{1} << (bits - 1)) - 1; }
};

/// Dynamic-activity counters collected by the cycle engines.
///
/// output_cell_updates  - number of +/-1 accumulator updates; always equals
///                        sum |A[m][i]|*|B[i][p]| for a faithful run.
/// unary_signal_transitions - 0->1 and 1->0 edges summed over every
///                        unary_col/unary_row line.
/// counter_loads        - individual counter load events (each counter that
///                        receives a value at a load edge counts one).
/// transition_bound_ok  - true iff every single line kept
///                        transitions <= 2 * loads (temporal-coding bound).
struct ActivityStats {
    std::uint64_t output_cell_updates = 0;
    std::uint64_t unary_signal_transitions = 0;
    std::uint64_t counter_loads = 0;
    bool transition_bound_ok = true;
};

/// Output of one simulated run. `y` is MxP in wide (64-bit) integers, never
/// range-clamped.
struct SimResult {
    Matrix y;
    std::uint64_t cycles = 0;
    ActivityStats activity;
};

/// Fixed-width accumulator overflow: identifies the cell, the cycle at whose
/// end the register first left the representable range, and the value it
/// would have held.
class OverflowError : public std::runtime_error {
public:
    OverflowError(std::size_t row, std::size_t col, std::uint64_t cycle, std::int64_t value,
                  int bits)
        : std::runtime_error("output counter overflow: cell (" + std::to_string(row) + "," +
                             std::to_string(col) + ") reached " + std::to_string(value) +
                             " at cycle " + std::to_string(cycle) + ", outside " +
                             std::to_string(bits) + "-bit range"),
          row_(row),
          col_(col),
          cycle_(cycle),
          value_(value) {}

    std::size_t row() const { return row_; }
    std::size_t col() const { return col_; }
    std::uint64_t cycle() const { return cycle_; }
    std::int64_t value() const { return value_; }

private:
    std::size_t row_;
    std::size_t col_;
    std::uint64_t cycle_;
    std::int64_t value_;
};

}  // namespace tugemm
