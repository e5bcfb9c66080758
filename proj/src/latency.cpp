#include "tugemm/latency.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace tugemm {

const char* variant_name(Variant v) {
    return v == Variant::serial ? "serial" : "parallel";
}

LatencyBreakdown LatencyBreakdown::from_steps(std::vector<std::uint64_t> steps) {
    LatencyBreakdown b;
    b.per_step = std::move(steps);
    std::uint64_t longest = 0;
    for (std::uint64_t l : b.per_step) {
        b.serial_total += l;
        longest = std::max(longest, l);
    }
    b.parallel_total = std::max<std::uint64_t>(longest, 1);
    return b;
}

LatencyBreakdown analytic_latency(const GemmProblem& problem) {
    require_valid(problem);
    const std::size_t m = problem.m(), n = problem.n(), p = problem.p();
    std::vector<std::uint64_t> steps(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t col_max = 0;
        for (std::size_t r = 0; r < m; ++r) {
            col_max = std::max(col_max,
                               static_cast<std::uint64_t>(std::llabs(problem.a.at(r, i))));
        }
        std::uint64_t row_max = 0;
        for (std::size_t q = 0; q < p; ++q) {
            row_max = std::max(row_max,
                               static_cast<std::uint64_t>(std::llabs(problem.b.at(i, q))));
        }
        steps[i] = col_max > 0 ? col_max * std::max<std::uint64_t>(row_max, 1) : 1;
    }
    return LatencyBreakdown::from_steps(std::move(steps));
}

std::uint64_t worst_case_latency(std::size_t n, const BitWidth& w, Variant variant) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const std::uint64_t mag = static_cast<std::uint64_t>(w.max_magnitude());
    const std::uint64_t step = mag * mag;
    return variant == Variant::serial ? static_cast<std::uint64_t>(n) * step : step;
}

std::uint64_t avg_latency_from_max(std::uint64_t max_value, std::size_t n, Variant variant) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const std::uint64_t step = std::max<std::uint64_t>(max_value * max_value, 1);
    return variant == Variant::serial ? static_cast<std::uint64_t>(n) * step : step;
}

}  // namespace tugemm
