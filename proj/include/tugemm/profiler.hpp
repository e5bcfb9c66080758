#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "tugemm/latency.hpp"
#include "tugemm/types.hpp"

namespace tugemm {

/// One workload tensor: an intermediate feature map (or any integer array)
/// whose maximum magnitude determines the latency of the GEMM that consumes
/// it. One tensor = one profiled operation.
struct Tensor {
    std::vector<std::uint32_t> dims;
    std::vector<std::int64_t> data;
};

/// Histogram of per-operation maximum magnitudes over 0..2^(w-1), plus the
/// derived cumulative distribution and mean. Partial stats merge
/// associatively, so ingestion order never changes the result.
class WorkloadStats {
public:
    explicit WorkloadStats(const BitWidth& w);

    void record_max(std::uint64_t max_magnitude);
    void merge(const WorkloadStats& other);

    const BitWidth& width() const { return width_; }
    /// counts indexed by magnitude 0..2^(w-1)
    std::span<const std::uint64_t> histogram() const { return histogram_; }
    std::uint64_t n_operations() const { return n_operations_; }
    /// exact rational mean of per-operation maxima, as numerator/denominator
    std::uint64_t sum_of_maxima() const { return sum_of_maxima_; }
    double mean_max() const;
    /// cumulative percentage of operations with maximum <= k, for each k
    std::vector<double> cdf() const;

private:
    BitWidth width_;
    std::vector<std::uint64_t> histogram_;
    std::uint64_t n_operations_ = 0;
    std::uint64_t sum_of_maxima_ = 0;
};

/// Scans every tensor, records max |element| per tensor, and aggregates.
/// Errors: empty source, empty tensor, element outside the two's-complement
/// range for w.
WorkloadStats profile_maxima(std::span<const Tensor> source, const BitWidth& w);

/// Latency estimate for a profiled workload: the mean over operations of
/// avg_latency_from_max(max, n, variant), weighted by the histogram, plus
/// its ratio to the worst case. The estimate is an upper bound per
/// operation (only the maximum magnitude is known, not the full operand
/// distribution).
struct WorkloadLatencySummary {
    Variant variant;
    std::size_t n;
    std::uint64_t n_operations;
    std::uint64_t worst_case;
    double mean_latency;
    double worst_case_ratio;  // worst_case / mean_latency
};

WorkloadLatencySummary estimate_workload_latency(const WorkloadStats& stats, std::size_t n,
                                                 Variant variant);

/// Histogram/CDF CSV, one line per magnitude value, with columns
/// value,count,percent,cumulative_percent. Suitable for replotting the
/// maximum-magnitude distribution of a workload.
void write_histogram_csv(std::ostream& out, const WorkloadStats& stats);

}  // namespace tugemm
