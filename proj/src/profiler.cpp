#include "tugemm/profiler.hpp"

#include <ostream>
#include <stdexcept>

namespace tugemm {

WorkloadStats::WorkloadStats(const BitWidth& w)
    : width_(w), histogram_(static_cast<std::size_t>(w.max_magnitude()) + 1, 0) {}

void WorkloadStats::record_max(std::uint64_t max_magnitude) {
    if (max_magnitude >= histogram_.size()) {
        throw std::out_of_range("maximum magnitude " + std::to_string(max_magnitude) +
                                " exceeds 2^(w-1) for w=" + std::to_string(width_.bits()));
    }
    ++histogram_[max_magnitude];
    ++n_operations_;
    sum_of_maxima_ += max_magnitude;
}

void WorkloadStats::merge(const WorkloadStats& other) {
    if (other.width_ != width_) {
        throw std::invalid_argument("cannot merge workload stats with different bit widths");
    }
    for (std::size_t v = 0; v < histogram_.size(); ++v) histogram_[v] += other.histogram_[v];
    n_operations_ += other.n_operations_;
    sum_of_maxima_ += other.sum_of_maxima_;
}

double WorkloadStats::mean_max() const {
    if (n_operations_ == 0) return 0.0;
    return static_cast<double>(sum_of_maxima_) / static_cast<double>(n_operations_);
}

std::vector<double> WorkloadStats::cdf() const {
    std::vector<double> out(histogram_.size(), 0.0);
    std::uint64_t cumulative = 0;
    for (std::size_t v = 0; v < histogram_.size(); ++v) {
        cumulative += histogram_[v];
        out[v] = n_operations_ == 0
                     ? 0.0
                     : 100.0 * static_cast<double>(cumulative) / static_cast<double>(n_operations_);
    }
    return out;
}

WorkloadStats profile_maxima(std::span<const Tensor> source, const BitWidth& w) {
    if (source.empty()) {
        throw std::invalid_argument("workload source is empty");
    }
    WorkloadStats stats(w);
    for (std::size_t t = 0; t < source.size(); ++t) {
        const Tensor& tensor = source[t];
        if (tensor.data.empty()) {
            throw std::invalid_argument("tensor " + std::to_string(t) + " has no elements");
        }
        std::uint64_t max_mag = 0;
        for (std::int64_t v : tensor.data) {
            if (!w.contains(v)) {
                throw std::out_of_range("tensor " + std::to_string(t) + " element " +
                                        std::to_string(v) + " outside range for w=" +
                                        std::to_string(w.bits()));
            }
            const std::uint64_t mag = static_cast<std::uint64_t>(v < 0 ? -v : v);
            if (mag > max_mag) max_mag = mag;
        }
        stats.record_max(max_mag);
    }
    return stats;
}

WorkloadLatencySummary estimate_workload_latency(const WorkloadStats& stats, std::size_t n,
                                                 Variant variant) {
    if (stats.n_operations() == 0) {
        throw std::invalid_argument("workload stats are empty");
    }
    const auto histogram = stats.histogram();
    std::uint64_t weighted = 0;
    for (std::size_t v = 0; v < histogram.size(); ++v) {
        weighted += histogram[v] * avg_latency_from_max(v, n, variant);
    }
    WorkloadLatencySummary summary;
    summary.variant = variant;
    summary.n = n;
    summary.n_operations = stats.n_operations();
    summary.worst_case = worst_case_latency(n, stats.width(), variant);
    summary.mean_latency =
        static_cast<double>(weighted) / static_cast<double>(stats.n_operations());
    summary.worst_case_ratio = static_cast<double>(summary.worst_case) / summary.mean_latency;
    return summary;
}

void write_histogram_csv(std::ostream& out, const WorkloadStats& stats) {
    const auto histogram = stats.histogram();
    const auto cdf = stats.cdf();
    const double total = static_cast<double>(stats.n_operations());
    out << "value,count,percent,cumulative_percent\n";
    for (std::size_t v = 0; v < histogram.size(); ++v) {
        const double percent = total == 0.0 ? 0.0 : 100.0 * static_cast<double>(histogram[v]) / total;
        out << v << ',' << histogram[v] << ',' << percent << ',' << cdf[v] << '\n';
    }
}

}  // namespace tugemm
