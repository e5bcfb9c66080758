#include "tugemm/report.hpp"

namespace tugemm {

using nlohmann::json;

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

json activity_json(const ActivityStats& a) {
    return json{{"output_cell_updates", a.output_cell_updates},
                {"unary_signal_transitions", a.unary_signal_transitions},
                {"counter_loads", a.counter_loads},
                {"transition_bound_ok", a.transition_bound_ok}};
}

json breakdown_json(const LatencyBreakdown& b) {
    return json{{"per_step", b.per_step},
                {"serial_total", b.serial_total},
                {"parallel_total", b.parallel_total}};
}

json sim_result_json(const SimResult& r, const LatencyBreakdown& b) {
    return json{{"y", matrix_json(r.y)},
                {"cycles", r.cycles},
                {"activity", activity_json(r.activity)},
                {"latency_breakdown", breakdown_json(b)}};
}

json run_config_json(const RunConfig& c) {
    json j{{"variant", c.variant},
           {"m", c.m},
           {"n", c.n},
           {"p", c.p},
           {"w", c.w},
           {"output_width", c.policy.bits},  // 0 = unbounded
           {"trace", c.trace}};
    if (c.seed) j["seed"] = *c.seed;
    if (c.input_path) j["input"] = *c.input_path;
    return j;
}

json simulate_report(const RunConfig& config, const SimResult* serial, const SimResult* parallel,
                     const LatencyBreakdown& breakdown) {
    json results;
    if (serial) results["serial"] = sim_result_json(*serial, breakdown);
    if (parallel) results["parallel"] = sim_result_json(*parallel, breakdown);
    return json{{"schema_version", kReportSchemaVersion},
                {"config", run_config_json(config)},
                {"results", std::move(results)}};
}

json verify_report_json(const VerifyConfig& config, const VerifyReport& report,
                        const std::optional<std::string>& reproducer_path) {
    json j{{"schema_version", kReportSchemaVersion},
           {"config",
            {{"trials", config.trials},
             {"dim_min", config.dim_min},
             {"dim_max", config.dim_max},
             {"widths", config.widths},
             {"seed", config.seed},
             {"inject_fault", config.inject_fault}}},
           {"trials", report.trials},
           {"failures", report.failures},
           {"output_mismatches", report.output_mismatches},
           {"latency_mismatches", report.latency_mismatches},
           {"transition_violations", report.transition_violations},
           {"activity_mismatches", report.activity_mismatches},
           {"ok", report.ok()}};
    if (!report.first_failure.empty()) j["first_failure"] = report.first_failure;
    if (reproducer_path) j["reproducer"] = *reproducer_path;
    return j;
}

namespace {

json summary_json(const WorkloadLatencySummary& s) {
    return json{{"variant", variant_name(s.variant)},
                {"n", s.n},
                {"worst_case_cycles", s.worst_case},
                {"mean_estimated_cycles", s.mean_latency},
                {"worst_case_ratio", s.worst_case_ratio}};
}

}  // namespace

json workload_summary_json(const WorkloadStats& stats, const WorkloadLatencySummary& serial,
                           const WorkloadLatencySummary& parallel) {
    return json{{"schema_version", kReportSchemaVersion},
                {"w", stats.width().bits()},
                {"n_operations", stats.n_operations()},
                {"mean_max", stats.mean_max()},
                {"cdf0_percent", stats.cdf().front()},
                {"serial", summary_json(serial)},
                {"parallel", summary_json(parallel)}};
}

}  // namespace tugemm
