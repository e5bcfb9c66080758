#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "tugemm/latency.hpp"
#include "tugemm/profiler.hpp"
#include "tugemm/sim.hpp"
#include "tugemm/verify.hpp"

namespace tugemm {

/// Machine-readable report schema version. Bump on any breaking change to
/// the JSON layouts below.
inline constexpr int kReportSchemaVersion = 1;

/// How a simulate run was configured; echoed into the report so every
/// result is reproducible from the report alone.
struct RunConfig {
    std::string variant = "both";  // serial | parallel | both
    std::size_t m = 0, n = 0, p = 0;
    int w = 0;
    std::optional<std::uint64_t> seed;   // exactly one of seed / input_path
    std::optional<std::string> input_path;
    OutputWidthPolicy policy = OutputWidthPolicy::unbounded();
    bool trace = false;
};

nlohmann::json matrix_json(const Matrix& m);
nlohmann::json activity_json(const ActivityStats& a);
nlohmann::json breakdown_json(const LatencyBreakdown& b);
nlohmann::json sim_result_json(const SimResult& r, const LatencyBreakdown& b);
nlohmann::json run_config_json(const RunConfig& c);

/// Full simulate report: schema_version, config, and one result per variant.
nlohmann::json simulate_report(const RunConfig& config, const SimResult* serial,
                               const SimResult* parallel, const LatencyBreakdown& breakdown);

nlohmann::json verify_report_json(const VerifyConfig& config, const VerifyReport& report,
                                  const std::optional<std::string>& reproducer_path);

nlohmann::json workload_summary_json(const WorkloadStats& stats,
                                     const WorkloadLatencySummary& serial,
                                     const WorkloadLatencySummary& parallel);

}  // namespace tugemm
