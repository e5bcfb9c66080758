// tugemm — command-line driver for the temporal-unary GEMM simulators.
//
// Subcommands:
//   simulate   run a problem through the serial and/or parallel engine,
//              emit a JSON report {y, cycles, activity, latency_breakdown}
//   verify     randomized serial/parallel/oracle equivalence sweep
//   latency    worst-case table for (n, w), or per-step table for a problem
//   profile    workload maximum-magnitude histogram/CDF + latency estimate
//
// Exit status: 0 success, 1 usage/parse/validation/mismatch, 2 overflow.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tugemm/io.hpp"
#include "tugemm/latency.hpp"
#include "tugemm/oracle.hpp"
#include "tugemm/parallel_sim.hpp"
#include "tugemm/random.hpp"
#include "tugemm/report.hpp"
#include "tugemm/serial_sim.hpp"
#include "tugemm/verify.hpp"

namespace {

using namespace tugemm;

constexpr int kExitError = 1;
constexpr int kExitOverflow = 2;

std::optional<std::uint64_t> env_seed() {
    const char* value = std::getenv("TUGEMM_SEED");
    if (!value || !*value) return std::nullopt;
    return std::strtoull(value, nullptr, 10);
}

void write_text_or_stdout(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content << '\n';
}

struct SimulateArgs {
    std::string variant = "both";
    std::string input;
    std::optional<std::uint64_t> seed;
    std::size_t m = 0, n = 0, p = 0;
    int w = 0;
    int output_width = 0;  // 0 = unbounded
    std::string trace_path;
    std::string out_path;
};

int run_simulate(const SimulateArgs& args) {
    RunConfig config;
    config.variant = args.variant;
    config.trace = !args.trace_path.empty();

    GemmProblem problem = [&] {
        if (!args.input.empty()) {
            config.input_path = args.input;
            return load_problem_file(args.input);
        }
        std::uint64_t seed = args.seed ? *args.seed : env_seed().value();
        config.seed = seed;
        return random_problem(args.m, args.n, args.p, BitWidth(args.w), seed);
    }();
    config.m = problem.m();
    config.n = problem.n();
    config.p = problem.p();
    config.w = problem.width.bits();
    if (args.output_width != 0) {
        config.policy = OutputWidthPolicy::fixed(args.output_width);
    }
    require_valid(problem);

    const bool want_serial = args.variant != "parallel";
    const bool want_parallel = args.variant != "serial";
    const bool both = want_serial && want_parallel;

    auto trace_stream = [&](const char* suffix) -> std::ofstream {
        std::string path = args.trace_path;
        if (both) path += suffix;
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write trace '" + path + "'");
        return out;
    };

    std::optional<SimResult> serial;
    if (want_serial) {
        SerialOptions options;
        options.policy = config.policy;
        std::ofstream trace;
        if (config.trace) {
            trace = trace_stream(".serial.csv");
            options.trace = &trace;
        }
        serial = serial_run(problem, options);
    }
    std::optional<SimResult> parallel;
    if (want_parallel) {
        ParallelOptions options;
        options.policy = config.policy;
        std::ofstream trace;
        if (config.trace) {
            trace = trace_stream(".parallel.csv");
            options.trace = &trace;
        }
        parallel = parallel_run(problem, options);
    }

    const LatencyBreakdown breakdown = analytic_latency(problem);
    const nlohmann::json report =
        simulate_report(config, serial ? &*serial : nullptr, parallel ? &*parallel : nullptr,
                        breakdown);
    write_text_or_stdout(args.out_path, report.dump(2));
    return 0;
}

struct VerifyArgs {
    VerifyConfig config;
    std::optional<std::uint64_t> seed;
    std::string reproducer_path = "tugemm_reproducer.txt";
};

int run_verify(VerifyArgs args) {
    args.config.seed = args.seed ? *args.seed : env_seed().value_or(args.config.seed);
    const VerifyReport report = run_verification(args.config);

    std::optional<std::string> reproducer;
    if (report.minimized_problem) {
        save_problem_file(args.reproducer_path, *report.minimized_problem,
                          "minimized reproducer\n" + report.first_failure);
        reproducer = args.reproducer_path;
    }
    std::cout << verify_report_json(args.config, report, reproducer).dump(2) << '\n';
    if (!report.ok()) {
        std::cerr << "verify: " << report.failures << "/" << report.trials
                  << " trials failed; first: " << report.first_failure << '\n';
        if (reproducer) std::cerr << "verify: reproducer written to " << *reproducer << '\n';
        return kExitError;
    }
    return 0;
}

struct LatencyArgs {
    std::size_t n = 0;
    int w = 0;
    std::string variant = "both";
    std::string input;
};

int run_latency(const LatencyArgs& args) {
    if (!args.input.empty()) {
        const GemmProblem problem = load_problem_file(args.input);
        require_valid(problem);
        const LatencyBreakdown b = analytic_latency(problem);
        std::cout << "step,cycles\n";
        for (std::size_t i = 0; i < b.per_step.size(); ++i) {
            std::cout << i << ',' << b.per_step[i] << '\n';
        }
        std::cout << "serial_total," << b.serial_total << '\n';
        std::cout << "parallel_total," << b.parallel_total << '\n';
        return 0;
    }
    const BitWidth w(args.w);
    std::cout << "variant,worst_case_cycles\n";
    if (args.variant != "parallel") {
        std::cout << "serial," << worst_case_latency(args.n, w, Variant::serial) << '\n';
    }
    if (args.variant != "serial") {
        std::cout << "parallel," << worst_case_latency(args.n, w, Variant::parallel) << '\n';
    }
    return 0;
}

struct ProfileArgs {
    std::vector<std::string> paths;
    int w = 8;
    std::size_t n = 16;
    std::string csv_path;
};

int run_profile(const ProfileArgs& args) {
    std::vector<std::filesystem::path> paths(args.paths.begin(), args.paths.end());
    const std::vector<Tensor> tensors = load_workload(paths);
    const WorkloadStats stats = profile_maxima(tensors, BitWidth(args.w));
    const WorkloadLatencySummary serial = estimate_workload_latency(stats, args.n, Variant::serial);
    const WorkloadLatencySummary parallel =
        estimate_workload_latency(stats, args.n, Variant::parallel);

    if (args.csv_path.empty() || args.csv_path == "-") {
        write_histogram_csv(std::cout, stats);
    } else {
        std::ofstream out(args.csv_path);
        if (!out) throw std::runtime_error("cannot write '" + args.csv_path + "'");
        write_histogram_csv(out, stats);
    }
    std::cout << workload_summary_json(stats, serial, parallel).dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"temporal-unary GEMM cycle-accurate simulator"};
    app.require_subcommand(1);

    SimulateArgs sim_args;
    CLI::App* sim = app.add_subcommand("simulate", "simulate one GEMM problem");
    auto* sim_input = sim->add_option("--input", sim_args.input, "problem file (text or JSON)");
    auto* sim_seed = sim->add_option("--seed", sim_args.seed, "generate the problem from a seed");
    sim_input->excludes(sim_seed);
    sim->add_option("--variant", sim_args.variant, "serial|parallel|both")
        ->check(CLI::IsMember({"serial", "parallel", "both"}))
        ->capture_default_str();
    sim->add_option("--m", sim_args.m, "rows of A (generated problems)");
    sim->add_option("--n", sim_args.n, "cols of A / rows of B");
    sim->add_option("--p", sim_args.p, "cols of B");
    sim->add_option("--w", sim_args.w, "operand bit width (2..8)");
    sim->add_option("--output-width", sim_args.output_width,
                    "fixed output register width in bits (default: unbounded)");
    sim->add_option("--trace", sim_args.trace_path, "write per-cycle CSV trace(s)");
    sim->add_option("--out", sim_args.out_path, "report file (default: stdout)");

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand("verify", "randomized equivalence sweep vs the oracle");
    verify->add_option("--trials", verify_args.config.trials, "number of random problems")
        ->capture_default_str();
    verify->add_option("--dim-min", verify_args.config.dim_min, "minimum dimension")
        ->capture_default_str();
    verify->add_option("--dim-max", verify_args.config.dim_max, "maximum dimension")
        ->capture_default_str();
    verify->add_option("--widths", verify_args.config.widths, "bit widths to cycle through")
        ->delimiter(',')
        ->capture_default_str();
    verify->add_option("--seed", verify_args.seed, "sweep seed");
    verify->add_option("--reproducer", verify_args.reproducer_path,
                       "where to write a minimized failing problem")
        ->capture_default_str();
    verify
        ->add_flag("--inject-fault", verify_args.config.inject_fault,
                   "test hook: flip the serial sign rule to exercise the detector")
        ->group("");  // hidden from help

    LatencyArgs latency_args;
    CLI::App* latency = app.add_subcommand("latency", "closed-form latency tables");
    auto* lat_input = latency->add_option("--input", latency_args.input,
                                          "problem file: per-step cycle table");
    auto* lat_n = latency->add_option("--n", latency_args.n, "common dimension N");
    auto* lat_w = latency->add_option("--w", latency_args.w, "operand bit width (2..8)");
    latency->add_option("--variant", latency_args.variant, "serial|parallel|both")
        ->check(CLI::IsMember({"serial", "parallel", "both"}))
        ->capture_default_str();
    lat_input->excludes(lat_n);
    lat_input->excludes(lat_w);

    ProfileArgs profile_args;
    CLI::App* profile = app.add_subcommand("profile", "workload maximum-magnitude profile");
    profile->add_option("paths", profile_args.paths, "tensor dumps and/or problem files")
        ->required();
    profile->add_option("--w", profile_args.w, "operand bit width (2..8)")->capture_default_str();
    profile->add_option("--n", profile_args.n, "common dimension N for the latency estimate")
        ->capture_default_str();
    profile->add_option("--csv", profile_args.csv_path,
                        "histogram/CDF CSV file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            if (sim_args.input.empty()) {
                if (!sim_args.seed && !env_seed()) {
                    std::cerr << "simulate: provide exactly one of --input or --seed "
                                 "(or set TUGEMM_SEED)\n";
                    return kExitError;
                }
                if (sim_args.m == 0 || sim_args.n == 0 || sim_args.p == 0 || sim_args.w == 0) {
                    std::cerr << "simulate: generated problems need --m --n --p --w\n";
                    return kExitError;
                }
            }
            return run_simulate(sim_args);
        }
        if (verify->parsed()) return run_verify(verify_args);
        if (latency->parsed()) {
            if (latency_args.input.empty() && (latency_args.n == 0 || latency_args.w == 0)) {
                std::cerr << "latency: provide --input or both --n and --w\n";
                return kExitError;
            }
            return run_latency(latency_args);
        }
        if (profile->parsed()) return run_profile(profile_args);
    } catch (const OverflowError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitOverflow;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return 0;
}
