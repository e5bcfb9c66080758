#include "tugemm/verify.hpp"

#include <algorithm>
#include <stdexcept>

#include "tugemm/latency.hpp"
#include "tugemm/oracle.hpp"
#include "tugemm/parallel_sim.hpp"
#include "tugemm/random.hpp"
#include "tugemm/serial_sim.hpp"

namespace tugemm {

namespace {

std::string describe_matrix_diff(const char* what, const Matrix& got, const Matrix& want) {
    for (std::size_t r = 0; r < got.rows(); ++r) {
        for (std::size_t c = 0; c < got.cols(); ++c) {
            if (got.at(r, c) != want.at(r, c)) {
                return std::string(what) + " differs at [" + std::to_string(r) + "][" +
                       std::to_string(c) + "]: got " + std::to_string(got.at(r, c)) +
                       ", expected " + std::to_string(want.at(r, c));
            }
        }
    }
    return std::string(what) + " differs";
}

Matrix drop_row(const Matrix& m, std::size_t row) {
    std::vector<std::int64_t> data;
    data.reserve((m.rows() - 1) * m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (r == row) continue;
        for (std::size_t c = 0; c < m.cols(); ++c) data.push_back(m.at(r, c));
    }
    return Matrix(m.rows() - 1, m.cols(), std::move(data));
}

Matrix drop_col(const Matrix& m, std::size_t col) {
    std::vector<std::int64_t> data;
    data.reserve(m.rows() * (m.cols() - 1));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c != col) data.push_back(m.at(r, c));
        }
    }
    return Matrix(m.rows(), m.cols() - 1, std::move(data));
}

Matrix with_element(const Matrix& m, std::size_t row, std::size_t col, std::int64_t v) {
    std::vector<std::int64_t> data(m.data().begin(), m.data().end());
    data[row * m.cols() + col] = v;
    return Matrix(m.rows(), m.cols(), std::move(data));
}

}  // namespace

std::string check_problem(const GemmProblem& problem, bool inject_fault, TrialChecks* checks) {
    TrialChecks local;
    TrialChecks& out = checks ? *checks : local;
    out = TrialChecks{};
    std::string first;
    auto note = [&](bool& flag, const std::string& msg) {
        flag = false;
        if (first.empty()) first = msg;
    };

    const Matrix expected = gemm_exact(problem);
    SerialOptions serial_options;
    serial_options.fault_invert_sign = inject_fault;
    const SimResult serial = serial_run(problem, serial_options);
    const SimResult parallel = parallel_run(problem);

    if (serial.y != expected) {
        note(out.outputs_match, describe_matrix_diff("serial output", serial.y, expected));
    } else if (parallel.y != expected) {
        note(out.outputs_match, describe_matrix_diff("parallel output", parallel.y, expected));
    }

    const LatencyBreakdown analytic = analytic_latency(problem);
    if (analytic.serial_total != serial.cycles) {
        note(out.latency_agrees,
             "serial cycles " + std::to_string(serial.cycles) + " != analytic " +
                 std::to_string(analytic.serial_total));
    } else if (analytic.parallel_total != parallel.cycles) {
        note(out.latency_agrees,
             "parallel cycles " + std::to_string(parallel.cycles) + " != analytic " +
                 std::to_string(analytic.parallel_total));
    }

    if (!serial.activity.transition_bound_ok) {
        note(out.transition_bound, "serial unary line exceeded 2 transitions per load");
    } else if (!parallel.activity.transition_bound_ok) {
        note(out.transition_bound, "parallel unary line exceeded 2 transitions per load");
    }

    const std::uint64_t expected_updates = abs_update_count(problem);
    if (serial.activity.output_cell_updates != expected_updates) {
        note(out.activity_conserved,
             "serial cell updates " + std::to_string(serial.activity.output_cell_updates) +
                 " != sum|A||B| = " + std::to_string(expected_updates));
    } else if (parallel.activity.output_cell_updates != expected_updates) {
        note(out.activity_conserved,
             "parallel cell updates " + std::to_string(parallel.activity.output_cell_updates) +
                 " != sum|A||B| = " + std::to_string(expected_updates));
    }

    return first;
}

VerifyReport run_verification(const VerifyConfig& config) {
    if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (config.widths.empty()) throw std::invalid_argument("widths must be non-empty");
    if (config.dim_min < 1 || config.dim_min > config.dim_max) {
        throw std::invalid_argument("dimension bounds must satisfy 1 <= min <= max");
    }

    VerifyReport report;
    SplitMix64 rng(config.seed);
    for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
        const BitWidth w(config.widths[trial % config.widths.size()]);
        const auto m = static_cast<std::size_t>(rng.next_in(config.dim_min, config.dim_max));
        const auto n = static_cast<std::size_t>(rng.next_in(config.dim_min, config.dim_max));
        const auto p = static_cast<std::size_t>(rng.next_in(config.dim_min, config.dim_max));
        const GemmProblem problem = random_problem(m, n, p, w, rng.next());

        TrialChecks checks;
        const std::string failure = check_problem(problem, config.inject_fault, &checks);
        ++report.trials;
        if (!checks.outputs_match) ++report.output_mismatches;
        if (!checks.latency_agrees) ++report.latency_mismatches;
        if (!checks.transition_bound) ++report.transition_violations;
        if (!checks.activity_conserved) ++report.activity_mismatches;
        if (!failure.empty()) {
            ++report.failures;
            if (!report.first_failing_problem) {
                report.first_failure = failure;
                report.first_failing_problem = problem;
                report.minimized_problem = minimize_failure(problem, config.inject_fault);
            }
        }
    }
    return report;
}

GemmProblem minimize_failure(const GemmProblem& problem, bool inject_fault) {
    auto still_fails = [&](const GemmProblem& candidate) {
        return !check_problem(candidate, inject_fault).empty();
    };
    if (!still_fails(problem)) return problem;

    GemmProblem current = problem;
    bool progress = true;
    while (progress) {
        progress = false;
        // Drop steps (column of A + row of B), then output rows/cols.
        for (std::size_t i = 0; i < current.n() && current.n() > 1; ++i) {
            GemmProblem candidate{drop_col(current.a, i), drop_row(current.b, i), current.c,
                                  current.width};
            if (still_fails(candidate)) {
                current = std::move(candidate);
                progress = true;
                break;
            }
        }
        for (std::size_t r = 0; r < current.m() && current.m() > 1; ++r) {
            GemmProblem candidate{drop_row(current.a, r), current.b, drop_row(current.c, r),
                                  current.width};
            if (still_fails(candidate)) {
                current = std::move(candidate);
                progress = true;
                break;
            }
        }
        for (std::size_t q = 0; q < current.p() && current.p() > 1; ++q) {
            GemmProblem candidate{current.a, drop_col(current.b, q), drop_col(current.c, q),
                                  current.width};
            if (still_fails(candidate)) {
                current = std::move(candidate);
                progress = true;
                break;
            }
        }
        // Zero individual elements.
        for (const Matrix* which : {&current.a, &current.b, &current.c}) {
            const Matrix& mtx = *which;
            for (std::size_t r = 0; r < mtx.rows() && !progress; ++r) {
                for (std::size_t c = 0; c < mtx.cols() && !progress; ++c) {
                    if (mtx.at(r, c) == 0) continue;
                    GemmProblem candidate = current;
                    if (which == &current.a) candidate.a = with_element(mtx, r, c, 0);
                    else if (which == &current.b) candidate.b = with_element(mtx, r, c, 0);
                    else candidate.c = with_element(mtx, r, c, 0);
                    if (still_fails(candidate)) {
                        current = std::move(candidate);
                        progress = true;
                    }
                }
            }
            if (progress) break;
        }
    }
    return current;
}

}  // namespace tugemm
