#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "reference.hpp"
#include "tugemm/oracle.hpp"
#include "tugemm/random.hpp"
#include "tugemm/serial_sim.hpp"

using namespace tugemm;
using testref::mat;
using testref::problem;

namespace {

// Splits a serial trace CSV into rows of integers (skipping the header).
struct TraceRow {
    std::uint64_t cycle;
    std::uint64_t step;
    std::uint64_t enabled;
    std::vector<std::int64_t> cols;
    std::vector<std::int64_t> rows;
};

std::vector<TraceRow> parse_trace(const std::string& csv, std::size_t m, std::size_t p) {
    std::vector<TraceRow> rows;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::int64_t> fields;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) fields.push_back(std::stoll(tok));
        REQUIRE(fields.size() == 3 + m + p);
        TraceRow r;
        r.cycle = static_cast<std::uint64_t>(fields[0]);
        r.step = static_cast<std::uint64_t>(fields[1]);
        r.enabled = static_cast<std::uint64_t>(fields[2]);
        r.cols.assign(fields.begin() + 3, fields.begin() + 3 + m);
        r.rows.assign(fields.begin() + 3 + m, fields.end());
        rows.push_back(std::move(r));
    }
    return rows;
}

std::uint64_t expected_loads(const GemmProblem& p) {
    // M+P loads per step, plus P row reloads per extra column pass.
    std::uint64_t loads = p.n() * (p.m() + p.p());
    for (std::size_t i = 0; i < p.n(); ++i) {
        std::int64_t col_max = 0;
        for (std::size_t r = 0; r < p.m(); ++r) {
            col_max = std::max(col_max, std::abs(p.a.at(r, i)));
        }
        if (col_max > 1) loads += static_cast<std::uint64_t>(col_max - 1) * p.p();
    }
    return loads;
}

}  // namespace

TEST_CASE("serial run matches the hand-traced 2x2 example") {
    auto p = problem({{3, -2}, {1, 0}}, {{2, 1}, {-1, 2}}, {{0, 0}, {0, 0}}, 4);
    SerialProbe probe;
    SimResult r = serial_run(p, SerialOptions{}, &probe);
    CHECK(r.y == mat({{8, -1}, {2, 1}}));
    CHECK(r.cycles == 10);  // step 0: 3*2, step 1: 2*2
    CHECK(probe.per_step_cycles == std::vector<std::uint64_t>{6, 4});
    CHECK(r.activity.output_cell_updates == 18);
    CHECK(r.activity.counter_loads == expected_loads(p));
    CHECK(r.activity.transition_bound_ok);
    CHECK(r.activity.unary_signal_transitions > 0);
}

TEST_CASE("serial_step_trace per-step counts") {
    auto p = problem({{3, -2}, {1, 0}}, {{2, 1}, {-1, 2}}, {{0, 0}, {0, 0}}, 4);
    LatencyBreakdown b = serial_step_trace(p);
    CHECK(b.per_step == std::vector<std::uint64_t>{6, 4});
    CHECK(b.serial_total == 10);
    CHECK(b.parallel_total == 6);

    auto single = problem({{-2}}, {{-2}}, {{0}}, 2);
    CHECK(serial_step_trace(single).per_step == std::vector<std::uint64_t>{4});
}

TEST_CASE("zero-work steps cost one control cycle each") {
    // A = B = 0, N = 16: output stays C, one cycle per step.
    const std::size_t n = 16;
    GemmProblem p{Matrix(2, n), Matrix(n, 3), mat({{5, 6, 7}, {-8, 0, 3}}), BitWidth(4)};
    SimResult r = serial_run(p);
    CHECK(r.y == p.c);
    CHECK(r.cycles == n);
    CHECK(r.activity.output_cell_updates == 0);
}

TEST_CASE("a zero column of A makes its step cost one cycle") {
    auto p = problem({{0, 3}, {0, 1}}, {{5, 5}, {1, 1}}, {{0, 0}, {0, 0}}, 4);
    LatencyBreakdown b = serial_step_trace(p);
    CHECK(b.per_step[0] == 1);
    CHECK(b.per_step[1] == 3);  // C_1 = 3, R_1 = 1
}

TEST_CASE("worst-case latency is N*(2^(w-1))^2") {
    // 16x16, w=8, every element -128.
    const std::size_t n = 16;
    GemmProblem p{Matrix::filled(n, n, -128), Matrix::filled(n, n, -128), Matrix(n, n),
                  BitWidth(8)};
    SimResult r = serial_run(p);
    CHECK(r.cycles == 262144);  // 16 * 128^2
    CHECK(r.y == gemm_exact(p));
    CHECK(r.activity.output_cell_updates == 67108864ull);  // 256 cells * 16 steps * 128^2
}

TEST_CASE("serial equals oracle on a randomized corpus") {
    SplitMix64 rng(101);
    const int widths[] = {2, 4, 8};
    for (int trial = 0; trial < 10000; ++trial) {
        const BitWidth w(widths[trial % 3]);
        auto p = random_problem(rng.next_in(1, 8), rng.next_in(1, 8), rng.next_in(1, 8), w,
                                rng.next());
        SimResult r = serial_run(p);
        REQUIRE(r.y == gemm_exact(p));
        REQUIRE(r.activity.output_cell_updates == abs_update_count(p));
        REQUIRE(r.activity.transition_bound_ok);
        REQUIRE(r.activity.unary_signal_transitions <= 2 * r.activity.counter_loads);
        REQUIRE(r.activity.counter_loads == expected_loads(p));
    }
    // 16x16x16 spot checks.
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        auto p = random_problem(16, 16, 16, BitWidth(8), seed);
        SimResult r = serial_run(p);
        REQUIRE(r.y == gemm_exact(p));
        REQUIRE(r.activity.output_cell_updates == abs_update_count(p));
    }
}

TEST_CASE("serial engine agrees with the literal reference simulation") {
    SplitMix64 rng(102);
    for (int trial = 0; trial < 300; ++trial) {
        const BitWidth w(trial % 2 == 0 ? 2 : 4);
        auto p = random_problem(rng.next_in(1, 3), rng.next_in(1, 3), rng.next_in(1, 3), w,
                                rng.next());
        auto ref = testref::dumb_serial(p);
        SerialProbe probe;
        SimResult r = serial_run(p, SerialOptions{}, &probe);
        REQUIRE(r.cycles == ref.cycles);
        REQUIRE(probe.per_step_cycles == ref.per_step);
        REQUIRE(std::vector<std::int64_t>(r.y.data().begin(), r.y.data().end()) == ref.cells);
        REQUIRE(probe.cell_increments == ref.cell_inc);
        REQUIRE(probe.cell_decrements == ref.cell_dec);
    }
}

TEST_CASE("sign rule: +1 on sign agreement, -1 otherwise") {
    SplitMix64 rng(103);
    for (int trial = 0; trial < 200; ++trial) {
        auto p = random_problem(rng.next_in(1, 4), rng.next_in(1, 4), rng.next_in(1, 4),
                                BitWidth(4), rng.next());
        SerialProbe probe;
        serial_run(p, SerialOptions{}, &probe);
        for (std::size_t m = 0; m < p.m(); ++m) {
            for (std::size_t q = 0; q < p.p(); ++q) {
                std::uint64_t want_inc = 0, want_dec = 0;
                for (std::size_t i = 0; i < p.n(); ++i) {
                    const std::int64_t a = p.a.at(m, i), b = p.b.at(i, q);
                    if (a == 0 || b == 0) continue;
                    const std::uint64_t units =
                        static_cast<std::uint64_t>(std::abs(a)) *
                        static_cast<std::uint64_t>(std::abs(b));
                    if ((a < 0) == (b < 0)) want_inc += units;
                    else want_dec += units;
                }
                REQUIRE(probe.cell_increments[m * p.p() + q] == want_inc);
                REQUIRE(probe.cell_decrements[m * p.p() + q] == want_dec);
            }
        }
    }
}

TEST_CASE("trace: nesting rule and counters that count toward zero") {
    SplitMix64 rng(104);
    for (int trial = 0; trial < 40; ++trial) {
        auto p = random_problem(rng.next_in(1, 4), rng.next_in(1, 4), rng.next_in(1, 4),
                                BitWidth(4), rng.next());
        std::ostringstream csv;
        SerialOptions options;
        options.trace = &csv;
        SimResult r = serial_run(p, options);
        auto rows = parse_trace(csv.str(), p.m(), p.p());
        REQUIRE(rows.size() == r.cycles);

        auto ref = testref::dumb_serial(p);
        std::vector<std::uint64_t> row_max(p.n(), 0);
        for (std::size_t i = 0; i < p.n(); ++i) {
            for (std::size_t q = 0; q < p.p(); ++q) {
                row_max[i] = std::max(row_max[i],
                                      static_cast<std::uint64_t>(std::abs(p.b.at(i, q))));
            }
        }

        std::uint64_t last_col_change = 0;  // cycle of the previous col update in this step
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const TraceRow& row = rows[k];
            REQUIRE(row.enabled == ref.enabled_per_cycle[k]);
            if (k == 0) continue;
            const TraceRow& prev = rows[k - 1];
            if (row.step != prev.step) {
                // New step: counters hold the freshly loaded vectors.
                for (std::size_t m = 0; m < p.m(); ++m) {
                    REQUIRE(row.cols[m] == p.a.at(m, row.step));
                }
                last_col_change = k;
                continue;
            }
            if (row.cols != prev.cols) {
                // Column counters updated: exactly max(R_i, 1) cycles since
                // the previous update, each column one closer to zero, and
                // the row counters reloaded.
                const std::uint64_t gap = k - last_col_change;
                REQUIRE(gap == std::max<std::uint64_t>(row_max[row.step], 1));
                last_col_change = k;
                for (std::size_t m = 0; m < p.m(); ++m) {
                    const std::int64_t before = prev.cols[m];
                    const std::int64_t expect = before == 0 ? 0
                                               : before > 0 ? before - 1
                                                            : before + 1;
                    REQUIRE(row.cols[m] == expect);
                }
                for (std::size_t q = 0; q < p.p(); ++q) {
                    REQUIRE(row.rows[q] == p.b.at(row.step, q));
                }
            } else {
                // Plain row tick: every nonzero row counter moves toward
                // zero by one (monotone |count| decrease).
                for (std::size_t q = 0; q < p.p(); ++q) {
                    const std::int64_t before = prev.rows[q];
                    const std::int64_t expect = before == 0 ? 0
                                               : before > 0 ? before - 1
                                                            : before + 1;
                    REQUIRE(row.rows[q] == expect);
                }
            }
        }
    }
}

TEST_CASE("fixed output width: overflow reports cell, cycle and value") {
    // C starts at the positive limit of a 4-bit register; the first +1 lands
    // outside at cycle 1.
    auto p = problem({{1}}, {{7}}, {{7}}, 4);
    SerialOptions options;
    options.policy = OutputWidthPolicy::fixed(4);
    try {
        serial_run(p, options);
        FAIL("expected OverflowError");
    } catch (const OverflowError& e) {
        CHECK(e.row() == 0);
        CHECK(e.col() == 0);
        CHECK(e.cycle() == 1);
        CHECK(e.value() == 8);
    }

    // Same problem, unbounded: fine, ends at 14.
    CHECK(serial_run(p).y.at(0, 0) == 14);

    // Reaching the boundary exactly is not an overflow.
    auto boundary = problem({{1}}, {{7}}, {{0}}, 4);
    CHECK(serial_run(boundary, options).y.at(0, 0) == 7);

    // Draining from the limit toward zero never leaves the range.
    auto drain = problem({{-1}}, {{7}}, {{7}}, 4);
    CHECK(serial_run(drain, options).y.at(0, 0) == 0);
}

TEST_CASE("fixed width must cover the operand width") {
    auto p = problem({{1}}, {{1}}, {{0}}, 8);
    SerialOptions options;
    options.policy = OutputWidthPolicy::fixed(4);
    CHECK_THROWS_AS(serial_run(p, options), std::invalid_argument);
}

TEST_CASE("fault-injection hook flips the sign rule") {
    auto p = problem({{3, -2}, {1, 0}}, {{2, 1}, {-1, 2}}, {{0, 0}, {0, 0}}, 4);
    SerialOptions options;
    options.fault_invert_sign = true;
    SimResult r = serial_run(p, options);
    CHECK(r.y == mat({{-8, 1}, {-2, -1}}));  // every contribution negated
    CHECK(r.cycles == 10);                   // timing untouched
}

TEST_CASE("serial run rejects invalid problems") {
    GemmProblem p{Matrix(2, 3), Matrix(2, 2), Matrix(2, 2), BitWidth(4)};
    CHECK_THROWS_AS(serial_run(p), std::invalid_argument);
}
