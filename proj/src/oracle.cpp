#include "tugemm/oracle.hpp"

#include <cstdlib>

namespace tugemm {

Matrix gemm_exact(const GemmProblem& problem) {
    require_valid(problem);
    const std::size_t m = problem.m(), n = problem.n(), p = problem.p();
    std::vector<std::int64_t> y(m * p);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t q = 0; q < p; ++q) {
            std::int64_t acc = problem.c.at(r, q);
            for (std::size_t i = 0; i < n; ++i) {
                acc += problem.a.at(r, i) * problem.b.at(i, q);
            }
            y[r * p + q] = acc;
        }
    }
    return Matrix(m, p, std::move(y));
}

std::uint64_t max_abs_output(const GemmProblem& problem) {
    const Matrix y = gemm_exact(problem);
    std::uint64_t best = 0;
    for (std::int64_t v : y.data()) {
        const std::uint64_t a = static_cast<std::uint64_t>(v < 0 ? -v : v);
        if (a > best) best = a;
    }
    return best;
}

std::uint64_t abs_update_count(const GemmProblem& problem) {
    require_valid(problem);
    std::uint64_t total = 0;
    for (std::size_t r = 0; r < problem.m(); ++r) {
        for (std::size_t q = 0; q < problem.p(); ++q) {
            for (std::size_t i = 0; i < problem.n(); ++i) {
                total += static_cast<std::uint64_t>(std::llabs(problem.a.at(r, i))) *
                         static_cast<std::uint64_t>(std::llabs(problem.b.at(i, q)));
            }
        }
    }
    return total;
}

}  // namespace tugemm
