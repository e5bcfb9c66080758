#include "tugemm/types.hpp"

#include <stdexcept>
#include <string>

namespace tugemm {

namespace {

std::string format_range_violation(const char* name, std::size_t r, std::size_t c,
                                   std::int64_t v, const BitWidth& w) {
    return std::string(name) + "[" + std::to_string(r) + "][" + std::to_string(c) +
           "] = " + std::to_string(v) + " outside [" + std::to_string(w.min_value()) +
           ", " + std::to_string(w.max_value()) + "] for w=" + std::to_string(w.bits());
}

ValidationResult check_range(const char* name, const Matrix& m, const BitWidth& w) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const std::int64_t v = m.at(r, c);
            if (!w.contains(v)) {
                return ValidationResult::failure(format_range_violation(name, r, c, v, w));
            }
        }
    }
    return ValidationResult::success();
}

}  // namespace

BitWidth::BitWidth(int w) : w_(w) {
    if (w < 2 || w > 8) {
        throw std::invalid_argument("bit width must be in [2, 8], got " + std::to_string(w));
    }
}

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("matrix dimensions must be positive");
    }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("matrix dimensions must be positive");
    }
    if (data_.size() != rows * cols) {
        throw std::invalid_argument("matrix data length " + std::to_string(data_.size()) +
                                    " does not match " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
    return m;
}

Matrix Matrix::filled(std::size_t rows, std::size_t cols, std::int64_t value) {
    Matrix m(rows, cols);
    for (auto& v : m.data_) v = value;
    return m;
}

ValidationResult validate_problem(const GemmProblem& problem) {
    const Matrix& a = problem.a;
    const Matrix& b = problem.b;
    const Matrix& c = problem.c;

    if (a.cols() != b.rows()) {
        return ValidationResult::failure("dimension mismatch: a.cols=" + std::to_string(a.cols()) +
                                         " != b.rows=" + std::to_string(b.rows()));
    }
    if (a.rows() != c.rows()) {
        return ValidationResult::failure("dimension mismatch: a.rows=" + std::to_string(a.rows()) +
                                         " != c.rows=" + std::to_string(c.rows()));
    }
    if (b.cols() != c.cols()) {
        return ValidationResult::failure("dimension mismatch: b.cols=" + std::to_string(b.cols()) +
                                         " != c.cols=" + std::to_string(c.cols()));
    }
    for (std::size_t d : {a.rows(), a.cols(), b.cols()}) {
        if (d > kMaxDim) {
            return ValidationResult::failure("dimension " + std::to_string(d) +
                                             " exceeds supported maximum " + std::to_string(kMaxDim));
        }
    }
    if (auto r = check_range("A", a, problem.width); !r) return r;
    if (auto r = check_range("B", b, problem.width); !r) return r;
    if (auto r = check_range("C", c, problem.width); !r) return r;
    return ValidationResult::success();
}

void require_valid(const GemmProblem& problem) {
    if (auto verdict = validate_problem(problem); !verdict) {
        throw std::invalid_argument("invalid problem: " + verdict.message);
    }
}

}  // namespace tugemm
