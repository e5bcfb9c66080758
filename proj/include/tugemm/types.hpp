#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tugemm {

/// Operand bit width. Two's complement: representable inputs are
/// [-2^(w-1), 2^(w-1)-1], so the maximum input magnitude is 2^(w-1)
/// (attained only by the most negative value).
///
/// The supported envelope is w in [2, 8]; at w <= 8 and N <= 4096 a 64-bit
/// accumulator can never overflow (|Y| <= N*(2^(w-1))^2 + 2^(w-1)).
class BitWidth {
public:
    explicit BitWidth(int w);

    int bits() const { return w_; }
    std::int64_t min_value() const { return -(std::int64_t{1} << (w_ - 1)); }
    std::int64_t max_value() const { return (std::int64_t{1} << (w_ - 1)) - 1; }
    /// 2^(w-1): the largest input magnitude and the top histogram bucket.
    std::int64_t max_magnitude() const { return std::int64_t{1} << (w_ - 1); }

    bool contains(std::int64_t v) const {
        return v >= min_value() && v <= max_value();
    }

    friend bool operator==(BitWidth a, BitWidth b) { return a.w_ == b.w_; }
    friend bool operator!=(BitWidth a, BitWidth b) { return a.w_ != b.w_; }

private:
    int w_;
};

/// Dense 2-D signed-integer matrix, row-major. Elements are stored widened
/// to 64 bits; range constraints are imposed per problem (see
/// validate_problem), not by the container. Immutable after construction.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> data);

    static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
    static Matrix identity(std::size_t n);
    /// Every element set to `value`.
    static Matrix filled(std::size_t rows, std::size_t cols, std::int64_t value);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::int64_t at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<const std::int64_t> data() const { return data_; }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::int64_t> data_;
};

/// One GEMM instance Y = AB + C at a declared bit width.
/// A is MxN, B is NxP, C is MxP.
struct GemmProblem {
    Matrix a;
    Matrix b;
    Matrix c;
    BitWidth width;

    std::size_t m() const { return a.rows(); }
    std::size_t n() const { return a.cols(); }
    std::size_t p() const { return b.cols(); }
};

/// Verdict from validate_problem. Failure carries the first violated
/// invariant, with indices where applicable.
struct ValidationResult {
    bool ok = true;
    std::string message;

    explicit operator bool() const { return ok; }

    static ValidationResult success() { return {}; }
    static ValidationResult failure(std::string msg) { return {false, std::move(msg)}; }
};

/// Largest dimension accepted by validate_problem. Together with w <= 8 this
/// keeps every intermediate below 2^63 in 64-bit arithmetic.
inline constexpr std::size_t kMaxDim = 4096;

/// Checks dimension conformance (a.cols = b.rows, a.rows = c.rows,
/// b.cols = c.cols, dims in [1, kMaxDim]) and the two's-complement range of
/// every element. Returns the first violation found; A, then B, then C are
/// scanned in row-major order.
ValidationResult validate_problem(const GemmProblem& problem);

/// Throws std::invalid_argument with the verdict message if validation fails.
void require_valid(const GemmProblem& problem);

}  // namespace tugemm
