#pragma once

#include <cstdint>
#include <stdexcept>

#include "tugemm/types.hpp"

namespace tugemm {

/// SplitMix64: the fixed pseudo-random generator behind random_problem.
/// The algorithm (and therefore every generated problem) is bit-identical
/// across platforms and compilers.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform draw from [-2^(w-1), 2^(w-1)-1]. The range is a power of two,
    /// so masking the low w bits is exactly uniform with no rejection.
    std::int64_t next_element(const BitWidth& w) {
        const std::uint64_t mask = (std::uint64_t{1} << w.bits()) - 1;
        return static_cast<std::int64_t>(next() & mask) - w.max_magnitude();
    }

    /// Uniform-ish draw from [lo, hi] (modulo mapping; used for dimensions,
    /// where exact uniformity is irrelevant and determinism is what matters).
    std::uint64_t next_in(std::uint64_t lo, std::uint64_t hi) {
        return lo + next() % (hi - lo + 1);
    }

private:
    std::uint64_t state_;
};

/// Deterministic random problem: elements uniform over the two's-complement
/// range for w. A is filled first (row-major), then B, then C, all from one
/// SplitMix64 stream seeded with `seed`. Identical arguments give the same
/// problem on every platform.
inline GemmProblem random_problem(std::size_t m, std::size_t n, std::size_t p,
                                  const BitWidth& w, std::uint64_t seed) {
    if (m == 0 || n == 0 || p == 0) {
        throw std::invalid_argument("random_problem dimensions must be positive");
    }
    SplitMix64 rng(seed);
    auto fill = [&](std::size_t rows, std::size_t cols) {
        std::vector<std::int64_t> data(rows * cols);
        for (auto& v : data) v = rng.next_element(w);
        return Matrix(rows, cols, std::move(data));
    };
    Matrix a = fill(m, n);
    Matrix b = fill(n, p);
    Matrix c = fill(m, p);
    return GemmProblem{std::move(a), std::move(b), std::move(c), w};
}

}  // namespace tugemm
