#pragma once

#include <cstdint>

#include "tugemm/types.hpp"

namespace tugemm {

/// Reference GEMM in plain binary arithmetic: Y[m][q] = sum_i A[m][i]*B[i][q]
/// + C[m][q], accumulated in 64-bit integers. This is the ground truth the
/// cycle-accurate engines are checked against; it optimizes for obviousness.
Matrix gemm_exact(const GemmProblem& problem);

/// max over cells of |Y[m][q]| from gemm_exact. Used to size fixed output
/// registers.
std::uint64_t max_abs_output(const GemmProblem& problem);

/// sum_{m,p,i} |A[m][i]|*|B[i][p]|: the total number of unit (+/-1)
/// accumulator updates any faithful run of the architecture performs.
std::uint64_t abs_update_count(const GemmProblem& problem);

}  // namespace tugemm
