#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tugemm/profiler.hpp"
#include "tugemm/types.hpp"

namespace tugemm {

/// Malformed input file. For the text format the message carries the
/// 1-based line number of the offending line.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Text problem format:
///   line 1: M N P w
///   M lines of N integers (A), N lines of P integers (B), M lines of P
///   integers (C); whitespace-separated ASCII decimal. Blank lines and lines
///   starting with '#' are skipped.
GemmProblem parse_problem_text(std::istream& in);
void write_problem_text(std::ostream& out, const GemmProblem& problem);

/// JSON problem format: {"m":..,"n":..,"p":..,"w":..,"a":[[..]],"b":[[..]],"c":[[..]]}
GemmProblem parse_problem_json(std::istream& in);
std::string problem_to_json(const GemmProblem& problem);

/// Reads either format; JSON is assumed when the first non-whitespace
/// character is '{'.
GemmProblem load_problem_file(const std::filesystem::path& path);
void save_problem_file(const std::filesystem::path& path, const GemmProblem& problem,
                       const std::string& comment = "");

/// Binary tensor dump ("TUGW"), byte layout pinned for cross-framework
/// export:
///   bytes  0-3   magic "TUGW"
///   bytes  4-7   element width in bits, u32 LE (8, 16 or 32)
///   bytes  8-11  rank, u32 LE (>= 1)
///   bytes 12-15  reserved, must be 0
///   then rank x u32 LE dims (each >= 1), then the row-major payload of
///   little-endian signed elements.
Tensor parse_tensor_dump(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> tensor_dump_bytes(const Tensor& tensor, int element_bits);

Tensor load_tensor_dump(const std::filesystem::path& path);
void save_tensor_dump(const std::filesystem::path& path, const Tensor& tensor, int element_bits);

/// Loads a mixed-format workload: a "TUGW" file yields one tensor; a text or
/// JSON problem file yields its A, B and C matrices as three tensors, in
/// that order.
std::vector<Tensor> load_workload(const std::vector<std::filesystem::path>& paths);

}  // namespace tugemm
