#include "tugemm/io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>

namespace tugemm {

namespace {

using nlohmann::json;

// Line-oriented tokenizer for the text format; keeps the 1-based line number
// for error messages.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next non-blank, non-comment line split into integer tokens.
    std::vector<std::int64_t> next_row(std::size_t expected, const std::string& what) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            std::size_t start = line.find_first_not_of(" \t\r");
            if (start == std::string::npos || line[start] == '#') continue;
            return parse_ints(line, expected, what);
        }
        throw ParseError("line " + std::to_string(line_no_ + 1) + ": unexpected end of file, expected " + what);
    }

    std::size_t line_number() const { return line_no_; }

private:
    std::vector<std::int64_t> parse_ints(const std::string& line, std::size_t expected,
                                         const std::string& what) {
        std::vector<std::int64_t> values;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (p < end) {
            while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
            if (p >= end) break;
            std::int64_t v = 0;
            auto [next, ec] = std::from_chars(p, end, v);
            if (ec != std::errc{}) {
                throw ParseError("line " + std::to_string(line_no_) + ": expected integer, got '" +
                                 std::string(p, std::min<std::size_t>(end - p, 16)) + "'");
            }
            values.push_back(v);
            p = next;
        }
        if (values.size() != expected) {
            throw ParseError("line " + std::to_string(line_no_) + ": expected " +
                             std::to_string(expected) + " integers for " + what + ", got " +
                             std::to_string(values.size()));
        }
        return values;
    }

    std::istream& in_;
    std::size_t line_no_ = 0;
};

Matrix read_matrix_rows(LineReader& reader, std::size_t rows, std::size_t cols,
                        const std::string& name) {
    std::vector<std::int64_t> data;
    data.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        auto row = reader.next_row(cols, name + " row " + std::to_string(r));
        data.insert(data.end(), row.begin(), row.end());
    }
    return Matrix(rows, cols, std::move(data));
}

Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols,
                        const std::string& name) {
    if (!j.is_array() || j.size() != rows) {
        throw ParseError("field '" + name + "' must be an array of " + std::to_string(rows) +
                         " rows");
    }
    std::vector<std::int64_t> data;
    data.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const json& row = j[r];
        if (!row.is_array() || row.size() != cols) {
            throw ParseError("field '" + name + "' row " + std::to_string(r) + " must have " +
                             std::to_string(cols) + " entries");
        }
        for (const json& v : row) {
            if (!v.is_number_integer()) {
                throw ParseError("field '" + name + "' contains a non-integer entry");
            }
            data.push_back(v.get<std::int64_t>());
        }
    }
    return Matrix(rows, cols, std::move(data));
}

json matrix_to_json_array(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::uint32_t read_u32_le(std::span<const std::uint8_t> bytes, std::size_t offset) {
    return static_cast<std::uint32_t>(bytes[offset]) |
           static_cast<std::uint32_t>(bytes[offset + 1]) << 8 |
           static_cast<std::uint32_t>(bytes[offset + 2]) << 16 |
           static_cast<std::uint32_t>(bytes[offset + 3]) << 24;
}

void append_u32_le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 24));
}

constexpr char kDumpMagic[4] = {'T', 'U', 'G', 'W'};

}  // namespace

GemmProblem parse_problem_text(std::istream& in) {
    LineReader reader(in);
    auto header = reader.next_row(4, "header 'M N P w'");
    for (std::int64_t v : {header[0], header[1], header[2]}) {
        if (v < 1 || v > static_cast<std::int64_t>(kMaxDim)) {
            throw ParseError("line " + std::to_string(reader.line_number()) +
                             ": dimension " + std::to_string(v) + " out of [1, " +
                             std::to_string(kMaxDim) + "]");
        }
    }
    const auto m = static_cast<std::size_t>(header[0]);
    const auto n = static_cast<std::size_t>(header[1]);
    const auto p = static_cast<std::size_t>(header[2]);
    BitWidth w = [&] {
        try {
            return BitWidth(static_cast<int>(header[3]));
        } catch (const std::invalid_argument& e) {
            throw ParseError("line " + std::to_string(reader.line_number()) + ": " + e.what());
        }
    }();
    Matrix a = read_matrix_rows(reader, m, n, "A");
    Matrix b = read_matrix_rows(reader, n, p, "B");
    Matrix c = read_matrix_rows(reader, m, p, "C");
    return GemmProblem{std::move(a), std::move(b), std::move(c), w};
}

void write_problem_text(std::ostream& out, const GemmProblem& problem) {
    out << problem.m() << ' ' << problem.n() << ' ' << problem.p() << ' '
        << problem.width.bits() << '\n';
    auto write_matrix = [&out](const Matrix& m) {
        for (std::size_t r = 0; r < m.rows(); ++r) {
            for (std::size_t c = 0; c < m.cols(); ++c) {
                if (c != 0) out << ' ';
                out << m.at(r, c);
            }
            out << '\n';
        }
    };
    write_matrix(problem.a);
    write_matrix(problem.b);
    write_matrix(problem.c);
}

GemmProblem parse_problem_json(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("JSON parse error: ") + e.what());
    }
    for (const char* field : {"m", "n", "p", "w", "a", "b", "c"}) {
        if (!j.contains(field)) {
            throw ParseError(std::string("missing field '") + field + "'");
        }
    }
    const auto m = j["m"].get<std::size_t>();
    const auto n = j["n"].get<std::size_t>();
    const auto p = j["p"].get<std::size_t>();
    for (std::size_t d : {m, n, p}) {
        if (d < 1 || d > kMaxDim) {
            throw ParseError("dimension " + std::to_string(d) + " out of [1, " +
                             std::to_string(kMaxDim) + "]");
        }
    }
    BitWidth w = [&] {
        try {
            return BitWidth(j["w"].get<int>());
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
    }();
    Matrix a = matrix_from_json(j["a"], m, n, "a");
    Matrix b = matrix_from_json(j["b"], n, p, "b");
    Matrix c = matrix_from_json(j["c"], m, p, "c");
    return GemmProblem{std::move(a), std::move(b), std::move(c), w};
}

std::string problem_to_json(const GemmProblem& problem) {
    json j;
    j["m"] = problem.m();
    j["n"] = problem.n();
    j["p"] = problem.p();
    j["w"] = problem.width.bits();
    j["a"] = matrix_to_json_array(problem.a);
    j["b"] = matrix_to_json_array(problem.b);
    j["c"] = matrix_to_json_array(problem.c);
    return j.dump(2);
}

GemmProblem load_problem_file(const std::filesystem::path& path) {
    // Sniff: JSON starts with '{'. Re-open for the actual parse so text
    // line numbers stay accurate.
    int first = EOF;
    {
        std::ifstream probe(path);
        if (!probe) throw ParseError("cannot open '" + path.string() + "'");
        int ch;
        while ((ch = probe.get()) != EOF) {
            if (ch != ' ' && ch != '\t' && ch != '\n' && ch != '\r') break;
        }
        first = ch;
    }
    std::ifstream in(path);
    try {
        if (first == '{') return parse_problem_json(in);
        return parse_problem_text(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void save_problem_file(const std::filesystem::path& path, const GemmProblem& problem,
                       const std::string& comment) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    if (!comment.empty()) {
        std::istringstream lines(comment);
        std::string line;
        while (std::getline(lines, line)) out << "# " << line << '\n';
    }
    write_problem_text(out, problem);
}

Tensor parse_tensor_dump(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 16 || std::memcmp(bytes.data(), kDumpMagic, 4) != 0) {
        throw ParseError("not a TUGW tensor dump (bad magic or truncated header)");
    }
    const std::uint32_t elem_bits = read_u32_le(bytes, 4);
    const std::uint32_t rank = read_u32_le(bytes, 8);
    const std::uint32_t reserved = read_u32_le(bytes, 12);
    if (elem_bits != 8 && elem_bits != 16 && elem_bits != 32) {
        throw ParseError("unsupported element width " + std::to_string(elem_bits) +
                         " bits (must be 8, 16 or 32)");
    }
    if (rank < 1) throw ParseError("tensor rank must be >= 1");
    if (reserved != 0) throw ParseError("reserved header field must be 0");
    if (bytes.size() < 16 + 4ull * rank) throw ParseError("truncated dims array");

    Tensor tensor;
    std::uint64_t count = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
        const std::uint32_t dim = read_u32_le(bytes, 16 + 4ull * d);
        if (dim < 1) throw ParseError("tensor dims must be >= 1");
        tensor.dims.push_back(dim);
        count *= dim;
        if (count > (1ull << 32)) throw ParseError("tensor too large");
    }
    const std::size_t elem_bytes = elem_bits / 8;
    const std::size_t payload_off = 16 + 4ull * rank;
    if (bytes.size() != payload_off + count * elem_bytes) {
        throw ParseError("payload size mismatch: expected " +
                         std::to_string(count * elem_bytes) + " bytes, got " +
                         std::to_string(bytes.size() - payload_off));
    }
    tensor.data.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint8_t* p = bytes.data() + payload_off + i * elem_bytes;
        std::uint64_t raw = 0;
        for (std::size_t b = 0; b < elem_bytes; ++b) {
            raw |= static_cast<std::uint64_t>(p[b]) << (8 * b);
        }
        // sign-extend from elem_bits
        const std::uint64_t sign_bit = 1ull << (elem_bits - 1);
        std::int64_t v = static_cast<std::int64_t>((raw ^ sign_bit)) - static_cast<std::int64_t>(sign_bit);
        tensor.data.push_back(v);
    }
    return tensor;
}

std::vector<std::uint8_t> tensor_dump_bytes(const Tensor& tensor, int element_bits) {
    if (element_bits != 8 && element_bits != 16 && element_bits != 32) {
        throw std::invalid_argument("element width must be 8, 16 or 32 bits");
    }
    if (tensor.dims.empty()) throw std::invalid_argument("tensor rank must be >= 1");
    std::uint64_t count = 1;
    for (std::uint32_t d : tensor.dims) {
        if (d < 1) throw std::invalid_argument("tensor dims must be >= 1");
        count *= d;
    }
    if (count != tensor.data.size()) {
        throw std::invalid_argument("tensor data length does not match dims");
    }
    const std::int64_t lo = -(std::int64_t{1} << (element_bits - 1));
    const std::int64_t hi = (std::int64_t{1} << (element_bits - 1)) - 1;
    std::vector<std::uint8_t> out;
    out.reserve(16 + 4 * tensor.dims.size() + count * (element_bits / 8));
    out.insert(out.end(), kDumpMagic, kDumpMagic + 4);
    append_u32_le(out, static_cast<std::uint32_t>(element_bits));
    append_u32_le(out, static_cast<std::uint32_t>(tensor.dims.size()));
    append_u32_le(out, 0);
    for (std::uint32_t d : tensor.dims) append_u32_le(out, d);
    for (std::int64_t v : tensor.data) {
        if (v < lo || v > hi) {
            throw std::invalid_argument("element " + std::to_string(v) + " does not fit in " +
                                        std::to_string(element_bits) + " bits");
        }
        const auto raw = static_cast<std::uint64_t>(v);
        for (int b = 0; b < element_bits / 8; ++b) {
            out.push_back(static_cast<std::uint8_t>(raw >> (8 * b)));
        }
    }
    return out;
}

Tensor load_tensor_dump(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    try {
        return parse_tensor_dump(bytes);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void save_tensor_dump(const std::filesystem::path& path, const Tensor& tensor, int element_bits) {
    const auto bytes = tensor_dump_bytes(tensor, element_bits);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

std::vector<Tensor> load_workload(const std::vector<std::filesystem::path>& paths) {
    std::vector<Tensor> tensors;
    for (const auto& path : paths) {
        std::ifstream probe(path, std::ios::binary);
        if (!probe) throw ParseError("cannot open '" + path.string() + "'");
        char magic[4] = {};
        probe.read(magic, 4);
        probe.close();
        if (std::memcmp(magic, kDumpMagic, 4) == 0) {
            tensors.push_back(load_tensor_dump(path));
            continue;
        }
        const GemmProblem problem = load_problem_file(path);
        for (const Matrix* m : {&problem.a, &problem.b, &problem.c}) {
            Tensor t;
            t.dims = {static_cast<std::uint32_t>(m->rows()),
                      static_cast<std::uint32_t>(m->cols())};
            t.data.assign(m->data().begin(), m->data().end());
            tensors.push_back(std::move(t));
        }
    }
    return tensors;
}

}  // namespace tugemm
