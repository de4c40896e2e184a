#include "gspec/matrix_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gspec/error.hpp"

namespace gspec {

namespace {

constexpr std::array<char, 5> kMagic{'G', 'S', 'P', 'M', '1'};

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
        std::reverse(bytes.begin(), bytes.end());
        return std::bit_cast<T>(bytes);
    }
    return v;
}

DiagonalMode infer_diagonal(std::size_t n, const std::vector<double>& lower) {
    for (std::size_t i = 0; i < n; ++i) {
        if (lower[i * (i + 1) / 2 + i] != 0.0) {
            return DiagonalMode::included;
        }
    }
    return DiagonalMode::zeroed;
}

double parse_double(std::string_view field, std::size_t row) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\r')) field.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError("bad matrix value '" + std::string(field) + "' on row " + std::to_string(row));
    }
    return v;
}

}  // namespace

void write_matrix_csv(const DenseSymMatrix& m, std::ostream& out) {
    out << m.n() << '\n';
    std::array<char, 32> buf{};
    for (std::size_t i = 0; i < m.n(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), m(i, j));
            if (j > 0) out << ',';
            out.write(buf.data(), res.ptr - buf.data());
        }
        out << '\n';
    }
}

DenseSymMatrix read_matrix_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("empty matrix file");
    }
    std::size_t n = 0;
    {
        std::istringstream header(line);
        if (!(header >> n) || n == 0) {
            throw ParseError("matrix header must be a positive dimension");
        }
    }
    std::vector<double> lower;
    lower.reserve(DenseSymMatrix::packed_size(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) {
            throw ParseError("matrix file truncated at row " + std::to_string(i));
        }
        std::string_view rest(line);
        std::size_t count = 0;
        while (true) {
            const auto comma = rest.find(',');
            lower.push_back(parse_double(rest.substr(0, comma), i));
            ++count;
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (count != i + 1) {
            throw ParseError("row " + std::to_string(i) + " has " + std::to_string(count) + " values, expected " +
                             std::to_string(i + 1));
        }
    }
    const auto mode = infer_diagonal(n, lower);
    return DenseSymMatrix(n, std::move(lower), MatrixKind::derived, mode);
}

void write_matrix_binary(const DenseSymMatrix& m, std::ostream& out) {
    out.write(kMagic.data(), kMagic.size());
    const std::uint64_t n = to_little(static_cast<std::uint64_t>(m.n()));
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    for (double v : m.packed()) {
        const double le = to_little(v);
        out.write(reinterpret_cast<const char*>(&le), sizeof le);
    }
}

DenseSymMatrix read_matrix_binary(std::istream& in) {
    std::array<char, 5> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw ParseError("missing GSPM1 magic");
    }
    std::uint64_t n = 0;
    if (!in.read(reinterpret_cast<char*>(&n), sizeof n)) {
        throw ParseError("truncated GSPM1 header");
    }
    n = to_little(n);
    if (n == 0 || n > (1ULL << 20)) {
        throw ParseError("implausible GSPM1 dimension " + std::to_string(n));
    }
    std::vector<double> lower(DenseSymMatrix::packed_size(n));
    for (double& v : lower) {
        if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
            throw ParseError("truncated GSPM1 payload");
        }
        v = to_little(v);
    }
    const auto mode = infer_diagonal(n, lower);
    return DenseSymMatrix(n, std::move(lower), MatrixKind::derived, mode);
}

void save_matrix(const DenseSymMatrix& m, const std::filesystem::path& path) {
    const bool text = path.extension() == ".csv";
    std::ofstream out(path, text ? std::ios::out : std::ios::out | std::ios::binary);
    if (!out) {
        throw Error("cannot write matrix file " + path.string());
    }
    text ? write_matrix_csv(m, out) : write_matrix_binary(m, out);
}

DenseSymMatrix load_matrix(const std::filesystem::path& path) {
    const bool text = path.extension() == ".csv";
    std::ifstream in(path, text ? std::ios::in : std::ios::in | std::ios::binary);
    if (!in) {
        throw ParseError("cannot open matrix file " + path.string());
    }
    return text ? read_matrix_csv(in) : read_matrix_binary(in);
}

}  // namespace gspec
