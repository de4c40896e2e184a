#pragma once

#include <filesystem>
#include <iosfwd>

#include "gspec/sampling.hpp"

namespace gspec {

// Text format: first line n, then row i holds entries (i,0)..(i,i),
// comma separated, printed with round-trip precision.
void write_matrix_csv(const DenseSymMatrix& m, std::ostream& out);
DenseSymMatrix read_matrix_csv(std::istream& in);

// Binary format: magic "GSPM1", little-endian u64 n, then the packed lower
// triangle as little-endian f64.
void write_matrix_binary(const DenseSymMatrix& m, std::ostream& out);
DenseSymMatrix read_matrix_binary(std::istream& in);

// Dispatch on extension: ".csv" is text, anything else binary.
void save_matrix(const DenseSymMatrix& m, const std::filesystem::path& path);
DenseSymMatrix load_matrix(const std::filesystem::path& path);

}  // namespace gspec
