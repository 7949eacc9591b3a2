#pragma once

#include "stiefel/numerics.hpp"

#include <iosfwd>
#include <string>

namespace stiefel {

// Text interchange format: a header line "n p" followed by n lines of p
// whitespace-separated decimals. Blank lines and lines starting with '#' are
// skipped.

Matrix read_matrix(std::istream &in);
Matrix read_matrix_file(const std::string &path);

/// Writes with max_digits10 precision so a write/read cycle is lossless.
void write_matrix(std::ostream &out, const Matrix &M);
void write_matrix_file(const std::string &path, const Matrix &M);

}  // namespace stiefel
