#include "stiefel/matrix_io.hpp"

#include "stiefel/errors.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace stiefel {

namespace {

bool next_content_line(std::istream &in, std::string &line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

Matrix read_matrix(std::istream &in) {
  std::string line;
  if (!next_content_line(in, line)) throw InvalidInput("read_matrix: missing 'n p' header");
  long long n = 0;
  long long p = 0;
  {
    std::istringstream header(line);
    std::string trailing;
    if (!(header >> n >> p) || (header >> trailing) || n < 1 || p < 1) {
      throw InvalidInput("read_matrix: bad header '" + line + "'");
    }
  }
  Matrix M(n, p);
  for (long long i = 0; i < n; ++i) {
    if (!next_content_line(in, line)) {
      throw InvalidInput("read_matrix: expected " + std::to_string(n) + " rows, got " +
                         std::to_string(i));
    }
    std::istringstream row(line);
    for (long long j = 0; j < p; ++j) {
      if (!(row >> M(i, j))) {
        throw InvalidInput("read_matrix: row " + std::to_string(i + 1) + " has fewer than " +
                           std::to_string(p) + " entries");
      }
    }
    std::string trailing;
    if (row >> trailing) {
      throw InvalidInput("read_matrix: row " + std::to_string(i + 1) + " has extra entries");
    }
  }
  if (next_content_line(in, line)) throw InvalidInput("read_matrix: trailing rows after matrix");
  return M;
}

Matrix read_matrix_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open matrix file '" + path + "'");
  return read_matrix(in);
}

void write_matrix(std::ostream &out, const Matrix &M) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << M.rows() << ' ' << M.cols() << '\n';
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      if (j > 0) out << ' ';
      out << M(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

void write_matrix_file(const std::string &path, const Matrix &M) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write matrix file '" + path + "'");
  write_matrix(out, M);
}

}  // namespace stiefel
