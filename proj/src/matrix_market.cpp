#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "rdr/error.hpp"
#include "rdr/problems.hpp"

namespace rdr {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

// Returns the next non-comment, non-blank line; false at end of input.
bool next_data_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    if (blank(line)) continue;
    return true;
  }
  return false;
}

}  // namespace

Matrix read_matrix_market(std::istream& in, const MatrixMarketOptions& options) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing Matrix Market header");
  ++lineno;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    throw ParseError(lineno, "malformed Matrix Market header");
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "coordinate" && format != "array")
    throw ParseError(lineno, "malformed Matrix Market header");
  if (field != "real" && field != "integer" && field != "double")
    throw Error("unsupported format: field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric")
    throw Error("unsupported format: symmetry '" + symmetry + "'");
  const bool symmetric = symmetry == "symmetric";

  if (!next_data_line(in, line, lineno)) throw ParseError(lineno, "missing size line");
  std::istringstream size_line(line);
  long long m = 0, n = 0, nnz = 0;
  if (!(size_line >> m >> n) || m <= 0 || n <= 0)
    throw ParseError(lineno, "malformed size line");
  if (format == "coordinate" && (!(size_line >> nnz) || nnz < 0))
    throw ParseError(lineno, "malformed size line");
  if (symmetric && m != n) throw ParseError(lineno, "symmetric matrix must be square");

  const auto rows = static_cast<std::size_t>(m);
  const auto cols = static_cast<std::size_t>(n);
  std::vector<double> e(rows * cols, 0.0);

  if (format == "coordinate") {
    for (long long k = 0; k < nnz; ++k) {
      if (!next_data_line(in, line, lineno))
        throw ParseError(lineno, "expected " + std::to_string(nnz) + " entries");
      std::istringstream entry(line);
      long long i = 0, j = 0;
      double v = 0.0;
      if (!(entry >> i >> j >> v)) throw ParseError(lineno, "malformed entry");
      if (i < 1 || i > m || j < 1 || j > n) throw ParseError(lineno, "index out of range");
      e[(i - 1) * cols + (j - 1)] += v;
      if (symmetric && i != j) e[(j - 1) * cols + (i - 1)] += v;
    }
  } else {
    // Column-major; symmetric arrays list the lower triangle only.
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t i = symmetric ? j : 0; i < rows; ++i) {
        if (!next_data_line(in, line, lineno)) throw ParseError(lineno, "missing array entry");
        std::istringstream entry(line);
        double v = 0.0;
        if (!(entry >> v)) throw ParseError(lineno, "malformed entry");
        e[i * cols + j] = v;
        if (symmetric) e[j * cols + i] = v;
      }
    }
  }
  if (next_data_line(in, line, lineno)) throw ParseError(lineno, "trailing data");

  Matrix a(rows, cols, std::move(e));
  if (options.transpose_wide && rows < cols) return a.transpose();
  return a;
}

Matrix load_matrix_market(const std::filesystem::path& path, const MatrixMarketOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return read_matrix_market(in, options);
  } catch (const ParseError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_matrix_market(std::ostream& out, const Matrix& a) {
  out << "%%MatrixMarket matrix array real general\n";
  out << a.rows() << ' ' << a.cols() << '\n';
  char buf[32];
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g\n", a(i, j));
      out << buf;
    }
}

void save_matrix_market(const std::filesystem::path& path, const Matrix& a) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string());
  write_matrix_market(out, a);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace rdr
