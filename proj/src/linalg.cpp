#include "rdr/linalg.hpp"

#include <cmath>
#include <utility>

#include "rdr/error.hpp"

namespace rdr {

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm_sq(std::span<const double> x) { return dot(x, x); }

double norm(std::span<const double> x) { return std::sqrt(norm_sq(x)); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

Vector subtract(std::span<const double> x, std::span<const double> y) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return out;
}

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : Matrix(rows, cols, std::vector<double>(rows * cols, 0.0)) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)), row_norms_sq_(rows, 0.0) {
  if (entries_.size() != rows * cols) throw Error("invalid matrix: entry count mismatch");
  for (std::size_t i = 0; i < rows_; ++i) {
    row_norms_sq_[i] = norm_sq(row(i));
    frob_sq_ += row_norms_sq_[i];
    if (row_norms_sq_[i] == 0.0) zero_rows_.push_back(i);
  }
}

Matrix Matrix::identity(std::size_t n) {
  std::vector<double> e(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
  return Matrix(n, n, std::move(e));
}

Vector Matrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw Error("invalid matrix: dimension mismatch");
  Vector y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) y[i] = dot(row(i), x);
  return y;
}

Vector Matrix::multiply_transpose(std::span<const double> y) const {
  if (y.size() != rows_) throw Error("invalid matrix: dimension mismatch");
  Vector x(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) axpy(y[i], row(i), x);
  return x;
}

Matrix Matrix::transpose() const { return Matrix(cols_, rows_, column_major()); }

Vector Matrix::column_norms_sq() const {
  Vector out(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    auto r = row(i);
    for (std::size_t j = 0; j < cols_; ++j) out[j] += r[j] * r[j];
  }
  return out;
}

std::vector<double> Matrix::column_major() const {
  std::vector<double> out(entries_.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[j * rows_ + i] = entries_[i * cols_ + j];
  return out;
}

void project_in_place(std::span<double> x, std::span<const double> a, double b,
                      double a_norm_sq) {
  const double step = (dot(a, x) - b) / a_norm_sq;
  axpy(-step, a, x);
}

void reflect_in_place(std::span<double> x, std::span<const double> a, double b,
                      double a_norm_sq) {
  const double step = 2.0 * (dot(a, x) - b) / a_norm_sq;
  axpy(-step, a, x);
}

Vector project_row(std::span<const double> x, std::span<const double> a, double b) {
  const double nsq = norm_sq(a);
  if (!(nsq > 0.0)) throw Error("degenerate hyperplane");
  Vector y(x.begin(), x.end());
  project_in_place(y, a, b, nsq);
  return y;
}

Vector reflect_row(std::span<const double> x, std::span<const double> a, double b) {
  const double nsq = norm_sq(a);
  if (!(nsq > 0.0)) throw Error("degenerate hyperplane");
  Vector y(x.begin(), x.end());
  reflect_in_place(y, a, b, nsq);
  return y;
}

Vector projected_solution(const Matrix& a, std::span<const double> b,
                          std::span<const double> x0) {
  SvdOptions opts;
  opts.full_u = false;
  return projected_solution(a, svd_small(a, opts), b, x0);
}

Vector projected_solution(const Matrix& a, const SvdResult& svd, std::span<const double> b,
                          std::span<const double> x0) {
  if (b.size() != a.rows() || x0.size() != a.cols())
    throw Error("invalid matrix: dimension mismatch");
  // x0* = x0 + A^+ (b - A x0), with A^+ y = sum_i v_i (u_i^T y) / sigma_i.
  Vector y = a.multiply(x0);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = b[i] - y[i];
  Vector x(x0.begin(), x0.end());
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t ucols = svd.u.cols();
  for (std::size_t k = 0; k < svd.rank; ++k) {
    double c = 0.0;
    for (std::size_t i = 0; i < m; ++i) c += svd.u.entries()[i * ucols + k] * y[i];
    c /= svd.singular_values[k];
    for (std::size_t j = 0; j < n; ++j) x[j] += c * svd.v.entries()[j * n + k];
  }
  Vector res = a.multiply(x);
  for (std::size_t i = 0; i < m; ++i) res[i] -= b[i];
  if (norm(res) > 1e-8 * (1.0 + norm(b))) throw Error("inconsistent system");
  return x;
}

SpectralScalars spectral_scalars(const Matrix& a) {
  if (!(a.frob_sq() > 0.0)) throw Error("zero matrix");
  SvdOptions opts;
  opts.full_u = false;
  return spectral_scalars(a, svd_small(a, opts));
}

SpectralScalars spectral_scalars(const Matrix& a, const SvdResult& svd) {
  if (!(a.frob_sq() > 0.0) || svd.rank == 0) throw Error("zero matrix");
  SpectralScalars s;
  s.sigma_max = svd.singular_values.front();
  s.sigma_min = svd.singular_values[svd.rank - 1];
  s.frob_sq = a.frob_sq();
  s.rank = svd.rank;
  return s;
}

}  // namespace rdr
