#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rdr {

using Vector = std::vector<double>;

double dot(std::span<const double> x, std::span<const double> y);
double norm_sq(std::span<const double> x);
double norm(std::span<const double> x);
// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
Vector subtract(std::span<const double> x, std::span<const double> y);

// Dense row-major real matrix. Row norms and the Frobenius norm are cached at
// construction; the matrix is immutable afterwards.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }
  const std::vector<double>& entries() const noexcept { return entries_; }

  std::span<const double> row_norms_sq() const noexcept { return row_norms_sq_; }
  double frob_sq() const noexcept { return frob_sq_; }
  // Indices of rows whose squared norm is exactly zero.
  const std::vector<std::size_t>& zero_rows() const noexcept { return zero_rows_; }

  Vector multiply(std::span<const double> x) const;            // A x
  Vector multiply_transpose(std::span<const double> y) const;  // A^T y
  Matrix transpose() const;
  Vector column_norms_sq() const;
  // Column-major copy of the entries, for column-oriented solvers.
  std::vector<double> column_major() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
  std::vector<double> row_norms_sq_;
  double frob_sq_ = 0.0;
  std::vector<std::size_t> zero_rows_;
};

// Orthogonal projection onto {y : <a,y> = b}. Throws "degenerate hyperplane"
// for a zero row.
Vector project_row(std::span<const double> x, std::span<const double> a, double b);
// Reflection 2P - I through the same hyperplane.
Vector reflect_row(std::span<const double> x, std::span<const double> a, double b);

// Hot-path variants; the caller guarantees a_norm_sq > 0.
void project_in_place(std::span<double> x, std::span<const double> a, double b,
                      double a_norm_sq);
void reflect_in_place(std::span<double> x, std::span<const double> a, double b,
                      double a_norm_sq);

struct SvdOptions {
  // Largest min(m, n) accepted by the dense oracle.
  std::size_t oracle_cap = 2000;
  // Complete U to a square m x m orthogonal matrix. When false and m > n, U is
  // the thin m x n factor. V is always square.
  bool full_u = true;
};

struct SvdResult {
  Matrix u;
  Vector singular_values;  // descending, length min(m, n)
  Matrix v;                // n x n, columns are right singular vectors
  std::size_t rank = 0;
};

// Numerical-rank cutoff: sigma_max * max(m, n) * 16 * 2.22e-16.
double rank_threshold(double sigma_max, std::size_t rows, std::size_t cols);

// One-sided (Hestenes) Jacobi SVD. A test oracle for desk-scale matrices.
SvdResult svd_small(const Matrix& a, const SvdOptions& options = {});

// Projection of x0 onto the solution set: A^+ b + (I - A^+ A) x0.
// Throws "inconsistent system" when the least-squares residual is not small.
Vector projected_solution(const Matrix& a, std::span<const double> b,
                          std::span<const double> x0);
Vector projected_solution(const Matrix& a, const SvdResult& svd, std::span<const double> b,
                          std::span<const double> x0);

struct SpectralScalars {
  double sigma_min = 0.0;  // smallest nonzero singular value
  double sigma_max = 0.0;
  double frob_sq = 0.0;
  std::size_t rank = 0;
};

SpectralScalars spectral_scalars(const Matrix& a);
SpectralScalars spectral_scalars(const Matrix& a, const SvdResult& svd);

}  // namespace rdr
