#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rdr/error.hpp"
#include "rdr/linalg.hpp"

namespace rdr {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSweeps = 80;

// Column-major p x q work array, p >= q.
struct ColumnBlock {
  std::size_t p = 0;
  std::size_t q = 0;
  std::vector<double> data;
  double* col(std::size_t j) { return data.data() + j * p; }
  const double* col(std::size_t j) const { return data.data() + j * p; }
};

double col_dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void rotate(double* x, double* y, std::size_t n, double c, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

// Orthogonalizes the columns of g in place while accumulating the right
// rotations into z (q x q), so that g_in = g_out * z^T.
void hestenes_sweeps(ColumnBlock& g, ColumnBlock& z) {
  const std::size_t p = g.p;
  const std::size_t q = g.q;
  const double tol = kEps * std::sqrt(static_cast<double>(p));
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < q; ++i) {
      for (std::size_t j = i + 1; j < q; ++j) {
        double* gi = g.col(i);
        double* gj = g.col(j);
        const double alpha = col_dot(gi, gi, p);
        const double beta = col_dot(gj, gj, p);
        const double gamma = col_dot(gi, gj, p);
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        rotate(gi, gj, p, c, s);
        rotate(z.col(i), z.col(j), q, c, s);
      }
    }
    if (!rotated) return;
  }
}

// Fills columns [first, width) of the p x width column-major array with an
// orthonormal completion of columns [0, first). Each new column starts from
// the unit vector with the largest component outside the current span.
void complete_basis(std::vector<double>& basis, std::size_t p, std::size_t first,
                    std::size_t width) {
  std::vector<double> outside(p, 1.0);
  for (std::size_t k = 0; k < first; ++k)
    for (std::size_t i = 0; i < p; ++i) outside[i] -= basis[k * p + i] * basis[k * p + i];
  for (std::size_t next = first; next < width; ++next) {
    const std::size_t e = static_cast<std::size_t>(
        std::max_element(outside.begin(), outside.end()) - outside.begin());
    double* cand = basis.data() + next * p;
    std::fill(cand, cand + p, 0.0);
    cand[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < next; ++k) {
        const double* bk = basis.data() + k * p;
        const double c = col_dot(bk, cand, p);
        for (std::size_t i = 0; i < p; ++i) cand[i] -= c * bk[i];
      }
    }
    const double nrm = std::sqrt(col_dot(cand, cand, p));
    for (std::size_t i = 0; i < p; ++i) {
      cand[i] /= nrm;
      outside[i] -= cand[i] * cand[i];
    }
  }
}

Matrix from_column_major(std::size_t rows, std::size_t cols, const std::vector<double>& cm) {
  std::vector<double> rm(rows * cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) rm[i * cols + j] = cm[j * rows + i];
  return Matrix(rows, cols, std::move(rm));
}

}  // namespace

double rank_threshold(double sigma_max, std::size_t rows, std::size_t cols) {
  return sigma_max * static_cast<double>(std::max(rows, cols)) * 16.0 * 2.22e-16;
}

SvdResult svd_small(const Matrix& a, const SvdOptions& options) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m == 0 || n == 0) throw Error("invalid matrix: empty");
  if (std::min(m, n) > options.oracle_cap) throw Error("invalid matrix: exceeds SVD oracle cap");
  for (double v : a.entries())
    if (!std::isfinite(v)) throw Error("invalid matrix");

  // Work on G = A (tall) or G = A^T (wide) so that G is p x q with p >= q.
  const bool tall = m >= n;
  ColumnBlock g;
  g.p = tall ? m : n;
  g.q = tall ? n : m;
  g.data = tall ? a.column_major() : a.entries();
  ColumnBlock z;
  z.p = z.q = g.q;
  z.data.assign(g.q * g.q, 0.0);
  for (std::size_t i = 0; i < g.q; ++i) z.col(i)[i] = 1.0;

  hestenes_sweeps(g, z);

  const std::size_t p = g.p;
  const std::size_t q = g.q;
  Vector sigma(q);
  for (std::size_t j = 0; j < q; ++j) sigma[j] = std::sqrt(col_dot(g.col(j), g.col(j), p));
  std::vector<std::size_t> order(q);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  SvdResult out;
  out.singular_values.resize(q);
  for (std::size_t k = 0; k < q; ++k) out.singular_values[k] = sigma[order[k]];
  const double cutoff = rank_threshold(out.singular_values.front(), m, n);
  out.rank = 0;
  while (out.rank < q && out.singular_values[out.rank] > cutoff) ++out.rank;

  // Left factor of G: normalized columns for the numerical range, completed
  // orthonormally for the rest.
  const bool want_square_w = tall ? options.full_u : true;
  const std::size_t w_cols = want_square_w ? p : q;
  std::vector<double> w(p * w_cols, 0.0);
  for (std::size_t k = 0; k < out.rank; ++k) {
    const double* src = g.col(order[k]);
    double* dst = w.data() + k * p;
    for (std::size_t i = 0; i < p; ++i) dst[i] = src[i] / out.singular_values[k];
  }
  complete_basis(w, p, out.rank, w_cols);

  std::vector<double> zs(q * q);
  for (std::size_t k = 0; k < q; ++k) std::copy_n(z.col(order[k]), q, zs.data() + k * q);

  if (tall) {
    out.u = from_column_major(p, w_cols, w);
    out.v = from_column_major(q, q, zs);
  } else {
    out.u = from_column_major(q, q, zs);
    out.v = from_column_major(p, w_cols, w);
  }
  return out;
}

}  // namespace rdr
