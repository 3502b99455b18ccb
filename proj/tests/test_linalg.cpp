#include <Eigen/Dense>
#include <functional>
#include <cmath>
#include <string>

#include "doctest.h"
#include "rdr/error.hpp"
#include "rdr/linalg.hpp"
#include "rdr/problems.hpp"
#include "rdr/sampling.hpp"

using namespace rdr;

namespace {

Vector randn(std::size_t n, Rng& rng) {
  Vector v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

Eigen::MatrixXd to_eigen(const Matrix& a) {
  Eigen::MatrixXd e(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) e(i, j) = a(i, j);
  return e;
}

Eigen::MatrixXd to_eigen_square(const Matrix& a) { return to_eigen(a); }

double orthogonality_error(const Matrix& q) {
  const Eigen::MatrixXd e = to_eigen(q);
  return (e.transpose() * e - Eigen::MatrixXd::Identity(q.cols(), q.cols())).norm();
}

// Projection evaluated in extended precision.
std::vector<long double> project_ld(const Vector& x, const Vector& a, double b) {
  long double ax = 0, aa = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ax += static_cast<long double>(a[i]) * x[i];
    aa += static_cast<long double>(a[i]) * a[i];
  }
  const long double c = (ax - b) / aa;
  std::vector<long double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - c * a[i];
  return out;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("vector kernels") {
  const Vector x{1, 2, 3}, y{4, -5, 6};
  CHECK(dot(x, y) == doctest::Approx(12));
  CHECK(norm_sq(x) == doctest::Approx(14));
  CHECK(norm(Vector{3, 4}) == doctest::Approx(5));
  Vector z = y;
  axpy(2.0, x, z);
  CHECK(z == Vector{6, -1, 12});
  CHECK(subtract(y, x) == Vector{3, -7, 3});
}

TEST_CASE("matrix caches and products") {
  const Matrix a(2, 3, {1, 2, 2, 0, 0, 3});
  CHECK(a.row_norms_sq()[0] == 9);
  CHECK(a.row_norms_sq()[1] == 9);
  CHECK(a.frob_sq() == 18);
  CHECK(a.multiply(Vector{1, 1, 1}) == Vector{5, 3});
  CHECK(a.multiply_transpose(Vector{1, 2}) == Vector{1, 2, 8});
  const Matrix t = a.transpose();
  CHECK(t.rows() == 3);
  CHECK(t(2, 1) == 3);
  CHECK(a.column_norms_sq() == Vector{1, 4, 13});
  CHECK(a.column_major() == std::vector<double>{1, 0, 2, 0, 2, 3});
  CHECK(Matrix::identity(3).frob_sq() == 3);
}

TEST_CASE("matrix flags zero rows and rejects bad shapes") {
  const Matrix a(3, 2, {1, 0, 0, 0, 0, 2});
  REQUIRE(a.zero_rows().size() == 1);
  CHECK(a.zero_rows()[0] == 1);
  CHECK(message_of([] { Matrix(2, 2, {1, 2, 3}); }).rfind("invalid matrix", 0) == 0);
  CHECK(message_of([&] { a.multiply(Vector{1, 2, 3}); }).rfind("invalid matrix", 0) == 0);
}

TEST_CASE("projection agrees with an extended-precision oracle") {
  Rng rng(1);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng.below(12);
    const Vector x = randn(n, rng), a = randn(n, rng);
    const double b = 5.0 * rng.normal();
    const Vector p = project_row(x, a, b);
    const auto oracle = project_ld(x, a, b);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(p[i] - static_cast<double>(oracle[i])) <= 1e-13 * (1 + norm(x)));
    CHECK(std::abs(dot(a, p) - b) <= 1e-12 * (1 + std::abs(b) + norm(a) * norm(x)));
  }
}

TEST_CASE("reflection is an involution and an isometry about the hyperplane") {
  Rng rng(2);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 2 + rng.below(10);
    const Vector x = randn(n, rng), a = randn(n, rng);
    const double b = rng.normal();
    const Vector rx = reflect_row(x, a, b);
    const Vector back = reflect_row(rx, a, b);
    CHECK(norm(subtract(back, x)) <= 1e-12 * (1 + norm(x)));
    const Vector y = project_row(randn(n, rng), a, b);
    CHECK(norm(subtract(rx, y)) == doctest::Approx(norm(subtract(x, y))).epsilon(1e-12));
    Vector inplace = x;
    reflect_in_place(inplace, a, b, norm_sq(a));
    CHECK(inplace == rx);
    Vector pin = x;
    project_in_place(pin, a, b, norm_sq(a));
    CHECK(pin == project_row(x, a, b));
  }
}

TEST_CASE("projection onto a zero row is rejected") {
  CHECK(message_of([] { project_row(Vector{1, 2}, Vector{0, 0}, 1.0); }) ==
        "degenerate hyperplane");
  CHECK(message_of([] { reflect_row(Vector{1, 2}, Vector{0, 0}, 0.0); }) ==
        "degenerate hyperplane");
}

TEST_CASE("svd singular values match Eigen on random shapes") {
  Rng rng(3);
  const std::pair<std::size_t, std::size_t> shapes[] = {{1, 1}, {5, 3}, {3, 5}, {8, 8},
                                                        {20, 7}, {7, 20}, {40, 25}};
  for (auto [m, n] : shapes) {
    const Matrix a = gen_gaussian(m, n, rng.next_u64());
    const SvdResult s = svd_small(a);
    Eigen::JacobiSVD<Eigen::MatrixXd> oracle(to_eigen(a));
    const auto sv = oracle.singularValues();
    REQUIRE(s.singular_values.size() == static_cast<std::size_t>(sv.size()));
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      CHECK(s.singular_values[i] == doctest::Approx(sv(i)).epsilon(1e-12));
    CHECK(s.u.rows() == m);
    CHECK(s.u.cols() == m);
    CHECK(s.v.rows() == n);
    CHECK(s.v.cols() == n);
    CHECK(orthogonality_error(s.u) < 1e-12);
    CHECK(orthogonality_error(s.v) < 1e-12);
    // A = U diag(s) V^T
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(m, n);
    for (std::size_t i = 0; i < std::min(m, n); ++i) sigma(i, i) = s.singular_values[i];
    const Eigen::MatrixXd rebuilt = to_eigen(s.u) * sigma * to_eigen_square(s.v).transpose();
    CHECK((rebuilt - to_eigen(a)).norm() < 1e-12 * (1 + to_eigen(a).norm()));
    CHECK(s.rank == std::min(m, n));
  }
}

TEST_CASE("svd handles rank deficiency and thin factors") {
  const SvdResult d = svd_small(Matrix(2, 2, {2, 0, 0, 0}));
  CHECK(d.rank == 1);
  CHECK(d.singular_values[0] == doctest::Approx(2));
  CHECK(d.singular_values[1] == 0);
  CHECK(orthogonality_error(d.u) < 1e-14);

  Rng rng(4);
  // rank-2 product of 6x2 and 2x4 factors
  const Matrix l = gen_gaussian(6, 2, 5), r = gen_gaussian(2, 4, 6);
  std::vector<double> e(24, 0.0);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 2; ++k) e[i * 4 + j] += l(i, k) * r(k, j);
  const Matrix low(6, 4, e);
  SvdOptions thin;
  thin.full_u = false;
  const SvdResult s = svd_small(low, thin);
  CHECK(s.rank == 2);
  CHECK(s.u.cols() == 4);
  CHECK(orthogonality_error(s.u) < 1e-12);
  CHECK(orthogonality_error(s.v) < 1e-12);
  CHECK(rank_threshold(1.0, 6, 4) == doctest::Approx(6 * 16 * 2.22e-16));
}

TEST_CASE("svd refuses matrices above the cap or with non-finite entries") {
  SvdOptions small;
  small.oracle_cap = 3;
  CHECK(message_of([&] { svd_small(gen_gaussian(5, 4, 1), small); }).rfind("invalid matrix", 0) ==
        0);
  CHECK(message_of([] { svd_small(Matrix(1, 2, {1.0, NAN})); }).rfind("invalid matrix", 0) == 0);
}

TEST_CASE("projected solution matches the pseudoinverse oracle") {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const std::size_t m = 2 + rng.below(6), n = 2 + rng.below(6);
    const Matrix a = gen_gaussian(m, n, rng.next_u64());
    const Vector sol = randn(n, rng);
    const Vector b = a.multiply(sol);
    const Vector x0 = randn(n, rng);
    const Vector p = projected_solution(a, b, x0);

    const Eigen::MatrixXd ea = to_eigen(a);
    const Eigen::MatrixXd pinv = ea.completeOrthogonalDecomposition().pseudoInverse();
    Eigen::VectorXd eb(m), ex0(n);
    for (std::size_t i = 0; i < m; ++i) eb(i) = b[i];
    for (std::size_t j = 0; j < n; ++j) ex0(j) = x0[j];
    const Eigen::VectorXd oracle = pinv * eb + ex0 - pinv * (ea * ex0);
    for (std::size_t j = 0; j < n; ++j) CHECK(p[j] == doctest::Approx(oracle(j)).epsilon(1e-10));
  }
}

TEST_CASE("projected solution rejects inconsistent systems") {
  const Matrix a(2, 1, {1, 1});
  CHECK(message_of([&] { projected_solution(a, Vector{0, 1}, Vector{0}); }) ==
        "inconsistent system");
}

TEST_CASE("spectral scalars") {
  const SpectralScalars s = spectral_scalars(Matrix::identity(2));
  CHECK(s.sigma_min == doctest::Approx(1));
  CHECK(s.sigma_max == doctest::Approx(1));
  CHECK(s.frob_sq == 2);
  CHECK(s.rank == 2);
  const SpectralScalars d = spectral_scalars(Matrix(2, 2, {3, 0, 0, 0}));
  CHECK(d.rank == 1);
  CHECK(d.sigma_min == doctest::Approx(3));
  CHECK(message_of([] { spectral_scalars(Matrix(2, 2)); }) == "zero matrix");
}
