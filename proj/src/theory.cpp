#include "rdr/theory.hpp"

#include <algorithm>
#include <cmath>

#include "rdr/error.hpp"

namespace rdr {
namespace {

void check_alpha_r(double alpha, int r) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("invalid parameter: alpha");
  if (r < 1) throw Error("invalid parameter: r");
}

double inner_factor(double sigma, double frob_sq) { return 1.0 - 2.0 * sigma * sigma / frob_sq; }

}  // namespace

SpectralScalars Spectrum::scalars() const {
  return {sigma_min(), sigma_max(), frob_sq, rank()};
}

Spectrum spectrum_of(const Matrix& a, const SvdOptions& options) {
  SvdOptions opts = options;
  opts.full_u = false;
  SvdResult svd = svd_small(a, opts);
  if (svd.rank == 0) throw Error("zero matrix");
  Spectrum s;
  s.sigma.assign(svd.singular_values.begin(), svd.singular_values.begin() + svd.rank);
  s.frob_sq = a.frob_sq();
  s.v = std::move(svd.v);
  return s;
}

double mean_square_rate(const SpectralScalars& s, double alpha, int r) {
  check_alpha_r(alpha, r);
  const double inner = std::pow(inner_factor(s.sigma_min, s.frob_sq), r);
  return alpha * alpha + (1.0 - alpha) * (1.0 - alpha) + 2.0 * alpha * (1.0 - alpha) * inner;
}

double spectral_spread(const Spectrum& s) {
  double d = 0.0;
  for (double sigma : s.sigma) d = std::max(d, std::abs(inner_factor(sigma, s.frob_sq)));
  return d;
}

double mean_contraction(const Spectrum& s, int r) {
  if (r < 1) throw Error("invalid parameter: r");
  if (r % 2 == 1) return inner_factor(s.sigma_min(), s.frob_sq);
  if (s.rank() < 2) throw Error("even-r requires rank >= 2");
  return spectral_spread(s);
}

double mean_iterate_rate(const Spectrum& s, double alpha, int r) {
  check_alpha_r(alpha, r);
  const double f = 1.0 - alpha * (1.0 - std::pow(mean_contraction(s, r), r));
  return f * f;
}

double singular_decay_factor(double sigma_l, double frob_sq, double alpha, int r) {
  return (1.0 - alpha) + alpha * std::pow(inner_factor(sigma_l, frob_sq), r);
}

MomentumLinear momentum_linear_region(const Spectrum& s, double alpha, double beta, int r) {
  check_alpha_r(alpha, r);
  if (!(beta >= 0.0)) throw Error("invalid parameter: beta");
  const double d2r = std::pow(spectral_spread(s), r);
  const double inner = std::pow(inner_factor(s.sigma_min(), s.frob_sq), r);
  MomentumLinear out;
  out.tau1 = 4.0 * (1.0 - alpha) + 5.0 * alpha * d2r;
  out.tau2 = 2.0 * alpha * (1.0 - alpha) * (1.0 - inner);
  out.beta_max = (std::sqrt(out.tau1 * out.tau1 + 16.0 * out.tau2) - out.tau1) / 8.0;
  out.gamma1 = mean_square_rate(s.scalars(), alpha, r) + 2.0 * beta * beta +
               3.0 * (1.0 - alpha + alpha * d2r) * beta;
  out.gamma2 = 2.0 * beta * beta + (1.0 - alpha) * beta + 2.0 * beta * alpha * d2r;
  out.q = (out.gamma1 + std::sqrt(out.gamma1 * out.gamma1 + 4.0 * out.gamma2)) / 2.0;
  out.tau = out.q - out.gamma1;
  return out;
}

MomentumAccel momentum_accel_region(const Spectrum& s, double alpha, int r) {
  check_alpha_r(alpha, r);
  MomentumAccel out;
  const double t = std::pow(inner_factor(s.sigma_max(), s.frob_sq), r);
  out.alpha_max = (1.0 - t > 0.0) ? std::min(1.0, 1.0 / (1.0 - t)) : 1.0;
  const double root = 1.0 - std::sqrt(alpha * (1.0 - std::pow(mean_contraction(s, r), r)));
  out.beta_lo = root * root;
  return out;
}

std::vector<CoordinateRoots> characteristic_roots(const Spectrum& s, double alpha, double beta,
                                                  int r) {
  std::vector<CoordinateRoots> out;
  out.reserve(s.rank());
  for (double sigma : s.sigma) {
    CoordinateRoots c;
    c.sigma = sigma;
    c.gamma1 = (1.0 - alpha + beta) + alpha * std::pow(inner_factor(sigma, s.frob_sq), r);
    c.discriminant = c.gamma1 * c.gamma1 - 4.0 * beta;
    const std::complex<double> sq = std::sqrt(std::complex<double>(c.discriminant, 0.0));
    c.root1 = (c.gamma1 + sq) / 2.0;
    c.root2 = (c.gamma1 - sq) / 2.0;
    out.push_back(c);
  }
  return out;
}

RateReport rate_report(const Spectrum& s, double alpha, double beta, int r) {
  RateReport rep;
  rep.alpha = alpha;
  rep.beta = beta;
  rep.r = r;
  rep.mean_square_rate = mean_square_rate(s.scalars(), alpha, r);
  rep.delta_mean = mean_contraction(s, r);
  rep.delta_spread = spectral_spread(s);
  rep.mean_iterate_rate = mean_iterate_rate(s, alpha, r);
  rep.linear = momentum_linear_region(s, alpha, beta, r);
  rep.accel = momentum_accel_region(s, alpha, r);
  return rep;
}

Vector expectation_operator_apply(const Matrix& a, std::span<const double> v, int r) {
  Vector out(v.begin(), v.end());
  const double scale = -2.0 / a.frob_sq();
  for (int l = 0; l < r; ++l) {
    const Vector atav = a.multiply_transpose(a.multiply(out));
    axpy(scale, atav, out);
  }
  return out;
}

MeanMap::MeanMap(const Matrix& a, double alpha, double beta, int r)
    : a_(&a), alpha_(alpha), beta_(beta), r_(r), spectrum_(spectrum_of(a)) {
  check_alpha_r(alpha, r);
  const std::size_t n = a.cols();
  eig_.assign(n, 1.0 + beta);
  for (std::size_t i = 0; i < spectrum_.rank(); ++i)
    eig_[i] = singular_decay_factor(spectrum_.sigma[i], spectrum_.frob_sq, alpha, r) + beta;
}

Vector MeanMap::apply(std::span<const double> e, std::span<const double> e_prev) const {
  const Matrix& v = spectrum_.v;
  const std::size_t n = e.size();
  Vector coeff = v.multiply_transpose(e);
  for (std::size_t i = 0; i < n; ++i) coeff[i] *= eig_[i];
  Vector out = v.multiply(coeff);
  axpy(-beta_, e_prev, out);
  return out;
}

Vector MeanMap::apply_direct(std::span<const double> e, std::span<const double> e_prev) const {
  Vector out = expectation_operator_apply(*a_, e, r_);
  for (double& x : out) x *= alpha_;
  axpy(1.0 - alpha_ + beta_, e, out);
  axpy(-beta_, e_prev, out);
  return out;
}

Matrix MeanMap::dense_m1() const {
  const Matrix& v = spectrum_.v;
  const std::size_t n = v.rows();
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t l = 0; l < n; ++l) acc += v(i, l) * eig_[l] * v(j, l);
      m[i * n + j] = acc;
    }
  return Matrix(n, n, std::move(m));
}

std::vector<Vector> MeanMap::trajectory(std::span<const double> e0, std::size_t steps) const {
  std::vector<Vector> out;
  out.reserve(steps + 1);
  out.emplace_back(e0.begin(), e0.end());
  Vector prev(e0.begin(), e0.end());
  for (std::size_t k = 0; k < steps; ++k) {
    Vector next = apply(out.back(), prev);
    prev = out.back();
    out.push_back(std::move(next));
  }
  return out;
}

void for_each_branch(const Matrix& a, std::span<const double> b, std::span<const double> x,
                     int r, const std::function<void(double, const Vector&)>& visit,
                     std::size_t budget) {
  if (r < 1) throw Error("invalid parameter: r");
  const std::size_t m = a.rows();
  std::size_t branches = 1;
  for (int l = 0; l < r; ++l) {
    if (m != 0 && branches > budget / m) throw Error("enumeration too large");
    branches *= m;
  }
  if (branches > budget) throw Error("enumeration too large");

  const auto norms = a.row_norms_sq();
  const double frob = a.frob_sq();
  std::vector<Vector> level(static_cast<std::size_t>(r) + 1);
  level[0].assign(x.begin(), x.end());
  std::vector<double> weight(static_cast<std::size_t>(r) + 1, 1.0);

  std::function<void(int)> descend = [&](int depth) {
    if (depth == r) {
      visit(weight[depth], level[depth]);
      return;
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (norms[j] == 0.0) continue;
      level[depth + 1] = level[depth];
      reflect_in_place(level[depth + 1], a.row(j), b[j], norms[j]);
      weight[depth + 1] = weight[depth] * norms[j] / frob;
      descend(depth + 1);
    }
  };
  descend(0);
}

OneStepExpectation enumerate_one_step(const Matrix& a, std::span<const double> b,
                                      std::span<const double> x,
                                      std::span<const double> x_prev, double alpha,
                                      double beta, int r, std::span<const double> reference,
                                      std::size_t budget) {
  const std::size_t n = x.size();
  OneStepExpectation out;
  out.mean.assign(n, 0.0);
  Vector next(n);
  for_each_branch(
      a, b, x, r,
      [&](double w, const Vector& z) {
        double dist = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          next[j] = (1.0 - alpha) * x[j] + alpha * z[j] + beta * (x[j] - x_prev[j]);
          out.mean[j] += w * next[j];
          const double d = next[j] - reference[j];
          dist += d * d;
        }
        out.mean_sq_dist += w * dist;
      },
      budget);
  return out;
}

double angle_expectation_half(const Matrix& a, std::span<const double> x,
                              std::span<const double> x_star, int r) {
  Vector u = subtract(x, x_star);
  const double len = norm(u);
  if (len == 0.0) throw Error("undefined direction");
  for (double& v : u) v /= len;
  const Vector mu = expectation_operator_apply(a, u, r);
  return 0.5 + 0.5 * dot(u, mu);
}

}  // namespace rdr
