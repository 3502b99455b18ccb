#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rdr/linalg.hpp"

namespace rdr {

// Nonzero singular values (descending) with the right singular basis, as
// needed by the spectral rate formulas. Desk-scale only (SVD oracle cap).
struct Spectrum {
  Vector sigma;  // nonzero singular values, descending
  double frob_sq = 0.0;
  Matrix v;      // n x n right singular vectors; columns [0, rank) span Row(A)
  std::size_t rank() const noexcept { return sigma.size(); }
  double sigma_min() const { return sigma.back(); }
  double sigma_max() const { return sigma.front(); }
  SpectralScalars scalars() const;
};

// Throws "zero matrix" when A = 0; "invalid matrix" above the SVD cap.
Spectrum spectrum_of(const Matrix& a, const SvdOptions& options = {});

// Per-iteration factor for E||x^k - x0*||^2 without momentum:
// a^2 + (1-a)^2 + 2a(1-a)(1 - 2 smin^2/F^2)^r.
double mean_square_rate(const SpectralScalars& s, double alpha, int r);
// Squared per-iteration factor for ||E[x^k - x0*]||: (1 - a(1 - d^r))^2 with
// d = mean_contraction(s, r).
double mean_iterate_rate(const Spectrum& s, double alpha, int r);

// 1 - 2 smin^2/F^2 for odd r, max_i |1 - 2 s_i^2/F^2| for even r.
// Even r on a rank-1 matrix throws "even-r requires rank >= 2".
double mean_contraction(const Spectrum& s, int r);
// max_i |1 - 2 s_i^2/F^2| over the nonzero singular values.
double spectral_spread(const Spectrum& s);

// (1-a) + a(1 - 2 s_l^2/F^2)^r: decay of E<x^k - x*, v_l>.
double singular_decay_factor(double sigma_l, double frob_sq, double alpha, int r);

struct MomentumLinear {
  double tau1 = 0.0;
  double tau2 = 0.0;
  double beta_max = 0.0;  // gamma1 + gamma2 < 1 for 0 <= beta < beta_max
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double q = 0.0;
  double tau = 0.0;
  bool admissible() const { return gamma1 + gamma2 < 1.0; }
};

// Heavy-ball linear-rate bound E||x^{k+1} - x0*||^2 <= q^k (1+tau) ||x^0 - x0*||^2.
MomentumLinear momentum_linear_region(const Spectrum& s, double alpha, double beta, int r);

struct MomentumAccel {
  double alpha_max = 1.0;  // alpha must lie in (0, alpha_max)
  double beta_lo = 0.0;    // beta must lie in (beta_lo, 1)
  bool admits(double alpha, double beta) const {
    return alpha > 0.0 && alpha < alpha_max && beta > beta_lo && beta < 1.0;
  }
};

MomentumAccel momentum_accel_region(const Spectrum& s, double alpha, int r);

// Characteristic polynomial t^2 - g t + beta of the mean recursion along one
// nonzero singular direction, g = (1 - a + beta) + a(1 - 2 s_i^2/F^2)^r.
struct CoordinateRoots {
  double sigma = 0.0;
  double gamma1 = 0.0;
  double discriminant = 0.0;
  std::complex<double> root1;
  std::complex<double> root2;
};

std::vector<CoordinateRoots> characteristic_roots(const Spectrum& s, double alpha, double beta,
                                                  int r);

struct RateReport {
  double alpha = 0.0;
  double beta = 0.0;
  int r = 0;
  double mean_square_rate = 0.0;
  double mean_iterate_rate = 0.0;
  double delta_mean = 0.0;
  double delta_spread = 0.0;
  MomentumLinear linear;
  MomentumAccel accel;
};

RateReport rate_report(const Spectrum& s, double alpha, double beta, int r);

// v -> (I - 2 A^T A / F^2)^r v by repeated matrix-vector products.
Vector expectation_operator_apply(const Matrix& a, std::span<const double> v, int r);

// Exact recursion of expected errors e^k = E[x^k] - x*:
// e^{k+1} = M1 e^k - beta e^{k-1}, M1 = (1 - a + beta) I + a (I - 2 A^T A/F^2)^r.
class MeanMap {
 public:
  MeanMap(const Matrix& a, double alpha, double beta, int r);

  // Diagonal action in the right singular basis.
  Vector apply(std::span<const double> e, std::span<const double> e_prev) const;
  // Same map through matrix-vector products with A.
  Vector apply_direct(std::span<const double> e, std::span<const double> e_prev) const;
  // Dense n x n M1.
  Matrix dense_m1() const;
  // Diagonal of M1 in the V basis.
  const Vector& eigenvalues() const noexcept { return eig_; }
  // Expected errors from e0 with the previous iterate equal to the start
  // (no momentum on the first step); returns e^0 .. e^steps.
  std::vector<Vector> trajectory(std::span<const double> e0, std::size_t steps) const;

  const Spectrum& spectrum() const noexcept { return spectrum_; }

 private:
  const Matrix* a_;
  double alpha_, beta_;
  int r_;
  Spectrum spectrum_;
  Vector eig_;
};

inline constexpr std::size_t kEnumerationBudget = 1000000;

// Visits all m^r ordered row sequences with weight prod ||a_j||^2/F^2 and the
// composed reflection z_r of x. Throws "enumeration too large" beyond budget.
void for_each_branch(const Matrix& a, std::span<const double> b, std::span<const double> x,
                     int r, const std::function<void(double, const Vector&)>& visit,
                     std::size_t budget = kEnumerationBudget);

struct OneStepExpectation {
  Vector mean;                 // E[x^{k+1}]
  double mean_sq_dist = 0.0;   // E||x^{k+1} - reference||^2
};

// Exact one-step expectation of the (momentum) r-sets DR update from
// (x, x_prev) over every branch.
OneStepExpectation enumerate_one_step(const Matrix& a, std::span<const double> b,
                                      std::span<const double> x,
                                      std::span<const double> x_prev, double alpha,
                                      double beta, int r, std::span<const double> reference,
                                      std::size_t budget = kEnumerationBudget);

// Expected squared cosine between successive error directions for alpha = 1/2:
// 1/2 + 1/2 u^T (I - 2 A^T A/F^2)^r u, u = (x - x*)/||x - x*||.
// Throws "undefined direction" when x = x*.
double angle_expectation_half(const Matrix& a, std::span<const double> x,
                              std::span<const double> x_star, int r);

}  // namespace rdr
