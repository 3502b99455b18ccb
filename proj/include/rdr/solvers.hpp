#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rdr/linalg.hpp"
#include "rdr/problems.hpp"
#include "rdr/sampling.hpp"

namespace rdr {

enum class Method {
  rrdr,          // randomized r-sets Douglas-Rachford
  mrrdr,         // rrdr with heavy-ball momentum
  rk,            // randomized Kaczmarz
  rek,           // randomized extended Kaczmarz
  rgs,           // randomized Gauss-Seidel (coordinate descent)
  cyclic_dr,     // cyclic two-reflection DR
  det_rsets_dr,  // deterministic composition of all m reflections
  rp_admm,       // randomly permuted ADMM
};

std::string_view to_string(Method m);
// Accepts the lowercase names above (with '-' or '_'); throws on others.
Method parse_method(std::string_view name);
bool uses_momentum(Method m);

inline constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

struct StopRule {
  double rse_tol = 1e-12;
  std::uint64_t max_row_actions = kUnbounded;
  std::uint64_t max_iterations = kUnbounded;
};

struct SolverConfig {
  Method method = Method::rrdr;
  int r = 2;             // reflections per iteration
  double alpha = 0.5;    // relaxation, (0, 1)
  double beta = 0.0;     // momentum, >= 0
  double penalty = 1.0;  // RP-ADMM augmented Lagrangian penalty
  std::uint64_t seed = 0;
  StopRule stop;
  std::uint64_t trace_every = 0;  // row actions between trace records; 0 = endpoints only

  // Throws "invalid parameter: <name>" on violations.
  void validate() const;
};

struct SolverState {
  Vector x;
  Vector x_prev;     // momentum methods
  Vector z_aux;      // REK auxiliary sequence
  Vector mu;         // RP-ADMM multiplier
  Vector reflected;  // z_r of the most recent reflection step
  Vector residual;   // A x - b, maintained by RGS and RP-ADMM
  std::uint64_t k = 0;
  std::uint64_t row_actions = 0;
  std::size_t cyclic_cursor = 0;
  std::uint64_t steps_since_refresh = 0;
};

// Per-problem data shared by all trials: samplers and a column-major copy.
// Holds a reference; the Problem must outlive it.
class PreparedProblem {
 public:
  explicit PreparedProblem(const Problem& problem);

  const Problem& problem() const noexcept { return *problem_; }
  const Matrix& a() const noexcept { return problem_->a; }
  const WeightedSampler& row_sampler() const noexcept { return row_sampler_; }
  // Throws "invalid weights" if every column is zero.
  const WeightedSampler& column_sampler() const;
  std::span<const double> column(std::size_t j) const {
    return {columns_.data() + j * a().rows(), a().rows()};
  }
  std::span<const double> column_norms_sq() const noexcept { return column_norms_sq_; }
  const std::vector<std::size_t>& zero_columns() const noexcept { return zero_columns_; }
  // Some pair of rows is not parallel.
  bool rank_at_least_two() const noexcept { return rank_at_least_two_; }

 private:
  const Problem* problem_;
  WeightedSampler row_sampler_;
  std::vector<double> columns_;
  Vector column_norms_sq_;
  std::vector<std::size_t> zero_columns_;
  std::optional<WeightedSampler> column_sampler_;
  bool rank_at_least_two_ = false;
};

SolverState init_state(const Problem& problem, const SolverConfig& config);

void rrdr_step(SolverState& s, const PreparedProblem& p, const SolverConfig& c, Rng& rng);
void mrrdr_step(SolverState& s, const PreparedProblem& p, const SolverConfig& c, Rng& rng);
void rk_step(SolverState& s, const PreparedProblem& p, Rng& rng);
void rek_step(SolverState& s, const PreparedProblem& p, Rng& rng);
void rgs_step(SolverState& s, const PreparedProblem& p, Rng& rng);
void cyclic_dr_step(SolverState& s, const PreparedProblem& p, const SolverConfig& c);
void det_rsets_dr_step(SolverState& s, const PreparedProblem& p, const SolverConfig& c);
void rp_admm_step(SolverState& s, const PreparedProblem& p, const SolverConfig& c, Rng& rng);
// Dispatches on c.method.
void step(SolverState& s, const PreparedProblem& p, const SolverConfig& c, Rng& rng);

// Exact minimizer of t -> L(x + t e_j; mu) for
// L(x; mu) = -mu^T (A x - b) + penalty/2 ||A x - b||^2, given the current
// residual A x - b. Stationarity gives
// t = -(A_j^T residual - A_j^T mu / penalty) / ||A_j||^2.
double admm_coordinate_delta(std::span<const double> column, double column_norm_sq,
                             std::span<const double> residual, std::span<const double> mu,
                             double penalty);

enum class Status { converged, budget_exhausted, diverged };
std::string_view to_string(Status s);

inline constexpr double kDivergenceRse = 1e6;

struct TraceRecord {
  std::uint64_t k = 0;
  std::uint64_t row_actions = 0;
  double rse = 0.0;
  double residual_norm = 0.0;
  double dir_ratio = std::numeric_limits<double>::quiet_NaN();
  double vmin_overlap = std::numeric_limits<double>::quiet_NaN();
};

struct Trace {
  std::vector<TraceRecord> records;
  Status status = Status::budget_exhausted;
  std::uint64_t iterations = 0;
  std::uint64_t row_actions = 0;
  double rse = 0.0;
  Vector x;
};

// Called for every trace record before it is stored; fills diagnostics.
using TraceHook = std::function<void(const SolverState&, TraceRecord&)>;

// ||x - x0*||^2 / ||x0 - x0*||^2, or 0 when the denominator is 0.
double relative_solution_error(const Problem& p, std::span<const double> x);

Trace run(const PreparedProblem& p, const SolverConfig& config, const TraceHook& hook = {});
Trace run(const Problem& p, const SolverConfig& config, const TraceHook& hook = {});

}  // namespace rdr
