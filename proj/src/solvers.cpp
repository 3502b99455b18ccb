#include "rdr/solvers.hpp"

#include <cmath>
#include <string>

#include "rdr/error.hpp"

namespace rdr {
namespace {

constexpr std::uint64_t kResidualRefresh = 10000;

void refresh_residual(SolverState& s, const Problem& p) {
  s.residual = p.a.multiply(s.x);
  for (std::size_t i = 0; i < s.residual.size(); ++i) s.residual[i] -= p.b[i];
  s.steps_since_refresh = 0;
}

// z <- R_{j_r} ... R_{j_1} x for i.i.d. norm-weighted rows.
void random_reflections(SolverState& s, const PreparedProblem& p, int r, Rng& rng) {
  const Matrix& a = p.a();
  s.reflected = s.x;
  for (int l = 0; l < r; ++l) {
    const std::size_t i = p.row_sampler().sample(rng);
    reflect_in_place(s.reflected, a.row(i), p.problem().b[i], a.row_norms_sq()[i]);
  }
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::rrdr: return "rrdr";
    case Method::mrrdr: return "mrrdr";
    case Method::rk: return "rk";
    case Method::rek: return "rek";
    case Method::rgs: return "rgs";
    case Method::cyclic_dr: return "cyclic_dr";
    case Method::det_rsets_dr: return "det_rsets_dr";
    case Method::rp_admm: return "rp_admm";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  std::string key(name);
  for (char& ch : key)
    if (ch == '-') ch = '_';
  for (Method m : {Method::rrdr, Method::mrrdr, Method::rk, Method::rek, Method::rgs,
                   Method::cyclic_dr, Method::det_rsets_dr, Method::rp_admm})
    if (key == to_string(m)) return m;
  throw Error("invalid parameter: method '" + std::string(name) + "'");
}

bool uses_momentum(Method m) { return m == Method::mrrdr; }

std::string_view to_string(Status s) {
  switch (s) {
    case Status::converged: return "converged";
    case Status::budget_exhausted: return "budget-exhausted";
    case Status::diverged: return "diverged";
  }
  return "?";
}

void SolverConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("invalid parameter: alpha");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw Error("invalid parameter: beta");
  if (r < 1) throw Error("invalid parameter: r");
  if (!(penalty > 0.0) || !std::isfinite(penalty)) throw Error("invalid parameter: penalty");
  if (!(stop.rse_tol >= 0.0)) throw Error("invalid parameter: rse_tol");
  if (stop.max_row_actions == kUnbounded && stop.max_iterations == kUnbounded)
    throw Error("invalid parameter: stop rule needs a finite budget");
  if (method == Method::rrdr && beta != 0.0) throw Error("invalid parameter: beta (rrdr)");
}

PreparedProblem::PreparedProblem(const Problem& problem)
    : problem_(&problem),
      row_sampler_(build_sampler(problem.a.row_norms_sq())),
      columns_(problem.a.column_major()),
      column_norms_sq_(problem.a.column_norms_sq()) {
  for (std::size_t j = 0; j < column_norms_sq_.size(); ++j)
    if (column_norms_sq_[j] == 0.0) zero_columns_.push_back(j);
  if (zero_columns_.size() < column_norms_sq_.size())
    column_sampler_ = build_sampler(column_norms_sq_);

  const Matrix& a = problem.a;
  const auto a0 = a.row(0);
  const double n0 = a.row_norms_sq()[0];
  for (std::size_t i = 1; i < a.rows() && !rank_at_least_two_; ++i) {
    const double c = dot(a0, a.row(i));
    rank_at_least_two_ = c * c < (1.0 - 1e-10) * n0 * a.row_norms_sq()[i];
  }
}

const WeightedSampler& PreparedProblem::column_sampler() const {
  if (!column_sampler_) throw Error("invalid weights");
  return *column_sampler_;
}

SolverState init_state(const Problem& problem, const SolverConfig& config) {
  SolverState s;
  s.x = problem.x0;
  s.x_prev = problem.x0;
  s.reflected = problem.x0;
  switch (config.method) {
    case Method::rek:
      s.z_aux = problem.b;
      break;
    case Method::rp_admm:
      s.mu.assign(problem.a.rows(), 0.0);
      refresh_residual(s, problem);
      break;
    case Method::rgs:
      refresh_residual(s, problem);
      break;
    default:
      break;
  }
  return s;
}

void rrdr_step(SolverState& s, const PreparedProblem& p, const SolverConfig& c, Rng& rng) {
  random_reflections(s, p, c.r, rng);
  for (std::size_t j = 0; j < s.x.size(); ++j)
    s.x[j] = (1.0 - c.alpha) * s.x[j] + c.alpha * s.reflected[j];
  s.row_actions += static_cast<std::uint64_t>(c.r);
  ++s.k;
}

void mrrdr_step(SolverState& s, const PreparedProblem& p, const SolverConfig& c, Rng& rng) {
  random_reflections(s, p, c.r, rng);
  for (std::size_t j = 0; j < s.x.size(); ++j) {
    const double xj = s.x[j];
    s.x[j] = (1.0 - c.alpha) * xj + c.alpha * s.reflected[j] + c.beta * (xj - s.x_prev[j]);
    s.x_prev[j] = xj;
  }
  s.row_actions += static_cast<std::uint64_t>(c.r);
  ++s.k;
}

void rk_step(SolverState& s, const PreparedProblem& p, Rng& rng) {
  const Matrix& a = p.a();
  const std::size_t i = p.row_sampler().sample(rng);
  project_in_place(s.x, a.row(i), p.problem().b[i], a.row_norms_sq()[i]);
  s.row_actions += 1;
  ++s.k;
}

void rek_step(SolverState& s, const PreparedProblem& p, Rng& rng) {
  const Matrix& a = p.a();
  const std::size_t j = p.column_sampler().sample(rng);
  const auto col = p.column(j);
  axpy(-dot(col, s.z_aux) / p.column_norms_sq()[j], col, s.z_aux);

  const std::size_t i = p.row_sampler().sample(rng);
  const auto row = a.row(i);
  const double step = (dot(row, s.x) - p.problem().b[i] + s.z_aux[i]) / a.row_norms_sq()[i];
  axpy(-step, row, s.x);
  s.row_actions += 2;
  ++s.k;
}

void rgs_step(SolverState& s, const PreparedProblem& p, Rng& rng) {
  const std::size_t j = p.column_sampler().sample(rng);
  const auto col = p.column(j);
  const double delta = -dot(col, s.residual) / p.column_norms_sq()[j];
  s.x[j] += delta;
  axpy(delta, col, s.residual);
  if (++s.steps_since_refresh >= kResidualRefresh) refresh_residual(s, p.problem());
  s.row_actions += 1;
  ++s.k;
}

void cyclic_dr_step(SolverState& s, const PreparedProblem& p, const SolverConfig& c) {
  const Matrix& a = p.a();
  const std::size_t m = a.rows();
  const std::size_t first = s.cyclic_cursor;
  const std::size_t second = (first + 1) % m;
  s.reflected = s.x;
  reflect_in_place(s.reflected, a.row(first), p.problem().b[first], a.row_norms_sq()[first]);
  reflect_in_place(s.reflected, a.row(second), p.problem().b[second], a.row_norms_sq()[second]);
  for (std::size_t j = 0; j < s.x.size(); ++j)
    s.x[j] = (1.0 - c.alpha) * s.x[j] + c.alpha * s.reflected[j];
  s.cyclic_cursor = second;
  s.row_actions += 2;
  ++s.k;
}

void det_rsets_dr_step(SolverState& s, const PreparedProblem& p, const SolverConfig& c) {
  const Matrix& a = p.a();
  s.reflected = s.x;
  for (std::size_t i = 0; i < a.rows(); ++i)
    reflect_in_place(s.reflected, a.row(i), p.problem().b[i], a.row_norms_sq()[i]);
  for (std::size_t j = 0; j < s.x.size(); ++j)
    s.x[j] = (1.0 - c.alpha) * s.x[j] + c.alpha * s.reflected[j];
  s.row_actions += a.rows();
  ++s.k;
}

double admm_coordinate_delta(std::span<const double> column, double column_norm_sq,
                             std::span<const double> residual, std::span<const double> mu,
                             double penalty) {
  return -(dot(column, residual) - dot(column, mu) / penalty) / column_norm_sq;
}

void rp_admm_step(SolverState& s, const PreparedProblem& p, const SolverConfig& c, Rng& rng) {
  const auto order = sample_permutation(s.x.size(), rng);
  std::uint64_t touched = 0;
  for (std::size_t j : order) {
    const double nsq = p.column_norms_sq()[j];
    if (nsq == 0.0) continue;
    const auto col = p.column(j);
    const double delta = admm_coordinate_delta(col, nsq, s.residual, s.mu, c.penalty);
    s.x[j] += delta;
    axpy(delta, col, s.residual);
    ++touched;
  }
  refresh_residual(s, p.problem());
  // Dual step with unit stepsize.
  axpy(-1.0, s.residual, s.mu);
  s.row_actions += touched;
  ++s.k;
}

void step(SolverState& s, const PreparedProblem& p, const SolverConfig& c, Rng& rng) {
  switch (c.method) {
    case Method::rrdr: rrdr_step(s, p, c, rng); return;
    case Method::mrrdr: mrrdr_step(s, p, c, rng); return;
    case Method::rk: rk_step(s, p, rng); return;
    case Method::rek: rek_step(s, p, rng); return;
    case Method::rgs: rgs_step(s, p, rng); return;
    case Method::cyclic_dr: cyclic_dr_step(s, p, c); return;
    case Method::det_rsets_dr: det_rsets_dr_step(s, p, c); return;
    case Method::rp_admm: rp_admm_step(s, p, c, rng); return;
  }
}

double relative_solution_error(const Problem& p, std::span<const double> x) {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double e = x[j] - p.x0_star[j];
    const double e0 = p.x0[j] - p.x0_star[j];
    num += e * e;
    den += e0 * e0;
  }
  if (den == 0.0) return 0.0;
  return num / den;
}

Trace run(const Problem& p, const SolverConfig& config, const TraceHook& hook) {
  const PreparedProblem prepared(p);
  return run(prepared, config, hook);
}

Trace run(const PreparedProblem& prepared, const SolverConfig& config, const TraceHook& hook) {
  config.validate();
  const Problem& p = prepared.problem();
  if ((config.method == Method::rrdr || config.method == Method::mrrdr) && config.r % 2 == 0 &&
      !prepared.rank_at_least_two())
    throw Error("even-r requires rank >= 2");
  if (config.method == Method::cyclic_dr && p.a.rows() < 2)
    throw Error("invalid parameter: cyclic DR needs m >= 2");

  Rng rng(config.seed);
  SolverState s = init_state(p, config);
  Trace trace;

  auto record = [&](double rse) {
    TraceRecord rec;
    rec.k = s.k;
    rec.row_actions = s.row_actions;
    rec.rse = rse;
    Vector res = p.a.multiply(s.x);
    for (std::size_t i = 0; i < res.size(); ++i) res[i] -= p.b[i];
    rec.residual_norm = norm(res);
    if (hook) hook(s, rec);
    trace.records.push_back(rec);
  };

  double rse = relative_solution_error(p, s.x);
  record(rse);
  std::uint64_t next_trace = config.trace_every;
  Status status = Status::budget_exhausted;
  bool done = false;
  if (rse < config.stop.rse_tol || rse == 0.0) {
    status = Status::converged;
    done = true;
  }
  while (!done) {
    if (s.k >= config.stop.max_iterations || s.row_actions >= config.stop.max_row_actions) {
      status = Status::budget_exhausted;
      break;
    }
    step(s, prepared, config, rng);
    rse = relative_solution_error(p, s.x);
    if (!std::isfinite(rse) || rse > kDivergenceRse) {
      status = Status::diverged;
      done = true;
    } else if (rse < config.stop.rse_tol) {
      status = Status::converged;
      done = true;
    }
    if (config.trace_every > 0 && s.row_actions >= next_trace && !done) {
      record(rse);
      while (next_trace <= s.row_actions) next_trace += config.trace_every;
    }
  }
  if (trace.records.back().k != s.k) record(rse);

  trace.status = status;
  trace.iterations = s.k;
  trace.row_actions = s.row_actions;
  trace.rse = rse;
  trace.x = std::move(s.x);
  return trace;
}

}  // namespace rdr
