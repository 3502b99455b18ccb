#include "rdr/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>

#include "rdr/error.hpp"
#include "rdr/harness.hpp"
#include "rdr/linalg.hpp"
#include "rdr/problems.hpp"
#include "rdr/sampling.hpp"
#include "rdr/solvers.hpp"
#include "rdr/theory.hpp"

namespace rdr {
namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string sci(double v) { return fmt("%.3g", v); }

Vector random_vector(std::size_t n, Rng& rng) {
  Vector v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

Vector column(const Matrix& m, std::size_t j) {
  Vector v(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, j);
  return v;
}

struct MeanAndError {
  double mean = 0.0;
  double se = 0.0;
};

MeanAndError sample_stats(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += x;
  const double mean = s / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

Outcome reflection_invariants() {
  Rng rng(101);
  double worst_inv = 0.0, worst_iso = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t n = 2 + rng.below(19);
    const Vector x = random_vector(n, rng);
    const Vector a = random_vector(n, rng);
    const double b = rng.normal() * 3.0;
    const Vector rx = reflect_row(x, a, b);
    const Vector rrx = reflect_row(rx, a, b);
    worst_inv = std::max(worst_inv, norm(subtract(rrx, x)) / std::max(1.0, norm(x)));
    const Vector y = project_row(random_vector(n, rng), a, b);
    const double d0 = norm(subtract(x, y));
    const double d1 = norm(subtract(rx, y));
    worst_iso = std::max(worst_iso, std::abs(d1 - d0) / std::max(1.0, d0));
  }
  return {worst_inv <= 1e-10 && worst_iso <= 1e-10,
          "max involution error " + sci(worst_inv) + ", max isometry error " + sci(worst_iso)};
}

Outcome trajectory_norm_preservation() {
  Rng picker(202);
  double worst = 0.0;
  for (int run_id = 0; run_id < 100; ++run_id) {
    const Problem p = gen_gaussian_problem(50, 20, split_seed(202, run_id));
    const PreparedProblem prep(p);
    SolverConfig c;
    c.method = Method::rrdr;
    c.r = 1 + static_cast<int>(picker.below(6));
    c.alpha = 0.1 + 0.8 * picker.uniform();
    c.stop.max_iterations = 200;
    Rng rng(split_seed(2020, run_id));
    SolverState s = init_state(p, c);
    // Runs end at the solver's default RSE tolerance; below it the gap is
    // rounding in x, not a property of the reflections.
    for (int k = 0; k < 200 && relative_solution_error(p, s.x) >= c.stop.rse_tol; ++k) {
      const double before = norm(subtract(s.x, p.x0_star));
      rrdr_step(s, prep, c, rng);
      const double after = norm(subtract(s.reflected, p.x0_star));
      if (before > 0.0) worst = std::max(worst, std::abs(after - before) / before);
    }
  }
  return {worst <= 1e-9, "max relative violation " + sci(worst) + " over 100 runs x 200 steps"};
}

Outcome one_step_mean_oracle() {
  Rng rng(303);
  double worst_mean = 0.0, worst_identity = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 2 + rng.below(4);
    const std::size_t n = 2 + rng.below(3);
    const int r = 1 + static_cast<int>(rng.below(3));
    const double alpha = 0.1 + 0.8 * rng.uniform();
    const double beta = (t % 2 == 0) ? 0.0 : 0.9 * rng.uniform();
    const Matrix a = gen_gaussian(m, n, split_seed(303, t));
    const Vector sol = random_vector(n, rng);
    const Vector b = a.multiply(sol);
    const Vector x = random_vector(n, rng);
    const Vector x_prev = random_vector(n, rng);
    const Vector ref = projected_solution(a, b, x);
    const double scale = std::max(1.0, norm(subtract(x, ref)));

    const OneStepExpectation ex =
        enumerate_one_step(a, b, x, x_prev, alpha, beta, r, ref);
    const MeanMap map(a, alpha, beta, r);
    const Vector e = subtract(x, ref), ep = subtract(x_prev, ref);
    Vector mapped = map.apply(e, ep);
    for (std::size_t j = 0; j < n; ++j) mapped[j] += ref[j];
    worst_mean = std::max(worst_mean, norm(subtract(ex.mean, mapped)) / scale);

    if (beta == 0.0) {
      const Vector me = expectation_operator_apply(a, e, r);
      const double identity = (alpha * alpha + (1 - alpha) * (1 - alpha)) * norm_sq(e) +
                              2 * alpha * (1 - alpha) * dot(me, e);
      worst_identity = std::max(worst_identity, std::abs(ex.mean_sq_dist - identity) /
                                                    std::max(1.0, norm_sq(e)));
    }
  }
  return {worst_mean <= 1e-12 && worst_identity <= 1e-12,
          "mean gap " + sci(worst_mean) + ", second-moment gap " + sci(worst_identity)};
}

Outcome mean_square_envelope() {
  Problem base = gen_conditioned_problem(50, 20, 100.0, 404);
  const Spectrum spec = spectrum_of(base.a);
  Vector x0 = base.x_star;
  for (std::size_t i = 0; i < x0.size(); ++i) x0[i] += spec.v(i, spec.rank() - 1);
  const Problem p = make_problem(base.a, base.x_star, x0, "envelope");
  const PreparedProblem prep(p);
  SolverConfig c;
  c.method = Method::rrdr;
  c.r = 2;
  c.alpha = 0.5;
  c.stop.max_iterations = 30;
  const double rate = mean_square_rate(spec.scalars(), c.alpha, c.r);
  const double e0 = norm_sq(subtract(p.x0, p.x0_star));
  const int trials = 500, steps = 30;
  std::vector<std::vector<double>> samples(steps + 1, std::vector<double>(trials));
  for (int t = 0; t < trials; ++t) {
    Rng rng(split_seed(404, t));
    SolverState s = init_state(p, c);
    for (int k = 1; k <= steps; ++k) {
      rrdr_step(s, prep, c, rng);
      samples[k][t] = norm_sq(subtract(s.x, p.x0_star));
    }
  }
  double worst = 0.0;
  int worst_k = 0;
  bool ok = true;
  for (int k = 1; k <= steps; ++k) {
    const MeanAndError st = sample_stats(samples[k]);
    const double rel_se = st.mean > 0 ? st.se / st.mean : 0.0;
    const double bound = std::pow(rate, k) * e0 * (1.0 + 4.0 * rel_se);
    if (st.mean > bound) ok = false;
    if (st.mean / bound > worst) {
      worst = st.mean / bound;
      worst_k = k;
    }
  }
  return {ok, "rate " + fmt("%.6f", rate) + ", max mean/bound " + fmt("%.4f", worst) +
                  " at k=" + std::to_string(worst_k)};
}

Outcome singular_direction_exactness() {
  double worst = 0.0;
  for (int inst = 0; inst < 4; ++inst) {
    const Matrix a = gen_gaussian(4 + inst, 3, split_seed(505, inst));
    const double alpha = 0.2 + 0.2 * inst;
    const int r = 1 + inst;
    const Spectrum spec = spectrum_of(a);
    const MeanMap map(a, alpha, 0.0, r);
    Rng rng(split_seed(5050, inst));
    const Vector e0 = random_vector(3, rng);
    Vector e = e0, prev = e0;
    for (int k = 1; k <= 50; ++k) {
      Vector next = map.apply_direct(e, prev);
      prev = e;
      e = std::move(next);
      for (std::size_t l = 0; l < spec.rank(); ++l) {
        const Vector v = column(spec.v, l);
        const double f = singular_decay_factor(spec.sigma[l], spec.frob_sq, alpha, r);
        const double expect = std::pow(f, k) * dot(e0, v);
        worst = std::max(worst, std::abs(dot(e, v) - expect) / std::max(1.0, norm(e0)));
      }
    }
  }

  const Problem p = gen_gaussian_problem(5, 3, 5055);
  const PreparedProblem prep(p);
  const Spectrum spec = spectrum_of(p.a);
  SolverConfig c;
  c.method = Method::rrdr;
  c.r = 2;
  c.alpha = 0.5;
  c.stop.max_iterations = 5;
  const int trials = 100000;
  std::vector<std::vector<double>> proj(spec.rank(), std::vector<double>(trials));
  const Vector e0 = subtract(p.x0, p.x0_star);
  for (int t = 0; t < trials; ++t) {
    Rng rng(split_seed(55, t));
    SolverState s = init_state(p, c);
    for (int k = 0; k < 5; ++k) rrdr_step(s, prep, c, rng);
    const Vector e = subtract(s.x, p.x0_star);
    for (std::size_t l = 0; l < spec.rank(); ++l) proj[l][t] = dot(e, column(spec.v, l));
  }
  double worst_z = 0.0;
  for (std::size_t l = 0; l < spec.rank(); ++l) {
    const MeanAndError st = sample_stats(proj[l]);
    const double f = singular_decay_factor(spec.sigma[l], spec.frob_sq, c.alpha, c.r);
    const double expect = std::pow(f, 5) * dot(e0, column(spec.v, l));
    worst_z = std::max(worst_z, std::abs(st.mean - expect) / st.se);
  }
  return {worst <= 1e-10 && worst_z <= 4.0,
          "recursion gap " + sci(worst) + ", Monte-Carlo max |z| " + fmt("%.2f", worst_z)};
}

Outcome failure_contrast() {
  const Problem p = three_lines_failure_problem();
  SolverConfig det;
  det.method = Method::det_rsets_dr;
  det.alpha = 0.5;
  det.stop.rse_tol = 0.0;
  det.stop.max_iterations = 1000;
  det.trace_every = 3;
  const Trace dt = run(p, det);
  double drift = 0.0;
  for (const TraceRecord& rec : dt.records)
    drift = std::max(drift, std::abs(rec.rse - dt.records.front().rse));
  bool ok = drift <= 1e-10 && dt.iterations == 1000;

  std::uint64_t worst_actions = 0;
  double worst_rse = 0.0;
  for (std::uint64_t seed : kFailureDemoSeeds) {
    SolverConfig c;
    c.method = Method::rrdr;
    c.r = 3;
    c.alpha = 0.5;
    c.seed = seed;
    c.stop.rse_tol = 1e-9;
    c.stop.max_row_actions = 10000;
    const Trace t = run(p, c);
    if (t.status != Status::converged) ok = false;
    worst_actions = std::max(worst_actions, t.row_actions);
    worst_rse = std::max(worst_rse, t.rse);
  }
  return {ok, "deterministic RSE drift " + sci(drift) + " over 1000 iterations; RrDR worst " +
                  std::to_string(worst_actions) + " row actions (RSE " + sci(worst_rse) + ")"};
}

Outcome momentum_linear() {
  Rng rng(707);
  bool ok = true;
  double worst_ratio = 0.0;
  std::string note;
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t n = 3 + rng.below(6);
    const std::size_t m = n + 5 + rng.below(20);
    const double alpha = 0.2 + 0.6 * rng.uniform();
    const int r = 1 + static_cast<int>(rng.below(5));
    const Problem p = gen_gaussian_problem(m, n, split_seed(707, inst));
    const Spectrum spec = spectrum_of(p.a);
    const double beta_max = momentum_linear_region(spec, alpha, 0.0, r).beta_max;
    const double beta = 0.9 * beta_max;
    const MomentumLinear lin = momentum_linear_region(spec, alpha, beta, r);
    if (!(lin.gamma1 + lin.gamma2 < 1.0 && lin.gamma1 + lin.gamma2 <= lin.q && lin.q < 1.0)) {
      ok = false;
      note = "; region check failed on instance " + std::to_string(inst);
    }
    const auto budget = static_cast<std::uint64_t>(
        4.0 * std::ceil(std::log(1e-6 / (1.0 + lin.tau)) / std::log(lin.q)));

    const PreparedProblem prep(p);
    SolverConfig c;
    c.method = Method::mrrdr;
    c.r = r;
    c.alpha = alpha;
    c.beta = beta;
    c.stop.rse_tol = 0.0;
    c.stop.max_iterations = budget;
    const int trials = 50;
    double terminal = 0.0;
    for (int t = 0; t < trials; ++t) {
      c.seed = split_seed(split_seed(77, inst), t);
      terminal += run(prep, c).rse;
    }
    terminal /= trials;
    worst_ratio = std::max(worst_ratio, terminal);
    if (!(terminal < 1e-6)) ok = false;
  }
  return {ok, "worst mean terminal RSE " + sci(worst_ratio) + " (needs < 1e-6)" + note};
}

Outcome accelerated_mean_rate() {
  const Problem p = gen_gaussian_problem(30, 10, 808);
  const Spectrum spec = spectrum_of(p.a);
  const double alpha = 0.5;
  const int r = 2;
  const MomentumAccel region = momentum_accel_region(spec, alpha, r);
  const double beta = 0.5 * (region.beta_lo + 1.0);
  if (!region.admits(alpha, beta))
    return {false, "parameters outside the accelerated region"};

  double worst_modulus = 0.0;
  bool complex_roots = true;
  const auto roots = characteristic_roots(spec, alpha, beta, r);
  for (const CoordinateRoots& c : roots) {
    if (!(c.discriminant < 0.0)) complex_roots = false;
    worst_modulus = std::max({worst_modulus, std::abs(std::norm(c.root1) - beta),
                              std::abs(std::norm(c.root2) - beta)});
  }

  const MeanMap map(p.a, alpha, beta, r);
  const Vector e0 = subtract(p.x0, p.x0_star);
  const auto traj = map.trajectory(e0, 200);
  // Closed form s_k = C lambda^k + conj(C lambda^k) per singular direction,
  // with C fit from k = 0, 1 and checked at k = 2, 3.
  double c_bound = 0.0, fit_gap = 0.0;
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    const Vector v = column(spec.v, i);
    const double s0 = dot(traj[0], v), s1 = dot(traj[1], v);
    const std::complex<double> lam = roots[i].root1;
    const double pr = s0 / 2.0;
    const double qi = (pr * lam.real() - s1 / 2.0) / lam.imag();
    const std::complex<double> coef(pr, qi);
    for (int k = 2; k <= 3; ++k) {
      const double model = 2.0 * (coef * std::pow(lam, k)).real();
      fit_gap = std::max(fit_gap, std::abs(model - dot(traj[k], v)) / std::max(1.0, norm(e0)));
    }
    c_bound += 4.0 * std::norm(coef);
  }
  double worst = 0.0;
  for (int k = 4; k <= 200; ++k)
    worst = std::max(worst, norm_sq(traj[k]) / (std::pow(beta, k) * c_bound));
  const bool ok = complex_roots && worst_modulus <= 1e-12 && fit_gap <= 1e-10 &&
                  worst <= 1.0 + 1e-9;
  return {ok, "beta " + fmt("%.4f", beta) + ", c " + sci(c_bound) + ", max ratio to envelope " +
                  fmt("%.4f", worst) + ", root modulus gap " + sci(worst_modulus) +
                  ", fit gap " + sci(fit_gap)};
}

Outcome recommended_parameters() {
  const Problem p = gen_gaussian_problem(500, 100, 909);
  const PreparedProblem prep(p);
  auto median_iterations = [&](Method m, double beta) {
    std::vector<double> iters;
    SolverConfig c;
    c.method = m;
    c.r = 2;
    c.alpha = 0.5;
    c.beta = beta;
    c.stop.max_iterations = 200000;
    for (int t = 0; t < 10; ++t) {
      c.seed = split_seed(99, t);
      const Trace tr = run(prep, c);
      iters.push_back(tr.status == Status::converged ? static_cast<double>(tr.iterations)
                                                     : INFINITY);
    }
    std::sort(iters.begin(), iters.end());
    return 0.5 * (iters[4] + iters[5]);
  };
  const double with_momentum = median_iterations(Method::mrrdr, 0.4);
  const double without = median_iterations(Method::rrdr, 0.0);
  return {with_momentum < without, "median iterations mRrDR " + fmt("%.1f", with_momentum) +
                                       " vs RrDR " + fmt("%.1f", without)};
}

Outcome average_consensus() {
  bool ok = true;
  std::string detail;
  const Topology topologies[] = {Topology::line, Topology::cycle, Topology::geometric};
  const char* names[] = {"line", "cycle", "geometric"};
  for (int i = 0; i < 3; ++i) {
    if (!detail.empty()) detail += "; ";
    detail += names[i];
    try {
      GraphSpec g{topologies[i], 50, 0.0, 1010};
      Rng rng(1011);
      Vector c(50);
      for (double& v : c) v = rng.uniform();
      const Problem p = gen_ac_problem(g, c);
      SolverConfig cfg;
      cfg.method = Method::rrdr;
      cfg.r = 2;
      cfg.alpha = 0.5;
      cfg.seed = 1012;
      cfg.stop.rse_tol = 1e-18;
      cfg.stop.max_row_actions = 20000000;
      const Trace t = run(p, cfg);
      double err = 0.0;
      for (std::size_t j = 0; j < t.x.size(); ++j)
        err = std::max(err, std::abs(t.x[j] - p.x0_star[j]));
      if (!(err <= 1e-6)) ok = false;
      detail += " max error " + sci(err) + " after " + std::to_string(t.row_actions) +
                " row actions";
    } catch (const Error& e) {
      ok = false;
      detail += std::string(" error: ") + e.what();
    }
  }
  return {ok, detail};
}

Outcome semiconvergence() {
  const auto preset = find_preset("fig-direction");
  const ExperimentSpec& spec = preset->experiments.front();
  const Problem p = build_problem(spec);
  const PreparedProblem prep(p);
  const Spectrum s = spectrum_of(p.a);
  const Vector v_min = column(s.v, s.rank() - 1);
  const double threshold = 10.0 * s.sigma_min();
  bool ok = true;
  double worst_start = INFINITY, worst_end = 0.0, worst_overlap = 1.0;
  const auto points = expand_grid(spec);
  for (std::size_t pt = 0; pt < points.size(); ++pt)
    for (std::size_t t = 0; t < spec.trials; ++t) {
      SolverConfig c = points[pt].config;
      c.seed = trial_seed(spec.seed, pt, t);
      const Trace tr = run(prep, c, [&](const SolverState& st, TraceRecord& rec) {
        const DirectionMetrics d = compute_direction_metrics(st.x, p, v_min);
        rec.dir_ratio = d.dir_ratio;
        rec.vmin_overlap = d.vmin_overlap;
      });
      const TraceRecord& first = tr.records.front();
      const TraceRecord& last = tr.records.back();
      worst_start = std::min(worst_start, first.dir_ratio);
      worst_end = std::max(worst_end, last.dir_ratio);
      worst_overlap = std::min(worst_overlap, last.vmin_overlap);
      if (!(first.dir_ratio > 0.6 && last.dir_ratio < threshold && last.vmin_overlap > 0.99))
        ok = false;
    }
  return {ok, "sigma_min " + sci(s.sigma_min()) + "; min initial dir_ratio " +
                  fmt("%.3f", worst_start) + ", max final dir_ratio " + sci(worst_end) +
                  " (limit " + sci(threshold) + "), min final overlap " +
                  fmt("%.5f", worst_overlap)};
}

// Golden-section search on L(t) evaluated in extended precision.
double golden_minimize(const std::function<long double(long double)>& f, long double lo,
                       long double hi) {
  const long double g = (std::sqrt(5.0L) - 1.0L) / 2.0L;
  long double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  long double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && hi - lo > 1e-13L; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = f(d);
    }
  }
  return static_cast<double>((lo + hi) / 2.0L);
}

Outcome baselines() {
  const Problem p = gen_gaussian_problem(100, 50, 1212);
  const PreparedProblem prep(p);
  struct Budget {
    Method m;
    std::uint64_t row_actions;
  };
  const Budget budgets[] = {{Method::rk, 100000},
                            {Method::rek, 200000},
                            {Method::rgs, 100000},
                            {Method::rp_admm, 200000}};
  bool ok = true;
  std::string detail;
  for (const Budget& b : budgets) {
    SolverConfig c;
    c.method = b.m;
    c.seed = 1213;
    c.stop.rse_tol = 1e-8;
    c.stop.max_row_actions = b.row_actions;
    const Trace t = run(prep, c);
    if (t.status != Status::converged) ok = false;
    detail += std::string(to_string(b.m)) + " " + std::to_string(t.row_actions) + "/" +
              std::to_string(b.row_actions) + "; ";
  }

  Rng rng(1214);
  double worst = 0.0;
  const std::size_t m = p.a.rows(), n = p.a.cols();
  for (int t = 0; t < 100; ++t) {
    const Vector x = random_vector(n, rng);
    const Vector mu = random_vector(m, rng);
    const double penalty = 0.5 + 2.0 * rng.uniform();
    const std::size_t j = rng.below(n);
    Vector res = p.a.multiply(x);
    for (std::size_t i = 0; i < m; ++i) res[i] -= p.b[i];
    const double delta =
        admm_coordinate_delta(prep.column(j), prep.column_norms_sq()[j], res, mu, penalty);
    auto lagrangian = [&](long double step) {
      long double lin = 0.0L, quad = 0.0L;
      for (std::size_t i = 0; i < m; ++i) {
        long double ri = -static_cast<long double>(p.b[i]);
        for (std::size_t k = 0; k < n; ++k)
          ri += static_cast<long double>(p.a(i, k)) *
                (static_cast<long double>(x[k]) + (k == j ? step : 0.0L));
        lin += static_cast<long double>(mu[i]) * ri;
        quad += ri * ri;
      }
      return -lin + static_cast<long double>(penalty) / 2.0L * quad;
    };
    const double found = golden_minimize(lagrangian, -100.0L, 100.0L);
    worst = std::max(worst, std::abs(found - delta));
  }
  if (!(worst <= 1e-8)) ok = false;
  detail += "coordinate minimizer gap " + sci(worst);
  return {ok, detail};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*fn)();
  double time_limit;  // seconds; <= 0 for none
};

}  // namespace

std::string format_result(const CriterionResult& r) {
  char head[160];
  std::snprintf(head, sizeof head, "%s  %2d  %-32s (%.2f s)  ", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds);
  return head + r.detail;
}

std::vector<CriterionResult> run_acceptance(
    const std::function<void(const CriterionResult&)>& report) {
  const Criterion criteria[] = {
      {1, "reflection invariants", reflection_invariants, 1.0},
      {2, "trajectory norm preservation", trajectory_norm_preservation, 0.0},
      {3, "one-step mean oracle", one_step_mean_oracle, 30.0},
      {4, "mean-square envelope", mean_square_envelope, 120.0},
      {5, "singular-direction exactness", singular_direction_exactness, 0.0},
      {6, "three-lines failure contrast", failure_contrast, 0.0},
      {7, "momentum linear region", momentum_linear, 0.0},
      {8, "accelerated mean rate", accelerated_mean_rate, 0.0},
      {9, "recommended momentum", recommended_parameters, 0.0},
      {10, "average consensus", average_consensus, 0.0},
      {11, "semiconvergence diagnostics", semiconvergence, 0.0},
      {12, "baseline solvers", baselines, 0.0},
  };
  std::vector<CriterionResult> out;
  for (const Criterion& c : criteria) {
    CriterionResult res;
    res.id = c.id;
    res.name = c.name;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = c.fn();
      res.passed = o.passed;
      res.detail = o.detail;
    } catch (const std::exception& e) {
      res.passed = false;
      res.detail = std::string("exception: ") + e.what();
    }
    res.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0 && res.seconds > c.time_limit) {
      res.passed = false;
      res.detail += "; exceeded " + fmt("%.0f", c.time_limit) + " s limit";
    }
    if (report) report(res);
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace rdr
