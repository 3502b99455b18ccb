#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "rdr/error.hpp"
#include "rdr/harness.hpp"

namespace rdr {
namespace {

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string point_label(const MethodSpec& m, const SolverConfig& c, bool grid) {
  std::string params;
  switch (m.method) {
    case Method::rrdr:
      params = "r=" + std::to_string(c.r) + " alpha=" + short_number(c.alpha);
      break;
    case Method::mrrdr:
      params = "r=" + std::to_string(c.r) + " alpha=" + short_number(c.alpha) +
               " beta=" + short_number(c.beta);
      break;
    case Method::cyclic_dr:
    case Method::det_rsets_dr:
      params = "alpha=" + short_number(c.alpha);
      break;
    case Method::rp_admm:
      params = "penalty=" + short_number(c.penalty);
      break;
    default:
      break;
  }
  if (!m.label.empty()) return grid && !params.empty() ? m.label + " " + params : m.label;
  return params.empty() ? std::string(to_string(m.method))
                        : std::string(to_string(m.method)) + " " + params;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::string_view row_action_convention(Method m) {
  switch (m) {
    case Method::rrdr:
    case Method::mrrdr: return "r per iteration (one per reflection)";
    case Method::rk: return "1 per iteration";
    case Method::rek: return "2 per iteration (one column step, one row step)";
    case Method::rgs: return "1 per coordinate step";
    case Method::cyclic_dr: return "2 per iteration";
    case Method::det_rsets_dr: return "m per iteration";
    case Method::rp_admm: return "nonzero columns per sweep; multiplier update uncounted";
  }
  return "";
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<RunPoint> expand_grid(const ExperimentSpec& spec) {
  std::vector<RunPoint> out;
  for (const MethodSpec& m : spec.methods) {
    const bool grid = m.r.size() * m.alpha.size() * m.beta.size() * m.penalty.size() > 1;
    for (int r : m.r)
      for (double a : m.alpha)
        for (double b : m.beta)
          for (double p : m.penalty) {
            RunPoint pt;
            pt.config.method = m.method;
            pt.config.r = r;
            pt.config.alpha = a;
            pt.config.beta = b;
            pt.config.penalty = p;
            pt.config.stop = spec.stop;
            pt.config.trace_every = spec.trace_every;
            if (!(b >= 0.0 && b < 1.0)) throw Error("invalid parameter: beta");
            pt.config.validate();
            pt.label = point_label(m, pt.config, grid);
            pt.mandatory = m.mandatory;
            out.push_back(std::move(pt));
          }
  }
  return out;
}

Problem build_problem(const ExperimentSpec& spec) {
  const ProblemSpec& p = spec.problem;
  const std::uint64_t seed = split_seed(spec.seed, 0);
  switch (p.source) {
    case ProblemSource::synthetic:
      return gen_gaussian_problem(p.rows, p.cols, seed);
    case ProblemSource::conditioned:
      return gen_conditioned_problem(p.rows, p.cols, p.ratio, seed);
    case ProblemSource::mtx:
      return planted_problem(load_matrix_market(p.path), seed, p.path.filename().string());
    case ProblemSource::ac_graph: {
      GraphSpec g{p.topology, p.nodes, p.radius, split_seed(seed, 0)};
      Vector c = p.values;
      if (c.empty()) {
        Rng rng(split_seed(seed, 1));
        c.resize(p.nodes);
        for (double& v : c) v = rng.uniform();
      }
      return gen_ac_problem(g, c);
    }
    case ProblemSource::three_lines:
      return three_lines_failure_problem();
    case ProblemSource::near_dependent:
      return gen_near_dependent_problem(p.rows, seed);
  }
  throw Error("invalid parameter: source");
}

DirectionMetrics compute_direction_metrics(std::span<const double> x, const Problem& problem,
                                           std::span<const double> v_min) {
  DirectionMetrics out;
  const Vector e = subtract(x, problem.x0_star);
  const double len = norm(e);
  if (len == 0.0 || !std::isfinite(len)) return out;
  out.dir_ratio = norm(problem.a.multiply(e)) / len;
  out.vmin_overlap = std::min(1.0, std::abs(dot(e, v_min)) / len);
  out.defined = true;
  return out;
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t point, std::size_t trial) {
  return split_seed(split_seed(seed, 1 + point), trial);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  const Problem problem = build_problem(spec);
  return run_experiment(spec, problem);
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const Problem& problem) {
  ExperimentResult result;
  result.name = spec.name;
  result.points = expand_grid(spec);
  const PreparedProblem prepared(problem);

  Vector v_min;
  if (spec.direction_metrics) {
    const Spectrum s = spectrum_of(problem.a);
    v_min.resize(problem.a.cols());
    for (std::size_t i = 0; i < v_min.size(); ++i) v_min[i] = s.v(i, s.rank() - 1);
  }

  const std::size_t tasks = result.points.size() * spec.trials;
  result.trials.resize(tasks);
  std::size_t workers = spec.threads ? spec.threads : std::thread::hardware_concurrency();
  workers = std::max<std::size_t>(1, std::min(workers, tasks));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&]() {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks) return;
      TrialResult& out = result.trials[t];
      out.point = t / spec.trials;
      out.trial = t % spec.trials;
      out.seed = trial_seed(spec.seed, out.point, out.trial);
      SolverConfig config = result.points[out.point].config;
      config.seed = out.seed;
      TraceHook hook;
      if (!v_min.empty())
        hook = [&](const SolverState& s, TraceRecord& rec) {
          const DirectionMetrics d = compute_direction_metrics(s.x, problem, v_min);
          if (d.defined) {
            rec.dir_ratio = d.dir_ratio;
            rec.vmin_overlap = d.vmin_overlap;
          }
        };
      try {
        out.trace = run(prepared, config, hook);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(tasks);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  for (std::size_t p = 0; p < result.points.size(); ++p) {
    PointSummary s;
    s.label = result.points[p].label;
    std::vector<double> iters, actions;
    for (std::size_t t = 0; t < spec.trials; ++t) {
      const Trace& tr = result.trials[p * spec.trials + t].trace;
      if (tr.status == Status::converged) ++s.converged;
      if (tr.status == Status::diverged) ++s.diverged;
      iters.push_back(static_cast<double>(tr.iterations));
      actions.push_back(static_cast<double>(tr.row_actions));
    }
    s.median_iterations = median(iters);
    s.mean_iterations = mean(iters);
    s.median_row_actions = median(actions);
    s.mean_row_actions = mean(actions);
    if (s.diverged && result.points[p].mandatory) result.mandatory_divergence = true;
    result.summaries.push_back(std::move(s));
  }
  return result;
}

OutputFiles write_outputs(const ExperimentSpec& spec, const Problem& problem,
                          const ExperimentResult& result) {
  std::error_code ec;
  std::filesystem::create_directories(spec.out, ec);
  if (ec) throw IoError("cannot create " + spec.out.string() + ": " + ec.message());

  OutputFiles files;
  files.trace = spec.out / (spec.name + "_trace.csv");
  files.summary = spec.out / (spec.name + "_summary.csv");
  files.aggregate = spec.out / (spec.name + "_aggregate.csv");
  files.metadata = spec.out / (spec.name + "_metadata.txt");
  const std::string exp = csv_field(spec.name);

  {
    std::ofstream out = open_output(files.trace);
    out << kTraceHeader << '\n';
    for (const TrialResult& t : result.trials) {
      const std::string solver = csv_field(result.points[t.point].label);
      for (const TraceRecord& rec : t.trace.records)
        out << exp << ',' << solver << ',' << t.trial << ',' << rec.k << ',' << rec.row_actions
            << ',' << format_double(rec.rse) << ',' << format_double(rec.residual_norm) << ','
            << format_double(rec.dir_ratio) << ',' << format_double(rec.vmin_overlap) << '\n';
    }
    finish_output(out, files.trace);
  }
  {
    std::ofstream out = open_output(files.summary);
    out << kSummaryHeader << '\n';
    for (const TrialResult& t : result.trials)
      out << exp << ',' << csv_field(result.points[t.point].label) << ',' << t.trial << ','
          << t.seed << ',' << t.trace.iterations << ',' << t.trace.row_actions << ','
          << format_double(t.trace.rse) << ',' << to_string(t.trace.status) << '\n';
    finish_output(out, files.summary);
  }
  {
    std::ofstream out = open_output(files.aggregate);
    out << kAggregateHeader << '\n';
    for (const PointSummary& s : result.summaries)
      out << exp << ',' << csv_field(s.label) << ',' << spec.trials << ',' << s.converged << ','
          << s.diverged << ',' << format_double(s.median_iterations) << ','
          << format_double(s.mean_iterations) << ',' << format_double(s.median_row_actions)
          << ',' << format_double(s.mean_row_actions) << '\n';
    finish_output(out, files.aggregate);
  }

  nlohmann::ordered_json meta;
  meta["experiment"] = spec.name;
  meta["seed"] = spec.seed;
  meta["trials"] = spec.trials;
  meta["problem"] = {{"source", std::string(to_string(spec.problem.source))},
                     {"label", problem.label},
                     {"rows", problem.a.rows()},
                     {"cols", problem.a.cols()},
                     {"frob_sq", problem.a.frob_sq()}};
  meta["stop"] = {{"rse_tol", spec.stop.rse_tol},
                  {"max_row_actions", spec.stop.max_row_actions == kUnbounded
                                          ? nlohmann::ordered_json(nullptr)
                                          : nlohmann::ordered_json(spec.stop.max_row_actions)},
                  {"max_iterations", spec.stop.max_iterations == kUnbounded
                                         ? nlohmann::ordered_json(nullptr)
                                         : nlohmann::ordered_json(spec.stop.max_iterations)}};
  meta["trace_every"] = spec.trace_every;
  meta["divergence_rse"] = kDivergenceRse;

  nlohmann::ordered_json conventions = nlohmann::ordered_json::object();
  for (const RunPoint& p : result.points)
    conventions[std::string(to_string(p.config.method))] =
        std::string(row_action_convention(p.config.method));
  meta["row_action_conventions"] = conventions;

  std::optional<Spectrum> spectrum;
  std::string rate_status = "computed";
  const bool wants_rates = std::any_of(result.points.begin(), result.points.end(), [](auto& p) {
    return p.config.method == Method::rrdr || p.config.method == Method::mrrdr;
  });
  if (!wants_rates) {
    rate_status = "not applicable";
  } else if (std::min(problem.a.rows(), problem.a.cols()) > SvdOptions{}.oracle_cap) {
    rate_status = "skipped: above SVD cap";
  } else {
    spectrum = spectrum_of(problem.a);
    meta["spectrum"] = {{"sigma_min", spectrum->sigma_min()},
                        {"sigma_max", spectrum->sigma_max()},
                        {"rank", spectrum->rank()}};
  }
  meta["rate_report"] = rate_status;

  nlohmann::ordered_json points = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const RunPoint& p = result.points[i];
    const PointSummary& s = result.summaries[i];
    nlohmann::ordered_json j;
    j["label"] = p.label;
    j["method"] = std::string(to_string(p.config.method));
    j["r"] = p.config.r;
    j["alpha"] = p.config.alpha;
    j["beta"] = p.config.beta;
    j["penalty"] = p.config.penalty;
    j["mandatory"] = p.mandatory;
    j["converged"] = s.converged;
    j["diverged"] = s.diverged;
    if (spectrum && (p.config.method == Method::rrdr || p.config.method == Method::mrrdr)) {
      try {
        const RateReport rep = rate_report(*spectrum, p.config.alpha, p.config.beta, p.config.r);
        j["rates"] = {{"mean_square_rate", rep.mean_square_rate},
                      {"mean_iterate_rate", rep.mean_iterate_rate},
                      {"delta_mean", rep.delta_mean},
                      {"delta_spread", rep.delta_spread},
                      {"gamma1", rep.linear.gamma1},
                      {"gamma2", rep.linear.gamma2},
                      {"q", rep.linear.q},
                      {"tau", rep.linear.tau},
                      {"beta_max_linear", rep.linear.beta_max},
                      {"beta_range_accel", {rep.accel.beta_lo, 1.0}},
                      {"alpha_max_accel", rep.accel.alpha_max}};
      } catch (const Error& e) {
        j["rates"] = std::string("unavailable: ") + e.what();
      }
    }
    points.push_back(std::move(j));
  }
  meta["points"] = points;

  std::ofstream out = open_output(files.metadata);
  out << meta.dump(2) << '\n';
  finish_output(out, files.metadata);
  return files;
}

}  // namespace rdr
