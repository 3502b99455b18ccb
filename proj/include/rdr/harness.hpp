#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdr/problems.hpp"
#include "rdr/solvers.hpp"
#include "rdr/theory.hpp"

namespace rdr {

enum class ProblemSource { synthetic, conditioned, mtx, ac_graph, three_lines, near_dependent };

std::string_view to_string(ProblemSource s);

struct ProblemSpec {
  ProblemSource source = ProblemSource::synthetic;
  std::size_t rows = 100;
  std::size_t cols = 50;
  double ratio = 100.0;  // conditioned: ||A||_F^2 / sigma_min^2
  std::filesystem::path path;
  Topology topology = Topology::line;
  std::size_t nodes = 50;
  double radius = 0.0;  // <= 0: log(n)/n
  Vector values;        // AC start values; empty: uniform on [0, 1)
};

// One [method] section; each list-valued key is a grid axis.
struct MethodSpec {
  Method method = Method::rrdr;
  std::string label;  // empty: generated from the parameters
  std::vector<int> r{2};
  Vector alpha{0.5};
  Vector beta{0.0};
  Vector penalty{1.0};
  // Divergence in a mandatory method is a run failure (exit status 3).
  bool mandatory = true;
};

struct ExperimentSpec {
  std::string name = "experiment";
  ProblemSpec problem;
  std::vector<MethodSpec> methods;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  StopRule stop{1e-12, 100000, kUnbounded};
  std::uint64_t trace_every = 0;
  // Emit dir_ratio and vmin_overlap (needs the SVD of A).
  bool direction_metrics = false;
  std::filesystem::path out = "results";
  std::size_t threads = 0;  // 0: hardware concurrency
};

// A fully expanded grid point.
struct RunPoint {
  std::string label;
  SolverConfig config;
  bool mandatory = true;
};

// Parses the INI-style experiment format described in the README. Syntax
// errors throw ParseError with the line; invalid values throw
// "invalid parameter: <key>" with the line.
ExperimentSpec parse_config(std::string_view text);
ExperimentSpec load_config(const std::filesystem::path& path);

// Cartesian product of every method's grid axes, in section order then
// r, alpha, beta, penalty order. Every point is validated.
std::vector<RunPoint> expand_grid(const ExperimentSpec& spec);

// Problem instance for an experiment; generated from split_seed(seed, 0).
Problem build_problem(const ExperimentSpec& spec);

struct DirectionMetrics {
  double dir_ratio = 0.0;     // ||A(x - x*)|| / ||x - x*||
  double vmin_overlap = 0.0;  // |<(x - x*)/||x - x*||, v_min>|
  bool defined = false;       // false when x = x*
};

DirectionMetrics compute_direction_metrics(std::span<const double> x, const Problem& problem,
                                           std::span<const double> v_min);

struct TrialResult {
  std::size_t point = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  Trace trace;
};

struct PointSummary {
  std::string label;
  std::size_t converged = 0;
  std::size_t diverged = 0;
  double median_iterations = 0.0;
  double mean_iterations = 0.0;
  double median_row_actions = 0.0;
  double mean_row_actions = 0.0;
};

struct ExperimentResult {
  std::string name;
  std::vector<RunPoint> points;
  std::vector<TrialResult> trials;  // ordered by (point, trial)
  std::vector<PointSummary> summaries;
  bool mandatory_divergence = false;
};

// Seed of trial t of grid point p.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t point, std::size_t trial);

// Runs every (point, trial) pair concurrently; results are in deterministic order.
ExperimentResult run_experiment(const ExperimentSpec& spec);
ExperimentResult run_experiment(const ExperimentSpec& spec, const Problem& problem);

struct OutputFiles {
  std::filesystem::path trace, summary, aggregate, metadata;
};

// Writes <out>/<name>_trace.csv, _summary.csv, _aggregate.csv and
// _metadata.txt; the metadata carries rate reports when the SVD cap permits.
// Throws IoError naming the path.
OutputFiles write_outputs(const ExperimentSpec& spec, const Problem& problem,
                          const ExperimentResult& result);

inline constexpr std::string_view kTraceHeader =
    "experiment,solver,trial,k,row_actions,rse,residual_norm2,dir_ratio,vmin_overlap";
inline constexpr std::string_view kSummaryHeader =
    "experiment,solver,trial,seed,iterations,row_actions,rse,status";
inline constexpr std::string_view kAggregateHeader =
    "experiment,solver,trials,converged,diverged,median_iterations,mean_iterations,"
    "median_row_actions,mean_row_actions";

std::string format_double(double v);

struct Preset {
  std::string name;
  std::string description;
  std::vector<ExperimentSpec> experiments;
};

// Built-in desk-scale experiments. `scale` multiplies the
// problem dimensions; `seed` replaces the default seed.
std::vector<Preset> figure_presets(double scale = 1.0, std::uint64_t seed = 20240601);
std::optional<Preset> find_preset(std::string_view name, double scale = 1.0,
                                  std::uint64_t seed = 20240601);

}  // namespace rdr
