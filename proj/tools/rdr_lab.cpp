#include <chrono>
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "rdr/acceptance.hpp"
#include "rdr/error.hpp"
#include "rdr/harness.hpp"

namespace {

enum Exit { ok = 0, usage = 1, io = 2, failure = 3 };

int run_spec(const rdr::ExperimentSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  const rdr::Problem problem = rdr::build_problem(spec);
  const rdr::ExperimentResult result = rdr::run_experiment(spec, problem);
  const rdr::OutputFiles files = rdr::write_outputs(spec, problem, result);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s: %s (%zu x %zu), %zu points x %zu trials, %.2f s wall\n", spec.name.c_str(),
              problem.label.c_str(), problem.a.rows(), problem.a.cols(), result.points.size(),
              spec.trials, secs);
  for (const auto& s : result.summaries)
    std::printf("  %-40s converged %zu/%zu  diverged %zu  median iterations %.0f  median row actions %.0f\n",
                s.label.c_str(), s.converged, spec.trials, s.diverged, s.median_iterations,
                s.median_row_actions);
  std::printf("  wrote %s\n", files.trace.string().c_str());
  if (result.mandatory_divergence) {
    std::fprintf(stderr, "%s: divergence in a mandatory run\n", spec.name.c_str());
    return failure;
  }
  return ok;
}

int print_rates(const rdr::ExperimentSpec& spec) {
  const rdr::Problem problem = rdr::build_problem(spec);
  if (std::min(problem.a.rows(), problem.a.cols()) > rdr::SvdOptions{}.oracle_cap) {
    std::fprintf(stderr, "rate report unavailable: matrix above the SVD cap\n");
    return failure;
  }
  const rdr::Spectrum s = rdr::spectrum_of(problem.a);
  std::printf("%s (%zu x %zu): sigma_min %.6g  sigma_max %.6g  ||A||_F^2 %.6g  rank %zu\n",
              problem.label.c_str(), problem.a.rows(), problem.a.cols(), s.sigma_min(),
              s.sigma_max(), s.frob_sq, s.rank());
  for (const rdr::RunPoint& p : rdr::expand_grid(spec)) {
    if (p.config.method != rdr::Method::rrdr && p.config.method != rdr::Method::mrrdr) continue;
    std::printf("%s\n", p.label.c_str());
    try {
      const rdr::RateReport r = rdr::rate_report(s, p.config.alpha, p.config.beta, p.config.r);
      std::printf("  mean-square rate   %.12g\n", r.mean_square_rate);
      std::printf("  mean-iterate rate  %.12g\n", r.mean_iterate_rate);
      std::printf("  delta1 %.12g  delta2 %.12g\n", r.delta_mean, r.delta_spread);
      std::printf("  gamma1 %.12g  gamma2 %.12g  q %.12g  tau %.12g  (%s)\n", r.linear.gamma1,
                  r.linear.gamma2, r.linear.q, r.linear.tau,
                  r.linear.admissible() ? "linear region" : "outside linear region");
      std::printf("  beta_max (linear) %.12g\n", r.linear.beta_max);
      std::printf("  accelerated: alpha < %.12g, beta in (%.12g, 1)\n", r.accel.alpha_max,
                  r.accel.beta_lo);
    } catch (const rdr::Error& e) {
      std::printf("  unavailable: %s\n", e.what());
    }
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rdr-lab: randomized r-sets Douglas-Rachford experiments"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "run an experiment config");
  run_cmd->add_option("config", config_path, "experiment config file")->required();

  std::string preset_name, out_dir;
  double scale = 1.0;
  std::uint64_t seed = 20240601;
  auto* preset_cmd = app.add_subcommand("preset", "run a named figure preset");
  preset_cmd->add_option("name", preset_name, "preset name")->required();
  preset_cmd->add_option("--scale", scale, "dimension multiplier")->check(CLI::PositiveNumber);
  preset_cmd->add_option("--seed", seed, "master seed");
  preset_cmd->add_option("--out", out_dir, "output directory");

  auto* rates_cmd = app.add_subcommand("rates", "print the theory rate report for a config");
  rates_cmd->add_option("config", config_path, "experiment config file")->required();

  auto* check_cmd = app.add_subcommand("check", "run the acceptance suite");
  auto* list_cmd = app.add_subcommand("presets", "list figure presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    if (*run_cmd) return run_spec(rdr::load_config(config_path));
    if (*rates_cmd) return print_rates(rdr::load_config(config_path));
    if (*list_cmd) {
      for (const rdr::Preset& p : rdr::figure_presets()) {
        std::printf("%-16s %s\n", p.name.c_str(), p.description.c_str());
        for (const auto& e : p.experiments) {
          std::string budget = e.stop.max_row_actions == rdr::kUnbounded
                                   ? std::string("unbounded")
                                   : std::to_string(e.stop.max_row_actions);
          std::printf("%-16s   budget %s row actions per trial, %zu trials\n", "",
                      budget.c_str(), e.trials);
        }
      }
      return ok;
    }
    if (*preset_cmd) {
      auto preset = rdr::find_preset(preset_name, scale, seed);
      if (!preset) {
        std::fprintf(stderr, "unknown preset '%s'\n", preset_name.c_str());
        return usage;
      }
      int status = ok;
      for (rdr::ExperimentSpec& spec : preset->experiments) {
        spec.out = out_dir.empty() ? std::filesystem::path("results") / preset->name
                                   : std::filesystem::path(out_dir);
        status = std::max(status, run_spec(spec));
      }
      return status;
    }
    if (*check_cmd) {
      int failed = 0;
      rdr::run_acceptance([&](const rdr::CriterionResult& r) {
        std::printf("%s\n", rdr::format_result(r).c_str());
        std::fflush(stdout);
        if (!r.passed) ++failed;
      });
      std::printf("%d of 12 criteria failed\n", failed);
      return failed == 0 ? ok : failure;
    }
  } catch (const rdr::IoError& e) {
    std::fprintf(stderr, "rdr-lab: %s\n", e.what());
    return io;
  } catch (const rdr::ParseError& e) {
    std::fprintf(stderr, "rdr-lab: %s\n", e.what());
    return usage;
  } catch (const rdr::Error& e) {
    std::fprintf(stderr, "rdr-lab: %s\n", e.what());
    return usage;
  }
  return usage;
}
