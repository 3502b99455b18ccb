#include <algorithm>
#include <cmath>

#include "rdr/harness.hpp"

namespace rdr {
namespace {

std::size_t scaled(std::size_t base, double scale) {
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(base * scale)));
}

MethodSpec method(Method m, std::vector<int> r, Vector alpha, Vector beta = {0.0}) {
  MethodSpec s;
  s.method = m;
  s.r = std::move(r);
  s.alpha = std::move(alpha);
  s.beta = std::move(beta);
  return s;
}

MethodSpec plain(Method m) {
  MethodSpec s;
  s.method = m;
  return s;
}

Vector tenths(int lo, int hi) {
  Vector v;
  for (int i = lo; i <= hi; ++i) v.push_back(i / 10.0);
  return v;
}

ExperimentSpec gaussian(const std::string& name, std::size_t m, std::size_t n, double scale,
                        std::uint64_t seed) {
  ExperimentSpec e;
  e.name = name;
  e.problem.source = ProblemSource::synthetic;
  e.problem.rows = scaled(m, scale);
  e.problem.cols = std::min(e.problem.rows, scaled(n, scale));
  e.seed = seed;
  e.trials = 10;
  return e;
}

}  // namespace

std::vector<Preset> figure_presets(double scale, std::uint64_t seed) {
  std::vector<Preset> out;

  {
    ExperimentSpec e = gaussian("param-sweep", 200, 50, scale, seed);
    MethodSpec m = method(Method::mrrdr, {2, 3}, tenths(1, 9), tenths(0, 9));
    m.mandatory = false;  // large beta is expected to diverge for some alpha
    e.methods = {m};
    e.stop = {1e-12, 200000, kUnbounded};
    out.push_back({"fig-param-sweep",
                   "mRrDR iteration counts over alpha x beta in (0.1..0.9) x (0..0.9), r in {2,3}",
                   {e}});
  }
  {
    ExperimentSpec e = gaussian("r-sweep", 500, 100, scale, seed);
    std::vector<int> rs;
    for (int r = 1; r <= 20; ++r) rs.push_back(r);
    e.methods = {method(Method::rrdr, rs, {0.5})};
    e.stop = {1e-12, 300000, kUnbounded};
    e.trace_every = 1000;
    out.push_back({"fig-r-sweep", "RrDR row-action traces for r = 1..20, alpha = 0.5", {e}});
  }
  {
    ExperimentSpec e = gaussian("vs-cyclic", 500, 100, scale, seed);
    e.methods = {method(Method::mrrdr, {2}, {0.5}, {0.4}), method(Method::rrdr, {2}, {0.5}),
                 method(Method::cyclic_dr, {2}, {0.5})};
    e.stop = {1e-12, 300000, kUnbounded};
    e.trace_every = 1000;
    out.push_back({"fig-vs-cyclic", "mRrDR and RrDR against cyclic two-reflection DR", {e}});
  }
  {
    ExperimentSpec e = gaussian("baselines", 500, 100, scale, seed);
    MethodSpec admm = plain(Method::rp_admm);
    admm.penalty = {1.0};
    e.methods = {plain(Method::rk), plain(Method::rek), plain(Method::rgs), admm,
                 method(Method::mrrdr, {2}, {0.5}, {0.4})};
    e.stop = {1e-12, 300000, kUnbounded};
    e.trace_every = 1000;
    out.push_back({"fig-baselines", "RK, REK, RGS, RP-ADMM and mRrDR(2, 0.5, 0.4)", {e}});
  }
  {
    ExperimentSpec e;
    e.name = "direction";
    e.problem.source = ProblemSource::near_dependent;
    e.problem.rows = scaled(500, scale);
    e.problem.cols = e.problem.rows;
    e.seed = seed;
    e.trials = 10;
    e.methods = {method(Method::rrdr, {1, 2, 3, 4, 10, 20}, {0.5})};
    e.stop = {1e-12, 150000, kUnbounded};
    e.trace_every = 1000;
    e.direction_metrics = true;
    out.push_back({"fig-direction",
                   "error direction diagnostics on a nearly dependent square system",
                   {e}});
  }
  {
    ExperimentSpec e;
    e.name = "failure";
    e.problem.source = ProblemSource::three_lines;
    e.seed = seed;
    e.trials = 10;
    e.methods = {method(Method::det_rsets_dr, {3}, {0.5}), method(Method::rrdr, {3}, {0.5})};
    e.stop = {1e-12, 10000, kUnbounded};
    e.trace_every = 30;
    out.push_back({"fig-failure",
                   "deterministic 3-sets DR stalls at a fixed point; RrDR converges",
                   {e}});
  }
  return out;
}

std::optional<Preset> find_preset(std::string_view name, double scale, std::uint64_t seed) {
  for (Preset& p : figure_presets(scale, seed))
    if (p.name == name) return std::move(p);
  return std::nullopt;
}

}  // namespace rdr
