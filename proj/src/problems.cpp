#include "rdr/problems.hpp"

#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "rdr/error.hpp"
#include "rdr/sampling.hpp"

namespace rdr {

Problem make_problem(Matrix a, Vector x_star, Vector x0, std::string label,
                     ProjectionHint hint) {
  if (!a.zero_rows().empty()) {
    std::string rows;
    for (std::size_t i : a.zero_rows()) rows += (rows.empty() ? "" : ",") + std::to_string(i);
    throw Error("zero rows: " + rows);
  }
  if (x_star.size() != a.cols() || x0.size() != a.cols())
    throw Error("invalid matrix: dimension mismatch");
  Problem p;
  p.b = a.multiply(x_star);
  p.x0_star = hint == ProjectionHint::compute ? projected_solution(a, p.b, x0) : x_star;
  p.a = std::move(a);
  p.x_star = std::move(x_star);
  p.x0 = std::move(x0);
  p.label = std::move(label);
  return p;
}

Matrix gen_gaussian(std::size_t m, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> e(m * n);
  for (double& v : e) v = rng.normal();
  return Matrix(m, n, std::move(e));
}

Matrix gen_conditioned(std::size_t m, std::size_t n, double target_ratio, std::uint64_t seed) {
  if (m < n || !(target_ratio >= static_cast<double>(n)))
    throw Error("infeasible spectrum target");
  const Matrix g = gen_gaussian(m, n, seed);
  SvdOptions opts;
  opts.full_u = false;
  const SvdResult svd = svd_small(g, opts);
  if (svd.rank < n) throw Error("infeasible spectrum target");

  // sum_i (s_min + s d_i)^2 = R s_min^2 is a quadratic in s.
  const double smin = svd.singular_values.back();
  double d1 = 0.0, d2 = 0.0;
  for (double s : svd.singular_values) {
    d1 += s - smin;
    d2 += (s - smin) * (s - smin);
  }
  const double excess = (target_ratio - static_cast<double>(n)) * smin * smin;
  double scale = 0.0;
  if (excess > 0.0) {
    if (d2 == 0.0) throw Error("infeasible spectrum target");
    scale = (-smin * d1 + std::sqrt(smin * smin * d1 * d1 + d2 * excess)) / d2;
  }

  Vector shaped(n);
  for (std::size_t k = 0; k < n; ++k)
    shaped[k] = smin + (svd.singular_values[k] - smin) * scale;

  // A' = U diag(shaped) V^T
  std::vector<double> e(m * n, 0.0);
  const auto& u = svd.u.entries();
  const auto& v = svd.v.entries();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double c = u[i * n + k] * shaped[k];
      double* row = e.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) row[j] += c * v[j * n + k];
    }
  }
  return Matrix(m, n, std::move(e));
}

PlantedSolution gen_solution(const Matrix& a, std::uint64_t seed) {
  Rng rng(seed);
  for (int attempt = 0; attempt <= 10; ++attempt) {
    Vector w(a.rows());
    for (double& v : w) v = rng.normal();
    Vector x = a.multiply_transpose(w);
    const double nrm = norm(x);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) continue;
    for (double& v : x) v /= nrm;
    PlantedSolution out;
    out.b = a.multiply(x);
    out.x_star = std::move(x);
    return out;
  }
  throw Error("degenerate matrix");
}

Problem planted_problem(Matrix a, std::uint64_t seed, std::string label) {
  PlantedSolution sol = gen_solution(a, seed);
  Vector x0(a.cols(), 0.0);
  return make_problem(std::move(a), std::move(sol.x_star), std::move(x0), std::move(label),
                      ProjectionHint::x_star_is_projection);
}

Problem gen_gaussian_problem(std::size_t m, std::size_t n, std::uint64_t seed) {
  return planted_problem(gen_gaussian(m, n, split_seed(seed, 0)), split_seed(seed, 1),
                         "gaussian " + std::to_string(m) + "x" + std::to_string(n));
}

Problem gen_conditioned_problem(std::size_t m, std::size_t n, double target_ratio,
                                std::uint64_t seed) {
  return planted_problem(gen_conditioned(m, n, target_ratio, split_seed(seed, 0)),
                         split_seed(seed, 1),
                         "conditioned " + std::to_string(m) + "x" + std::to_string(n));
}

double default_geometric_radius(std::size_t n) {
  return std::log(static_cast<double>(n)) / static_cast<double>(n);
}

bool is_connected(const Graph& g) {
  if (g.n == 0) return false;
  std::vector<std::vector<std::size_t>> adj(g.n);
  for (auto [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<char> seen(g.n, 0);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == g.n;
}

Graph gen_graph(const GraphSpec& spec) {
  if (spec.n < 2) throw Error("invalid graph: need at least 2 nodes");
  Graph g;
  g.n = spec.n;
  switch (spec.topology) {
    case Topology::line:
      for (std::size_t u = 0; u + 1 < spec.n; ++u) g.edges.emplace_back(u, u + 1);
      return g;
    case Topology::cycle:
      for (std::size_t u = 0; u + 1 < spec.n; ++u) g.edges.emplace_back(u, u + 1);
      if (spec.n > 2) g.edges.emplace_back(0, spec.n - 1);
      return g;
    case Topology::geometric:
      break;
  }
  g.radius = spec.radius > 0.0 ? spec.radius : default_geometric_radius(spec.n);
  const double r2 = g.radius * g.radius;
  constexpr int kMaxAttempts = 50;
  for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
    Rng rng(split_seed(spec.seed, static_cast<std::uint64_t>(attempt)));
    std::vector<double> px(spec.n), py(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
      px[i] = rng.uniform();
      py[i] = rng.uniform();
    }
    g.edges.clear();
    for (std::size_t u = 0; u < spec.n; ++u)
      for (std::size_t v = u + 1; v < spec.n; ++v) {
        const double dx = px[u] - px[v];
        const double dy = py[u] - py[v];
        if (dx * dx + dy * dy <= r2) g.edges.emplace_back(u, v);
      }
    g.attempts = attempt;
    if (is_connected(g)) return g;
  }
  throw Error("disconnected graph");
}

Problem gen_ac_problem(const Graph& g, const Vector& c) {
  if (c.size() != g.n) throw Error("invalid graph: value count mismatch");
  if (!is_connected(g)) throw Error("disconnected graph");
  std::vector<double> e(g.edges.size() * g.n, 0.0);
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    e[k * g.n + g.edges[k].first] = 1.0;
    e[k * g.n + g.edges[k].second] = -1.0;
  }
  Problem p;
  p.a = Matrix(g.edges.size(), g.n, std::move(e));
  p.b.assign(g.edges.size(), 0.0);
  const double mean = std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(g.n);
  p.x_star.assign(g.n, mean);
  p.x0_star = p.x_star;
  p.x0 = c;
  p.label = "average consensus n=" + std::to_string(g.n);
  return p;
}

Problem gen_ac_problem(const GraphSpec& spec, const Vector& c) {
  return gen_ac_problem(gen_graph(spec), c);
}

Problem three_lines_failure_problem() {
  const double h = std::sqrt(3.0) / 2.0;
  Matrix a(3, 2, {1.0, 0.0, 0.5, -h, 0.5, h});
  // R3 R2 R1 is the reflection across the line at 30 degrees; every point on
  // that line is fixed by 1/2 (I + R3 R2 R1).
  Vector start{-1.3, -1.3 / std::sqrt(3.0)};
  Problem p = make_problem(std::move(a), Vector{0.0, 0.0}, start, "three lines",
                           ProjectionHint::x_star_is_projection);
  return p;
}

Problem gen_near_dependent_problem(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw Error("invalid matrix: need n >= 2");
  Rng rng(split_seed(seed, 0));
  std::vector<double> e(n * n);
  for (double& v : e) v = rng.normal();
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] += 100.0;
  for (std::size_t j = 0; j < n; ++j) e[(n - 1) * n + j] = e[(n - 2) * n + j] + 0.01;
  for (std::size_t i = 0; i < n; ++i) {
    const double nrm = norm(std::span<const double>(e.data() + i * n, n));
    for (std::size_t j = 0; j < n; ++j) e[i * n + j] /= nrm;
  }
  Rng xrng(split_seed(seed, 1));
  Vector x_star(n);
  for (double& v : x_star) v = xrng.normal();
  return make_problem(Matrix(n, n, std::move(e)), std::move(x_star), Vector(n, 0.0),
                      "near-dependent " + std::to_string(n) + "x" + std::to_string(n),
                      ProjectionHint::x_star_is_projection);
}

}  // namespace rdr
