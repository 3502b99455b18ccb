#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rdr/linalg.hpp"

namespace rdr {

// A consistent system A x = b with its planted solution, the start vector and
// the projection of the start vector onto the solution set.
struct Problem {
  Matrix a;
  Vector b;
  Vector x_star;
  Vector x0;
  Vector x0_star;
  std::string label;
};

enum class ProjectionHint {
  // Compute x0_star with the SVD oracle.
  compute,
  // x_star is already the projection of x0 (x0 = 0 and x_star in Row(A), or A
  // has full column rank). Avoids the SVD for large matrices.
  x_star_is_projection,
};

// Builds a Problem with b = A x_star. Rejects matrices with zero rows,
// listing their indices.
Problem make_problem(Matrix a, Vector x_star, Vector x0, std::string label,
                     ProjectionHint hint = ProjectionHint::compute);

Matrix gen_gaussian(std::size_t m, std::size_t n, std::uint64_t seed);

// Gaussian matrix whose singular values are moved to
// sigma_min + (sigma_i - sigma_min) * s, with s chosen so that
// ||A||_F^2 / sigma_min^2 equals target_ratio.
Matrix gen_conditioned(std::size_t m, std::size_t n, double target_ratio, std::uint64_t seed);

struct PlantedSolution {
  Vector x_star;
  Vector b;
};

// x_star = A^T w / ||A^T w|| with Gaussian w; b = A x_star.
PlantedSolution gen_solution(const Matrix& a, std::uint64_t seed);

// Gaussian (or conditioned) system with x0 = 0, planted as above.
Problem gen_gaussian_problem(std::size_t m, std::size_t n, std::uint64_t seed);
Problem gen_conditioned_problem(std::size_t m, std::size_t n, double target_ratio,
                                std::uint64_t seed);
// Any matrix (e.g. loaded from disk) with a planted row-space solution, x0 = 0.
Problem planted_problem(Matrix a, std::uint64_t seed, std::string label);

struct MatrixMarketOptions {
  // A matrix with fewer rows than columns is replaced by its transpose.
  bool transpose_wide = true;
};

Matrix read_matrix_market(std::istream& in, const MatrixMarketOptions& options = {});
Matrix load_matrix_market(const std::filesystem::path& path,
                          const MatrixMarketOptions& options = {});
// Dense `array real general` output with 17 significant digits.
void write_matrix_market(std::ostream& out, const Matrix& a);
void save_matrix_market(const std::filesystem::path& path, const Matrix& a);

enum class Topology { line, cycle, geometric };

struct GraphSpec {
  Topology topology = Topology::line;
  std::size_t n = 0;
  // Connection radius for geometric graphs; <= 0 means log(n) / n.
  double radius = 0.0;
  std::uint64_t seed = 0;
};

struct Graph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // u < v
  double radius = 0.0;
  int attempts = 1;  // geometric graphs: samples drawn until connected
};

double default_geometric_radius(std::size_t n);
bool is_connected(const Graph& g);
// Geometric graphs are resampled (up to 50 attempts) until connected;
// throws "disconnected graph" otherwise.
Graph gen_graph(const GraphSpec& spec);

// One row per edge with +1 at u and -1 at v, b = 0, x0 = c and
// x0_star = mean(c) * 1.
Problem gen_ac_problem(const Graph& g, const Vector& c);
Problem gen_ac_problem(const GraphSpec& spec, const Vector& c);

// Three lines through the origin in R^2 at mutual 60 degrees whose
// deterministic 3-sets DR map 1/2 (I + R3 R2 R1) has a nonzero fixed point.
// The returned problem has x0 set to that fixed point.
Problem three_lines_failure_problem();

// Square n x n matrix B + 100 I (B Gaussian) with the last row replaced by the
// previous row plus 0.01 in every entry, then all rows normalized. Produces one
// tiny singular value. x_star is Gaussian, x0 = 0.
Problem gen_near_dependent_problem(std::size_t n, std::uint64_t seed);

}  // namespace rdr
