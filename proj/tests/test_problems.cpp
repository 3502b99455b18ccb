#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "doctest.h"
#include "rdr/error.hpp"
#include "rdr/problems.hpp"
#include "rdr/sampling.hpp"

using namespace rdr;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

Matrix parse(const std::string& text, MatrixMarketOptions opts = {}) {
  std::istringstream in(text);
  return read_matrix_market(in, opts);
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("rdr_test_" + name);
}

}  // namespace

TEST_CASE("make_problem plants b = A x* and projects the start") {
  const Matrix a(2, 3, {1, 0, 1, 0, 1, 1});
  const Problem p = make_problem(a, Vector{1, 2, 3}, Vector{5, 5, 5}, "tiny");
  CHECK(p.b == Vector{4, 5});
  // x0* solves the system and differs from x0 by a row-space vector
  const Vector r = p.a.multiply(p.x0_star);
  CHECK(r[0] == doctest::Approx(4));
  CHECK(r[1] == doctest::Approx(5));
  const Vector d = subtract(p.x0_star, p.x0);
  const Vector null{1, 1, -1};
  CHECK(std::abs(dot(d, null)) < 1e-12);
  CHECK(p.label == "tiny");
}

TEST_CASE("make_problem names zero rows") {
  const Matrix a(4, 2, {1, 0, 0, 0, 0, 1, 0, 0});
  CHECK(message_of([&] { make_problem(a, Vector{1, 1}, Vector{0, 0}, "z"); }) ==
        "zero rows: 1,3");
}

TEST_CASE("gaussian matrices are seeded and standard normal") {
  const Matrix a = gen_gaussian(200, 50, 3), b = gen_gaussian(200, 50, 3);
  CHECK(a.entries() == b.entries());
  CHECK(gen_gaussian(200, 50, 4).entries() != a.entries());
  double s = 0, ss = 0;
  for (double v : a.entries()) {
    s += v;
    ss += v * v;
  }
  const double n = 10000;
  CHECK(std::abs(s / n) < 4 / std::sqrt(n));
  CHECK(std::abs(ss / n - 1) < 4 * std::sqrt(2 / n));
}

TEST_CASE("conditioned matrices hit the target ratio by shifting singular gaps") {
  for (double target : {20.0, 100.0, 1000.0}) {
    const Matrix a = gen_conditioned(50, 20, target, 9);
    const SvdResult s = svd_small(a);
    const double smin = s.singular_values.back();
    CHECK(a.frob_sq() / (smin * smin) == doctest::Approx(target).epsilon(1e-10));

    const SvdResult g = svd_small(gen_gaussian(50, 20, 9));
    const double gmin = g.singular_values.back();
    CHECK(smin == doctest::Approx(gmin).epsilon(1e-10));
    const double scale = (s.singular_values[0] - smin) / (g.singular_values[0] - gmin);
    for (std::size_t i = 1; i + 1 < 20; ++i)
      CHECK((s.singular_values[i] - smin) ==
            doctest::Approx(scale * (g.singular_values[i] - gmin)).epsilon(1e-9));
  }
  CHECK(message_of([] { gen_conditioned(50, 20, 10.0, 1); }) == "infeasible spectrum target");
  CHECK(message_of([] { gen_conditioned(10, 20, 100.0, 1); }) == "infeasible spectrum target");
}

TEST_CASE("planted solutions are unit vectors in the row space") {
  const Matrix wide = gen_gaussian(4, 9, 21);
  const PlantedSolution sol = gen_solution(wide, 22);
  CHECK(norm(sol.x_star) == doctest::Approx(1.0));
  const Vector ax = wide.multiply(sol.x_star);
  for (std::size_t i = 0; i < 4; ++i) CHECK(sol.b[i] == doctest::Approx(ax[i]));
  // the least-norm solution of A x = b is x* itself
  const Vector least = projected_solution(wide, sol.b, Vector(9, 0.0));
  CHECK(norm(subtract(least, sol.x_star)) < 1e-12);
  CHECK(message_of([] { gen_solution(Matrix(3, 2), 1); }) == "degenerate matrix");
}

TEST_CASE("generated problems start at zero with the planted projection") {
  const Problem p = gen_gaussian_problem(30, 10, 5);
  CHECK(p.x0 == Vector(10, 0.0));
  CHECK(p.x0_star == p.x_star);
  CHECK(norm(subtract(projected_solution(p.a, p.b, p.x0), p.x0_star)) < 1e-12);
  const Problem q = gen_gaussian_problem(30, 10, 5);
  CHECK(q.b == p.b);
  const Problem c = gen_conditioned_problem(40, 10, 50.0, 5);
  const SpectralScalars s = spectral_scalars(c.a);
  CHECK(s.frob_sq / (s.sigma_min * s.sigma_min) == doctest::Approx(50).epsilon(1e-10));
}

TEST_CASE("matrix market coordinate files") {
  const Matrix a = parse(
      "%%MatrixMarket matrix coordinate real general\n"
      "% comment\n"
      "\n"
      "3 2 4\n"
      "1 1 1.5\n"
      "3 2 -2\n"
      "2 1 4e0\n"
      "1 1 0.5\n");
  CHECK(a.rows() == 3);
  CHECK(a.cols() == 2);
  CHECK(a(0, 0) == 2.0);
  CHECK(a(1, 0) == 4.0);
  CHECK(a(2, 1) == -2.0);
  CHECK(a(0, 1) == 0.0);

  const Matrix s = parse(
      "%%MatrixMarket matrix coordinate integer symmetric\n"
      "3 3 3\n1 1 1\n3 1 7\n2 2 5\n");
  CHECK(s(0, 2) == 7);
  CHECK(s(2, 0) == 7);
  CHECK(s(1, 1) == 5);
}

TEST_CASE("matrix market array files are column-major") {
  const Matrix a = parse("%%MatrixMarket matrix array real general\n3 2\n1\n2\n3\n4\n5\n6\n");
  CHECK(a(0, 0) == 1);
  CHECK(a(2, 0) == 3);
  CHECK(a(0, 1) == 4);
  CHECK(a(2, 1) == 6);
  const Matrix s = parse("%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n3\n");
  CHECK(s(0, 1) == 2);
  CHECK(s(1, 0) == 2);
  CHECK(s(1, 1) == 3);
}

TEST_CASE("matrix market rejects unsupported or malformed input") {
  CHECK(message_of([] { parse("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 1\n"); })
            .rfind("unsupported format: field", 0) == 0);
  CHECK(message_of([] { parse("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n"); })
            .rfind("unsupported format: field", 0) == 0);
  CHECK(message_of([] {
          parse("%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 1\n");
        }).rfind("unsupported format: symmetry", 0) == 0);
  CHECK(message_of([] { parse("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n9 1 1\n"); }) ==
        "line 4: index out of range");
  CHECK(message_of([] { parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 x\n"); }) ==
        "line 3: malformed entry");
  CHECK(message_of([] { parse("%%MatrixMarket matrix array real general\n1 1\n1\n2\n"); }) ==
        "line 4: trailing data");
  CHECK(message_of([] { parse("not a header\n"); }) == "line 1: malformed Matrix Market header");
  CHECK(message_of([] { parse("%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1\n"); })
            .rfind("line 3: expected 3 entries", 0) == 0);
}

TEST_CASE("wide matrix market inputs are transposed") {
  // Same shape as a 768 x 2240 SuiteSparse matrix.
  std::ostringstream text;
  text << "%%MatrixMarket matrix coordinate real general\n768 2240 3\n";
  text << "1 1 1\n768 2240 2\n5 100 3\n";
  const Matrix a = parse(text.str());
  CHECK(a.rows() == 2240);
  CHECK(a.cols() == 768);
  CHECK(a(2239, 767) == 2);
  CHECK(a(99, 4) == 3);
  MatrixMarketOptions keep;
  keep.transpose_wide = false;
  const Matrix b = parse(text.str(), keep);
  CHECK(b.rows() == 768);
  CHECK(b(4, 99) == 3);
}

TEST_CASE("matrix market round trip is exact") {
  const Matrix a = gen_gaussian(7, 4, 31);
  const auto path = temp_path("roundtrip.mtx");
  save_matrix_market(path, a);
  const Matrix b = load_matrix_market(path);
  CHECK(a.entries() == b.entries());
  std::filesystem::remove(path);
}

TEST_CASE("matrix market load errors name the path") {
  const auto missing = temp_path("does_not_exist.mtx");
  const std::string msg = message_of([&] { load_matrix_market(missing); });
  CHECK(msg.find(missing.string()) != std::string::npos);
  CHECK_THROWS_AS(load_matrix_market(missing), IoError);

  const auto bad = temp_path("bad.mtx");
  {
    std::ofstream out(bad);
    out << "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 q 1\n";
  }
  const std::string bad_msg = message_of([&] { load_matrix_market(bad); });
  CHECK(bad_msg == bad.string() + ": line 3: malformed entry");
  std::filesystem::remove(bad);
}

TEST_CASE("line and cycle graphs") {
  const Graph line = gen_graph({Topology::line, 6, 0.0, 0});
  CHECK(line.edges.size() == 5);
  CHECK(is_connected(line));
  const Graph cycle = gen_graph({Topology::cycle, 6, 0.0, 0});
  CHECK(cycle.edges.size() == 6);
  for (auto [u, v] : cycle.edges) CHECK(u < v);
  Graph split = line;
  split.edges.erase(split.edges.begin() + 2);
  CHECK_FALSE(is_connected(split));
}

TEST_CASE("geometric graphs connect nodes within the radius") {
  CHECK(default_geometric_radius(50) == doctest::Approx(std::log(50.0) / 50.0));
  const Graph full = gen_graph({Topology::geometric, 12, 1.5, 4});
  CHECK(full.edges.size() == 66);
  CHECK(full.attempts == 1);
  const Graph g = gen_graph({Topology::geometric, 40, 0.45, 4});
  CHECK(is_connected(g));
  CHECK(g.radius == 0.45);
  const Graph again = gen_graph({Topology::geometric, 40, 0.45, 4});
  CHECK(again.edges == g.edges);
}

TEST_CASE("geometric graphs at the log(n)/n radius are disconnected for n = 50") {
  CHECK(message_of([] { gen_graph({Topology::geometric, 50, 0.0, 1}); }) == "disconnected graph");
}

TEST_CASE("average consensus systems") {
  const Graph g = gen_graph({Topology::cycle, 5, 0.0, 0});
  const Vector c{1, 2, 3, 4, 10};
  const Problem p = gen_ac_problem(g, c);
  CHECK(p.a.rows() == 5);
  CHECK(p.b == Vector(5, 0.0));
  const Vector ones = p.a.multiply(Vector(5, 1.0));
  for (double v : ones) CHECK(v == 0.0);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(p.a.row_norms_sq()[i] == 2.0);
    CHECK(p.x0_star[i] == doctest::Approx(4.0));
  }
  CHECK(p.x0 == c);
  // the mean is the projection of c onto span{1}
  CHECK(norm(subtract(projected_solution(p.a, p.b, p.x0), p.x0_star)) < 1e-12);
  CHECK(message_of([&] { gen_ac_problem(g, Vector{1, 2}); }).rfind("invalid graph", 0) == 0);
}

TEST_CASE("three-lines instance has a stalled deterministic start") {
  const Problem p = three_lines_failure_problem();
  CHECK(p.a.rows() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(p.a.row_norms_sq()[i] == doctest::Approx(1.0));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      CHECK(std::abs(dot(p.a.row(i), p.a.row(j))) == doctest::Approx(0.5));
  Vector z = p.x0;
  for (std::size_t i = 0; i < 3; ++i) z = reflect_row(z, p.a.row(i), p.b[i]);
  for (std::size_t j = 0; j < 2; ++j) CHECK(0.5 * (p.x0[j] + z[j]) == doctest::Approx(p.x0[j]));
  CHECK(p.x0_star == Vector{0, 0});
  CHECK(norm(p.x0) > 1.0);
}

TEST_CASE("near-dependent instance has one tiny singular value") {
  const Problem p = gen_near_dependent_problem(60, 3);
  for (std::size_t i = 0; i < 60; ++i) CHECK(p.a.row_norms_sq()[i] == doctest::Approx(1.0));
  const SvdResult s = svd_small(p.a);
  CHECK(s.singular_values[59] < 1e-3);
  CHECK(s.singular_values[58] > 0.3);
  CHECK(p.x0 == Vector(60, 0.0));
  CHECK(norm(subtract(p.a.multiply(p.x_star), p.b)) < 1e-12);
}
