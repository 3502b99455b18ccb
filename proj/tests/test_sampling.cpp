#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "doctest.h"
#include "rdr/error.hpp"
#include "rdr/sampling.hpp"

using namespace rdr;

namespace {

double chi_square(const std::vector<double>& observed, const std::vector<double>& expected) {
  double x = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i)
    if (expected[i] > 0) x += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
  return x;
}

// Upper 0.1% points of the chi-square distribution.
double chi_square_crit(int df) {
  switch (df) {
    case 4: return 18.467;
    case 5: return 20.515;
    case 6: return 22.458;
    case 9: return 27.877;
    case 19: return 43.820;
  }
  return 0.0;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("splitmix64 reference outputs") {
  std::uint64_t state = 0;
  CHECK(splitmix64(state) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64(state) == 0x6e789e6aa1b965f4ULL);
  CHECK(splitmix64(state) == 0x06c45d188009454fULL);
}

TEST_CASE("xoshiro256** stream seeded by splitmix64") {
  Rng rng(42);
  CHECK(rng.next_u64() == 0x15780b2e0c2ec716ULL);
  CHECK(rng.next_u64() == 0x6104d9866d113a7eULL);
  CHECK(rng.next_u64() == 0xae17533239e499a1ULL);
  CHECK(rng.next_u64() == 0xecb8ad4703b360a1ULL);
  CHECK(rng.next_u64() == 0xfde6dc7fe2ec5e64ULL);
}

TEST_CASE("streams are reproducible and children are independent seeds") {
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c = Rng(7).child(3);
  Rng d(split_seed(7, 3));
  for (int i = 0; i < 10; ++i) CHECK(c.next_u64() == d.next_u64());
  CHECK(split_seed(7, 3) != split_seed(7, 4));
  CHECK(split_seed(7, 0) != split_seed(8, 0));
  CHECK(Rng(9).seed() == 9);
}

TEST_CASE("uniform draws lie in [0, 1) and are evenly spread") {
  Rng rng(11);
  const int n = 100000;
  std::vector<double> bins(10, 0.0);
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    bins[static_cast<int>(u * 10)] += 1;
  }
  CHECK(chi_square(bins, std::vector<double>(10, n / 10.0)) < chi_square_crit(9));
}

TEST_CASE("normal draws match the Gaussian distribution") {
  Rng rng(12);
  const int n = 200000;
  const double edges[] = {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};
  std::vector<double> obs(8, 0.0), exp(8, 0.0);
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sumsq += z * z;
    obs[std::upper_bound(std::begin(edges), std::end(edges), z) - std::begin(edges)] += 1;
  }
  double prev = 0.0;
  for (int k = 0; k < 7; ++k) {
    const double c = normal_cdf(edges[k]);
    exp[k] = n * (c - prev);
    prev = c;
  }
  exp[7] = n * (1.0 - prev);
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(sumsq / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
  // 8 bins, 7 degrees of freedom; 0.1% point is 24.32
  CHECK(chi_square(obs, exp) < 24.32);
}

TEST_CASE("bounded integers are unbiased") {
  Rng rng(13);
  const int n = 70000;
  std::vector<double> bins(7, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto k = rng.below(7);
    REQUIRE(k < 7);
    bins[k] += 1;
  }
  CHECK(chi_square(bins, std::vector<double>(7, n / 7.0)) < chi_square_crit(6));
  for (int i = 0; i < 100; ++i) CHECK(rng.below(1) == 0);
  const std::uint64_t big = (1ULL << 63) + 12345;
  for (int i = 0; i < 100; ++i) CHECK(rng.below(big) < big);
}

TEST_CASE("weighted sampler follows the weights") {
  const std::vector<double> w{1, 2, 0, 3, 4, 0};
  const WeightedSampler s = build_sampler(w);
  CHECK(s.size() == 6);
  CHECK(s.total() == doctest::Approx(10));
  CHECK(s.cumulative_weights().back() == doctest::Approx(10));
  Rng rng(14);
  const int n = 100000;
  std::vector<double> counts(6, 0.0);
  for (int i = 0; i < n; ++i) counts[sample(s, rng)] += 1;
  CHECK(counts[2] == 0);
  CHECK(counts[5] == 0);
  const std::vector<double> obs{counts[0], counts[1], counts[3], counts[4]};
  const std::vector<double> exp{0.1 * n, 0.2 * n, 0.3 * n, 0.4 * n};
  // 4 categories, 3 degrees of freedom; 0.1% point is 16.27
  CHECK(chi_square(obs, exp) < 16.27);
  // per-category binomial check
  for (std::size_t k = 0; k < 4; ++k) {
    const double p = exp[k] / n;
    CHECK(std::abs(obs[k] - exp[k]) < 4.0 * std::sqrt(n * p * (1 - p)));
  }
}

TEST_CASE("weighted sampler with a single positive weight") {
  const WeightedSampler s = build_sampler(std::vector<double>{0, 0, 5, 0});
  Rng rng(15);
  for (int i = 0; i < 1000; ++i) CHECK(s.sample(rng) == 2);
}

TEST_CASE("invalid weights are rejected") {
  auto message = [](std::vector<double> w) {
    try {
      build_sampler(w);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message({}) == "invalid weights");
  CHECK(message({0, 0}) == "invalid weights");
  CHECK(message({1, -1}) == "invalid weights");
  CHECK(message({1, NAN}) == "invalid weights");
  CHECK(message({1, INFINITY}) == "invalid weights");
}

TEST_CASE("permutations are uniform over all orderings") {
  Rng rng(16);
  std::map<std::vector<std::size_t>, double> counts;
  const int n = 60000;
  for (int i = 0; i < n; ++i) {
    auto p = sample_permutation(3, rng);
    counts[p] += 1;
  }
  REQUIRE(counts.size() == 6);
  std::vector<double> obs;
  for (auto& [perm, c] : counts) obs.push_back(c);
  // 6 orderings, 5 degrees of freedom
  CHECK(chi_square(obs, std::vector<double>(6, n / 6.0)) < chi_square_crit(5));

  auto p = sample_permutation(50, rng);
  std::sort(p.begin(), p.end());
  for (std::size_t i = 0; i < 50; ++i) CHECK(p[i] == i);
  CHECK(sample_permutation(0, rng).empty());
}

TEST_CASE("position of a fixed element in a permutation is uniform") {
  Rng rng(17);
  const int n = 100000;
  std::vector<double> pos(20, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto p = sample_permutation(20, rng);
    pos[std::find(p.begin(), p.end(), 0) - p.begin()] += 1;
  }
  CHECK(chi_square(pos, std::vector<double>(20, n / 20.0)) < chi_square_crit(19));
}
