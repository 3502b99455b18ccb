#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rdr {

// SplitMix64 finalizer; the seeding and stream-splitting mix.
std::uint64_t splitmix64(std::uint64_t& state);

// Child seed for stream `index` of `seed`: splitmix64 applied to
// seed ^ (index * 0x9E3779B97F4A7C15). Used for one-RNG-per-trial.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

// xoshiro256** (Blackman & Vigna) seeded by four SplitMix64 outputs.
// Integer outputs are bit-identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Standard normal by the Marsaglia polar method.
  double normal();
  // Uniform integer in [0, bound), bound > 0, without modulo bias.
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t seed() const noexcept { return seed_; }
  Rng child(std::uint64_t index) const { return Rng(split_seed(seed_, index)); }

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Inverse-CDF sampler over a fixed nonnegative weight vector.
class WeightedSampler {
 public:
  std::size_t size() const noexcept { return cumulative_.size(); }
  double total() const noexcept { return total_; }
  std::span<const double> cumulative_weights() const noexcept { return cumulative_; }
  std::size_t sample(Rng& rng) const;

 private:
  friend WeightedSampler build_sampler(std::span<const double> weights);
  std::vector<double> cumulative_;
  double total_ = 0.0;
  std::size_t last_positive_ = 0;
};

// Throws "invalid weights" unless all weights are finite, nonnegative and at
// least one is positive.
WeightedSampler build_sampler(std::span<const double> weights);

inline std::size_t sample(const WeightedSampler& s, Rng& rng) { return s.sample(rng); }

// Uniform permutation of 0..n-1 (Fisher-Yates).
std::vector<std::size_t> sample_permutation(std::size_t n, Rng& rng);

}  // namespace rdr
