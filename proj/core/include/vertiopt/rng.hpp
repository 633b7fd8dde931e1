#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace vertiopt {

// Seeded random source whose output is identical on every platform.
//
// std::mt19937_64 has a standardized output sequence, but the std::*_distribution
// adaptors do not, so all derived draws are implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);
  // Uniform integer on [lo, hi], inclusive.
  std::int64_t between(std::int64_t lo, std::int64_t hi);

  bool bernoulli(double p) { return uniform() < p; }
  double normal(double mean, double stddev);

  template <class T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  // Independent child stream, derived without consuming from this one.
  Rng fork(std::uint64_t stream) const;

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finalizer; used to derive well-separated seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace vertiopt
