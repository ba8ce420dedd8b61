#pragma once

#include <cstdint>
#include <limits>
#include <span>

namespace advice::sim {

/**
 * Counter-based generator: the i-th draw of stream k under seed s is
 * splitmix64(key(s, k) + i * golden_gamma), a pure function of (s, k, i).
 *
 * Stream-split rule: learners give episode t of a run the stream t, so an
 * episode's randomness never depends on what other episodes or runs consumed.
 */
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream);

  result_type operator()();
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Index drawn from a probability vector by inverse CDF.
  std::size_t categorical(std::span<const double> probs);

  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace advice::sim
