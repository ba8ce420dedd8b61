#include "advice/sim/rng.hpp"

namespace advice::sim {

namespace {
constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kStreamSalt = 0xd1b54a32d192ed03ULL;
}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(seed + kGoldenGamma) ^ splitmix64(stream * kStreamSalt + 1)) {}

CounterRng::result_type CounterRng::operator()() {
  ++counter_;
  return splitmix64(key_ + counter_ * kGoldenGamma);
}

double CounterRng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

std::size_t CounterRng::categorical(std::span<const double> probs) {
  const double u = uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cumulative += probs[i];
    last_positive = i;
    if (u < cumulative) return i;
  }
  // u landed in the rounding slack above the final cumulative sum
  return last_positive;
}

std::size_t CounterRng::below(std::size_t n) {
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

}  // namespace advice::sim
