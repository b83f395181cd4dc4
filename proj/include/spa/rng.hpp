#ifndef SPA_RNG_HPP
#define SPA_RNG_HPP

#include <cstdint>
#include <random>

namespace spa {

/// SplitMix64 finaliser. Used to spread small or sequential seeds over the
/// full 64-bit state before seeding, and to derive independent child streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seedable pseudorandom source: std::mt19937_64 seeded through splitmix64.
///
/// The engine's output sequence is fixed by the C++ standard, and the
/// distributions below are implemented here rather than taken from <random>
/// (whose distributions are implementation-defined), so a given seed yields
/// the same stream on every conforming toolchain.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next() { return engine_(); }
  result_type operator()() { return next(); }
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

  /// Uniform integer in [0, n). n must be positive. Lemire's multiply-shift
  /// with rejection, unbiased.
  std::uint64_t uniform_index(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in the open interval (0, 1).
  double uniform_open01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  /// Independent generator for sub-task `stream` (e.g. one batch run).
  Rng split(std::uint64_t stream) const { return Rng(splitmix64(seed_ ^ splitmix64(stream + 1))); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace spa

#endif  // SPA_RNG_HPP
