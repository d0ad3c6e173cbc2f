#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace fklab {

// Philox4x32-10 counter-based generator. A (seed, stream) pair selects an
// independent sequence; the position within it is a 64-bit block counter.
class Philox {
 public:
  using result_type = std::uint64_t;

  Philox(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  // uniform on [0, 1) with 53 random bits
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  // uniform on (0, 1]
  double uniform_pos() { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> out_{};
  int next_ = 4;
};

// Deterministic derivation of child seeds (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

// Poisson variate (boost's PTRS / inversion implementation driven by Philox).
long long poisson_draw(Philox& rng, double mean);
double normal_draw(Philox& rng);

}  // namespace fklab
