#ifndef EFFDOF_RANDOM_HPP
#define EFFDOF_RANDOM_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace effdof {

/// SplitMix64 finalizer; used for seeding and for deriving sub-stream keys.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256** 1.0 (Blackman & Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  /// State filled from a SplitMix64 sequence started at `seed`.
  explicit Xoshiro256StarStar(std::uint64_t seed) noexcept;

  /// Independent stream for the (seed, cell, block) triple. Streams are a pure function of the
  /// triple, so results never depend on which thread executes a block.
  static Xoshiro256StarStar for_stream(std::uint64_t seed, std::uint64_t cell,
                                       std::uint64_t block) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform_open() noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
};

inline constexpr std::string_view kRngDescription =
    "xoshiro256** seeded by splitmix64; one sub-stream per (seed, cell, block); "
    "normal: Marsaglia polar; gamma: Marsaglia-Tsang, shape < 1 via Gamma(shape+1) * U^(1/shape)";

double standard_normal(Xoshiro256StarStar& rng) noexcept;

/// Gamma(shape, scale = 1). shape > 0.
double gamma_variate(double shape, Xoshiro256StarStar& rng) noexcept;

/// chi^2(nu) = 2 Gamma(nu / 2). nu > 0, real-valued.
double chi_square_variate(double nu, Xoshiro256StarStar& rng) noexcept;

}  // namespace effdof

#endif  // EFFDOF_RANDOM_HPP
