#include "effdof/random.hpp"

#include <cmath>

namespace effdof {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Xoshiro256StarStar::Xoshiro256StarStar(std::uint64_t seed) noexcept {
  std::uint64_t x = seed;
  for (auto& word : s_) {
    x += kGolden;
    word = splitmix64_mix(x);
  }
}

Xoshiro256StarStar Xoshiro256StarStar::for_stream(std::uint64_t seed, std::uint64_t cell,
                                                  std::uint64_t block) noexcept {
  std::uint64_t key = splitmix64_mix(seed + kGolden);
  key = splitmix64_mix(key ^ (cell + 0x632be59bd9b4e019ULL));
  key = splitmix64_mix(key ^ (block + 0x8cb92ba72f3d8dd7ULL));
  return Xoshiro256StarStar(key);
}

Xoshiro256StarStar::result_type Xoshiro256StarStar::operator()() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256StarStar::uniform_open() noexcept {
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(Xoshiro256StarStar& rng) noexcept {
  double u, v, s;
  do {
    u = 2.0 * rng.uniform_open() - 1.0;
    v = 2.0 * rng.uniform_open() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  return u * std::sqrt(-2.0 * std::log(s) / s);
}

double gamma_variate(double shape, Xoshiro256StarStar& rng) noexcept {
  if (shape < 1.0) {
    // Gamma(a) = Gamma(a + 1) * U^(1/a)
    const double boosted = gamma_variate(shape + 1.0, rng);
    return boosted * std::pow(rng.uniform_open(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double chi_square_variate(double nu, Xoshiro256StarStar& rng) noexcept {
  return 2.0 * gamma_variate(0.5 * nu, rng);
}

}  // namespace effdof
