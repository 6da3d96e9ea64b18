#include "clusterability/random.hpp"

#include <array>
#include <cmath>

namespace clusterability {

namespace {

// splitmix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Ziggurat tables (Marsaglia & Tsang, 256 layers). x[0] is the width of the
// base strip, x[1] = r the tail start, x[256] = 0.
constexpr int kLayers = 256;

struct Ziggurat {
  std::array<double, kLayers + 1> x{};
  std::array<double, kLayers + 1> f{};
  std::array<double, kLayers> ratio{};
};

template <class Density, class Inverse>
Ziggurat build(double r, double v, Density density, Inverse inverse) {
  Ziggurat z;
  z.x[0] = v / density(r);
  z.x[1] = r;
  for (int i = 2; i < kLayers; ++i) z.x[i] = inverse(v / z.x[i - 1] + density(z.x[i - 1]));
  z.x[kLayers] = 0.0;
  for (int i = 0; i <= kLayers; ++i) z.f[i] = density(z.x[i]);
  for (int i = 0; i < kLayers; ++i) z.ratio[i] = z.x[i + 1] / z.x[i];
  return z;
}

constexpr double kNormalR = 3.6541528853610088;
constexpr double kExpR = 7.69711747013104972;

const Ziggurat& normal_table() {
  static const Ziggurat table = build(
      kNormalR, 0.00492867323399, [](double x) { return std::exp(-0.5 * x * x); },
      [](double y) { return std::sqrt(-2.0 * std::log(y)); });
  return table;
}

const Ziggurat& exponential_table() {
  static const Ziggurat table = build(
      kExpR, 0.0039496598225815571993, [](double x) { return std::exp(-x); },
      [](double y) { return -std::log(y); });
  return table;
}

}  // namespace

RandomSeed derive_substream(RandomSeed seed, std::uint64_t index) noexcept {
  const std::uint64_t salt = mix64(index + 0x9e3779b97f4a7c15ULL);
  return RandomSeed{mix64(seed.value ^ salt)};
}

double RandomStream::exponential() {
  const Ziggurat& z = exponential_table();
  for (;;) {
    const std::uint64_t bits = next();
    const auto i = static_cast<int>(bits & 0xff);
    const double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    if (u < z.ratio[i]) return u * z.x[i];
    if (i == 0) return kExpR - std::log(uniform());
    const double x = u * z.x[i];
    if (z.f[i] + uniform() * (z.f[i + 1] - z.f[i]) < std::exp(-x)) return x;
  }
}

double RandomStream::normal() {
  const Ziggurat& z = normal_table();
  for (;;) {
    const std::uint64_t bits = next();
    const auto i = static_cast<int>(bits & 0xff);
    const double u = 2.0 * (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53 - 1.0;
    if (std::abs(u) < z.ratio[i]) return u * z.x[i];
    if (i == 0) {
      double x, y;
      do {
        x = std::log(uniform()) / kNormalR;
        y = std::log(uniform());
      } while (-2.0 * y < x * x);
      return u < 0.0 ? x - kNormalR : kNormalR - x;
    }
    const double x = u * z.x[i];
    if (z.f[i] + uniform() * (z.f[i + 1] - z.f[i]) < std::exp(-0.5 * x * x)) return x;
  }
}

}  // namespace clusterability
