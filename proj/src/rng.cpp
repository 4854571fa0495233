#include "spc/rng.hpp"

#include <cmath>

#include "spc/errors.hpp"

namespace spc {

std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed),
      stream_(stream),
      gen_(splitmix64(seed ^ splitmix64(stream ^ 0xA3C59AC2ED9B8B6FULL))) {}

RngStream RngStream::substream(std::uint64_t index) const {
  return RngStream(seed_, splitmix64(stream_ ^ (0xD2B74407B1CE6E93ULL * (index + 1))));
}

double RngStream::uniform() {
  // 53 high bits -> double in [0, 1)
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_int(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("uniform_int: n must be positive");
  std::uint64_t v = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
  return v >= n ? n - 1 : v;
}

double RngStream::normal() {
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  return u * std::sqrt(-2.0 * std::log(s) / s);
}

double RngStream::gamma(double shape) {
  if (shape <= 0.0) throw InvalidArgument("gamma: shape must be positive");
  if (shape < 1.0) {
    // boost to shape+1 and shrink back
    double u;
    do {
      u = uniform();
    } while (u <= 0.0);
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u;
    do {
      u = uniform();
    } while (u <= 0.0);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RngStream::chi_squared(int df) {
  if (df < 1) throw InvalidDf("chi_squared: df must be >= 1");
  if (df <= 32) {
    double s = 0.0;
    for (int i = 0; i < df; ++i) {
      double z = normal();
      s += z * z;
    }
    return s;
  }
  return 2.0 * gamma(0.5 * static_cast<double>(df));
}

}  // namespace spc
