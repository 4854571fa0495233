#pragma once

#include <cstdint>
#include <random>

namespace spc {

/// SplitMix64 finalizer; used to mix seeds and derive stream identifiers.
std::uint64_t splitmix64(std::uint64_t x);

/// Counter-keyed random stream. Identical (seed, stream) pairs reproduce
/// identical draw sequences bit-for-bit: the generator is std::mt19937_64
/// (fully specified by the standard) and every variate transform below is
/// implemented explicitly rather than via the implementation-defined
/// std::*_distribution classes.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Independent child stream keyed by `index`; does not disturb this
  /// stream's state.
  RngStream substream(std::uint64_t index) const;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in {0, ..., n-1}; n must be positive.
  std::uint64_t uniform_int(std::uint64_t n);

  /// Standard normal via the Marsaglia polar method.
  double normal();

  /// Gamma(shape, scale 1) via Marsaglia-Tsang; shape > 0.
  double gamma(double shape);

  /// Chi-squared with df >= 1. Sum of squared normals for small df,
  /// gamma sampler for large df; the contract is distributional only.
  double chi_squared(int df);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 gen_;
};

}  // namespace spc
