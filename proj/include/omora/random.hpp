#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace omora {

/// Deterministic random stream. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; the variate transforms below are
/// written out explicitly because the std:: distributions are
/// implementation-defined and would break cross-platform reproducibility.
class RngStream {
 public:
  explicit RngStream(std::uint64_t engine_seed) : engine_(engine_seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi]; returns lo when lo == hi.
  double uniform(double lo, double hi) { return lo == hi ? lo : lo + (hi - lo) * uniform(); }

  /// Exponential with the given mean (inverse-CDF transform).
  double exponential(double mean = 1.0);

 private:
  std::mt19937_64 engine_;
};

/// Stream for a (seed, label) pair. Identical pairs give identical streams;
/// the label is hashed into the seed so "arrivals", "fading", "mobility" and
/// "placement" draws never share a sequence.
RngStream rng_stream(std::uint64_t seed, std::string_view label);

}  // namespace omora
