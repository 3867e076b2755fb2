#pragma once

#include <cstdint>
#include <limits>

namespace parafault {

/// SplitMix64 generator. Satisfies UniformRandomBitGenerator, so it plugs
/// into the <random> distributions.
class SplitMix64 {
public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    return mix(z);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Independent generator for one Monte Carlo sample. The result depends only
  /// on (seed, stream, index), never on which worker draws it.
  static SplitMix64 for_sample(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept {
    std::uint64_t s = mix(seed + 0x632BE59BD9B4E019ULL);
    s = mix(s ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
    s = mix(s ^ (index * 0x9E3779B97F4A7C15ULL + 0xABC98388FB8FAC03ULL));
    return SplitMix64(s);
  }

private:
  std::uint64_t state_;
};

}  // namespace parafault
