#pragma once

#include <cstdint>
#include <random>

namespace lvs {

using Rng = std::mt19937_64;

/// Named sub-streams derived from a single master seed. Values are part of
/// the reproducibility contract: changing them changes every output.
enum class Stream : std::uint64_t {
  kGeometry = 1,
  kLegitimateTrial = 2,
  kMaliciousTrial = 3,
  kQuadrature = 4,
  kGuess = 5,
};

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based seed for item `index` of `stream` under `master`. Each trial
/// gets its own generator, so results do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t master, Stream stream,
                          std::uint64_t index) noexcept;

Rng make_rng(std::uint64_t master, Stream stream, std::uint64_t index);

}  // namespace lvs
