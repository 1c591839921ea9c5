#pragma once

#include <cstdint>
#include <string_view>

namespace spindyn {

// Purpose tags for the counter-based generator. Every random draw in this
// project is addressed by a (seed, stream, counter) triple, so results never
// depend on call order, thread count, or scheduling.
enum class Stream : std::uint64_t {
  Couplings = 1,
  KickDelta = 2,
  KickEta = 3,
  RotorAngle = 4,
  SaInit = 5,
  SaAccept = 6,
  InstanceSeed = 7,
  RunSeed = 8,
};

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// Stateless hash of a key triple into 64 uniform bits.
constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t counter) {
  std::uint64_t h = detail::splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
  h = detail::splitmix64(h ^ stream);
  h = detail::splitmix64(h ^ counter);
  return h;
}

constexpr std::uint64_t rng_u64(std::uint64_t seed, Stream s, std::uint64_t counter) {
  return counter_hash(seed, static_cast<std::uint64_t>(s), counter);
}

// Uniform double in the open interval (0, 1).
inline double rng_open01(std::uint64_t seed, Stream s, std::uint64_t counter) {
  return (static_cast<double>(rng_u64(seed, s, counter) >> 11) + 0.5) * 0x1.0p-53;
}

// Uniform double in the open interval (-amp, amp).
inline double rng_symmetric(std::uint64_t seed, Stream s, std::uint64_t counter,
                            double amp) {
  return amp * (2.0 * rng_open01(seed, s, counter) - 1.0);
}

// FNV-1a, used to fold string ids into seeds and to key caches.
constexpr std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Seed for repetition `rep` of a solver run on one instance.
constexpr std::uint64_t derive_run_seed(std::uint64_t master_seed,
                                        std::string_view instance_id,
                                        std::uint64_t rep) {
  return counter_hash(master_seed ^ fnv1a64(instance_id),
                      static_cast<std::uint64_t>(Stream::RunSeed), rep);
}

}  // namespace spindyn
