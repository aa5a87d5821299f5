#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace embedlab {

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

// FNV-1a over bytes; used for stoplist digests and seed salts.
std::uint64_t hash_bytes(std::string_view bytes);

// Folds a sequence of 64-bit parts into a seed. Used for the hierarchical
// seed scheme: every grid coordinate tuple gets its own stream and two
// distinct tuples never share one.
std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> parts);

// Deterministic generator (splitmix64 stream). std:: engines would do, but
// std:: *distributions* are not pinned across standard library
// implementations; every sampler used in the project lives here so results
// are reproducible bit for bit from a seed alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, bound), unbiased (rejection sampling). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // Standard normal deviate (Box-Muller; caches the paired value).
  double normal();

 private:
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace embedlab
