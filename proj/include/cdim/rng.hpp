// Seeded random streams.  Every draw site derives its own stream from
// (seed, index), so results never depend on scheduling.

#ifndef CDIM_RNG_HPP_
#define CDIM_RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cdim {

  inline uint64_t splitmix64(uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  inline uint64_t derive_seed(uint64_t seed,
                              std::initializer_list<uint64_t> path) noexcept {
    uint64_t h = splitmix64(seed);
    for (auto p : path) {
      h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    }
    return h;
  }

  using rng_type = std::mt19937_64;

  inline rng_type make_stream(uint64_t seed,
                              std::initializer_list<uint64_t> path) {
    return rng_type(derive_seed(seed, path));
  }

  // Uniform on [0, n) by rejection; independent of the standard library's
  // distribution implementations.
  inline uint64_t uniform_below(rng_type& g, uint64_t n) {
    uint64_t const limit = n == 0 ? 0 : (~uint64_t(0) - n + 1) % n;
    while (true) {
      uint64_t x = g();
      if (x >= limit) {
        return x % n;
      }
    }
  }

  inline double uniform_unit(rng_type& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
  }

}  // namespace cdim

#endif  // CDIM_RNG_HPP_
