#pragma once

#include <cstdint>

namespace fpp {

// Counter-based generator: every draw is a pure function of
// (master seed, stream, counter).  Draws can therefore be produced in any
// order, from any thread, and still reproduce bit-identically.
class CounterRng {
 public:
  CounterRng(std::uint64_t master_seed, std::uint64_t stream)
      : master_(master_seed), stream_(stream) {}

  std::uint64_t master() const { return master_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t bits(std::uint64_t counter) const {
    // three rounds of splitmix64 finalization over the keyed counter
    std::uint64_t x = counter + 0x9e3779b97f4a7c15ULL;
    x = mix(x ^ mix(stream_ + 0xbf58476d1ce4e5b9ULL));
    x = mix(x ^ mix(master_ + 0x94d049bb133111ebULL));
    return x;
  }

  // uniform in [0, 1), 53 random mantissa bits
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  // uniform in [lo, hi)
  double uniform(std::uint64_t counter, double lo, double hi) const {
    return lo + uniform(counter) * (hi - lo);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t master_;
  std::uint64_t stream_;
};

}  // namespace fpp
