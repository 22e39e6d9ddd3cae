#pragma once

#include <cstdint>
#include <random>

namespace carom {

// splitmix64: used to decorrelate substream seeds derived from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// One master seed per experiment; every parallel work item draws its own
// substream by index, so results do not depend on thread scheduling.
class SeedSequence {
 public:
  explicit SeedSequence(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::mt19937_64 stream(std::uint64_t index) const {
    std::uint64_t s = seed_ ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
  }

 private:
  std::uint64_t seed_;
};

}  // namespace carom
