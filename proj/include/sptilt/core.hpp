#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sptilt {

// Bad user input (malformed JSON, foreign primes, precondition violations).
// The CLI maps this to exit code 2.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// A consistency check that can only fail due to a bug (e.g. the CHZ
// criterion failing over a commutative noetherian ring). Exit code 3.
struct internal_error : std::runtime_error {
  explicit internal_error(const std::string& what) : std::runtime_error(what) {}
};

// splitmix64. Used everywhere randomness is needed so that runs are
// reproducible across platforms (std::uniform_int_distribution is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, bound), bound > 0
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  bool coin() { return (next() & 1u) != 0; }

 private:
  std::uint64_t state_;
};

inline constexpr std::uint64_t kDefaultSeed = 0x5eed5eedULL;

}  // namespace sptilt
