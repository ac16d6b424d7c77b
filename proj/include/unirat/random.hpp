#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "unirat/rational.hpp"

namespace unirat {

// Seeded source of randomness with platform-independent bounded sampling
// (std::uniform_int_distribution is implementation-defined, which would make
// reports differ between standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform in [0, n) by rejection; n > 0.
  std::uint64_t below(std::uint64_t n);
  // Uniform in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  // Uniform integer in [-bound, bound].
  Integer uniform_integer(const Integer& bound);
  // Random nonzero-denominator rational a/b with |a| <= bound, 1 <= b <= bound.
  Rational rational(std::int64_t bound);

 private:
  std::mt19937_64 gen_;
};

// Independent sub-seed for a named stage, so adding a stage never shifts the
// random stream of another.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

}  // namespace unirat
