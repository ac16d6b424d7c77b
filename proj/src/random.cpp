#include "unirat/random.hpp"

#include "unirat/errors.hpp"

namespace unirat {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "empty sampling range");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return x % n;
}

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) fail(ErrorKind::InvalidArgument, "empty sampling range");
  const std::uint64_t span = std::uint64_t(hi) - std::uint64_t(lo);
  if (span == UINT64_MAX) return std::int64_t(gen_());
  return std::int64_t(std::uint64_t(lo) + below(span + 1));
}

Integer Rng::uniform_integer(const Integer& bound) {
  if (bound < 0) fail(ErrorKind::InvalidArgument, "negative sampling bound");
  // Rejection sampling on 64-bit limbs covering [0, 2*bound].
  const Integer width = 2 * bound + 1;
  const std::size_t bits = mpz_sizeinbase(width.get_mpz_t(), 2);
  for (;;) {
    Integer x = 0;
    std::size_t have = 0;
    while (have < bits) {
      x <<= 64;
      x += Integer(static_cast<unsigned long>(gen_()));
      have += 64;
    }
    x >>= (have - bits);
    if (x < width) return x - bound;
  }
}

Rational Rng::rational(std::int64_t bound) {
  std::int64_t num = uniform(-bound, bound);
  std::int64_t den = uniform(1, bound);
  return Rational(Integer(static_cast<long>(num)), Integer(static_cast<long>(den)));
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
  // FNV-1a over the label, mixed with the seed by splitmix64.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : label) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (h | 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace unirat
