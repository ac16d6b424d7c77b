#include "unirat/prime_field.hpp"

#include "unirat/errors.hpp"

namespace unirat {

namespace {

thread_local std::uint64_t g_modulus = 0;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t mod_integer(const Integer& v, std::uint64_t p) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), p);
  return r.get_ui();
}

}  // namespace

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  Integer v(std::to_string(p), 10);
  return mpz_probab_prime_p(v.get_mpz_t(), 40) > 0;
}

std::uint64_t ModP::current_modulus() {
  if (g_modulus == 0) fail(ErrorKind::BadPrime, "no PrimeScope active on this thread");
  return g_modulus;
}

std::uint64_t ModP::peek_modulus() { return g_modulus; }

ModP reduce(const Rational& r, std::uint64_t p) {
  std::uint64_t den = mod_integer(r.denominator(), p);
  if (den == 0)
    fail(ErrorKind::BadPrime, std::to_string(p) + " divides the denominator of " + r.to_string());
  ModP n(mod_integer(r.numerator(), p), p, true);
  return n / ModP(den, p, true);
}

ModP::ModP(const Rational& v) : ModP(reduce(v, current_modulus())) {}

ModP& ModP::operator+=(const ModP& o) {
  if (p_ == 0) p_ = o.p_;
  r_ += o.r_;
  if (r_ >= p_) r_ -= p_;
  return *this;
}

ModP& ModP::operator-=(const ModP& o) {
  if (p_ == 0) p_ = o.p_;
  r_ = r_ >= o.r_ ? r_ - o.r_ : r_ + p_ - o.r_;
  return *this;
}

ModP& ModP::operator*=(const ModP& o) {
  if (p_ == 0) p_ = o.p_;
  r_ = mulmod(r_, o.r_, p_);
  return *this;
}

ModP ModP::pow(std::uint64_t e) const {
  std::uint64_t base = r_, acc = 1 % p_;
  while (e) {
    if (e & 1) acc = mulmod(acc, base, p_);
    base = mulmod(base, base, p_);
    e >>= 1;
  }
  return ModP(acc, p_, true);
}

ModP ModP::inverse() const {
  if (r_ == 0) fail(ErrorKind::InvalidArgument, "inverse of zero mod " + std::to_string(p_));
  return pow(p_ - 2);
}

PrimeScope::PrimeScope(std::uint64_t p) : previous_(g_modulus) {
  if (p == 2 || p % 2 == 0 || p >= (std::uint64_t{1} << 62) || !is_prime(p))
    fail(ErrorKind::BadPrime, std::to_string(p) + " is not an odd prime below 2^62");
  g_modulus = p;
}

PrimeScope::~PrimeScope() { g_modulus = previous_; }

}  // namespace unirat
