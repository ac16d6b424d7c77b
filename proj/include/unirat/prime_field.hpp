#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "unirat/rational.hpp"

namespace unirat {

bool is_prime(std::uint64_t p);

// Element of Z/p for an odd prime p < 2^62.
//
// The modulus travels with each element, but new elements (from integers or
// rationals) take it from the calling thread's active PrimeScope, the way
// NTL's ZZ_p does. Generic code can therefore write K(0), K(1), K(r) for any
// coefficient field K.
class ModP {
 public:
  ModP() : r_(0), p_(peek_modulus()) {}
  ModP(int v) : ModP(Rational(v)) {}
  ModP(long v) : ModP(Rational(v)) {}
  ModP(const Rational& v);
  ModP(std::uint64_t residue, std::uint64_t p, bool /*reduced*/) : r_(residue), p_(p) {}

  std::uint64_t residue() const { return r_; }
  std::uint64_t modulus() const { return p_; }
  bool is_zero() const { return r_ == 0; }

  ModP inverse() const;
  ModP pow(std::uint64_t e) const;

  ModP& operator+=(const ModP& o);
  ModP& operator-=(const ModP& o);
  ModP& operator*=(const ModP& o);
  ModP& operator/=(const ModP& o) { return *this *= o.inverse(); }

  friend ModP operator+(ModP a, const ModP& b) { return a += b; }
  friend ModP operator-(ModP a, const ModP& b) { return a -= b; }
  friend ModP operator*(ModP a, const ModP& b) { return a *= b; }
  friend ModP operator/(ModP a, const ModP& b) { return a /= b; }
  friend ModP operator-(const ModP& a) { return ModP(a.r_ == 0 ? 0 : a.p_ - a.r_, a.p_, true); }
  friend bool operator==(const ModP& a, const ModP& b) {
    return a.r_ == b.r_ && (a.p_ == b.p_ || a.p_ == 0 || b.p_ == 0);
  }

  std::string to_string() const { return std::to_string(r_); }
  friend std::ostream& operator<<(std::ostream& os, const ModP& a) { return os << a.r_; }

  static std::uint64_t current_modulus();
  // Active modulus or 0 when no scope is installed.
  static std::uint64_t peek_modulus();

 private:
  std::uint64_t r_;
  std::uint64_t p_;
};

inline bool is_zero(const ModP& a) { return a.is_zero(); }
inline ModP exact_quotient(const ModP& a, const ModP& b) { return a / b; }

// RAII guard installing the modulus used by ModP constructors on this thread.
// Throws BadPrime for p that is even, composite, or too large.
class PrimeScope {
 public:
  explicit PrimeScope(std::uint64_t p);
  ~PrimeScope();
  PrimeScope(const PrimeScope&) = delete;
  PrimeScope& operator=(const PrimeScope&) = delete;

 private:
  std::uint64_t previous_;
};

// Reduction map Q -> Z/p; throws BadPrime when p divides the denominator.
ModP reduce(const Rational& r, std::uint64_t p);

}  // namespace unirat
