#pragma once

#include <cstddef>
#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "unirat/errors.hpp"

namespace unirat {

// Exponent vector with a cached total degree. Exponents are 16-bit; products
// that would overflow throw instead of wrapping.
class Monomial {
 public:
  using Exp = std::uint16_t;

  Monomial() = default;
  explicit Monomial(std::size_t nvars) : e_(nvars, 0) {}
  explicit Monomial(std::vector<Exp> exps) : e_(std::move(exps)) {
    for (auto x : e_) deg_ += x;
  }
  static Monomial variable(std::size_t nvars, std::size_t i, Exp power = 1) {
    Monomial m(nvars);
    m.e_[i] = power;
    m.deg_ = power;
    return m;
  }

  std::size_t nvars() const { return e_.size(); }
  std::uint32_t degree() const { return deg_; }
  Exp operator[](std::size_t i) const { return e_[i]; }
  const std::vector<Exp>& exponents() const { return e_; }

  void set(std::size_t i, Exp v) {
    deg_ = deg_ - e_[i] + v;
    e_[i] = v;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r(a.nvars());
    for (std::size_t i = 0; i < a.e_.size(); ++i) {
      std::uint32_t s = std::uint32_t(a.e_[i]) + b.e_[i];
      if (s > std::numeric_limits<Exp>::max()) fail(ErrorKind::InvalidArgument, "exponent overflow");
      r.e_[i] = static_cast<Exp>(s);
    }
    r.deg_ = a.deg_ + b.deg_;
    return r;
  }

  bool divides(const Monomial& other) const {
    for (std::size_t i = 0; i < e_.size(); ++i)
      if (e_[i] > other.e_[i]) return false;
    return true;
  }

  // Requires divides(other).
  Monomial quotient_of(const Monomial& other) const {
    Monomial r(nvars());
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = other.e_[i] - e_[i];
    r.deg_ = other.deg_ - deg_;
    return r;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e_ == b.e_; }

 private:
  std::vector<Exp> e_;
  std::uint32_t deg_ = 0;
};

// Graded reverse lexicographic order with x0 > x1 > ... : higher total degree
// first; on ties the monomial with the smaller exponent in the last differing
// variable is larger.
inline bool grevlex_less(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (std::size_t i = a.nvars(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

// Map comparator putting the grevlex-largest monomial first.
struct GrevlexDescending {
  bool operator()(const Monomial& a, const Monomial& b) const { return grevlex_less(b, a); }
};

// All monomials of total degree d in nvars variables, grevlex descending.
inline std::vector<Monomial> monomials_of_degree(std::size_t nvars, std::uint32_t d) {
  std::vector<Monomial> out;
  if (nvars == 0) {
    if (d == 0) out.emplace_back(0);
    return out;
  }
  std::vector<Monomial::Exp> e(nvars, 0);
  std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t left) {
    if (i + 1 == nvars) {
      e[i] = static_cast<Monomial::Exp>(left);
      out.emplace_back(e);
      return;
    }
    for (std::uint32_t k = left + 1; k-- > 0;) {
      e[i] = static_cast<Monomial::Exp>(k);
      rec(i + 1, left - k);
    }
  };
  rec(0, d);
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) { return grevlex_less(b, a); });
  return out;
}

}  // namespace unirat
