#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "unirat/coeff.hpp"
#include "unirat/errors.hpp"

namespace unirat {

// Dense univariate polynomial; coeffs()[k] multiplies tau^k. Trailing zeros
// are trimmed, so the zero polynomial has no coefficients.
template <class K>
class UPoly {
 public:
  UPoly() = default;
  UPoly(const K& constant) : c_{constant} { trim(); }
  explicit UPoly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }

  // a + b * tau
  static UPoly linear(const K& a, const K& b) { return UPoly(std::vector<K>{a, b}); }

  const std::vector<K>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  K coefficient(std::size_t k) const { return k < c_.size() ? c_[k] : K(0); }

  // Coefficient list padded with zeros to exactly `len` entries.
  std::vector<K> padded(std::size_t len) const {
    std::vector<K> out(len, K(0));
    for (std::size_t k = 0; k < c_.size() && k < len; ++k) out[k] = c_[k];
    return out;
  }

  template <class V>
  V evaluate(const V& x) const {
    V acc = V(K(0));
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + V(c_[k]);
    return acc;
  }

  friend UPoly operator+(const UPoly& a, const UPoly& b) {
    std::vector<K> r(std::max(a.c_.size(), b.c_.size()), K(0));
    for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] = a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] = r[k] + b.c_[k];
    return UPoly(std::move(r));
  }
  friend UPoly operator-(const UPoly& a) {
    std::vector<K> r = a.c_;
    for (auto& x : r) x = -x;
    return UPoly(std::move(r));
  }
  friend UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }
  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.c_.empty() || b.c_.empty()) return UPoly();
    std::vector<K> r(a.c_.size() + b.c_.size() - 1, K(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
    return UPoly(std::move(r));
  }
  UPoly& operator+=(const UPoly& o) { return *this = *this + o; }
  UPoly& operator-=(const UPoly& o) { return *this = *this - o; }
  UPoly& operator*=(const UPoly& o) { return *this = *this * o; }

  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && coeff_is_zero(c_.back())) c_.pop_back();
  }
  std::vector<K> c_;
};

template <class K>
bool is_zero(const UPoly<K>& p) {
  return p.is_zero();
}

}  // namespace unirat
