#pragma once

#include <cstddef>
#include <utility>

#include "unirat/errors.hpp"
#include "unirat/mpoly.hpp"

namespace unirat {

// Quotient of two polynomials with a nonzero denominator.
//
// Normalization is by scalar content only: the denominator is made monic (and
// folded into the numerator when constant). Polynomial gcds are not taken;
// reduce_trivial() cancels the easy cases on demand.
template <class K>
class RatFn {
 public:
  RatFn() = default;
  explicit RatFn(MPoly<K> num) : num_(std::move(num)), den_(num_.nvars(), K(1)) {}
  RatFn(MPoly<K> num, MPoly<K> den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) fail(ErrorKind::InvalidArgument, "rational function with zero denominator");
    if (num_.nvars() != den_.nvars()) fail(ErrorKind::InvalidArgument, "numerator/denominator arity mismatch");
    normalize();
  }
  // Constants carry no variables; arithmetic adopts the other operand's arity.
  RatFn(const K& c) : num_(0, c), den_(0, K(1)) {}
  RatFn(int c) : RatFn(K(c)) {}

  const MPoly<K>& numerator() const { return num_; }
  const MPoly<K>& denominator() const { return den_; }
  std::size_t nvars() const { return num_.nvars(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }

  // Cancels when the denominator divides the numerator exactly.
  RatFn reduce_trivial() const {
    if (den_.is_constant()) return *this;
    try {
      return RatFn(exact_divide(num_, den_));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotDivisible) throw;
    }
    return *this;
  }

  friend RatFn operator+(const RatFn& a, const RatFn& b) {
    auto [x, y] = align(a, b);
    if (x.den_ == y.den_) return RatFn(x.num_ + y.num_, x.den_);
    return RatFn(x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_);
  }
  friend RatFn operator-(const RatFn& a) { return RatFn(-a.num_, a.den_, Raw{}); }
  friend RatFn operator-(const RatFn& a, const RatFn& b) { return a + (-b); }
  friend RatFn operator*(const RatFn& a, const RatFn& b) {
    auto [x, y] = align(a, b);
    return RatFn(x.num_ * y.num_, x.den_ * y.den_);
  }
  friend RatFn operator/(const RatFn& a, const RatFn& b) {
    if (b.is_zero()) fail(ErrorKind::InvalidArgument, "division by the zero rational function");
    auto [x, y] = align(a, b);
    return RatFn(x.num_ * y.den_, x.den_ * y.num_);
  }
  RatFn& operator+=(const RatFn& o) { return *this = *this + o; }
  RatFn& operator-=(const RatFn& o) { return *this = *this - o; }
  RatFn& operator*=(const RatFn& o) { return *this = *this * o; }
  RatFn& operator/=(const RatFn& o) { return *this = *this / o; }

  friend bool operator==(const RatFn& a, const RatFn& b) {
    auto [x, y] = align(a, b);
    return x.num_ * y.den_ == y.num_ * x.den_;
  }

 private:
  struct Raw {};
  RatFn(MPoly<K> num, MPoly<K> den, Raw) : num_(std::move(num)), den_(std::move(den)) {}

  static std::pair<RatFn, RatFn> align(const RatFn& a, const RatFn& b) {
    std::size_t n = std::max(a.nvars(), b.nvars());
    auto lift = [n](const RatFn& r) {
      if (r.nvars() == n) return r;
      return RatFn(extend_variables(r.num_, n), extend_variables(r.den_, n), Raw{});
    };
    return {lift(a), lift(b)};
  }

  void normalize() {
    if (num_.is_zero()) {
      den_ = MPoly<K>(den_.nvars(), K(1));
      return;
    }
    K lc = den_.leading_coefficient();
    if (den_.is_constant()) {
      num_ *= K(1) / lc;
      den_ = MPoly<K>(den_.nvars(), K(1));
      return;
    }
    if (!(lc == K(1))) {
      K inv = K(1) / lc;
      num_ *= inv;
      den_ *= inv;
    }
  }

  MPoly<K> num_{0};
  MPoly<K> den_{0, K(1)};
};

template <class K>
bool is_zero(const RatFn<K>& r) {
  return r.is_zero();
}

template <class K>
RatFn<K> exact_quotient(const RatFn<K>& a, const RatFn<K>& b) {
  return a / b;
}

template <class K>
RatFn<K> evaluate_ratfn(const MPoly<K>& p, const std::vector<RatFn<K>>& point) {
  return evaluate_with(p, std::span<const RatFn<K>>(point), [](const K& c) { return RatFn<K>(c); });
}

}  // namespace unirat
