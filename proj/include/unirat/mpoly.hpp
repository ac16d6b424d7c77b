#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "unirat/coeff.hpp"
#include "unirat/errors.hpp"
#include "unirat/matrix.hpp"
#include "unirat/monomial.hpp"
#include "unirat/rational.hpp"
#include "unirat/upoly.hpp"

namespace unirat {

// Sparse multivariate polynomial over an exact field K. Terms are kept in a
// map ordered grevlex-descending; zero coefficients are never stored.
template <class K>
class MPoly {
 public:
  using Terms = std::map<Monomial, K, GrevlexDescending>;

  MPoly() = default;
  explicit MPoly(std::size_t nvars) : nvars_(nvars) {}
  MPoly(std::size_t nvars, const K& constant) : nvars_(nvars) {
    if (!coeff_is_zero(constant)) terms_.emplace(Monomial(nvars), constant);
  }

  static MPoly variable(std::size_t nvars, std::size_t i) {
    if (i >= nvars) fail(ErrorKind::InvalidArgument, "variable index out of range");
    MPoly p(nvars);
    p.terms_.emplace(Monomial::variable(nvars, i), K(1));
    return p;
  }
  static MPoly monomial(const Monomial& m, const K& c) {
    MPoly p(m.nvars());
    p.add_term(m, c);
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.degree() == 0); }
  K constant_term() const {
    auto it = terms_.find(Monomial(nvars_));
    return it == terms_.end() ? K(0) : it->second;
  }

  // Leading term in grevlex; requires a nonzero polynomial.
  const Monomial& leading_monomial() const { return terms_.begin()->first; }
  const K& leading_coefficient() const { return terms_.begin()->second; }

  K coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? K(0) : it->second;
  }

  std::uint32_t total_degree() const {
    std::uint32_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }
  std::uint32_t degree_in(std::size_t var) const {
    std::uint32_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max<std::uint32_t>(d, m[var]);
    return d;
  }
  bool is_homogeneous(std::uint32_t d) const {
    for (const auto& [m, c] : terms_)
      if (m.degree() != d) return false;
    return true;
  }
  bool involves(std::size_t var) const {
    for (const auto& [m, c] : terms_)
      if (m[var]) return true;
    return false;
  }

  void add_term(const Monomial& m, const K& c) {
    if (m.nvars() != nvars_) fail(ErrorKind::InvalidArgument, "monomial arity mismatch");
    if (coeff_is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (coeff_is_zero(it->second)) terms_.erase(it);
    }
  }

  MPoly& operator+=(const MPoly& o) {
    check_arity(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  MPoly& operator-=(const MPoly& o) {
    check_arity(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  MPoly& operator*=(const K& s) {
    if (coeff_is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c = c * s;
    return *this;
  }

  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator-(MPoly a) {
    for (auto& [m, c] : a.terms_) c = -c;
    return a;
  }
  friend MPoly operator*(MPoly a, const K& s) { return a *= s; }
  friend MPoly operator*(const K& s, MPoly a) { return a *= s; }

  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    a.check_arity(b);
    MPoly r(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }

  MPoly multiply_monomial(const Monomial& m, const K& s) const {
    MPoly r(nvars_);
    if (coeff_is_zero(s)) return r;
    for (const auto& [mm, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), mm * m, c * s);
    return r;
  }

  MPoly pow(unsigned e) const {
    MPoly result(nvars_, K(1)), base = *this;
    while (e) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

  friend bool operator==(const MPoly& a, const MPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  // Coefficient-wise map into another field (e.g. reduction mod p).
  template <class K2, class F>
  MPoly<K2> map_coefficients(F&& f) const {
    MPoly<K2> r(nvars_);
    for (const auto& [m, c] : terms_) r.add_term(m, f(c));
    return r;
  }

 private:
  void check_arity(const MPoly& o) const {
    if (o.nvars_ != nvars_) fail(ErrorKind::InvalidArgument, "polynomial arity mismatch");
  }

  std::size_t nvars_ = 0;
  Terms terms_;
};

template <class K>
bool is_zero(const MPoly<K>& p) {
  return p.is_zero();
}

// Value of p at a point whose coordinates live in V (a prime field, an SLP
// trace, a univariate or multivariate polynomial, ...). `embed` maps a
// coefficient of K into V.
template <class V, class K, class Embed>
V evaluate_with(const MPoly<K>& p, std::span<const V> point, Embed&& embed) {
  if (point.size() != p.nvars()) fail(ErrorKind::InvalidArgument, "point length differs from variable count");
  std::vector<std::vector<V>> powers(p.nvars());
  for (std::size_t i = 0; i < p.nvars(); ++i) {
    std::uint32_t d = p.degree_in(i);
    if (d == 0) continue;
    powers[i].reserve(d + 1);
    powers[i].push_back(point[i]);
    for (std::uint32_t k = 2; k <= d; ++k) powers[i].push_back(powers[i].back() * point[i]);
  }
  V acc = embed(K(0));
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    V term = embed(c);
    for (std::size_t i = 0; i < p.nvars(); ++i)
      if (m[i]) term = term * powers[i][m[i] - 1];
    if (first) acc = term;
    else acc = acc + term;
    first = false;
  }
  return acc;
}

template <class V, class K>
V evaluate_as(const MPoly<K>& p, std::span<const V> point) {
  return evaluate_with(p, point, [](const K& c) { return V(c); });
}

template <class K>
K evaluate(const MPoly<K>& p, std::span<const K> point) {
  return evaluate_as<K, K>(p, point);
}
template <class K>
K evaluate(const MPoly<K>& p, const std::vector<K>& point) {
  return evaluate_as<K, K>(p, std::span<const K>(point));
}

template <class K>
MPoly<K> partial_derivative(const MPoly<K>& p, std::size_t var) {
  if (var >= p.nvars()) fail(ErrorKind::InvalidArgument, "derivative variable out of range");
  MPoly<K> r(p.nvars());
  for (const auto& [m, c] : p.terms()) {
    if (m[var] == 0) continue;
    Monomial dm = m;
    dm.set(var, m[var] - 1);
    r.add_term(dm, c * K(static_cast<long>(m[var])));
  }
  return r;
}

template <class K>
std::vector<MPoly<K>> gradient(const MPoly<K>& p, std::size_t count) {
  std::vector<MPoly<K>> g;
  for (std::size_t i = 0; i < count; ++i) g.push_back(partial_derivative(p, i));
  return g;
}

// Exact quotient p / d in the polynomial ring; NotDivisible when d does not
// divide p (the remainder of multivariate division by d is nonzero).
template <class K>
MPoly<K> exact_divide(const MPoly<K>& p, const MPoly<K>& d) {
  if (d.is_zero()) fail(ErrorKind::InvalidArgument, "division by the zero polynomial");
  if (p.nvars() != d.nvars()) fail(ErrorKind::InvalidArgument, "polynomial arity mismatch");
  MPoly<K> rem = p, quo(p.nvars());
  const Monomial& lm = d.leading_monomial();
  const K lc = d.leading_coefficient();
  while (!rem.is_zero()) {
    const Monomial& m = rem.leading_monomial();
    if (!lm.divides(m)) fail(ErrorKind::NotDivisible, "leading term is not divisible");
    Monomial q = lm.quotient_of(m);
    K c = rem.leading_coefficient() / lc;
    quo.add_term(q, c);
    rem -= d.multiply_monomial(q, c);
  }
  return quo;
}

template <class K>
MPoly<K> exact_quotient(const MPoly<K>& p, const MPoly<K>& d) {
  return exact_divide(p, d);
}

// Division in the ring is exact division (NotDivisible otherwise), so SLPs
// with division nodes can still be expanded when the quotients are exact.
template <class K>
MPoly<K> operator/(const MPoly<K>& p, const MPoly<K>& d) {
  return exact_divide(p, d);
}

// Composition with a linear change of variables: old variable i becomes
// sum_j m(i, j) * y_j, where m has one row per old variable and one column per
// new variable.
template <class K>
MPoly<K> substitute_linear(const MPoly<K>& p, const Matrix<K>& m) {
  if (m.rows() != p.nvars()) fail(ErrorKind::InvalidArgument, "substitution matrix rows != variable count");
  std::vector<MPoly<K>> images;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    MPoly<K> li(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!is_zero(m(i, j))) li.add_term(Monomial::variable(m.cols(), j), m(i, j));
    images.push_back(std::move(li));
  }
  const std::size_t n = images.empty() ? 0 : images.front().nvars();
  return evaluate_with(p, std::span<const MPoly<K>>(images), [n](const K& c) { return MPoly<K>(n, c); });
}

// General substitution of polynomials for variables.
template <class K>
MPoly<K> compose(const MPoly<K>& p, const std::vector<MPoly<K>>& images) {
  if (images.size() != p.nvars()) fail(ErrorKind::InvalidArgument, "need one image per variable");
  const std::size_t n = images.empty() ? 0 : images.front().nvars();
  return evaluate_with(p, std::span<const MPoly<K>>(images), [n](const K& c) { return MPoly<K>(n, c); });
}

// Re-index variables into a ring with `nvars` variables: variable i maps to
// target[i].
template <class K>
MPoly<K> remap_variables(const MPoly<K>& p, std::size_t nvars, const std::vector<std::size_t>& target) {
  if (target.size() != p.nvars()) fail(ErrorKind::InvalidArgument, "remap needs one target per variable");
  MPoly<K> r(nvars);
  for (const auto& [m, c] : p.terms()) {
    Monomial mm(nvars);
    for (std::size_t i = 0; i < p.nvars(); ++i)
      if (m[i]) mm.set(target[i], mm[target[i]] + m[i]);
    r.add_term(mm, c);
  }
  return r;
}

// Same polynomial viewed in a ring with extra trailing variables.
template <class K>
MPoly<K> extend_variables(const MPoly<K>& p, std::size_t nvars) {
  std::vector<std::size_t> target(p.nvars());
  for (std::size_t i = 0; i < p.nvars(); ++i) target[i] = i;
  return remap_variables(p, nvars, target);
}

// Substitute a constant for one variable (the variable stays in the ring).
template <class K>
MPoly<K> specialize(const MPoly<K>& p, std::size_t var, const K& value) {
  MPoly<K> r(p.nvars());
  for (const auto& [m, c] : p.terms()) {
    Monomial mm = m;
    K cc = c;
    for (unsigned k = 0; k < m[var]; ++k) cc = cc * value;
    mm.set(var, 0);
    r.add_term(mm, cc);
  }
  return r;
}

// tau -> p(base + tau * dir, tail): the first base.size() variables move along
// the line, any remaining ones are held at `tail`.
template <class V, class K>
UPoly<V> restrict_to_line(const MPoly<K>& p, const std::vector<V>& base, const std::vector<V>& dir,
                          const std::vector<V>& tail = {}) {
  if (base.size() != dir.size() || base.size() + tail.size() != p.nvars())
    fail(ErrorKind::InvalidArgument, "line and polynomial arity differ");
  std::vector<UPoly<V>> pt;
  pt.reserve(p.nvars());
  for (std::size_t i = 0; i < base.size(); ++i) pt.push_back(UPoly<V>::linear(base[i], dir[i]));
  for (const auto& t : tail) pt.push_back(UPoly<V>(t));
  return evaluate_with(p, std::span<const UPoly<V>>(pt), [](const K& c) { return UPoly<V>(V(c)); });
}

// Coefficients of p as a polynomial in variable `var`: result[k] is the
// coefficient of var^k (not involving var).
template <class K>
std::vector<MPoly<K>> coefficients_in(const MPoly<K>& p, std::size_t var) {
  std::vector<MPoly<K>> out(p.degree_in(var) + 1, MPoly<K>(p.nvars()));
  for (const auto& [m, c] : p.terms()) {
    Monomial mm = m;
    mm.set(var, 0);
    out[m[var]].add_term(mm, c);
  }
  return out;
}

// Symmetric matrix G with q(x) = x^T G x for a quadratic form q. Mixed
// coefficients are split in half, so the field must allow division by 2.
template <class K>
Matrix<K> gram_matrix(const MPoly<K>& q) {
  if (!q.is_homogeneous(2)) fail(ErrorKind::InvalidArgument, "gram_matrix needs a homogeneous quadratic form");
  if (is_zero(K(2))) fail(ErrorKind::OddCharacteristic, "cannot halve mixed coefficients in characteristic 2");
  const K half = K(1) / K(2);
  Matrix<K> g(q.nvars(), q.nvars());
  for (const auto& [m, c] : q.terms()) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m.nvars(); ++i)
      for (unsigned k = 0; k < m[i]; ++k) idx.push_back(i);
    if (idx[0] == idx[1]) {
      g(idx[0], idx[0]) += c;
    } else {
      g(idx[0], idx[1]) += c * half;
      g(idx[1], idx[0]) += c * half;
    }
  }
  return g;
}

// Quadratic form x^T G x in G.rows() variables.
template <class K>
MPoly<K> form_from_gram(const Matrix<K>& g) {
  const std::size_t n = g.rows();
  MPoly<K> q(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (is_zero(g(i, j))) continue;
      Monomial m = Monomial::variable(n, i) * Monomial::variable(n, j);
      q.add_term(m, g(i, j));
    }
  return q;
}

// A polynomial together with its declared degree; every term must have
// exactly that degree.
template <class K>
class HomogeneousForm {
 public:
  HomogeneousForm(MPoly<K> p, std::uint32_t degree) : poly_(std::move(p)), degree_(degree) {
    if (!poly_.is_homogeneous(degree_))
      fail(ErrorKind::InvalidArgument, "form is not homogeneous of degree " + std::to_string(degree_));
  }
  const MPoly<K>& poly() const { return poly_; }
  std::uint32_t degree() const { return degree_; }

 private:
  MPoly<K> poly_;
  std::uint32_t degree_;
};

}  // namespace unirat
