#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "unirat/matrix.hpp"
#include "unirat/rational.hpp"
#include "unirat/slp.hpp"

namespace unirat {

class Traced;

// Records arithmetic on Traced values as an SLP. Every value also carries its
// exact value at a fixed sample point of the inputs; zero tests (pivot
// choices, degeneracy checks) are decided there, the way a computation over a
// function field is specialised at a random point to fix its branch.
class SlpBuilder {
 public:
  SlpBuilder(std::size_t in_arity, std::vector<Rational> sample);
  SlpBuilder(const SlpBuilder&) = delete;
  SlpBuilder& operator=(const SlpBuilder&) = delete;

  std::size_t in_arity() const { return slp_.in_arity(); }
  const std::vector<Rational>& sample() const { return sample_; }

  Traced input(std::size_t i);
  std::vector<Traced> inputs();

  // Runs an existing program on traced arguments.
  std::vector<Traced> apply(const Slp& m, const std::vector<Traced>& args);

  // The program computing `outputs`, without dead nodes.
  Slp finish(const std::vector<Traced>& outputs, SlpProvenance prov = {}) const;

 private:
  friend class Traced;
  friend Traced operator+(const Traced& a, const Traced& b);
  friend Traced operator-(const Traced& a, const Traced& b);
  friend Traced operator*(const Traced& a, const Traced& b);
  friend Traced operator/(const Traced& a, const Traced& b);
  std::uint32_t node_of(const Traced& x);
  Traced make(SlpOp op, const Traced& a, const Traced& b, Rational value);

  Slp slp_;
  std::vector<Rational> sample_;
  std::vector<std::int64_t> input_nodes_;
};

// A value recorded in an SlpBuilder, or a plain constant (no builder).
// Constant operands are folded, and x + 0, x * 1, x * 0 are simplified, so
// sparse matrices do not bloat the program.
class Traced {
 public:
  Traced() = default;
  Traced(int v) : value_(v) {}
  Traced(long v) : value_(v) {}
  Traced(const Rational& v) : value_(v) {}

  bool is_constant() const { return builder_ == nullptr; }
  const Rational& sample() const { return value_; }
  std::int64_t node() const { return node_; }

  friend Traced operator+(const Traced& a, const Traced& b);
  friend Traced operator-(const Traced& a, const Traced& b);
  friend Traced operator*(const Traced& a, const Traced& b);
  // PoleHit when the divisor vanishes at the sample point.
  friend Traced operator/(const Traced& a, const Traced& b);
  friend Traced operator-(const Traced& a) { return Traced(0) - a; }

  Traced& operator+=(const Traced& o) { return *this = *this + o; }
  Traced& operator-=(const Traced& o) { return *this = *this - o; }
  Traced& operator*=(const Traced& o) { return *this = *this * o; }
  Traced& operator/=(const Traced& o) { return *this = *this / o; }

  // Equality of sample values.
  friend bool operator==(const Traced& a, const Traced& b) { return a.value_ == b.value_; }

 private:
  friend class SlpBuilder;
  Traced(SlpBuilder* b, std::int64_t node, Rational v) : builder_(b), node_(node), value_(std::move(v)) {}
  static SlpBuilder* builder_of(const Traced& a, const Traced& b);

  SlpBuilder* builder_ = nullptr;
  std::int64_t node_ = -1;
  Rational value_;
};

inline bool is_zero(const Traced& x) { return x.sample().is_zero(); }
inline Traced exact_quotient(const Traced& a, const Traced& b) { return a / b; }

// Zero tests on a traced matrix only need the samples; running elimination on
// them directly keeps pivot searches out of the recorded program.
Matrix<Rational> pivot_view(const Matrix<Traced>& m);

}  // namespace unirat
