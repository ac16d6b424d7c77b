#include "unirat/traced.hpp"

namespace unirat {

SlpBuilder::SlpBuilder(std::size_t in_arity, std::vector<Rational> sample)
    : slp_(in_arity), sample_(std::move(sample)), input_nodes_(in_arity, -1) {
  if (sample_.size() != in_arity) fail(ErrorKind::ArityMismatch, "sample point length differs from input arity");
}

Traced SlpBuilder::input(std::size_t i) {
  if (i >= input_nodes_.size()) fail(ErrorKind::ArityMismatch, "builder input index out of range");
  if (input_nodes_[i] < 0) input_nodes_[i] = slp_.add_input(i);
  return Traced(this, input_nodes_[i], sample_[i]);
}

std::vector<Traced> SlpBuilder::inputs() {
  std::vector<Traced> v;
  for (std::size_t i = 0; i < in_arity(); ++i) v.push_back(input(i));
  return v;
}

std::vector<Traced> SlpBuilder::apply(const Slp& m, const std::vector<Traced>& args) {
  return m.eval_with(std::span<const Traced>(args), [](const Rational& r) { return Traced(r); });
}

std::uint32_t SlpBuilder::node_of(const Traced& x) {
  if (x.builder_ == this) return static_cast<std::uint32_t>(x.node_);
  if (x.builder_ != nullptr) fail(ErrorKind::InvalidArgument, "mixing values from different SLP builders");
  return slp_.add_const(x.value_);
}

Traced SlpBuilder::make(SlpOp op, const Traced& a, const Traced& b, Rational value) {
  std::uint32_t na = node_of(a), nb = node_of(b);
  return Traced(this, slp_.add_op(op, na, nb), std::move(value));
}

Slp SlpBuilder::finish(const std::vector<Traced>& outputs, SlpProvenance prov) const {
  Slp s = slp_;
  std::vector<std::uint32_t> outs;
  for (const auto& o : outputs) {
    if (o.builder_ == this) outs.push_back(static_cast<std::uint32_t>(o.node_));
    else if (o.builder_ == nullptr) outs.push_back(s.add_const(o.value_));
    else fail(ErrorKind::InvalidArgument, "output from a different SLP builder");
  }
  s.set_outputs(std::move(outs));
  s.set_provenance(std::move(prov));
  return s.pruned();
}

SlpBuilder* Traced::builder_of(const Traced& a, const Traced& b) {
  if (a.builder_ && b.builder_ && a.builder_ != b.builder_)
    fail(ErrorKind::InvalidArgument, "mixing values from different SLP builders");
  return a.builder_ ? a.builder_ : b.builder_;
}

Traced operator+(const Traced& a, const Traced& b) {
  SlpBuilder* bl = Traced::builder_of(a, b);
  if (!bl) return Traced(a.value_ + b.value_);
  if (a.is_constant() && a.value_.is_zero()) return b;
  if (b.is_constant() && b.value_.is_zero()) return a;
  return bl->make(SlpOp::Add, a, b, a.value_ + b.value_);
}

Traced operator-(const Traced& a, const Traced& b) {
  SlpBuilder* bl = Traced::builder_of(a, b);
  if (!bl) return Traced(a.value_ - b.value_);
  if (b.is_constant() && b.value_.is_zero()) return a;
  return bl->make(SlpOp::Sub, a, b, a.value_ - b.value_);
}

Traced operator*(const Traced& a, const Traced& b) {
  SlpBuilder* bl = Traced::builder_of(a, b);
  if (!bl) return Traced(a.value_ * b.value_);
  if ((a.is_constant() && a.value_.is_zero()) || (b.is_constant() && b.value_.is_zero())) return Traced(0);
  if (a.is_constant() && a.value_.is_one()) return b;
  if (b.is_constant() && b.value_.is_one()) return a;
  return bl->make(SlpOp::Mul, a, b, a.value_ * b.value_);
}

Traced operator/(const Traced& a, const Traced& b) {
  if (b.value_.is_zero()) throw PoleHit(b.node_);
  SlpBuilder* bl = Traced::builder_of(a, b);
  if (!bl) return Traced(a.value_ / b.value_);
  if (a.is_constant() && a.value_.is_zero()) return Traced(0);
  if (b.is_constant() && b.value_.is_one()) return a;
  return bl->make(SlpOp::Div, a, b, a.value_ / b.value_);
}

Matrix<Rational> pivot_view(const Matrix<Traced>& m) {
  Matrix<Rational> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).sample();
  return out;
}

}  // namespace unirat
