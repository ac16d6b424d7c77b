#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "unirat/coeff.hpp"
#include "unirat/errors.hpp"
#include "unirat/matrix.hpp"
#include "unirat/prime_field.hpp"
#include "unirat/rational.hpp"

namespace unirat {

enum class SlpOp : std::uint8_t { Input, Const, Add, Sub, Mul, Div };

const char* to_string(SlpOp op);

struct SlpNode {
  SlpOp op = SlpOp::Const;
  std::uint32_t a = 0;  // input index for Input, first operand otherwise
  std::uint32_t b = 0;  // second operand
  Rational value;       // Const only
};

// Degree bound for the node as a fraction num/den of polynomials in the
// inputs. Polynomial nodes have den == 0.
struct DegreeBound {
  std::uint64_t num = 0;
  std::uint64_t den = 0;
};

struct SlpProvenance {
  std::string stage;
  std::vector<std::uint64_t> seeds;
};

// Straight-line program computing a rational map from in_arity affine inputs
// to out_arity homogeneous output coordinates. Operands always refer to
// earlier nodes, so the program is acyclic by construction.
class Slp {
 public:
  Slp() = default;
  explicit Slp(std::size_t in_arity) : in_arity_(in_arity) {}

  static Slp identity(std::size_t n);

  std::size_t in_arity() const { return in_arity_; }
  std::size_t out_arity() const { return outputs_.size(); }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<SlpNode>& nodes() const { return nodes_; }
  const std::vector<std::uint32_t>& outputs() const { return outputs_; }
  const SlpProvenance& provenance() const { return prov_; }
  void set_provenance(SlpProvenance p) { prov_ = std::move(p); }

  std::uint32_t add_input(std::size_t i);
  std::uint32_t add_const(const Rational& v);
  std::uint32_t add_op(SlpOp op, std::uint32_t a, std::uint32_t b);
  void set_outputs(std::vector<std::uint32_t> outs);

  const DegreeBound& node_degree(std::uint32_t i) const { return deg_.at(i); }
  // Numerator degree bound of each output.
  std::vector<std::uint64_t> degree_bounds() const;
  // True when no output depends on a division.
  bool polynomial_outputs() const;

  // Evaluation over any field-like V; `embed` maps node constants into V.
  // Throws PoleHit(node) when a divisor vanishes.
  template <class V, class Embed>
  std::vector<V> eval_with(std::span<const V> point, Embed&& embed) const;

  std::vector<Rational> eval(const std::vector<Rational>& point) const;
  // Evaluation mod p of a point of residues; constants are reduced mod p
  // (BadPrime if p divides a denominator).
  std::vector<ModP> eval_mod(const std::vector<ModP>& point, std::uint64_t p) const;

  // out_arity x in_arity matrix of partial derivatives of the homogeneous
  // outputs, by forward-mode propagation.
  Matrix<Rational> jacobian_raw(const std::vector<Rational>& point) const;
  // Jacobian of the affine outputs y_j / y_chart (j != chart): an
  // (out_arity - 1) x in_arity matrix. ChartVanishes if y_chart = 0.
  Matrix<Rational> jacobian(const std::vector<Rational>& point, std::size_t chart) const;

  // Copy without nodes that no output depends on.
  Slp pruned() const;

  nlohmann::json to_json() const;
  static Slp from_json(const nlohmann::json& j);
  std::string serialize() const;
  static Slp deserialize(std::string_view text);

 private:
  std::size_t in_arity_ = 0;
  std::vector<SlpNode> nodes_;
  std::vector<DegreeBound> deg_;
  std::vector<std::uint32_t> outputs_;
  SlpProvenance prov_;
};

// outer after inner; ArityMismatch unless inner.out_arity == outer.in_arity.
Slp compose(const Slp& outer, const Slp& inner);

// Map selecting (and reordering) coordinates: output k is input keep[k].
Slp coordinate_projection(std::size_t in_arity, const std::vector<std::size_t>& keep);

template <class V, class Embed>
std::vector<V> Slp::eval_with(std::span<const V> point, Embed&& embed) const {
  if (point.size() != in_arity_) fail(ErrorKind::ArityMismatch, "point length differs from SLP input arity");
  std::vector<V> val;
  val.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const SlpNode& n = nodes_[i];
    switch (n.op) {
      case SlpOp::Input:
        val.push_back(point[n.a]);
        break;
      case SlpOp::Const:
        val.push_back(embed(n.value));
        break;
      case SlpOp::Add:
        val.push_back(val[n.a] + val[n.b]);
        break;
      case SlpOp::Sub:
        val.push_back(val[n.a] - val[n.b]);
        break;
      case SlpOp::Mul:
        val.push_back(val[n.a] * val[n.b]);
        break;
      case SlpOp::Div:
        if (coeff_is_zero(val[n.b])) throw PoleHit(static_cast<std::int64_t>(i));
        val.push_back(val[n.a] / val[n.b]);
        break;
    }
  }
  std::vector<V> out;
  out.reserve(outputs_.size());
  for (auto o : outputs_) out.push_back(val[o]);
  return out;
}

}  // namespace unirat
