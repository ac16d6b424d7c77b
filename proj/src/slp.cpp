#include "unirat/slp.hpp"

#include <algorithm>
#include <limits>

namespace unirat {

namespace {

constexpr std::uint64_t kDegreeCap = std::uint64_t{1} << 62;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return std::min(kDegreeCap, a + b); }

DegreeBound combine(SlpOp op, const DegreeBound& x, const DegreeBound& y) {
  switch (op) {
    case SlpOp::Add:
    case SlpOp::Sub:
      if (x.den == 0 && y.den == 0) return {std::max(x.num, y.num), 0};
      return {std::max(sat_add(x.num, y.den), sat_add(y.num, x.den)), sat_add(x.den, y.den)};
    case SlpOp::Mul:
      return {sat_add(x.num, y.num), sat_add(x.den, y.den)};
    case SlpOp::Div:
      return {sat_add(x.num, y.den), sat_add(x.den, y.num)};
    default:
      return {};
  }
}

SlpOp op_from_string(const std::string& s) {
  if (s == "input") return SlpOp::Input;
  if (s == "const") return SlpOp::Const;
  if (s == "add") return SlpOp::Add;
  if (s == "sub") return SlpOp::Sub;
  if (s == "mul") return SlpOp::Mul;
  if (s == "div") return SlpOp::Div;
  fail(ErrorKind::MalformedInput, "unknown SLP op '" + s + "'");
}

}  // namespace

const char* to_string(SlpOp op) {
  switch (op) {
    case SlpOp::Input:
      return "input";
    case SlpOp::Const:
      return "const";
    case SlpOp::Add:
      return "add";
    case SlpOp::Sub:
      return "sub";
    case SlpOp::Mul:
      return "mul";
    case SlpOp::Div:
      return "div";
  }
  return "?";
}

Slp Slp::identity(std::size_t n) {
  Slp s(n);
  std::vector<std::uint32_t> outs;
  for (std::size_t i = 0; i < n; ++i) outs.push_back(s.add_input(i));
  s.set_outputs(std::move(outs));
  return s;
}

std::uint32_t Slp::add_input(std::size_t i) {
  if (i >= in_arity_) fail(ErrorKind::ArityMismatch, "input index " + std::to_string(i) + " out of range");
  nodes_.push_back({SlpOp::Input, static_cast<std::uint32_t>(i), 0, Rational()});
  deg_.push_back({1, 0});
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

std::uint32_t Slp::add_const(const Rational& v) {
  nodes_.push_back({SlpOp::Const, 0, 0, v});
  deg_.push_back({0, 0});
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

std::uint32_t Slp::add_op(SlpOp op, std::uint32_t a, std::uint32_t b) {
  if (op == SlpOp::Input || op == SlpOp::Const) fail(ErrorKind::InvalidArgument, "add_op needs a binary op");
  if (a >= nodes_.size() || b >= nodes_.size()) fail(ErrorKind::MalformedInput, "operand refers to a later node");
  nodes_.push_back({op, a, b, Rational()});
  deg_.push_back(combine(op, deg_[a], deg_[b]));
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

void Slp::set_outputs(std::vector<std::uint32_t> outs) {
  for (auto o : outs)
    if (o >= nodes_.size()) fail(ErrorKind::MalformedInput, "output refers to a missing node");
  outputs_ = std::move(outs);
}

std::vector<std::uint64_t> Slp::degree_bounds() const {
  std::vector<std::uint64_t> out;
  for (auto o : outputs_) out.push_back(deg_[o].num);
  return out;
}

bool Slp::polynomial_outputs() const {
  return std::all_of(outputs_.begin(), outputs_.end(), [&](std::uint32_t o) { return deg_[o].den == 0; });
}

std::vector<Rational> Slp::eval(const std::vector<Rational>& point) const {
  return eval_with(std::span<const Rational>(point), [](const Rational& r) { return r; });
}

std::vector<ModP> Slp::eval_mod(const std::vector<ModP>& point, std::uint64_t p) const {
  return eval_with(std::span<const ModP>(point), [p](const Rational& r) { return reduce(r, p); });
}

Matrix<Rational> Slp::jacobian_raw(const std::vector<Rational>& point) const {
  if (point.size() != in_arity_) fail(ErrorKind::ArityMismatch, "point length differs from SLP input arity");
  const std::size_t m = in_arity_;
  std::vector<Rational> val;
  std::vector<std::vector<Rational>> grad;
  val.reserve(nodes_.size());
  grad.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const SlpNode& n = nodes_[i];
    std::vector<Rational> g(m);
    switch (n.op) {
      case SlpOp::Input:
        val.push_back(point[n.a]);
        g[n.a] = Rational(1);
        break;
      case SlpOp::Const:
        val.push_back(n.value);
        break;
      case SlpOp::Add:
        val.push_back(val[n.a] + val[n.b]);
        for (std::size_t k = 0; k < m; ++k) g[k] = grad[n.a][k] + grad[n.b][k];
        break;
      case SlpOp::Sub:
        val.push_back(val[n.a] - val[n.b]);
        for (std::size_t k = 0; k < m; ++k) g[k] = grad[n.a][k] - grad[n.b][k];
        break;
      case SlpOp::Mul:
        val.push_back(val[n.a] * val[n.b]);
        for (std::size_t k = 0; k < m; ++k) g[k] = grad[n.a][k] * val[n.b] + grad[n.b][k] * val[n.a];
        break;
      case SlpOp::Div: {
        const Rational& den = val[n.b];
        if (den.is_zero()) throw PoleHit(static_cast<std::int64_t>(i));
        val.push_back(val[n.a] / den);
        const Rational den2 = den * den;
        for (std::size_t k = 0; k < m; ++k) g[k] = (grad[n.a][k] * den - val[n.a] * grad[n.b][k]) / den2;
        break;
      }
    }
    grad.push_back(std::move(g));
  }
  Matrix<Rational> j(outputs_.size(), m);
  for (std::size_t r = 0; r < outputs_.size(); ++r)
    for (std::size_t k = 0; k < m; ++k) j(r, k) = grad[outputs_[r]][k];
  return j;
}

Matrix<Rational> Slp::jacobian(const std::vector<Rational>& point, std::size_t chart) const {
  if (chart >= outputs_.size()) fail(ErrorKind::InvalidArgument, "chart index out of range");
  const auto y = eval(point);
  if (y[chart].is_zero()) fail(ErrorKind::ChartVanishes, "output coordinate " + std::to_string(chart) + " is zero");
  const auto raw = jacobian_raw(point);
  const Rational yc = y[chart], yc2 = yc * yc;
  Matrix<Rational> j(outputs_.size() - 1, in_arity_);
  std::size_t r = 0;
  for (std::size_t o = 0; o < outputs_.size(); ++o) {
    if (o == chart) continue;
    for (std::size_t k = 0; k < in_arity_; ++k) j(r, k) = (raw(o, k) * yc - y[o] * raw(chart, k)) / yc2;
    ++r;
  }
  return j;
}

Slp Slp::pruned() const {
  std::vector<bool> live(nodes_.size(), false);
  for (auto o : outputs_) live[o] = true;
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    if (!live[i]) continue;
    const SlpNode& n = nodes_[i];
    if (n.op != SlpOp::Input && n.op != SlpOp::Const) {
      live[n.a] = true;
      live[n.b] = true;
    }
  }
  Slp out(in_arity_);
  out.prov_ = prov_;
  std::vector<std::uint32_t> remap(nodes_.size(), 0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!live[i]) continue;
    const SlpNode& n = nodes_[i];
    switch (n.op) {
      case SlpOp::Input:
        remap[i] = out.add_input(n.a);
        break;
      case SlpOp::Const:
        remap[i] = out.add_const(n.value);
        break;
      default:
        remap[i] = out.add_op(n.op, remap[n.a], remap[n.b]);
    }
  }
  std::vector<std::uint32_t> outs;
  for (auto o : outputs_) outs.push_back(remap[o]);
  out.set_outputs(std::move(outs));
  return out;
}

nlohmann::json Slp::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : nodes_) {
    nlohmann::json j;
    j["op"] = to_string(n.op);
    switch (n.op) {
      case SlpOp::Input:
        j["args"] = {n.a};
        break;
      case SlpOp::Const:
        j["args"] = nlohmann::json::array();
        j["value"] = n.value.to_string();
        break;
      default:
        j["args"] = {n.a, n.b};
    }
    nodes.push_back(std::move(j));
  }
  nlohmann::json seeds = nlohmann::json::array();
  for (auto s : prov_.seeds) seeds.push_back(std::to_string(s));
  return {{"version", 1},
          {"in_arity", in_arity_},
          {"out_arity", outputs_.size()},
          {"nodes", std::move(nodes)},
          {"outputs", outputs_},
          {"degree_bounds", degree_bounds()},
          {"provenance", {{"stage", prov_.stage}, {"seeds", std::move(seeds)}}}};
}

Slp Slp::from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) fail(ErrorKind::MalformedInput, "SLP must be a JSON object");
    if (j.at("version").get<int>() != 1) fail(ErrorKind::MalformedInput, "unsupported SLP version");
    Slp s(j.at("in_arity").get<std::size_t>());
    const auto& nodes = j.at("nodes");
    if (!nodes.is_array()) fail(ErrorKind::MalformedInput, "nodes must be an array");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& n = nodes[i];
      SlpOp op = op_from_string(n.at("op").get<std::string>());
      const auto& args = n.at("args");
      auto arg = [&](std::size_t k) {
        auto v = args.at(k).get<std::int64_t>();
        if (v < 0) fail(ErrorKind::MalformedInput, "negative node reference");
        return static_cast<std::uint64_t>(v);
      };
      switch (op) {
        case SlpOp::Input:
          if (args.size() != 1) fail(ErrorKind::MalformedInput, "input node needs one argument");
          if (arg(0) >= s.in_arity_) fail(ErrorKind::MalformedInput, "input index out of range");
          s.add_input(arg(0));
          break;
        case SlpOp::Const:
          if (!args.empty()) fail(ErrorKind::MalformedInput, "const node takes no arguments");
          s.add_const(Rational::parse(n.at("value").get<std::string>()));
          break;
        default: {
          if (args.size() != 2) fail(ErrorKind::MalformedInput, "binary node needs two arguments");
          std::uint64_t a = arg(0), b = arg(1);
          if (a >= i || b >= i)
            fail(ErrorKind::MalformedInput,
                 "node " + std::to_string(i) + " refers to a node that is not earlier (cycle or forward reference)");
          s.add_op(op, static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
        }
      }
    }
    std::vector<std::uint32_t> outs;
    for (const auto& o : j.at("outputs")) {
      auto v = o.get<std::int64_t>();
      if (v < 0 || static_cast<std::uint64_t>(v) >= s.nodes_.size())
        fail(ErrorKind::MalformedInput, "output refers to a missing node");
      outs.push_back(static_cast<std::uint32_t>(v));
    }
    if (outs.size() != j.at("out_arity").get<std::size_t>()) fail(ErrorKind::MalformedInput, "out_arity mismatch");
    s.set_outputs(std::move(outs));
    if (j.at("degree_bounds").get<std::vector<std::uint64_t>>() != s.degree_bounds())
      fail(ErrorKind::MalformedInput, "stored degree bounds disagree with the node list");
    if (j.contains("provenance")) {
      const auto& p = j.at("provenance");
      s.prov_.stage = p.value("stage", std::string());
      if (p.contains("seeds"))
        for (const auto& sd : p.at("seeds")) s.prov_.seeds.push_back(std::stoull(sd.get<std::string>()));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::MalformedInput, std::string("SLP JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    fail(ErrorKind::MalformedInput, std::string("SLP JSON: ") + e.what());
  } catch (const std::out_of_range& e) {
    fail(ErrorKind::MalformedInput, std::string("SLP JSON: ") + e.what());
  }
}

std::string Slp::serialize() const { return to_json().dump(); }

Slp Slp::deserialize(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::MalformedInput, std::string("SLP JSON: ") + e.what());
  }
  return from_json(j);
}

Slp compose(const Slp& outer, const Slp& inner) {
  if (inner.out_arity() != outer.in_arity())
    fail(ErrorKind::ArityMismatch, "inner map has " + std::to_string(inner.out_arity()) + " outputs, outer expects " +
                                       std::to_string(outer.in_arity()));
  Slp out(inner.in_arity());
  std::vector<std::uint32_t> inner_map(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) {
    const SlpNode& n = inner.nodes()[i];
    switch (n.op) {
      case SlpOp::Input:
        inner_map[i] = out.add_input(n.a);
        break;
      case SlpOp::Const:
        inner_map[i] = out.add_const(n.value);
        break;
      default:
        inner_map[i] = out.add_op(n.op, inner_map[n.a], inner_map[n.b]);
    }
  }
  std::vector<std::uint32_t> outer_map(outer.size());
  for (std::size_t i = 0; i < outer.size(); ++i) {
    const SlpNode& n = outer.nodes()[i];
    switch (n.op) {
      case SlpOp::Input:
        outer_map[i] = inner_map[inner.outputs()[n.a]];
        break;
      case SlpOp::Const:
        outer_map[i] = out.add_const(n.value);
        break;
      default:
        outer_map[i] = out.add_op(n.op, outer_map[n.a], outer_map[n.b]);
    }
  }
  std::vector<std::uint32_t> outs;
  for (auto o : outer.outputs()) outs.push_back(outer_map[o]);
  out.set_outputs(std::move(outs));
  SlpProvenance prov;
  prov.stage = outer.provenance().stage.empty() ? inner.provenance().stage
                                                 : outer.provenance().stage + " o " + inner.provenance().stage;
  prov.seeds = inner.provenance().seeds;
  prov.seeds.insert(prov.seeds.end(), outer.provenance().seeds.begin(), outer.provenance().seeds.end());
  out.set_provenance(std::move(prov));
  return out.pruned();
}

Slp coordinate_projection(std::size_t in_arity, const std::vector<std::size_t>& keep) {
  Slp s(in_arity);
  std::vector<std::uint32_t> outs;
  for (auto k : keep) outs.push_back(s.add_input(k));
  s.set_outputs(std::move(outs));
  s.set_provenance({"projection", {}});
  return s;
}

}  // namespace unirat
