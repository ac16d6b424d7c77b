#include "doctest.h"

#include "unirat/errors.hpp"
#include "unirat/pipeline.hpp"
#include "unirat/poly_text.hpp"
#include "unirat/random.hpp"
#include "unirat/slp.hpp"
#include "unirat/traced.hpp"

using namespace unirat;

namespace {

// (t, u) -> (t^2 - u, t*u, 1 / (1 + t^2)) built by hand.
Slp sample_map() {
  Slp s(2);
  const auto t = s.add_input(0), u = s.add_input(1), one = s.add_const(1);
  const auto t2 = s.add_op(SlpOp::Mul, t, t);
  const auto a = s.add_op(SlpOp::Sub, t2, u);
  const auto b = s.add_op(SlpOp::Mul, t, u);
  const auto den = s.add_op(SlpOp::Add, one, t2);
  const auto c = s.add_op(SlpOp::Div, one, den);
  s.set_outputs({a, b, c});
  return s;
}

}  // namespace

TEST_CASE("evaluation matches the formulas") {
  const Slp s = sample_map();
  Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    const Rational t = rng.rational(30), u = rng.rational(30);
    const auto y = s.eval({t, u});
    CHECK(y[0] == t * t - u);
    CHECK(y[1] == t * u);
    CHECK(y[2] == Rational(1) / (Rational(1) + t * t));
  }
  CHECK(!s.polynomial_outputs());
  CHECK(s.degree_bounds()[0] == 2);
}

TEST_CASE("poles are reported with the node") {
  Slp s(1);
  const auto x = s.add_input(0);
  s.set_outputs({s.add_op(SlpOp::Div, x, x)});
  try {
    s.eval({Rational(0)});
    FAIL("expected a pole");
  } catch (const PoleHit& e) {
    CHECK(e.node() == 1);
  }
}

TEST_CASE("modular evaluation agrees with rational evaluation") {
  const Slp s = sample_map();
  const std::uint64_t p = 10007;
  PrimeScope scope(p);
  const auto y = s.eval({Rational(3), Rational(5)});
  const auto ym = s.eval_mod({ModP(3), ModP(5)}, p);
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(reduce(y[i], p) == ym[i]);
}

TEST_CASE("Jacobian by forward propagation matches symbolic derivatives") {
  Slp s(2);
  const auto t = s.add_input(0), u = s.add_input(1);
  const auto t2 = s.add_op(SlpOp::Mul, t, t);
  s.set_outputs({s.add_op(SlpOp::Sub, t2, u), s.add_op(SlpOp::Mul, t2, u), s.add_const(1)});
  const auto polys = expand_slp(s);
  Rng rng(2);
  const std::vector<Rational> x = {rng.rational(20), rng.rational(20)};
  const auto jr = s.jacobian_raw(x);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(jr(i, j) == evaluate(partial_derivative(polys[i], j), x));
  // Affine chart y2 = 1 leaves the raw rows.
  const auto ja = s.jacobian(x, 2);
  CHECK(ja.rows() == 2);
  CHECK(ja(0, 0) == jr(0, 0));
}

TEST_CASE("serialization round trip") {
  Slp s = sample_map();
  s.set_provenance({"test", {1, 2}});
  const Slp back = Slp::deserialize(s.serialize());
  const Slp back2 = Slp::from_json(s.to_json());
  for (const Slp* m : {&back, &back2}) {
    CHECK(m->in_arity() == 2);
    CHECK(m->eval({Rational(2), Rational(7)}) == s.eval({Rational(2), Rational(7)}));
    CHECK(m->provenance().stage == "test");
  }
  CHECK_THROWS_AS(Slp::deserialize("garbage"), Error);
  // Forward references are rejected.
  auto j = s.to_json();
  j["nodes"][3]["args"][0] = 6;
  CHECK_THROWS_AS(Slp::from_json(j), Error);
}

TEST_CASE("composition") {
  const Slp inner = sample_map();
  Slp outer(3);
  const auto a = outer.add_input(0), b = outer.add_input(1);
  outer.set_outputs({outer.add_op(SlpOp::Add, a, b)});
  const Slp c = compose(outer, inner);
  const auto y = inner.eval({Rational(4), Rational(-1)});
  CHECK(c.eval({Rational(4), Rational(-1)})[0] == y[0] + y[1]);
  CHECK_THROWS_AS(compose(sample_map(), sample_map()), Error);
  const Slp proj = coordinate_projection(3, {2, 0});
  CHECK(proj.eval({Rational(1), Rational(2), Rational(3)}) == std::vector<Rational>{Rational(3), Rational(1)});
}

TEST_CASE("traced builder records what it computes") {
  SlpBuilder b(2, {Rational(2), Rational(3)});
  const Traced x = b.input(0), y = b.input(1);
  const Traced z = (x * y + Traced(1)) / (x - y * Traced(0));
  CHECK(z.sample() == Rational(7, 2));
  const Slp s = b.finish({z, x * Traced(1)});
  CHECK(s.eval({Rational(5), Rational(1)})[0] == Rational(6, 5));
  // Constant folding keeps x * 1 free of new nodes.
  CHECK((x * Traced(1)).node() == x.node());
  // A divisor vanishing at the sample point is a pole of the builder.
  CHECK_THROWS_AS(x / (x - Traced(2)), PoleHit);
}

TEST_CASE("expansion of polynomial programs") {
  const VarNames n = VarNames::coords(2);
  Slp s(2);
  const auto x = s.add_input(0), y = s.add_input(1);
  const auto sum = s.add_op(SlpOp::Add, x, y);
  s.set_outputs({s.add_op(SlpOp::Mul, sum, sum)});
  CHECK(expand_slp(s)[0] == parse_poly("x0^2 + 2*x0*x1 + x1^2", n));
  CHECK(s.pruned().size() <= s.size());
}
