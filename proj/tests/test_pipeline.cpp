#include "doctest.h"

#include <variant>

#include "unirat/errors.hpp"
#include "unirat/pipeline.hpp"
#include "unirat/poly_text.hpp"
#include "unirat/random.hpp"

using namespace unirat;

namespace {

using P = MPoly<Rational>;

std::vector<Rational> random_point(Rng& rng, std::size_t n, long bound = 20) {
  std::vector<Rational> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(rng.rational(bound));
  return v;
}

Rational sq(const Rational& a) { return a * a; }

// The first k coordinates of x.
std::vector<Rational> head(const std::vector<Rational>& x, std::size_t k) { return {x.begin(), x.begin() + k}; }

}  // namespace

TEST_CASE("real example contains the double quadric") {
  for (std::optional<std::size_t> extra : {std::optional<std::size_t>{}, std::optional<std::size_t>{0}, std::optional<std::size_t>{1}}) {
    const auto h = build_real_example(8, Rational(1, 16), 5, extra);
    CHECK_NOTHROW(h.check());
    CHECK(h.F.nvars() == 9);
    CHECK(h.cubics.size() == 4);
    // F on M: set x5..x8 = 0 and compare with f^2 pointwise.
    Rng rng(1);
    for (int k = 0; k < 5; ++k) {
      auto x = random_point(rng, 9);
      for (std::size_t i = 5; i < 9; ++i) x[i] = 0;
      CHECK(evaluate(h.F, x) == sq(evaluate(h.f, x)) * h.alpha);
    }
    // F = f^2 + sum x_i^4 + eps sum x_i c_i, checked at random points.
    for (int k = 0; k < 5; ++k) {
      const auto x = random_point(rng, 9);
      Rational want = sq(evaluate(h.f, x));
      for (std::size_t i = 5; i < 9; ++i) want += sq(sq(x[i])) + Rational(1, 16) * x[i] * evaluate(h.cubics[i - 5], x);
      CHECK(evaluate(h.F, x) == want);
    }
    const auto back = QuarticInstance::from_json(h.to_json());
    CHECK(back.F == h.F);
    CHECK(back.extra_terms == h.extra_terms);
  }
}

TEST_CASE("reduced configuration uses distinct diagonal cubes") {
  const auto h = build_real_example(9, Rational(1, 16), 3, std::size_t{0});
  std::vector<bool> used(5, false);
  for (const auto& c : h.cubics) {
    REQUIRE(c.size() == 1);
    const auto& m = c.leading_monomial();
    std::size_t var = 99;
    for (std::size_t i = 0; i < 5; ++i)
      if (m[i] == 3) var = i;
    REQUIRE(var < 5);
    CHECK(!used[var]);
    used[var] = true;
    const Rational a = c.leading_coefficient().abs();
    CHECK((a == 1 || a == 2));
  }
  CHECK_THROWS_AS(build_real_example(10, Rational(1, 16), 3, std::size_t{0}), Error);
}

TEST_CASE("conic specs") {
  const auto c = ConicSpec::circle();
  CHECK(ConicSpec::parse(c.to_string()).point == c.point);
  CHECK(ConicSpec::parse("circle").zero_coords == c.zero_coords);
  CHECK_THROWS_AS(ConicSpec::parse("zero=2;point=1"), Error);
  const Slp g = conic_curve(sphere_form(5), c, 7);
  CHECK(g.out_arity() == 7);
  Rng rng(2);
  for (int k = 0; k < 10; ++k) {
    const auto y = g.eval({rng.rational(30)});
    CHECK(evaluate(sphere_form(5), head(y, 5)).is_zero());
    CHECK(y[2].is_zero());
    CHECK(y[5].is_zero());
  }
}

TEST_CASE("cone decomposition identity") {
  const auto r = reverse_build({});
  const auto& d = r.decomposition;
  CHECK(decomposition_residual(r.quartic.F, r.quartic.f, r.quartic.alpha, r.ci23.q, d).is_zero());
  // Pointwise: lambda F5 = alpha f q + x5 c.
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto x = random_point(rng, 7);
    const auto x6 = head(x, 6);
    CHECK(d.lambda * evaluate(r.quartic.F, x6) ==
          r.quartic.alpha * evaluate(r.quartic.f, x6) * evaluate(r.ci23.q, x) + x[5] * evaluate(d.c, x));
  }
  CHECK(r.interpolation_kernel_dim == 1);
  CHECK(r.interpolation_matches);
  CHECK(r.resultant_matches);
  // q = x5 l + lambda f with l the default x6.
  CHECK(r.ci23.q == parse_poly("x0^2 + x1^2 + x2^2 + x3^2 - x4^2 + x5*x6", VarNames::coords(7)));
}

TEST_CASE("the X23 map lands on the complete intersection") {
  const auto r = reverse_build({});
  CHECK(r.ci23_map.in_arity() == 4);
  Rng rng(4);
  int good = 0;
  for (int k = 0; k < 10; ++k) {
    try {
      const auto y = r.ci23_map.eval(random_point(rng, 4, 50));
      CHECK(evaluate(r.ci23.q, y).is_zero());
      CHECK(evaluate(r.ci23.c, y).is_zero());
      ++good;
    } catch (const PoleHit&) {
    }
  }
  CHECK(good >= 8);
  // Projection from e6 drops the last coordinate.
  for (int k = 0; k < 5; ++k) {
    try {
      const auto y = r.quartic_map.eval(random_point(rng, 4, 50));
      CHECK(evaluate(r.quartic.F, y).is_zero());
    } catch (const PoleHit&) {
    }
  }
}

TEST_CASE("Sylvester resultant of linear forms") {
  const VarNames n = VarNames::coords(3);
  // Res_x2(x0 + x2, x1 - 2 x2) = -2 x0 - x1 up to sign.
  const P r = sylvester_resultant(parse_poly("x0 + x2", n), parse_poly("x1 - 2*x2", n), 2);
  const P want = parse_poly("-2*x0 - x1", n);
  CHECK((r == want || r == want * Rational(-1)));
}

TEST_CASE("quadric system counts eight quadrics on a reverse-built instance") {
  const auto r = reverse_build({});
  const Slp gamma = conic_curve(r.quartic.f, ConicSpec::circle(), 7);
  const auto s = solve_quadric_system(r.quartic.F, r.quartic.f, r.quartic.alpha, gamma, 7);
  CHECK(s.quadric_space_dim == 8);
  CHECK(s.projective_dim == 7);
  CHECK(s.obstruction.is_zero());
  REQUIRE(s.witness);
  const auto out = parametrize_Y4(r.quartic, ConicSpec::circle(), 9);
  REQUIRE(std::holds_alternative<Slp>(out));
  const Slp& m = std::get<Slp>(out);
  CHECK(m.in_arity() == 4);
  Rng rng(5);
  for (int k = 0; k < 5; ++k) {
    try {
      CHECK(evaluate(r.quartic.F, m.eval(random_point(rng, 4, 50))).is_zero());
    } catch (const PoleHit&) {
    }
  }
}

TEST_CASE("the real example is obstructed along the circle") {
  const auto h = build_real_example(8, Rational(1, 16), 11);
  const auto out = parametrize_H4(h, ConicSpec::circle(), 1);
  REQUIRE(std::holds_alternative<ObstructionReport>(out));
  const auto& rep = std::get<ObstructionReport>(out);
  CHECK(rep.solver.quadric_space_dim == 8);
  CHECK(!rep.solver.obstruction.is_zero());
  // Independently: on the section through e5 + sum b_i e_i the linear term in
  // y5 is sum_i eps b_i c_i(x) with b5 = 1; evaluate it on gamma.
  const auto& ob = rep.solver.obstruction;
  REQUIRE(ob.nvars() == 1 + 3);
  Rng rng(6);
  for (int k = 0; k < 10; ++k) {
    const auto tb = random_point(rng, 4);
    auto x = rep.gamma.eval({tb[0]});
    x.resize(9, Rational(0));
    Rational want = evaluate(h.cubics[0], x);
    for (std::size_t i = 1; i < 4; ++i) want += tb[i] * evaluate(h.cubics[i], x);
    CHECK(evaluate(ob, tb) == want * *h.epsilon);
  }
}

TEST_CASE("generic section keeps the double quadric") {
  const auto h = build_real_example(8, Rational(1, 16), 2);
  const auto s = generic_section(h);
  CHECK(s.base_params == 3);
  CHECK(s.quartic.nvars() == 6 + 3);
  Rng rng(7);
  for (int k = 0; k < 5; ++k) {
    auto x = random_point(rng, 9);
    x[5] = 0;
    CHECK(evaluate(s.quartic, x) == sq(evaluate(h.f, x)) * h.alpha);
  }
}
