#include "doctest.h"

#include "unirat/errors.hpp"
#include "unirat/geom.hpp"
#include "unirat/pipeline.hpp"
#include "unirat/poly_text.hpp"
#include "unirat/random.hpp"

using namespace unirat;

namespace {

using P = MPoly<Rational>;

P random_cubic(Rng& rng, std::size_t nvars) {
  P c(nvars);
  for (const auto& m : monomials_of_degree(nvars, 3)) c.add_term(m, Rational(static_cast<long>(rng.uniform(-3, 3))));
  return c;
}

P linear(std::size_t nvars, const std::vector<Rational>& a) {
  P l(nvars);
  for (std::size_t i = 0; i < nvars; ++i) l += P::variable(nvars, i) * a[i];
  return l;
}

}  // namespace

TEST_CASE("stereographic parametrisation of the sphere is an identity") {
  const QuadricHypersurface q(sphere_form(5));
  const Point<Rational> p = {1, 0, 0, 0, 1};
  const auto chart = LinearSubspace::coordinate(5, {0});
  const Slp phi = stereographic_param(q, p, chart);
  const auto outs = expand_slp(phi);
  CHECK(compose(q.form(), outs).is_zero());
  // The affine variant too.
  CHECK(compose(q.form(), expand_slp(stereographic_param(q, p, chart, true))).is_zero());
  CHECK_THROWS_AS(stereographic_param(q, {1, 0, 0, 0, 0}, chart), Error);
}

TEST_CASE("stereographic point is the second intersection") {
  Rng rng(1);
  const QuadricHypersurface q(sphere_form(5));
  const Point<Rational> p = {0, 3, 4, 0, 5};
  for (int k = 0; k < 20; ++k) {
    Point<Rational> d(5);
    for (auto& x : d) x = rng.rational(10);
    const auto s = stereographic_point(q.gram(), p, d);
    CHECK(q.value(s).is_zero());
    // s lies on the line through p and d.
    Matrix<Rational> m = Matrix<Rational>::from_rows({p, d, s});
    CHECK(rank(m) <= 2);
  }
}

TEST_CASE("residual point of a line with a double contact") {
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    // s = (1, s1, ...), d = (0, 1, d2, ...): u = x0 and v = x1 - s1 x0 give
    // u(s) = 1, u(d) = 0, v(s) = 0, v(d) = 1.
    const std::size_t n = 5;
    Point<Rational> s(n), d(n);
    s[0] = 1;
    d[0] = 0;
    d[1] = 1;
    for (std::size_t i = 1; i < n; ++i) s[i] = rng.rational(10);
    for (std::size_t i = 2; i < n; ++i) d[i] = rng.rational(10);
    const P c0 = random_cubic(rng, n);
    const auto g = restrict_to_line(c0, s, d);
    std::vector<Rational> ua(n, Rational(0)), va(n, Rational(0));
    ua[0] = 1;
    va[0] = -s[1];
    va[1] = 1;
    const P u = linear(n, ua), v = linear(n, va);
    const P c = c0 - u.pow(3) * g.coefficient(0) - u.pow(2) * v * g.coefficient(1);
    const auto r = residual_point(c, s, d);
    CHECK(evaluate(c, r).is_zero());
  }
  // A line inside the cubic.
  const P cube = parse_poly("x0*x1*x2", VarNames::coords(3));
  CHECK_THROWS_AS(residual_point(cube, Point<Rational>{1, 0, 0}, Point<Rational>{0, 1, 0}), Error);
}

TEST_CASE("tangent spaces") {
  const P f = sphere_form(5);
  const auto t = tangent_space(f, {1, 0, 0, 0, 1});
  CHECK(t.dimension() == 4);
  CHECK(t.contains({1, 0, 0, 0, 1}));
  CHECK(t.contains({0, 1, 0, 0, 0}));
  CHECK(!t.contains({1, 0, 0, 0, 0}));
  CHECK_THROWS_AS(tangent_space(f, {1, 0, 0, 0, 0}), Error);
}

TEST_CASE("conic parametrisation lies on the quadric and the plane") {
  const QuadricHypersurface q(sphere_form(5));
  const auto plane = LinearSubspace::coordinate(5, {2, 3});
  const Slp gamma = conic_param(q, plane, {1, 0, 0, 0, 1});
  const auto outs = expand_slp(gamma);
  CHECK(compose(q.form(), outs).is_zero());
  CHECK(outs[2].is_zero());
  CHECK(outs[3].is_zero());
  CHECK(gamma.in_arity() == 1);
  // The plane x0 - x4 = x1 = 0 is tangent at pt: degenerate conic.
  Matrix<Rational> eq = Matrix<Rational>::from_rows({{1, 0, 0, 0, -1}, {0, 1, 0, 0, 0}});
  CHECK_THROWS_AS(conic_param(q, LinearSubspace::from_equations(eq), {1, 0, 0, 0, 1}), Error);
}

TEST_CASE("cones over a hypersurface") {
  const P f = sphere_form(5);
  const ConeData cone = cone_over(f);
  CHECK(cone.lifted.nvars() == 6);
  // Every point nu * base + mu * vertex with f(base) = 0 lies on the cone.
  Rng rng(3);
  const Point<Rational> base = {3, 4, 0, 0, 5, 0};
  for (int k = 0; k < 5; ++k) {
    const Rational nu = rng.rational(9), mu = rng.rational(9);
    Point<Rational> y(6);
    for (std::size_t i = 0; i < 6; ++i) y[i] = nu * base[i] + mu * cone.vertex[i];
    CHECK(evaluate(cone.lifted, y).is_zero());
  }
  Matrix<Rational> bb(5, 6);
  for (std::size_t i = 0; i < 5; ++i) bb(i, i) = 1;
  CHECK_THROWS_AS(cone_over(f, bb, {1, 0, 0, 0, 0, 0}), Error);
}

TEST_CASE("projection from a point") {
  const Point<Rational> p = {1, 2, 0, 3};
  const Slp pr = project_from_point(p);
  CHECK(pr.out_arity() == 3);
  // Points on a line through p project to the same point.
  const Point<Rational> y = {5, -1, 2, 7};
  Point<Rational> y2(4);
  for (std::size_t i = 0; i < 4; ++i) y2[i] = y[i] + Rational(4) * p[i];
  CHECK(same_point(project_point(p, y), project_point(p, y2)));
  CHECK(pr.eval(y) == project_point(p, y));
  CHECK_THROWS_AS(project_point(p, p), PoleHit);
}

TEST_CASE("fiber quadric of a quadric and a cubic") {
  // e0 is a smooth point of both, with independent gradients e4 and e1.
  const VarNames n = VarNames::coords(5);
  const P q = parse_poly("x0*x4 - x1^2 - x2*x3", n);
  const P c = parse_poly("x0^2*x1 - x1^3 + x2^2*x3 - x2*x3^2", n);
  const Point<Rational> s = {1, 0, 0, 0, 0};
  REQUIRE(evaluate(q, s).is_zero());
  REQUIRE(evaluate(c, s).is_zero());
  const auto fq = fiber_quadric(q, c, s);
  CHECK(fq.basis.size() == 3);
  const auto gq = gradient_at(q, s), gc = gradient_at(c, s);
  for (const auto& b : fq.basis) {
    Rational dq = 0, dc = 0;
    for (std::size_t i = 0; i < 5; ++i) {
      dq += gq[i] * b[i];
      dc += gc[i] * b[i];
    }
    CHECK(dq.is_zero());
    CHECK(dc.is_zero());
  }
  CHECK_THROWS_AS(fiber_quadric(q, q * P::variable(5, 0), s), Error);  // tangent hyperplanes coincide
}

TEST_CASE("subspaces") {
  const auto l = LinearSubspace::coordinate(4, {1, 3});
  CHECK(l.dimension() == 2);
  CHECK(l.contains({1, 0, 2, 0}));
  CHECK(!l.contains({0, 1, 0, 0}));
  const auto same = LinearSubspace::from_basis(l.basis());
  CHECK(same.equations().rows() == 2);
  CHECK(same_point({1, 2}, {2, 4}));
  CHECK(!same_point({1, 2}, {2, 3}));
}
