#include "doctest.h"

#include "unirat/errors.hpp"
#include "unirat/groebner.hpp"
#include "unirat/poly_text.hpp"
#include "unirat/random.hpp"

using namespace unirat;

namespace {

const std::uint64_t kP = 32003;

MPoly<ModP> modp(const std::string& text, std::size_t nvars) {
  return parse_poly(text, VarNames::coords(nvars)).map_coefficients<ModP>([](const Rational& r) { return reduce(r, kP); });
}

MPoly<ModP> random_form(Rng& rng, std::size_t nvars, unsigned deg) {
  MPoly<ModP> f(nvars);
  for (const auto& m : monomials_of_degree(nvars, deg)) f.add_term(m, ModP(static_cast<long>(rng.uniform(-50, 50))));
  return f;
}

// Standard monomials of degree d: not divisible by any leading monomial.
std::size_t standard_count(const GroebnerBasis& gb, unsigned d) {
  std::size_t count = 0;
  for (const auto& m : monomials_of_degree(gb.nvars, d)) {
    bool divisible = false;
    for (const auto& g : gb.generators)
      if (g.leading_monomial().divides(m)) divisible = true;
    if (!divisible) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("basis of a monomial-free ideal") {
  PrimeScope scope(kP);
  // Twisted cubic: x0 x2 - x1^2, x0 x3 - x1 x2, x1 x3 - x2^2.
  std::vector<MPoly<ModP>> g = {modp("x0*x2 - x1^2", 4), modp("x0*x3 - x1*x2", 4), modp("x1*x3 - x2^2", 4)};
  const auto gb = buchberger(g);
  CHECK(gb.complete);
  CHECK(is_groebner_basis(gb));
  for (const auto& f : g) CHECK(normal_form(f, gb).is_zero());
  // The twisted cubic is a curve: projective dimension 1; its Hilbert
  // function is 3d + 1.
  CHECK(projective_dimension(gb, 4) == 1);
  for (unsigned d = 1; d <= 5; ++d) CHECK(standard_count(gb, d) == 3 * d + 1);
}

TEST_CASE("ideal membership of random combinations") {
  PrimeScope scope(kP);
  Rng rng(1);
  std::vector<MPoly<ModP>> g;
  for (int k = 0; k < 3; ++k) g.push_back(random_form(rng, 4, 2));
  const auto gb = buchberger(g);
  MPoly<ModP> comb(4);
  for (const auto& f : g) comb += f * random_form(rng, 4, 1);
  CHECK(normal_form(comb, gb).is_zero());
  CHECK(!normal_form(modp("x0^2", 4), gb).is_zero());
}

TEST_CASE("complete intersection Hilbert function") {
  // (1 + t)^3 for three quadrics in three variables.
  const auto h = complete_intersection_hilbert({2, 2, 2}, 3, 10);
  CHECK(h == std::vector<std::uint64_t>{1, 3, 3, 1});
  // (1 + t + t^2)^2 = 1 + 2t + 3t^2 + 2t^3 + t^4.
  CHECK(complete_intersection_hilbert({3, 3}, 2, 10) == std::vector<std::uint64_t>{1, 2, 3, 2, 1});
  // Fewer forms than variables: the series never ends; truncated.
  const auto k = complete_intersection_hilbert({2}, 3, 4);
  REQUIRE(k.size() == 5);
  CHECK(k[4] == 15 - 6);  // dim R_4 - dim R_2
}

TEST_CASE("generic complete intersection matches its Hilbert function") {
  PrimeScope scope(kP);
  Rng rng(2);
  std::vector<MPoly<ModP>> g;
  for (int k = 0; k < 3; ++k) g.push_back(random_form(rng, 3, 2));
  const auto gb = buchberger(g);
  const auto h = complete_intersection_hilbert({2, 2, 2}, 3, 10);
  for (unsigned d = 0; d < 6; ++d) CHECK(standard_count(gb, d) == (d < h.size() ? h[d] : 0));
  CHECK(projective_empty(gb, 3));
  CHECK(projective_dimension(gb, 3) == -1);
}

TEST_CASE("Hilbert shortcut and early stop give the same verdict") {
  PrimeScope scope(kP);
  // Jacobian of the Fermat quartic plus a perturbation in four variables.
  const auto F = parse_poly("x0^4 + x1^4 + x2^4 + x3^4 + x0*x1*x2*x3", VarNames::coords(4));
  std::vector<MPoly<ModP>> J;
  for (std::size_t i = 0; i < 4; ++i)
    J.push_back(partial_derivative(F, i).map_coefficients<ModP>([](const Rational& r) { return reduce(r, kP); }));
  const auto plain = buchberger(J);
  GroebnerOptions o;
  o.hilbert_function = complete_intersection_hilbert({3, 3, 3, 3}, 4, 20);
  o.stop_at_pure_powers = true;
  const auto fast = buchberger(J, o);
  CHECK(projective_empty(plain, 4));
  CHECK(projective_empty(fast, 4));
  for (const auto& g : fast.generators) CHECK(normal_form(g, plain).is_zero());
}

TEST_CASE("singular loci are detected") {
  PrimeScope scope(kP);
  // The cone x0^2 + x1^2 - x2^2 in P^3 is singular at (0:0:0:1).
  const auto F = parse_poly("x0^2 + x1^2 - x2^2", VarNames::coords(4));
  std::vector<MPoly<ModP>> J;
  for (std::size_t i = 0; i < 4; ++i)
    J.push_back(partial_derivative(F, i).map_coefficients<ModP>([](const Rational& r) { return reduce(r, kP); }));
  const auto gb = buchberger(J);
  CHECK(!projective_empty(gb, 4));
  CHECK(projective_dimension(gb, 4) == 0);
  // The plane pair x0 x1 = 0 is singular along the line x0 = x1 = 0.
  const auto G = parse_poly("x0*x1", VarNames::coords(4));
  std::vector<MPoly<ModP>> JG;
  for (std::size_t i = 0; i < 4; ++i)
    JG.push_back(partial_derivative(G, i).map_coefficients<ModP>([](const Rational& r) { return reduce(r, kP); }));
  CHECK(projective_dimension(buchberger(JG), 4) == 1);
}

TEST_CASE("unit ideal") {
  PrimeScope scope(kP);
  const auto gb = buchberger({modp("x0 + 1", 2), modp("x0", 2)});
  REQUIRE(gb.generators.size() == 1);
  CHECK(gb.generators[0].is_constant());
  CHECK(homogeneous_dimension(gb, 2) == -1);
}

TEST_CASE("limits are enforced") {
  PrimeScope scope(kP);
  Rng rng(3);
  std::vector<MPoly<ModP>> g;
  for (int k = 0; k < 4; ++k) g.push_back(random_form(rng, 4, 3));
  GroebnerOptions o;
  o.degree_ceiling = 5;
  try {
    buchberger(g, o);
    FAIL("expected the ceiling to be hit");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegreeCeilingExceeded);
  }
  CHECK_THROWS_AS(buchberger({modp("x0", 17)}), Error);  // more than 16 variables
}

TEST_CASE("fingerprint is deterministic") {
  PrimeScope scope(kP);
  std::vector<MPoly<ModP>> g = {modp("x0^2 - x1*x2", 3), modp("x1^2 - x0*x2", 3)};
  CHECK(basis_fingerprint_text(buchberger(g)) == basis_fingerprint_text(buchberger(g)));
  const auto pp = pure_power_degrees(buchberger(g), 3);
  CHECK(pp.size() == 3);
}
