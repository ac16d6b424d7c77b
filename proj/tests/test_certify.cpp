#include "doctest.h"

#include <atomic>
#include <cctype>

#include "unirat/certify.hpp"
#include "unirat/errors.hpp"
#include "unirat/geom.hpp"
#include "unirat/poly_text.hpp"

using namespace unirat;

namespace {

using P = MPoly<Rational>;

P poly(const std::string& text, std::size_t nvars) { return parse_poly(text, VarNames::coords(nvars)); }

// Flips the low bit of the first coefficient digit found in a string under j.
bool flip_first_digit(nlohmann::json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) continue;
      std::size_t k = i;
      while (k > 0 && std::isdigit(static_cast<unsigned char>(s[k - 1]))) --k;
      if (k > 0 && (std::isalpha(static_cast<unsigned char>(s[k - 1])) || s[k - 1] == '^')) continue;
      s[i] = static_cast<char>(s[i] ^ 1);
      j = s;
      return true;
    }
    return false;
  }
  if (j.is_object() || j.is_array())
    for (auto& v : j)
      if (flip_first_digit(v)) return true;
  return false;
}

}  // namespace

TEST_CASE("SHA-256 test vectors") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("parallel_for visits every index and rethrows") {
  std::atomic<int> sum{0};
  parallel_for(100, 4, [&](std::size_t i) { sum += static_cast<int>(i); });
  CHECK(sum == 4950);
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                    if (i == 7) fail(ErrorKind::InvalidArgument, "boom");
                  }),
                  Error);
}

TEST_CASE("on-variety certificates") {
  const QuadricHypersurface q(sphere_form(5));
  const Slp phi = stereographic_param(q, {1, 0, 0, 0, 1}, LinearSubspace::coordinate(5, {0}));
  const auto sym = check_on_variety(phi, {q.form()});
  CHECK(sym.mode == OnVarietyCert::Mode::Symbolic);
  OnVarietyOptions o;
  o.allow_symbolic = false;
  const auto rnd = check_on_variety(phi, {q.form()}, o);
  CHECK(rnd.mode == OnVarietyCert::Mode::Randomized);
  CHECK(rnd.points.size() == 20);
  CHECK(rnd.confidence_bits() > 64);
  for (const auto* c : {&sym, &rnd}) CHECK(replay(seal(*c)).ok);
  // A form that does not vanish on the sphere.
  try {
    check_on_variety(phi, {poly("x0^2", 5)}, o);
    FAIL("expected IdentityFails");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IdentityFails);
  }
  // Too few points for 64 bits.
  o.points = 1;
  CHECK_THROWS_AS(check_on_variety(phi, {q.form()}, o), Error);
}

TEST_CASE("dominance certificates") {
  const QuadricHypersurface q(sphere_form(5));
  // The sphere in P^4 is a threefold.
  const Slp phi = stereographic_param(q, {1, 0, 0, 0, 1}, LinearSubspace::coordinate(5, {0}), true);
  const auto d = check_dominant(phi, 3, 1);
  CHECK(d.rank == 3);
  CHECK(replay(seal(d)).ok);
  // A map through a line cannot dominate a surface.
  Slp line(1);
  const auto t = line.add_input(0);
  line.set_outputs({t, line.add_op(SlpOp::Mul, t, t), line.add_const(1)});
  try {
    check_dominant(line, 2, 1);
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RankDeficient);
  }
}

TEST_CASE("smoothness modulo a prime") {
  const P fermat = poly("x0^4 + x1^4 + x2^4 + x3^4", 4);
  const auto c = certify_smooth_mod_p(fermat, 32003);
  CHECK(c.pure_powers.size() == 4);
  CHECK(replay(seal(c)).ok);
  CHECK(replay(seal(c), true).ok);
  // Char 2 and primes dividing the data are refused.
  CHECK_THROWS_AS(certify_smooth_mod_p(fermat, 2), Error);
  CHECK_THROWS_AS(screen_prime(poly("1/7*x0^4 + x1^4", 2), 7), Error);
  CHECK_THROWS_AS(screen_prime(poly("7*x0^4 + 7*x1^4", 2), 7), Error);
  // A quartic with a double point.
  try {
    certify_smooth_mod_p(poly("x0^2*x3^2 + x1^4 + x2^4 - x0^4", 4), 32003);
    FAIL("expected a singular point");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotEmptyModP);
  }
  const auto h = build_real_example(8, Rational(1, 16), 1, std::size_t{0});
  CHECK_NOTHROW(certify_smooth_mod_p(h.F, 2147483647));
}

TEST_CASE("positivity by absorption") {
  const P F = poly("x0^4 + x1^4 + x2^4 + 1/2*x0^3*x1 - x1*x2^3 + 3*x0^2*x2^2 + x3*x0^3", 4);
  const auto c = certify_positive_on_hyperplane(F, 3);
  CHECK(!c.restricted.involves(3));
  for (std::size_t i = 0; i < 3; ++i) CHECK(c.diagonal[i] > 0);
  CHECK(replay(seal(c)).ok);
  // x0^4 + x1^4 - 3 x0^2 x1^2 is -1 at (1, 1).
  try {
    certify_positive_on_hyperplane(poly("x0^4 + x1^4 - 3*x0^2*x1^2", 3), 2);
    FAIL("expected AbsorptionFails");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AbsorptionFails);
  }
  const auto h = build_real_example(8, Rational(1, 16), 1, std::size_t{0});
  const auto ch = certify_positive_on_hyperplane(h.F, 4);
  for (std::size_t i = 0; i < 9; ++i)
    if (i != 4) CHECK(ch.diagonal[i] > 0);
}

TEST_CASE("sealed certificates reject tampering") {
  const auto c = certify_positive_on_hyperplane(poly("x0^4 + x1^4 + 1/2*x0^3*x1", 3), 2);
  auto s = seal(c);
  REQUIRE(replay(s).ok);
  auto t = s;
  REQUIRE(flip_first_digit(t["body"]));
  CHECK(!replay(t).ok);
  // Resealed: the digest matches but the arithmetic does not.
  auto u = seal("Positivity", t["body"]);
  CHECK(!replay(u).ok);
  auto v = s;
  v["kind"] = "Nonsense";
  CHECK(!replay(v).ok);
}

TEST_CASE("quadric system and decomposition certificates") {
  const auto r = reverse_build({});
  const Slp gamma = conic_curve(r.quartic.f, ConicSpec::circle(), 7);
  const auto qs = certify_quadric_system(r.quartic.F, r.quartic.f, r.quartic.alpha, gamma, 3);
  CHECK(qs.quadric_space_dim == 8);
  CHECK(!qs.infeasible);
  CHECK(replay(seal(qs)).ok);
  const auto d = certify_decomposition(r, 200, 5);
  CHECK(d.degree_total == 8);
  CHECK(d.degree_cone_q == 2);
  CHECK(d.degree_x23 == 6);
  CHECK(d.interpolation_kernel_dim == 1);
  CHECK(replay(seal(d), true).ok);
}

TEST_CASE("singular dimension experiment") {
  SingDimOptions o;
  o.trials = 5;
  const auto r = singular_dimension_experiment(o);
  CHECK(r.base_singular_dim == 1);
  CHECK(r.predicted == -1);
  CHECK(r.example_predicted == -1);
  CHECK(r.dims.size() == 5);
  CHECK(replay(seal(r)).ok);
  o.extra = 1;
  CHECK(singular_dimension_experiment(o).predicted == 0);
}
