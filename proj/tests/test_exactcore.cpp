#include "doctest.h"

#include <numeric>

#include "unirat/errors.hpp"
#include "unirat/matrix.hpp"
#include "unirat/prime_field.hpp"
#include "unirat/random.hpp"
#include "unirat/rational.hpp"
#include "unirat/upoly.hpp"

using namespace unirat;

namespace {

bool trial_division_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Matrix<Rational> random_int_matrix(Rng& rng, std::size_t r, std::size_t c, int bound) {
  Matrix<Rational> m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = Rational(static_cast<long>(rng.uniform(-bound, bound)));
  return m;
}

}  // namespace

TEST_CASE("rational canonical form") {
  CHECK(Rational(6, 4) == Rational(3, 2));
  CHECK(Rational(Integer(3), Integer(-6)).denominator() == 2);
  CHECK(Rational(Integer(3), Integer(-6)).numerator() == -1);
  CHECK(Rational(0, 5).denominator() == 1);
  CHECK(Rational::parse("-10/4") == Rational(-5, 2));
  CHECK(Rational::parse("7").is_integer());
  CHECK_THROWS_AS(Rational::parse("1/0"), Error);
  CHECK_THROWS_AS(Rational::parse("3/"), Error);
  CHECK_THROWS_AS(Rational::parse("x"), Error);
  CHECK_THROWS_AS(Rational(0).inverse(), Error);
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(2, 3) * Rational(3, 2) == 1);
  CHECK(Rational(-1, 3) < Rational(1, 4));
}

TEST_CASE("rational field axioms on random values") {
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    Rational a = rng.rational(1000), b = rng.rational(1000), c = rng.rational(1000);
    CHECK((a + b) * c == a * c + b * c);
    if (!b.is_zero()) CHECK((a / b) * b == a);
    CHECK(a - a == 0);
  }
}

TEST_CASE("primality agrees with trial division") {
  for (std::uint64_t n = 0; n < 3000; ++n) CHECK(is_prime(n) == trial_division_prime(n));
  CHECK(is_prime(2147483647));
  CHECK(!is_prime(2147483649ull));
}

TEST_CASE("arithmetic mod p matches integer arithmetic") {
  const std::uint64_t p = 10007;
  PrimeScope scope(p);
  Rng rng(11);
  for (int k = 0; k < 500; ++k) {
    const std::int64_t a = rng.uniform(-100000, 100000), b = rng.uniform(-100000, 100000);
    auto red = [&](std::int64_t v) { return std::uint64_t(((v % std::int64_t(p)) + std::int64_t(p)) % std::int64_t(p)); };
    CHECK((ModP(long(a)) * ModP(long(b))).residue() == red((a % std::int64_t(p)) * (b % std::int64_t(p))));
    CHECK((ModP(long(a)) + ModP(long(b))).residue() == red(a + b));
    if (red(b) != 0) CHECK((ModP(long(a)) / ModP(long(b)) * ModP(long(b))).residue() == red(a));
  }
  CHECK(ModP(Rational(1, 2)).residue() == (p + 1) / 2);
  CHECK_THROWS_AS(reduce(Rational(1, long(p)), p), Error);
}

TEST_CASE("prime scope rejects bad moduli and nests") {
  CHECK_THROWS_AS(PrimeScope(10), Error);
  CHECK_THROWS_AS(PrimeScope(2), Error);
  {
    PrimeScope a(101);
    {
      PrimeScope b(103);
      CHECK(ModP::current_modulus() == 103);
    }
    CHECK(ModP::current_modulus() == 101);
  }
  CHECK(ModP::peek_modulus() == 0);
}

TEST_CASE("rref, rank and kernel") {
  Rng rng(3);
  for (int k = 0; k < 30; ++k) {
    const std::size_t r = 1 + rng.below(5), c = 1 + rng.below(6);
    Matrix<Rational> a = random_int_matrix(rng, r, c, 3);
    // Make a dependent row now and then.
    if (r > 1 && k % 3 == 0)
      for (std::size_t j = 0; j < c; ++j) a(r - 1, j) = a(0, j) * Rational(2) - a(r - 2, j);
    const auto ker = kernel_basis(a);
    CHECK(rank(a) + ker.size() == c);
    for (const auto& v : ker) {
      const auto av = a.apply(v);
      for (const auto& x : av) CHECK(x.is_zero());
    }
    CHECK(rank(a) == rank(a.transpose()));
  }
}

TEST_CASE("Bareiss and cofactor determinants agree") {
  Rng rng(17);
  for (int k = 0; k < 40; ++k) {
    const std::size_t n = 1 + rng.below(4);
    Matrix<Rational> a = random_int_matrix(rng, n, n, 5);
    CHECK(det_fraction_free(a) == det_cofactor(a));
    CHECK(det_fraction_free(a).is_integer());
  }
  Matrix<Rational> sing = Matrix<Rational>::from_rows({{1, 2}, {2, 4}});
  CHECK(det_fraction_free(sing) == 0);
}

TEST_CASE("Cramer kernel spans the same space without denominators") {
  Rng rng(23);
  for (int k = 0; k < 20; ++k) {
    Matrix<Rational> a = random_int_matrix(rng, 2, 5, 4);
    const auto ker = kernel_basis_cramer(a);
    CHECK(ker.size() == 5 - rank(a));
    for (const auto& v : ker) {
      for (const auto& x : v) CHECK(x.is_integer());
      for (const auto& y : a.apply(v)) CHECK(y.is_zero());
    }
  }
}

TEST_CASE("solve_particular") {
  Matrix<Rational> a = Matrix<Rational>::from_rows({{1, 1}, {1, -1}});
  auto x = solve_particular(a, {Rational(3), Rational(1)});
  REQUIRE(x);
  CHECK((*x)[0] == 2);
  CHECK((*x)[1] == 1);
  Matrix<Rational> b = Matrix<Rational>::from_rows({{1, 1}, {2, 2}});
  CHECK(!solve_particular(b, {Rational(1), Rational(3)}));
}

TEST_CASE("univariate polynomials") {
  UPoly<Rational> p(std::vector<Rational>{1, 0, 2});  // 1 + 2 t^2
  CHECK(p.degree() == 2);
  CHECK(p.evaluate(Rational(3)) == 19);
  CHECK(UPoly<Rational>(std::vector<Rational>{1, 0, 0}).degree() == 0);
  CHECK((p - p).is_zero());
}

TEST_CASE("seeded randomness is reproducible and stage seeds differ") {
  Rng a(42), b(42);
  for (int k = 0; k < 10; ++k) CHECK(a.next() == b.next());
  CHECK(derive_seed(1, "a") != derive_seed(1, "b"));
  CHECK(derive_seed(1, "a") == derive_seed(1, "a"));
  Rng c(7);
  for (int k = 0; k < 1000; ++k) {
    const auto v = c.uniform(-2, 2);
    CHECK(v >= -2);
    CHECK(v <= 2);
    const Integer w = c.uniform_integer(Integer(10));
    CHECK(abs(w) <= 10);
  }
}

TEST_CASE("error kinds have names") {
  CHECK(std::string(to_string(ErrorKind::NotEmptyModP)) == "NotEmptyModP");
  try {
    fail(ErrorKind::BadPrime, "x");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadPrime);
  }
}
