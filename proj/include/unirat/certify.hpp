#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "unirat/groebner.hpp"
#include "unirat/mpoly.hpp"
#include "unirat/pipeline.hpp"
#include "unirat/poly_text.hpp"
#include "unirat/rational.hpp"
#include "unirat/slp.hpp"

namespace unirat {

// Runs body(0..count-1) on up to `jobs` threads; the first exception is
// rethrown after all threads finish.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body);

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view text);

// A polynomial together with the names it is printed with, so certificates
// can be read back without outside context.
nlohmann::json poly_to_json(const MPoly<Rational>& p, const VarNames& names);
MPoly<Rational> poly_from_json(const nlohmann::json& j);

// Image of a map inside a variety.

struct OnVarietyOptions {
  std::size_t points = 20;  // K
  unsigned bound_bits = 40;  // M = 2^bound_bits
  std::uint64_t seed = 1;
  bool allow_symbolic = true;
  std::size_t symbolic_max_inputs = 4;
  std::uint64_t symbolic_max_degree = 60;
  std::size_t max_pole_retries = 1000;
};

struct OnVarietyCert {
  enum class Mode { Symbolic, Randomized };
  Mode mode = Mode::Randomized;
  Slp map;
  std::vector<MPoly<Rational>> equations;  // in map.out_arity() variables
  VarNames names;
  // Tracked numerator degree of each equation composed with the map; the
  // largest is D.
  std::vector<std::uint64_t> degrees;
  std::uint64_t degree_bound = 0;
  // Randomized mode.
  Integer bound;  // M
  std::uint64_t seed = 0;
  std::vector<std::vector<Rational>> points;
  std::size_t poles_skipped = 0;
  // Symbolic mode: digest of the expanded compositions (all zero).
  std::string zero_digest;

  // K * log2((2M + 1) / D).
  double confidence_bits() const;
  nlohmann::json to_json() const;
  static OnVarietyCert from_json(const nlohmann::json& j);
};

// Every equation vanishes on the image of phi. Symbolic when phi is
// polynomial with few inputs and small tracked degree, otherwise exact
// evaluation at K integer points in [-M, M]. IdentityFails on a nonzero value.
OnVarietyCert check_on_variety(const Slp& phi, const std::vector<MPoly<Rational>>& equations,
                               const OnVarietyOptions& opt = {}, VarNames names = {});

// Dominance by a full-rank Jacobian at a witness point.

struct DominanceCert {
  Slp map;
  std::vector<Rational> witness;
  std::size_t chart = 0;  // output coordinate used as denominator
  std::size_t rank = 0;
  std::size_t target_dim = 0;

  nlohmann::json to_json() const;
  static DominanceCert from_json(const nlohmann::json& j);
};

// RankDeficient (largest rank seen) when `attempts` seeded points all fall short.
DominanceCert check_dominant(const Slp& phi, std::size_t target_dim, std::uint64_t seed, std::size_t attempts = 5);

// Nonsingularity of a hypersurface modulo a prime.
//
// The singular scheme of F is cut out by its partial derivatives, which have
// integer coefficients after clearing denominators, so it is a closed
// subscheme of projective space over Z[1/N]. Its image in Spec Z[1/N] is
// closed; if the fibre over one good prime p is empty, the image misses p and
// therefore the generic point, and F is smooth over Q.

struct SmoothOptions {
  unsigned degree_ceiling = 20;
  double max_seconds = 0;
  bool hilbert_shortcut = true;
  bool stop_at_pure_powers = true;
};

struct SmoothModPCert {
  MPoly<Rational> F;
  VarNames names;
  std::uint64_t prime = 0;
  std::vector<std::string> screening;  // checks passed, in order
  std::size_t basis_size = 0;
  bool basis_complete = true;
  GroebnerStats stats;
  std::vector<unsigned> pure_powers;  // per variable
  std::string basis_digest;           // SHA-256 of the basis fingerprint

  nlohmann::json to_json() const;
  static SmoothModPCert from_json(const nlohmann::json& j);
};

// BadPrime unless p is an odd prime dividing no denominator of F and neither
// the content of F nor that of any partial derivative. Returns the checks.
std::vector<std::string> screen_prime(const MPoly<Rational>& F, std::uint64_t p);

// Jacobian ideal mod p has no projective zeros. NotEmptyModP (with the
// dimension found) otherwise; DegreeCeilingExceeded / BudgetExceeded from the
// Groebner run.
SmoothModPCert certify_smooth_mod_p(const MPoly<Rational>& F, std::uint64_t p, const SmoothOptions& opt = {},
                                    VarNames names = {});

// Groebner basis of the Jacobian ideal of F mod p with the options above.
GroebnerBasis jacobian_basis(const MPoly<Rational>& F, std::uint64_t p, const SmoothOptions& opt);

// Positivity of a quartic on a coordinate hyperplane.

struct AbsorptionStep {
  Monomial monomial;
  Rational coefficient;          // of the absorbed term
  std::vector<Rational> weights;  // exponent / 4 per variable
};

struct SquareTerm {
  std::size_t i = 0, j = 0;  // x_i^2 x_j^2, i < j
  Rational coefficient;
};

// R = F|_{x_gamma = 0} written as
//   sum_i d_i x_i^4 + sum squares + sum_steps (c x^a + |c| sum_i w_i x_i^4),
// each bracket nonnegative on real points by weighted AM-GM.
struct PositivityCert {
  std::size_t gamma_var = 0;
  MPoly<Rational> restricted;
  VarNames names;
  std::vector<AbsorptionStep> steps;
  std::vector<SquareTerm> squares;
  std::vector<Rational> diagonal;  // d_i; the entry for gamma_var is unused

  nlohmann::json to_json() const;
  static PositivityCert from_json(const nlohmann::json& j);
};

// AbsorptionFails naming the first variable whose budget goes nonpositive.
PositivityCert certify_positive_on_hyperplane(const MPoly<Rational>& F, std::size_t gamma_var, VarNames names = {});

// Quadrics through the cone over Q, and the conic condition on their cubic.

struct QuadricSystemCert {
  // Y in P^5 with trailing coefficient variables.
  MPoly<Rational> F5;
  MPoly<Rational> f;
  VarNames names;
  Rational alpha;
  std::size_t tail_vars = 0;
  Slp gamma;
  // Points of the cone over Q from e6 and the dimension of the space of
  // quadric forms vanishing on them.
  std::vector<std::vector<Rational>> cone_points;
  std::size_t quadric_space_dim = 0;
  // c1(gamma(t)) in (t, coefficient variables).
  MPoly<Rational> obstruction;
  VarNames obstruction_names;
  // Nonzero obstruction with f(gamma) = 0 forces lambda = 0, so every member
  // x5 * l has rank at most 2.
  bool infeasible = false;

  nlohmann::json to_json() const;
  static QuadricSystemCert from_json(const nlohmann::json& j);
};

QuadricSystemCert certify_quadric_system(const MPoly<Rational>& F5, const MPoly<Rational>& f, const Rational& alpha,
                                         const Slp& gamma, std::uint64_t seed, std::size_t tail_vars = 0);

// Cone decomposition and resultant for a reverse-built instance.

struct DecompositionCert {
  MPoly<Rational> F5, f, q, l, c1, c;  // F5, f in x0..x5; the rest in x0..x6
  Rational alpha, lambda;
  std::size_t degree_total = 0;       // deg q * deg of the cone over Y
  std::size_t degree_cone_q = 0;      // of the cone over Q
  std::size_t degree_x23 = 0;         // deg q * deg c
  std::size_t interpolation_kernel_dim = 0;
  std::vector<std::uint64_t> interpolation_primes;
  // Enough to rerun the interpolation.
  Slp quartic_map;
  std::size_t samples = 0;
  std::uint64_t interpolation_seed = 0;

  nlohmann::json to_json() const;
  static DecompositionCert from_json(const nlohmann::json& j);
};

// Checks the identities of r (NotDivisible / IdentityFails on a mismatch) and
// records them.
DecompositionCert certify_decomposition(const ReverseBuildResult& r, std::size_t samples,
                                        std::uint64_t interpolation_seed);

// Singular-locus dimension of general hypersurfaces containing a fixed one.

struct SingDimOptions {
  unsigned degree = 4;
  std::size_t base_dim = 2;  // N: the base lives in P^N
  std::size_t extra = 2;     // k
  std::size_t trials = 50;
  std::uint64_t prime = 32003;
  std::uint64_t seed = 1;
  unsigned degree_ceiling = 40;
  std::size_t jobs = 1;
  // Defaults to the double conic (x0^2 + x1^2 - x2^2)^2 when empty.
  MPoly<Rational> base;
};

struct SingDimReport {
  std::size_t base_dim = 0, extra = 0, trials = 0;
  unsigned degree = 0;
  std::uint64_t prime = 0, seed = 0;
  std::string base_text;
  int base_singular_dim = 0;  // m, computed
  int predicted = 0;          // max(m - k, -1)
  std::vector<int> dims;      // per trial; -2 marks an excluded trial
  std::size_t matched = 0, excluded = 0;
  // The configuration of the real example: Sing of the double quadric in P^4
  // has dimension 3, so 3 - (n - 4) for the hypersurface in P^n.
  std::size_t example_n = 8;
  int example_predicted = 0;

  double fraction() const;
  nlohmann::json to_json() const;
  static SingDimReport from_json(const nlohmann::json& j);
};

SingDimReport singular_dimension_experiment(const SingDimOptions& opt);

// Sealed certificates and replay.

// {"kind", "body", "digest"} with digest = SHA-256 of the compact dump of body.
nlohmann::json seal(const std::string& kind, const nlohmann::json& body);
nlohmann::json seal(const OnVarietyCert& c);
nlohmann::json seal(const DominanceCert& c);
nlohmann::json seal(const SmoothModPCert& c);
nlohmann::json seal(const PositivityCert& c);
nlohmann::json seal(const QuadricSystemCert& c);
nlohmann::json seal(const DecompositionCert& c);
nlohmann::json seal(const SingDimReport& r);

struct ReplayResult {
  bool ok = false;
  std::string kind;
  std::string reason;  // empty when ok
};

// Re-checks a sealed certificate from its stored data. `deep` also reruns
// the Groebner computation behind a SmoothModP certificate and the
// interpolation count behind a decomposition.
ReplayResult replay(const nlohmann::json& sealed, bool deep = false);

}  // namespace unirat
