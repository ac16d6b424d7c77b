#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "unirat/geom.hpp"
#include "unirat/mpoly.hpp"
#include "unirat/poly_text.hpp"
#include "unirat/random.hpp"
#include "unirat/slp.hpp"

namespace unirat {

// Quartic F in P^n (n + 1 coordinates) with F|_M = alpha f^2 for
// M = {x5 = ... = xn = 0} and f a quadratic form in x0..x4.
struct QuarticInstance {
  std::size_t n = 0;
  MPoly<Rational> F;
  MPoly<Rational> f;  // in n + 1 variables, involving x0..x4 only
  Rational alpha = 1;
  std::optional<std::size_t> gamma_coord;  // Gamma = {x_k = 0}
  std::vector<MPoly<Rational>> cubics;     // perturbation cubics c_5..c_n, when built
  std::optional<Rational> epsilon;
  // Set for the reduced configuration: diagonal cubes plus this many random
  // monomials per cubic.
  std::optional<std::size_t> extra_terms;
  std::vector<std::uint64_t> seeds;

  std::size_t nvars() const { return n + 1; }
  LinearSubspace M() const;
  // Throws NotDivisible unless F|_M = alpha f^2 with alpha != 0.
  void check() const;

  nlohmann::json to_json() const;
  static QuarticInstance from_json(const nlohmann::json& j);
};

// A conic in M: the plane {x_i = 0, i in zero_coords} of M = P^4 and a point
// of Q on it. Text form "zero=2,3;point=1,0,0,0,1"; "circle" is that one.
struct ConicSpec {
  std::vector<std::size_t> zero_coords;
  Point<Rational> point;

  static ConicSpec circle();
  static ConicSpec parse(const std::string& text);
  std::string to_string() const;
};

// gamma(t) in `total` coordinates (zero past x4). PointNotOnQuadric /
// NoRationalPoint / DegenerateConic as for conic_param.
Slp conic_curve(const MPoly<Rational>& f, const ConicSpec& spec, std::size_t total);

// Complete intersection of a quadric q and a cubic c in P^n containing the
// cone over gamma with vertex `vertex`. c may carry `tail_vars` extra
// coefficient variables after the n + 1 coordinates.
struct Ci23Instance {
  std::size_t n = 0;
  MPoly<Rational> q;
  MPoly<Rational> c;
  std::size_t tail_vars = 0;
  Slp curve;  // t -> gamma(t)
  Point<Rational> vertex;

  // (t, u) -> gamma(t) + u * vertex
  Slp surface_param() const;
};

struct ConeDecomposition {
  MPoly<Rational> l;  // linear form with q = x5 l + lambda f
  Rational lambda;
  MPoly<Rational> c1;  // (F5 - alpha f^2) / x5
  MPoly<Rational> c;   // c1 - (alpha / lambda) l f
};

// Splits the quadric cone section of the cone over Y from e6. Y lives in P^5
// (F, f in 6 variables, possibly with trailing coefficient variables); q is a
// quadratic form in x0..x6. NotDivisible when F|_M != alpha f^2, LambdaZero
// when q contains M. Trailing variables of F carry over to c1 and c.
ConeDecomposition decompose_cone(const MPoly<Rational>& F5, const MPoly<Rational>& f, const Rational& alpha,
                                 const MPoly<Rational>& q, std::size_t tail_vars = 0);

// lambda F5 - alpha f q - x5 (lambda c1 - alpha l f), expected to be zero.
MPoly<Rational> decomposition_residual(const MPoly<Rational>& F5, const MPoly<Rational>& f, const Rational& alpha,
                                       const MPoly<Rational>& q, const ConeDecomposition& d, std::size_t tail_vars = 0);

struct SolverReport {
  // Quadrics in P^6 through the cone over Q from e6, counted by evaluation at
  // sample points and confirmed by membership in (x5, f).
  std::size_t sample_points = 0;
  std::size_t quadric_space_dim = 0;  // vector dimension
  std::size_t projective_dim = 0;
  bool membership_checked = false;
  // Conditions in the unknowns (l0..l6, lambda): coefficients of
  // lambda c1(gamma) - alpha l(gamma) f(gamma), one row per monomial in
  // (t, coefficient variables).
  Matrix<Rational> conditions;
  std::vector<std::vector<Rational>> solutions;  // kernel basis
  std::optional<MPoly<Rational>> witness;        // nonsingular q, if found
  std::size_t candidates_tried = 0;
  MPoly<Rational> obstruction;  // c1(gamma(t)) in (t, coefficient variables)
};

// The linear system of quadrics through the cone over Q, restricted to those
// whose cubic contains gamma. Infeasibility is reported, not thrown.
SolverReport solve_quadric_system(const MPoly<Rational>& F5, const MPoly<Rational>& f, const Rational& alpha,
                                  const Slp& gamma, std::uint64_t seed, std::size_t tail_vars = 0);

// Rational map (t, u, v_1..v_{n-4}, tail) -> X23: fibre quadric at
// s = gamma(t) + u x, stereographic from the generatrix direction, residual
// point of the cubic. The pivot choices are fixed at a random sample point.
Slp ci23_parametrize(const Ci23Instance& inst, std::uint64_t seed);

struct ReverseBuildOptions {
  MPoly<Rational> f;         // in 7 variables; defaults to the sphere
  ConicSpec conic = ConicSpec::circle();
  MPoly<Rational> l;         // defaults to x6
  Rational lambda = 1;
  Rational alpha = 1;
  std::uint64_t seed = 1;
  std::size_t samples = 200;  // interpolation points
};

struct ReverseBuildResult {
  Ci23Instance ci23;
  QuarticInstance quartic;  // n = 5
  ConeDecomposition decomposition;
  Slp ci23_map;         // 4 parameters into P^6
  Slp quartic_map;      // composed with the projection from e6
  std::size_t interpolation_kernel_dim = 0;
  std::vector<std::uint64_t> interpolation_primes;
  bool interpolation_matches = false;  // recovered quartic proportional to F5
  bool resultant_matches = false;      // Res_x6(q, c) = l6 F5
};

// Builds Y4 backwards from X23: a cubic c1 vanishing on gamma, q = x5 l +
// lambda f, c = c1 - (alpha / lambda) l f, then recovers the image quartic
// by interpolation on projected samples.
ReverseBuildResult reverse_build(ReverseBuildOptions opt);

// Quartics (126 coefficients in 6 variables) vanishing on sample points of
// the image of `map`, solved mod primes and lifted by rational
// reconstruction. Returns the kernel dimension mod the first prime and, when
// it is one, the lifted quartic.
struct InterpolationResult {
  std::size_t kernel_dim = 0;
  std::vector<std::uint64_t> primes;
  std::optional<MPoly<Rational>> quartic;
};
InterpolationResult interpolate_quartic(const Slp& map, std::size_t samples, std::uint64_t seed);

struct ObstructionReport {
  SolverReport solver;
  std::string obstruction_text;  // in variables t, b...
  // The section data the solver ran on.
  MPoly<Rational> F5, f;
  Rational alpha;
  Slp gamma;
  std::size_t tail_vars = 0;
};

using ParamOutcome = std::variant<Slp, ObstructionReport>;

// Y in P^5 (the QuarticInstance with n = 5) or its generic section.
ParamOutcome parametrize_Y4(const QuarticInstance& y, const ConicSpec& conic, std::uint64_t seed);

// Section of H by G_b = span(M, e5 + sum b_i e_i), b in the affine chart
// b5 = 1 of P^{n-5}.
struct SectionFamily {
  std::size_t n = 0;
  std::size_t base_params = 0;  // n - 5: b6..bn
  // Section quartic in (y0..y5, b6..bn).
  MPoly<Rational> quartic;
  Matrix<Rational> substitution;  // (n + 1) x 6 at b = 0; b enters through y5
};

SectionFamily generic_section(const QuarticInstance& h);

// Section family, Y4 over k(b), then b as live inputs. Output inputs:
// (t, u, v1, v2, b6..bn), n - 1 in all.
ParamOutcome parametrize_H4(const QuarticInstance& h, const ConicSpec& conic, std::uint64_t seed);

// F = f^2 + sum_{i=5..n} x_i^4 + epsilon sum x_i c_i with seeded cubics whose
// coefficients are integers in [-2, 2]. Without extra_terms every cubic
// monomial is used. With extra_terms = k (reduced configuration) c_i is
// a_i x_s(i)^3 for a seeded injection s into x0..x4 and a_i in {-2,-1,1,2},
// plus k random monomials; this needs n <= 9.
QuarticInstance build_real_example(std::size_t n, const Rational& epsilon, std::uint64_t seed,
                                   std::optional<std::size_t> extra_terms = std::nullopt);

// Variable names for instance files: x0..xn then b(n_first).. for tails.
VarNames instance_names(std::size_t nvars, std::size_t tail_vars = 0, std::size_t tail_first = 6);

MPoly<Rational> sphere_form(std::size_t nvars);

// Outputs of an SLP as polynomials in its inputs. Division nodes must divide
// exactly (NotDivisible otherwise).
std::vector<MPoly<Rational>> expand_slp(const Slp& m);

// Sylvester resultant of a and b with respect to variable `var`.
MPoly<Rational> sylvester_resultant(const MPoly<Rational>& a, const MPoly<Rational>& b, std::size_t var);

}  // namespace unirat
