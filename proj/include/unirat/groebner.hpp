#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "unirat/mpoly.hpp"
#include "unirat/prime_field.hpp"

namespace unirat {

// Buchberger's algorithm over Z/p, grevlex with x0 > x1 > ...
//
// Pair selection is the normal strategy (lowest sugar degree first, ties by
// the smaller lcm); Buchberger's coprime and chain criteria are applied in the
// Gebauer-Moeller form. Reductions run on packed monomials (at most 16
// variables, exponents below 128) with a heap of pending streams.
//
// Soundness of the smoothness certificate built on top of this: the singular
// locus of a hypersurface with rational coefficients is defined over Z[1/N]
// for N the product of denominators. Its image in Spec Z[1/N] is closed, so if
// the fibre over one good prime p is empty, the fibre over Q is empty too.
// Primes dividing a denominator or the content of the input are rejected
// upstream as bad.

struct GroebnerOptions {
  unsigned degree_ceiling = 20;  // abandon past this sugar degree
  double max_seconds = 0;        // 0: no wall-clock budget
  // Lower bound for the Hilbert function of the quotient, indexed by degree
  // (missing entries are 0). Used only for homogeneous input: once the number
  // of standard monomials of degree d reaches hilbert_function[d], the
  // leading ideal is complete in degree d and the remaining pairs of that
  // degree are skipped. complete_intersection_hilbert() gives a valid bound
  // for any generators of the given degrees: the rank of I's degree-d part
  // is largest for generic generators, which form a regular sequence.
  std::vector<std::uint64_t> hilbert_function;
  // Stop as soon as every variable has a pure power among the leading
  // monomials. The output is then a subset of the ideal, not a basis.
  bool stop_at_pure_powers = false;
};

struct GroebnerStats {
  std::uint64_t pairs_considered = 0;
  std::uint64_t pairs_reduced = 0;
  std::uint64_t zero_reductions = 0;
  std::uint64_t pairs_skipped = 0;  // by the Hilbert function count
  unsigned max_degree = 0;
  double seconds = 0;
};

struct GroebnerBasis {
  std::uint64_t prime = 0;
  std::size_t nvars = 0;
  std::vector<MPoly<ModP>> generators;  // reduced, monic, sorted by leading monomial
  // False when the run stopped at pure powers: generators then lie in the
  // ideal (which is all projective_empty needs) but need not form a basis.
  bool complete = true;
  GroebnerStats stats;
};

// Reduced Groebner basis of the ideal generated by `gens`. All generators must
// be over the same prime and have the same arity. Throws
// DegreeCeilingExceeded / BudgetExceeded when the limits are hit.
GroebnerBasis buchberger(const std::vector<MPoly<ModP>>& gens, const GroebnerOptions& options = {});

// Hilbert function of k[x_0..x_{nvars-1}] / (regular sequence of the given
// degrees), i.e. the coefficients of prod (1 - t^d_i) / (1 - t)^nvars, listed
// up to the last nonzero value when the sequence has nvars members.
std::vector<std::uint64_t> complete_intersection_hilbert(const std::vector<unsigned>& degrees, std::size_t nvars,
                                                         std::size_t max_degree);

// Full normal form of f modulo the basis.
MPoly<ModP> normal_form(const MPoly<ModP>& f, const GroebnerBasis& gb);

// Checks that every S-polynomial of the basis reduces to zero. With
// max_pairs > 0 only that many pairs (chosen deterministically) are checked.
bool is_groebner_basis(const GroebnerBasis& gb, std::size_t max_pairs = 0);

// True iff every variable has a pure power among the leading monomials, i.e.
// the quotient ring is finite-dimensional and the projective zero set of a
// homogeneous ideal is empty. Also valid for an incomplete run: the leading
// ideal of the full ideal contains those of its members.
bool projective_empty(const GroebnerBasis& gb, std::size_t nvars);

// For each variable the smallest m with x_i^m a leading monomial, 0 if none.
std::vector<unsigned> pure_power_degrees(const GroebnerBasis& gb, std::size_t nvars);

// Krull dimension of the quotient by the ideal: the largest size of a set of
// variables containing the support of no leading monomial. Returns -1 for the
// unit ideal. The projective dimension of a homogeneous ideal's zero set is
// this minus one (-1 meaning empty).
int homogeneous_dimension(const GroebnerBasis& gb, std::size_t nvars);
int projective_dimension(const GroebnerBasis& gb, std::size_t nvars);

// Canonical text of the basis, used for certificate digests.
std::string basis_fingerprint_text(const GroebnerBasis& gb);

}  // namespace unirat
