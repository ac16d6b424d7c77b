#include "unirat/certify.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "unirat/geom.hpp"
#include "unirat/random.hpp"
#include "unirat/traced.hpp"

namespace unirat {

using json = nlohmann::json;

namespace {

using Poly = MPoly<Rational>;

Poly var(std::size_t nvars, std::size_t i) { return Poly::variable(nvars, i); }

json rationals_to_json(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.to_string());
  return a;
}

std::vector<Rational> rationals_from_json(const json& j) {
  std::vector<Rational> v;
  for (const auto& x : j) v.push_back(Rational::parse(x.get<std::string>()));
  return v;
}

json points_to_json(const std::vector<std::vector<Rational>>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(rationals_to_json(p));
  return a;
}

std::vector<std::vector<Rational>> points_from_json(const json& j) {
  std::vector<std::vector<Rational>> pts;
  for (const auto& p : j) pts.push_back(rationals_from_json(p));
  return pts;
}

json monomial_to_json(const Monomial& m) {
  json a = json::array();
  for (auto e : m.exponents()) a.push_back(static_cast<unsigned>(e));
  return a;
}

Monomial monomial_from_json(const json& j) {
  std::vector<Monomial::Exp> e;
  for (const auto& x : j) e.push_back(static_cast<Monomial::Exp>(x.get<unsigned>()));
  return Monomial(e);
}

VarNames names_or_default(VarNames names, std::size_t n) { return names.size() == n ? names : VarNames::coords(n); }

std::string point_text(const std::vector<Rational>& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + p[i].to_string();
  return s + ")";
}

// F_i(phi) for every equation as one program, the numerator degrees tracked
// by the SLP.
Slp composed_program(const Slp& phi, const std::vector<Poly>& eqs, const std::vector<Rational>& sample) {
  SlpBuilder b(phi.in_arity(), sample);
  const auto ys = b.apply(phi, b.inputs());
  std::vector<Traced> outs;
  for (const auto& e : eqs)
    outs.push_back(evaluate_with(e, std::span<const Traced>(ys), [](const Rational& c) { return Traced(c); }));
  return b.finish(outs, {"composed", {}});
}

// Tries seeded sample points until the map has no pole there.
Slp composed_program(const Slp& phi, const std::vector<Poly>& eqs, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "composed-sample"));
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<Rational> s;
    for (std::size_t i = 0; i < phi.in_arity(); ++i) s.push_back(rng.rational(1000));
    try {
      return composed_program(phi, eqs, s);
    } catch (const PoleHit&) {
    }
  }
  fail(ErrorKind::PoleHit, "no pole-free sample point for the composed program");
}

std::vector<std::uint64_t> output_degrees(const Slp& s) {
  std::vector<std::uint64_t> d;
  for (auto o : s.outputs()) d.push_back(s.node_degree(o).num);
  return d;
}

// 2^64 D^K < (2M + 1)^K.
bool enough_confidence(std::uint64_t D, const Integer& M, std::size_t K) {
  if (K == 0) return false;
  Integer lhs = 1, rhs = 1;
  for (std::size_t i = 0; i < K; ++i) {
    lhs *= Integer(static_cast<unsigned long>(D));
    rhs *= 2 * M + 1;
  }
  lhs <<= 64;
  return lhs < rhs;
}

std::string expansions_text(const std::vector<Poly>& polys) {
  std::string s;
  for (const auto& p : polys) s += format_poly(p, VarNames::indexed("z", p.nvars())) + ";";
  return s;
}

}  // namespace

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!first) first = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

std::string sha256_hex(std::string_view text) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorKind::InvalidArgument, "SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

json poly_to_json(const Poly& p, const VarNames& names) {
  return json{{"vars", names.names()}, {"text", format_poly(p, names)}};
}

Poly poly_from_json(const json& j) {
  const VarNames names(j.at("vars").get<std::vector<std::string>>());
  Poly p = parse_poly(j.at("text").get<std::string>(), names);
  return p.nvars() == names.size() ? p : extend_variables(p, names.size());
}

// On-variety ----------------------------------------------------------------

double OnVarietyCert::confidence_bits() const {
  if (mode == Mode::Symbolic) return INFINITY;
  if (degree_bound == 0) return INFINITY;
  const double m = std::log2(2.0 * bound.get_d() + 1.0);
  return static_cast<double>(points.size()) * (m - std::log2(static_cast<double>(degree_bound)));
}

json OnVarietyCert::to_json() const {
  json j;
  j["mode"] = mode == Mode::Symbolic ? "symbolic" : "randomized";
  j["map"] = map.to_json();
  json eqs = json::array();
  for (const auto& e : equations) eqs.push_back(poly_to_json(e, names));
  j["equations"] = eqs;
  j["degrees"] = degrees;
  j["degree_bound"] = degree_bound;
  j["seed"] = seed;
  if (mode == Mode::Randomized) {
    j["bound"] = bound.get_str();
    j["points"] = points_to_json(points);
    j["poles_skipped"] = poles_skipped;
    j["failure_per_point"] = std::to_string(degree_bound) + "/" + Integer(2 * bound + 1).get_str();
  } else {
    j["zero_digest"] = zero_digest;
  }
  return j;
}

OnVarietyCert OnVarietyCert::from_json(const json& j) {
  OnVarietyCert c;
  const std::string mode = j.at("mode").get<std::string>();
  if (mode != "symbolic" && mode != "randomized") fail(ErrorKind::MalformedInput, "unknown on-variety mode");
  c.mode = mode == "symbolic" ? Mode::Symbolic : Mode::Randomized;
  c.map = Slp::from_json(j.at("map"));
  for (const auto& e : j.at("equations")) {
    c.equations.push_back(poly_from_json(e));
    c.names = VarNames(e.at("vars").get<std::vector<std::string>>());
  }
  c.degrees = j.at("degrees").get<std::vector<std::uint64_t>>();
  c.degree_bound = j.at("degree_bound").get<std::uint64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  if (c.mode == Mode::Randomized) {
    c.bound = Integer(j.at("bound").get<std::string>());
    c.points = points_from_json(j.at("points"));
    c.poles_skipped = j.at("poles_skipped").get<std::size_t>();
  } else {
    c.zero_digest = j.at("zero_digest").get<std::string>();
  }
  return c;
}

OnVarietyCert check_on_variety(const Slp& phi, const std::vector<Poly>& equations, const OnVarietyOptions& opt,
                               VarNames names) {
  if (equations.empty()) fail(ErrorKind::InvalidArgument, "no equations to check");
  for (const auto& e : equations)
    if (e.nvars() != phi.out_arity()) fail(ErrorKind::ArityMismatch, "equation arity differs from map output arity");
  OnVarietyCert cert;
  cert.map = phi;
  cert.equations = equations;
  cert.names = names_or_default(std::move(names), phi.out_arity());
  cert.seed = opt.seed;
  const Slp program = composed_program(phi, equations, opt.seed);
  cert.degrees = output_degrees(program);
  cert.degree_bound = *std::max_element(cert.degrees.begin(), cert.degrees.end());

  if (opt.allow_symbolic && phi.in_arity() <= opt.symbolic_max_inputs && phi.polynomial_outputs() &&
      cert.degree_bound <= opt.symbolic_max_degree) {
    cert.mode = OnVarietyCert::Mode::Symbolic;
    const auto expanded = expand_slp(program);
    for (std::size_t i = 0; i < expanded.size(); ++i)
      if (!expanded[i].is_zero())
        fail(ErrorKind::IdentityFails, "equation " + std::to_string(i) + " composed with the map expands to a nonzero polynomial");
    cert.zero_digest = sha256_hex(expansions_text(expanded));
    return cert;
  }

  cert.mode = OnVarietyCert::Mode::Randomized;
  cert.bound = Integer(1) << opt.bound_bits;
  if (!enough_confidence(cert.degree_bound, cert.bound, opt.points))
    fail(ErrorKind::InvalidArgument, "point count and range give less than 64 bits of confidence");
  Rng rng(derive_seed(opt.seed, "on-variety"));
  while (cert.points.size() < opt.points) {
    std::vector<Rational> pt;
    for (std::size_t i = 0; i < phi.in_arity(); ++i) pt.push_back(Rational(rng.uniform_integer(cert.bound)));
    std::vector<Rational> ys;
    try {
      ys = phi.eval(pt);
    } catch (const PoleHit&) {
      if (++cert.poles_skipped > opt.max_pole_retries) fail(ErrorKind::PoleHit, "too many sample points hit a pole");
      continue;
    }
    for (std::size_t i = 0; i < equations.size(); ++i)
      if (!evaluate(equations[i], ys).is_zero())
        fail(ErrorKind::IdentityFails, "equation " + std::to_string(i) + " is nonzero at " + point_text(pt));
    cert.points.push_back(std::move(pt));
  }
  return cert;
}

// Dominance -----------------------------------------------------------------

json DominanceCert::to_json() const {
  return json{{"map", map.to_json()},
              {"witness", rationals_to_json(witness)},
              {"chart", chart},
              {"rank", rank},
              {"target_dim", target_dim}};
}

DominanceCert DominanceCert::from_json(const json& j) {
  DominanceCert c;
  c.map = Slp::from_json(j.at("map"));
  c.witness = rationals_from_json(j.at("witness"));
  c.chart = j.at("chart").get<std::size_t>();
  c.rank = j.at("rank").get<std::size_t>();
  c.target_dim = j.at("target_dim").get<std::size_t>();
  return c;
}

DominanceCert check_dominant(const Slp& phi, std::size_t target_dim, std::uint64_t seed, std::size_t attempts) {
  Rng rng(derive_seed(seed, "dominance"));
  std::size_t best = 0;
  for (std::size_t a = 0; a < attempts; ++a) {
    std::vector<Rational> pt;
    for (std::size_t i = 0; i < phi.in_arity(); ++i) pt.push_back(rng.rational(50));
    std::vector<Rational> ys;
    try {
      ys = phi.eval(pt);
    } catch (const PoleHit&) {
      continue;
    }
    std::size_t chart = 0;
    while (chart < ys.size() && ys[chart].is_zero()) ++chart;
    if (chart == ys.size()) continue;
    const std::size_t r = rank(phi.jacobian(pt, chart));
    best = std::max(best, r);
    if (r == target_dim) {
      DominanceCert c;
      c.map = phi;
      c.witness = std::move(pt);
      c.chart = chart;
      c.rank = r;
      c.target_dim = target_dim;
      return c;
    }
  }
  fail(ErrorKind::RankDeficient, "Jacobian rank " + std::to_string(best) + " < " + std::to_string(target_dim));
}

// Smoothness mod p ----------------------------------------------------------

json SmoothModPCert::to_json() const {
  return json{{"F", poly_to_json(F, names)},
              {"prime", prime},
              {"screening", screening},
              {"basis_size", basis_size},
              {"basis_complete", basis_complete},
              {"pairs_considered", stats.pairs_considered},
              {"pairs_reduced", stats.pairs_reduced},
              {"zero_reductions", stats.zero_reductions},
              {"pairs_skipped", stats.pairs_skipped},
              {"max_degree", stats.max_degree},
              {"pure_powers", pure_powers},
              {"basis_digest", basis_digest}};
}

SmoothModPCert SmoothModPCert::from_json(const json& j) {
  SmoothModPCert c;
  c.F = poly_from_json(j.at("F"));
  c.names = VarNames(j.at("F").at("vars").get<std::vector<std::string>>());
  c.prime = j.at("prime").get<std::uint64_t>();
  c.screening = j.at("screening").get<std::vector<std::string>>();
  c.basis_size = j.at("basis_size").get<std::size_t>();
  c.basis_complete = j.at("basis_complete").get<bool>();
  c.stats.pairs_considered = j.at("pairs_considered").get<std::uint64_t>();
  c.stats.pairs_reduced = j.at("pairs_reduced").get<std::uint64_t>();
  c.stats.zero_reductions = j.at("zero_reductions").get<std::uint64_t>();
  c.stats.pairs_skipped = j.at("pairs_skipped").get<std::uint64_t>();
  c.stats.max_degree = j.at("max_degree").get<unsigned>();
  c.pure_powers = j.at("pure_powers").get<std::vector<unsigned>>();
  c.basis_digest = j.at("basis_digest").get<std::string>();
  return c;
}

std::vector<std::string> screen_prime(const Poly& F, std::uint64_t p) {
  std::vector<std::string> done;
  if (p == 2 || !is_prime(p)) fail(ErrorKind::BadPrime, std::to_string(p) + " is not an odd prime");
  if (p >= (std::uint64_t{1} << 31)) fail(ErrorKind::BadPrime, "the Groebner engine needs p < 2^31");
  done.push_back("odd prime below 2^31");
  if (F.is_zero()) fail(ErrorKind::InvalidArgument, "zero polynomial");
  const std::uint32_t d = F.total_degree();
  if (!F.is_homogeneous(d)) fail(ErrorKind::InvalidArgument, "F must be homogeneous");
  if (d % p == 0) fail(ErrorKind::BadPrime, "p divides the degree, so the partials need not cut out Sing F");
  done.push_back("p does not divide deg F = " + std::to_string(d));
  const Integer P(static_cast<unsigned long>(p));
  for (const auto& [m, c] : F.terms())
    if (c.denominator() % P == 0) fail(ErrorKind::BadPrime, "p divides a coefficient denominator");
  done.push_back("no denominator divisible by p");
  // Content after clearing denominators: all coefficients vanish mod p iff p
  // divides it.
  auto survives = [&](const Poly& g) {
    for (const auto& [m, c] : g.terms())
      if (c.numerator() % P != 0) return true;
    return false;
  };
  if (!survives(F)) fail(ErrorKind::BadPrime, "p divides the content of F");
  done.push_back("content of F coprime to p");
  for (std::size_t i = 0; i < F.nvars(); ++i) {
    const Poly g = partial_derivative(F, i);
    if (!g.is_zero() && !survives(g))
      fail(ErrorKind::BadPrime, "p divides the content of dF/dx" + std::to_string(i));
  }
  done.push_back("content of every nonzero partial coprime to p");
  return done;
}

GroebnerBasis jacobian_basis(const Poly& F, std::uint64_t p, const SmoothOptions& opt) {
  PrimeScope scope(p);
  std::vector<MPoly<ModP>> gens;
  std::vector<unsigned> degrees;
  for (std::size_t i = 0; i < F.nvars(); ++i) {
    const Poly g = partial_derivative(F, i);
    auto gp = g.map_coefficients<ModP>([p](const Rational& r) { return reduce(r, p); });
    if (gp.is_zero()) continue;
    degrees.push_back(gp.total_degree());
    gens.push_back(std::move(gp));
  }
  if (gens.empty()) fail(ErrorKind::NotEmptyModP, "every partial vanishes mod p");
  GroebnerOptions go;
  go.degree_ceiling = opt.degree_ceiling;
  go.max_seconds = opt.max_seconds;
  if (opt.hilbert_shortcut) go.hilbert_function = complete_intersection_hilbert(degrees, F.nvars(), opt.degree_ceiling);
  go.stop_at_pure_powers = opt.stop_at_pure_powers;
  return buchberger(gens, go);
}

SmoothModPCert certify_smooth_mod_p(const Poly& F, std::uint64_t p, const SmoothOptions& opt, VarNames names) {
  SmoothModPCert cert;
  cert.screening = screen_prime(F, p);
  const GroebnerBasis gb = jacobian_basis(F, p, opt);
  if (!projective_empty(gb, F.nvars())) {
    const std::string dim = gb.complete ? std::to_string(projective_dimension(gb, F.nvars())) : "unknown";
    fail(ErrorKind::NotEmptyModP, "singular locus mod " + std::to_string(p) + " has projective dimension " + dim);
  }
  cert.F = F;
  cert.names = names_or_default(std::move(names), F.nvars());
  cert.prime = p;
  cert.basis_size = gb.generators.size();
  cert.basis_complete = gb.complete;
  cert.stats = gb.stats;
  cert.pure_powers = pure_power_degrees(gb, F.nvars());
  cert.basis_digest = sha256_hex(basis_fingerprint_text(gb));
  return cert;
}

// Positivity ----------------------------------------------------------------

json PositivityCert::to_json() const {
  json steps_j = json::array();
  for (const auto& s : steps)
    steps_j.push_back(json{{"monomial", monomial_to_json(s.monomial)},
                           {"coefficient", s.coefficient.to_string()},
                           {"weights", rationals_to_json(s.weights)}});
  json sq = json::array();
  for (const auto& s : squares) sq.push_back(json{{"i", s.i}, {"j", s.j}, {"coefficient", s.coefficient.to_string()}});
  return json{{"gamma", names[gamma_var]},
              {"restricted", poly_to_json(restricted, names)},
              {"steps", steps_j},
              {"squares", sq},
              {"diagonal", rationals_to_json(diagonal)}};
}

PositivityCert PositivityCert::from_json(const json& j) {
  PositivityCert c;
  c.restricted = poly_from_json(j.at("restricted"));
  c.names = VarNames(j.at("restricted").at("vars").get<std::vector<std::string>>());
  c.gamma_var = c.names.find(j.at("gamma").get<std::string>());
  if (c.gamma_var == c.names.size()) fail(ErrorKind::MalformedInput, "gamma is not a variable");
  for (const auto& s : j.at("steps"))
    c.steps.push_back({monomial_from_json(s.at("monomial")), Rational::parse(s.at("coefficient").get<std::string>()),
                       rationals_from_json(s.at("weights"))});
  for (const auto& s : j.at("squares"))
    c.squares.push_back(
        {s.at("i").get<std::size_t>(), s.at("j").get<std::size_t>(), Rational::parse(s.at("coefficient").get<std::string>())});
  c.diagonal = rationals_from_json(j.at("diagonal"));
  return c;
}

PositivityCert certify_positive_on_hyperplane(const Poly& F, std::size_t gamma_var, VarNames names) {
  const std::size_t n = F.nvars();
  if (gamma_var >= n) fail(ErrorKind::InvalidArgument, "hyperplane coordinate out of range");
  if (!F.is_homogeneous(4)) fail(ErrorKind::InvalidArgument, "positivity certificate needs a quartic form");
  PositivityCert cert;
  cert.gamma_var = gamma_var;
  cert.names = names_or_default(std::move(names), n);
  cert.restricted = specialize(F, gamma_var, Rational(0));
  cert.diagonal.assign(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) cert.diagonal[i] = cert.restricted.coefficient(Monomial::variable(n, i, 4));
  for (const auto& [m, c] : cert.restricted.terms()) {
    std::vector<std::size_t> support;
    bool even = true;
    for (std::size_t i = 0; i < n; ++i)
      if (m[i]) {
        support.push_back(i);
        even = even && m[i] % 2 == 0;
      }
    if (support.size() == 1) continue;  // x_i^4, already in the budget
    if (even && c.sign() > 0) {
      cert.squares.push_back({support[0], support[1], c});
      continue;
    }
    AbsorptionStep s;
    s.monomial = m;
    s.coefficient = c;
    for (std::size_t i = 0; i < n; ++i) {
      s.weights.push_back(Rational(Integer(m[i]), Integer(4)));
      cert.diagonal[i] -= c.abs() * s.weights[i];
    }
    cert.steps.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < n; ++i)
    if (i != gamma_var && cert.diagonal[i].sign() <= 0)
      fail(ErrorKind::AbsorptionFails, "budget of " + cert.names[i] + " ends at " + cert.diagonal[i].to_string() +
                                           "; lower epsilon and rebuild");
  return cert;
}

// Quadric system ------------------------------------------------------------

namespace {

struct Restricted {
  Poly obstruction;  // c1(gamma)
  Poly f_on;         // f(gamma)
};

Restricted restrict_to_conic(const Poly& F5, const Poly& f, const Rational& alpha, const Slp& gamma, std::size_t tail) {
  if (F5.nvars() != 6 + tail || f.nvars() != 6 + tail) fail(ErrorKind::ArityMismatch, "Y lives in P^5");
  if (gamma.in_arity() != 1 || gamma.out_arity() < 6) fail(ErrorKind::ArityMismatch, "gamma must map t into P^5");
  const std::size_t T = 1 + tail;
  const auto g = expand_slp(gamma);
  std::vector<Poly> images;
  for (std::size_t i = 0; i < 6; ++i) images.push_back(remap_variables(g[i], T, {0}));
  for (std::size_t j = 0; j < tail; ++j) images.push_back(var(T, 1 + j));
  const Poly c1 = exact_divide(F5 - f * f * alpha, var(6 + tail, 5));
  return {compose(c1, images), compose(f, images)};
}

Matrix<Rational> quadric_evaluations(const std::vector<std::vector<Rational>>& pts) {
  const auto monos = monomials_of_degree(7, 2);
  Matrix<Rational> m(pts.size(), monos.size());
  for (std::size_t r = 0; r < pts.size(); ++r)
    for (std::size_t k = 0; k < monos.size(); ++k) {
      Rational v = 1;
      for (std::size_t i = 0; i < 7; ++i)
        for (unsigned e = 0; e < monos[k][i]; ++e) v *= pts[r][i];
      m(r, k) = v;
    }
  return m;
}

Poly head_form(const Poly& f, std::size_t k) {
  Poly r(k);
  for (const auto& [m, c] : f.terms()) {
    std::vector<Monomial::Exp> e(m.exponents().begin(), m.exponents().begin() + k);
    r.add_term(Monomial(e), c);
  }
  return r;
}

}  // namespace

json QuadricSystemCert::to_json() const {
  return json{{"F5", poly_to_json(F5, names)},
              {"f", poly_to_json(f, names)},
              {"alpha", alpha.to_string()},
              {"tail_vars", tail_vars},
              {"gamma", gamma.to_json()},
              {"cone_points", points_to_json(cone_points)},
              {"quadric_space_dim", quadric_space_dim},
              {"projective_dim", quadric_space_dim ? quadric_space_dim - 1 : 0},
              {"obstruction", poly_to_json(obstruction, obstruction_names)},
              {"infeasible", infeasible}};
}

QuadricSystemCert QuadricSystemCert::from_json(const json& j) {
  QuadricSystemCert c;
  c.F5 = poly_from_json(j.at("F5"));
  c.names = VarNames(j.at("F5").at("vars").get<std::vector<std::string>>());
  c.f = poly_from_json(j.at("f"));
  c.alpha = Rational::parse(j.at("alpha").get<std::string>());
  c.tail_vars = j.at("tail_vars").get<std::size_t>();
  c.gamma = Slp::from_json(j.at("gamma"));
  c.cone_points = points_from_json(j.at("cone_points"));
  c.quadric_space_dim = j.at("quadric_space_dim").get<std::size_t>();
  c.obstruction = poly_from_json(j.at("obstruction"));
  c.obstruction_names = VarNames(j.at("obstruction").at("vars").get<std::vector<std::string>>());
  c.infeasible = j.at("infeasible").get<bool>();
  return c;
}

QuadricSystemCert certify_quadric_system(const Poly& F5, const Poly& f, const Rational& alpha, const Slp& gamma,
                                         std::uint64_t seed, std::size_t tail) {
  QuadricSystemCert cert;
  cert.F5 = F5;
  cert.f = f;
  cert.names = VarNames::coords(6) + VarNames::indexed("b", tail, 6);
  cert.alpha = alpha;
  cert.tail_vars = tail;
  cert.gamma = gamma;
  const Restricted r = restrict_to_conic(F5, f, alpha, gamma, tail);
  if (!r.f_on.is_zero()) fail(ErrorKind::PointNotOnQuadric, "the conic does not lie on Q");
  cert.obstruction = r.obstruction;
  cert.obstruction_names = VarNames({"t"}) + VarNames::indexed("b", tail, 6);
  cert.infeasible = !r.obstruction.is_zero();

  // Points nu * p + mu * e6 with p on Q, p from the stereographic map at a
  // conic point.
  const QuadricHypersurface Q(head_form(f, 5));
  Point<Rational> p0 = gamma.eval({Rational(2)});
  p0.resize(5);
  std::size_t k = 0;
  while (p0[k].is_zero()) ++k;
  Rng rng(derive_seed(seed, "cone-points"));
  while (cert.cone_points.size() < 40) {
    Point<Rational> d(5, Rational(0));
    for (std::size_t i = 0; i < 5; ++i)
      if (i != k) d[i] = Rational(static_cast<long>(rng.uniform(-9, 9)));
    const Point<Rational> pq = stereographic_point(Q.gram(), p0, d);
    if (is_zero_vector(pq)) continue;
    const Rational mu(static_cast<long>(rng.uniform(-9, 9))), nu(static_cast<long>(rng.uniform(1, 9)));
    std::vector<Rational> pt(7, Rational(0));
    for (std::size_t i = 0; i < 5; ++i) pt[i] = nu * pq[i];
    pt[6] = mu;
    cert.cone_points.push_back(std::move(pt));
  }
  const Matrix<Rational> ev = quadric_evaluations(cert.cone_points);
  cert.quadric_space_dim = ev.cols() - rank(ev);
  return cert;
}

// Decomposition -------------------------------------------------------------

json DecompositionCert::to_json() const {
  const VarNames n6 = VarNames::coords(6), n7 = VarNames::coords(7);
  return json{{"F5", poly_to_json(F5, n6)},
              {"f", poly_to_json(f, n6)},
              {"q", poly_to_json(q, n7)},
              {"l", poly_to_json(l, n7)},
              {"c1", poly_to_json(c1, n7)},
              {"c", poly_to_json(c, n7)},
              {"alpha", alpha.to_string()},
              {"lambda", lambda.to_string()},
              {"degree_total", degree_total},
              {"degree_cone_q", degree_cone_q},
              {"degree_x23", degree_x23},
              {"interpolation_kernel_dim", interpolation_kernel_dim},
              {"interpolation_primes", interpolation_primes},
              {"quartic_map", quartic_map.to_json()},
              {"samples", samples},
              {"interpolation_seed", interpolation_seed}};
}

DecompositionCert DecompositionCert::from_json(const json& j) {
  DecompositionCert c;
  c.F5 = poly_from_json(j.at("F5"));
  c.f = poly_from_json(j.at("f"));
  c.q = poly_from_json(j.at("q"));
  c.l = poly_from_json(j.at("l"));
  c.c1 = poly_from_json(j.at("c1"));
  c.c = poly_from_json(j.at("c"));
  c.alpha = Rational::parse(j.at("alpha").get<std::string>());
  c.lambda = Rational::parse(j.at("lambda").get<std::string>());
  c.degree_total = j.at("degree_total").get<std::size_t>();
  c.degree_cone_q = j.at("degree_cone_q").get<std::size_t>();
  c.degree_x23 = j.at("degree_x23").get<std::size_t>();
  c.interpolation_kernel_dim = j.at("interpolation_kernel_dim").get<std::size_t>();
  c.interpolation_primes = j.at("interpolation_primes").get<std::vector<std::uint64_t>>();
  c.quartic_map = Slp::from_json(j.at("quartic_map"));
  c.samples = j.at("samples").get<std::size_t>();
  c.interpolation_seed = j.at("interpolation_seed").get<std::uint64_t>();
  return c;
}

namespace {

// Empty when every identity holds, otherwise the first failure.
std::string decomposition_failure(const DecompositionCert& d) {
  if (d.F5.nvars() != 6 || d.f.nvars() != 6) return "F5 and f must live in x0..x5";
  if (d.q.nvars() != 7 || d.l.nvars() != 7 || d.c1.nvars() != 7 || d.c.nvars() != 7) return "q, l, c1, c must live in x0..x6";
  if (d.lambda.is_zero()) return "lambda is zero";
  const Poly F7 = extend_variables(d.F5, 7), f7 = extend_variables(d.f, 7), x5 = var(7, 5);
  if (d.q != x5 * d.l + f7 * d.lambda) return "q != x5 l + lambda f";
  if (F7 - f7 * f7 * d.alpha != x5 * d.c1) return "F5 - alpha f^2 != x5 c1";
  if (d.c != d.c1 - d.l * f7 * (d.alpha / d.lambda)) return "c != c1 - (alpha/lambda) l f";
  if (F7 * d.lambda != f7 * d.q * d.alpha + x5 * d.c * d.lambda) return "lambda F5 != alpha f q + x5 lambda c";
  const Rational l6 = d.l.coefficient(Monomial::variable(7, 6));
  if (l6.is_zero()) return "l has no x6 term";
  if (sylvester_resultant(d.q, d.c, 6) != F7 * l6) return "Res_x6(q, c) != l6 F5";
  const std::size_t dq = d.q.total_degree(), dc = d.c.total_degree(), dF = d.F5.total_degree(), df = d.f.total_degree();
  if (d.degree_x23 != dq * dc || d.degree_cone_q != df || d.degree_total != dq * dF) return "degree bookkeeping differs";
  if (d.degree_cone_q + d.degree_x23 != d.degree_total) return "degrees do not split";
  if (d.interpolation_kernel_dim != 1) return "interpolation kernel is not one-dimensional";
  return {};
}

}  // namespace

DecompositionCert certify_decomposition(const ReverseBuildResult& r, std::size_t samples,
                                        std::uint64_t interpolation_seed) {
  DecompositionCert d;
  d.F5 = r.quartic.F;
  d.f = r.quartic.f;
  d.q = r.ci23.q;
  d.l = r.decomposition.l;
  d.c1 = extend_variables(r.decomposition.c1, 7);
  d.c = r.decomposition.c;
  d.alpha = r.quartic.alpha;
  d.lambda = r.decomposition.lambda;
  d.degree_x23 = d.q.total_degree() * d.c.total_degree();
  d.degree_cone_q = d.f.total_degree();
  d.degree_total = d.q.total_degree() * d.F5.total_degree();
  d.interpolation_kernel_dim = r.interpolation_kernel_dim;
  d.interpolation_primes = r.interpolation_primes;
  d.quartic_map = r.quartic_map;
  d.samples = samples;
  d.interpolation_seed = interpolation_seed;
  if (const std::string why = decomposition_failure(d); !why.empty()) fail(ErrorKind::IdentityFails, why);
  return d;
}

// Singular-locus experiment -------------------------------------------------

double SingDimReport::fraction() const {
  const std::size_t used = trials - excluded;
  return used ? static_cast<double>(matched) / static_cast<double>(used) : 0.0;
}

json SingDimReport::to_json() const {
  return json{{"N", base_dim},
              {"k", extra},
              {"degree", degree},
              {"trials", trials},
              {"prime", prime},
              {"seed", seed},
              {"base", base_text},
              {"base_singular_dim", base_singular_dim},
              {"predicted", predicted},
              {"dims", dims},
              {"matched", matched},
              {"excluded", excluded},
              {"example_n", example_n},
              {"example_predicted", example_predicted}};
}

SingDimReport SingDimReport::from_json(const json& j) {
  SingDimReport r;
  r.base_dim = j.at("N").get<std::size_t>();
  r.extra = j.at("k").get<std::size_t>();
  r.degree = j.at("degree").get<unsigned>();
  r.trials = j.at("trials").get<std::size_t>();
  r.prime = j.at("prime").get<std::uint64_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.base_text = j.at("base").get<std::string>();
  r.base_singular_dim = j.at("base_singular_dim").get<int>();
  r.predicted = j.at("predicted").get<int>();
  r.dims = j.at("dims").get<std::vector<int>>();
  r.matched = j.at("matched").get<std::size_t>();
  r.excluded = j.at("excluded").get<std::size_t>();
  r.example_n = j.at("example_n").get<std::size_t>();
  r.example_predicted = j.at("example_predicted").get<int>();
  return r;
}

namespace {

int singular_dimension_mod_p(const Poly& F, std::uint64_t p, unsigned ceiling) {
  SmoothOptions o;
  o.degree_ceiling = ceiling;
  o.hilbert_shortcut = false;
  o.stop_at_pure_powers = false;
  return projective_dimension(jacobian_basis(F, p, o), F.nvars());
}

}  // namespace

SingDimReport singular_dimension_experiment(const SingDimOptions& opt) {
  if (opt.base_dim < 1 || opt.base_dim > 5 || opt.degree < 2 || opt.degree > 4)
    fail(ErrorKind::InvalidArgument, "experiment needs 1 <= N <= 5 and 2 <= d <= 4");
  const std::size_t nb = opt.base_dim + 1, nv = nb + opt.extra;
  Poly H = opt.base;
  if (H.nvars() == 0) {
    if (opt.base_dim != 2 || opt.degree != 4) fail(ErrorKind::InvalidArgument, "the default base is the double conic in P^2");
    const Poly conic = var(3, 0) * var(3, 0) + var(3, 1) * var(3, 1) - var(3, 2) * var(3, 2);
    H = conic * conic;
  }
  if (H.nvars() != nb || !H.is_homogeneous(opt.degree)) fail(ErrorKind::InvalidArgument, "base must be a form of degree d in P^N");
  SingDimReport rep;
  rep.base_dim = opt.base_dim;
  rep.extra = opt.extra;
  rep.degree = opt.degree;
  rep.trials = opt.trials;
  rep.prime = opt.prime;
  rep.seed = opt.seed;
  rep.base_text = format_poly(H, VarNames::coords(nb));
  rep.base_singular_dim = singular_dimension_mod_p(H, opt.prime, opt.degree_ceiling);
  rep.predicted = std::max(rep.base_singular_dim - static_cast<int>(opt.extra), -1);
  rep.example_predicted = std::max(3 - (static_cast<int>(rep.example_n) - 4), -1);

  const Poly Hn = extend_variables(H, nv);
  const auto monos = monomials_of_degree(nv, opt.degree - 1);
  const auto p = static_cast<std::int64_t>(opt.prime);
  // Each trial draws from its own stream, so the table does not depend on
  // how trials are spread over threads.
  auto trial = [&](std::size_t t) {
    Rng rng(derive_seed(opt.seed, "sing-dim-" + std::to_string(t)));
    Poly F = Hn;
    for (std::size_t j = 0; j < opt.extra; ++j) {
      Poly G(nv);
      for (const auto& m : monos) G.add_term(m, Rational(static_cast<long>(rng.uniform(0, p - 1))));
      F += var(nv, nb + j) * G;
    }
    try {
      return singular_dimension_mod_p(F, opt.prime, opt.degree_ceiling);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegreeCeilingExceeded) throw;
      return -2;
    }
  };
  rep.dims.assign(opt.trials, -2);
  parallel_for(opt.trials, opt.jobs, [&](std::size_t t) { rep.dims[t] = trial(t); });
  for (int d : rep.dims) {
    if (d == -2) ++rep.excluded;
    else if (d == rep.predicted) ++rep.matched;
  }
  return rep;
}

// Sealing and replay --------------------------------------------------------

json seal(const std::string& kind, const json& body) {
  return json{{"kind", kind}, {"body", body}, {"digest", sha256_hex(body.dump())}};
}

json seal(const OnVarietyCert& c) { return seal("OnVariety", c.to_json()); }
json seal(const DominanceCert& c) { return seal("Dominance", c.to_json()); }
json seal(const SmoothModPCert& c) { return seal("SmoothModP", c.to_json()); }
json seal(const PositivityCert& c) { return seal("Positivity", c.to_json()); }
json seal(const QuadricSystemCert& c) { return seal("QuadricSystem", c.to_json()); }
json seal(const DecompositionCert& c) { return seal("Decomposition", c.to_json()); }
json seal(const SingDimReport& r) { return seal("SingularDimension", r.to_json()); }

namespace {

std::string replay_on_variety(const json& body) {
  const OnVarietyCert c = OnVarietyCert::from_json(body);
  for (const auto& e : c.equations)
    if (e.nvars() != c.map.out_arity()) return "equation arity differs from map";
  const Slp program = composed_program(c.map, c.equations, c.seed);
  const auto degs = output_degrees(program);
  if (degs != c.degrees) return "tracked degrees differ";
  if (c.degree_bound != *std::max_element(degs.begin(), degs.end())) return "degree bound differs";
  if (c.mode == OnVarietyCert::Mode::Symbolic) {
    if (!c.map.polynomial_outputs()) return "symbolic mode needs a polynomial map";
    const auto expanded = expand_slp(program);
    for (const auto& p : expanded)
      if (!p.is_zero()) return "expansion is nonzero";
    if (sha256_hex(expansions_text(expanded)) != c.zero_digest) return "zero digest differs";
    return {};
  }
  if (!enough_confidence(c.degree_bound, c.bound, c.points.size())) return "confidence below 64 bits";
  for (const auto& pt : c.points) {
    if (pt.size() != c.map.in_arity()) return "point arity differs";
    for (const auto& x : pt)
      if (!x.is_integer() || abs(x.numerator()) > c.bound) return "point outside [-M, M]";
    std::vector<Rational> ys;
    try {
      ys = c.map.eval(pt);
    } catch (const PoleHit&) {
      return "stored point is a pole";
    }
    for (const auto& e : c.equations)
      if (!evaluate(e, ys).is_zero()) return "nonzero value at " + point_text(pt);
  }
  return {};
}

std::string replay_dominance(const json& body) {
  const DominanceCert c = DominanceCert::from_json(body);
  if (c.rank != c.target_dim) return "rank differs from target dimension";
  std::vector<Rational> ys;
  try {
    ys = c.map.eval(c.witness);
  } catch (const PoleHit&) {
    return "witness is a pole";
  }
  if (c.chart >= ys.size() || ys[c.chart].is_zero()) return "chart coordinate vanishes at the witness";
  if (rank(c.map.jacobian(c.witness, c.chart)) != c.rank) return "Jacobian rank differs";
  return {};
}

std::string replay_smooth(const json& body, bool deep) {
  const SmoothModPCert c = SmoothModPCert::from_json(body);
  std::vector<std::string> checks;
  try {
    checks = screen_prime(c.F, c.prime);
  } catch (const Error& e) {
    return e.what();
  }
  if (checks != c.screening) return "screening record differs";
  if (c.pure_powers.size() != c.F.nvars()) return "pure-power list has the wrong length";
  for (auto d : c.pure_powers)
    if (d == 0) return "a variable has no pure power";
  if (!deep) return {};
  SmoothOptions o;
  o.degree_ceiling = std::max(20u, c.stats.max_degree);
  o.stop_at_pure_powers = !c.basis_complete;
  const GroebnerBasis gb = jacobian_basis(c.F, c.prime, o);
  if (sha256_hex(basis_fingerprint_text(gb)) != c.basis_digest) return "recomputed basis differs";
  if (pure_power_degrees(gb, c.F.nvars()) != c.pure_powers) return "recomputed pure powers differ";
  return {};
}

std::string replay_positivity(const json& body) {
  const PositivityCert c = PositivityCert::from_json(body);
  const std::size_t n = c.restricted.nvars();
  if (c.diagonal.size() != n) return "diagonal has the wrong length";
  if (c.restricted.involves(c.gamma_var)) return "restriction still involves the hyperplane coordinate";
  Poly rebuilt(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == c.gamma_var) continue;
    if (c.diagonal[i].sign() <= 0) return "diagonal coefficient of " + c.names[i] + " is not positive";
    rebuilt.add_term(Monomial::variable(n, i, 4), c.diagonal[i]);
  }
  for (const auto& s : c.squares) {
    if (s.i >= s.j || s.j >= n) return "bad square indices";
    if (s.coefficient.sign() <= 0) return "square coefficient is not positive";
    Monomial m(n);
    m.set(s.i, 2);
    m.set(s.j, 2);
    rebuilt.add_term(m, s.coefficient);
  }
  for (const auto& s : c.steps) {
    if (s.monomial.nvars() != n || s.monomial.degree() != 4 || s.weights.size() != n) return "bad absorption step";
    Rational total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (s.weights[i] != Rational(Integer(s.monomial[i]), Integer(4))) return "weights differ from exponents / 4";
      total += s.weights[i];
      if (!s.weights[i].is_zero()) rebuilt.add_term(Monomial::variable(n, i, 4), s.coefficient.abs() * s.weights[i]);
    }
    if (total != 1) return "weights do not sum to one";
    rebuilt.add_term(s.monomial, s.coefficient);
  }
  if (rebuilt != c.restricted) return "steps do not reconstruct the restricted quartic";
  return {};
}

std::string replay_quadric_system(const json& body) {
  const QuadricSystemCert c = QuadricSystemCert::from_json(body);
  const Restricted r = restrict_to_conic(c.F5, c.f, c.alpha, c.gamma, c.tail_vars);
  if (!r.f_on.is_zero()) return "the conic does not lie on Q";
  if (r.obstruction != c.obstruction) return "obstruction polynomial differs from c1(gamma)";
  if (c.infeasible != !r.obstruction.is_zero()) return "feasibility flag differs";
  const Poly f5 = head_form(c.f, 5);
  for (const auto& pt : c.cone_points) {
    if (pt.size() != 7 || !pt[5].is_zero()) return "cone point has the wrong shape";
    if (is_zero_vector(pt)) return "zero cone point";
    if (!evaluate(f5, std::vector<Rational>(pt.begin(), pt.begin() + 5)).is_zero()) return "cone point off Q";
  }
  const Matrix<Rational> ev = quadric_evaluations(c.cone_points);
  const std::size_t dim = ev.cols() - rank(ev);
  if (dim != c.quadric_space_dim) return "quadric count differs";
  // x5 x0..x5 x6 and f vanish on the cone and are independent, so the count
  // from points is exact only when it is 8.
  if (dim != 8) return "sampled count is not the exact value 8";
  return {};
}

std::string replay_decomposition(const json& body, bool deep) {
  const DecompositionCert c = DecompositionCert::from_json(body);
  if (std::string why = decomposition_failure(c); !why.empty()) return why;
  if (!deep) return {};
  const auto interp = interpolate_quartic(c.quartic_map, c.samples, c.interpolation_seed);
  if (interp.kernel_dim != c.interpolation_kernel_dim) return "interpolation kernel dimension differs";
  if (!interp.quartic) return "interpolation did not lift";
  const Poly& q = *interp.quartic;
  const Rational s = c.F5.coefficient(q.leading_monomial()) / q.leading_coefficient();
  if (s.is_zero() || q * s != c.F5) return "interpolated quartic is not F5";
  return {};
}

std::string replay_sing_dim(const json& body) {
  const SingDimReport r = SingDimReport::from_json(body);
  if (r.dims.size() != r.trials) return "trial list has the wrong length";
  std::size_t matched = 0, excluded = 0;
  for (int d : r.dims) {
    if (d == -2) ++excluded;
    else if (d == r.predicted) ++matched;
  }
  if (matched != r.matched || excluded != r.excluded) return "tallies differ from the trial list";
  if (r.predicted != std::max(r.base_singular_dim - static_cast<int>(r.extra), -1)) return "prediction differs";
  return {};
}

}  // namespace

ReplayResult replay(const json& sealed, bool deep) {
  ReplayResult res;
  try {
    res.kind = sealed.at("kind").get<std::string>();
    const json& body = sealed.at("body");
    if (sha256_hex(body.dump()) != sealed.at("digest").get<std::string>()) {
      res.reason = "digest mismatch";
      return res;
    }
    if (res.kind == "OnVariety") res.reason = replay_on_variety(body);
    else if (res.kind == "Dominance") res.reason = replay_dominance(body);
    else if (res.kind == "SmoothModP") res.reason = replay_smooth(body, deep);
    else if (res.kind == "Positivity") res.reason = replay_positivity(body);
    else if (res.kind == "QuadricSystem") res.reason = replay_quadric_system(body);
    else if (res.kind == "Decomposition") res.reason = replay_decomposition(body, deep);
    else if (res.kind == "SingularDimension") res.reason = replay_sing_dim(body);
    else res.reason = "unknown certificate kind";
  } catch (const std::exception& e) {
    res.reason = e.what();
  }
  res.ok = res.reason.empty();
  return res;
}

}  // namespace unirat
