#include "unirat/pipeline.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "unirat/prime_field.hpp"

namespace unirat {

namespace {

using Poly = MPoly<Rational>;

Poly var(std::size_t nvars, std::size_t i) { return Poly::variable(nvars, i); }

// p involves only the first k variables; the same polynomial in k variables.
Poly shrink(const Poly& p, std::size_t k) {
  for (std::size_t i = k; i < p.nvars(); ++i)
    if (p.involves(i)) fail(ErrorKind::InvalidArgument, "polynomial involves a variable beyond x" + std::to_string(k - 1));
  Poly r(k);
  for (const auto& [m, c] : p.terms()) {
    std::vector<Monomial::Exp> e(m.exponents().begin(), m.exponents().begin() + std::min(k, m.nvars()));
    e.resize(k, 0);
    r.add_term(Monomial(e), c);
  }
  return r;
}

// Places the first `head` variables of p at 0..head-1 and the next `tail`
// ones at offset.., in a ring of nvars variables.
Poly place(const Poly& p, std::size_t head, std::size_t tail, std::size_t offset, std::size_t nvars) {
  if (p.nvars() != head + tail) fail(ErrorKind::ArityMismatch, "unexpected polynomial arity");
  std::vector<std::size_t> target(head + tail);
  for (std::size_t i = 0; i < head; ++i) target[i] = i;
  for (std::size_t j = 0; j < tail; ++j) target[head + j] = offset + j;
  return remap_variables(p, nvars, target);
}

Point<Rational> coordinate_point(std::size_t n, std::size_t k) {
  Point<Rational> p(n, Rational(0));
  p[k] = 1;
  return p;
}

std::vector<Rational> random_point(Rng& rng, std::size_t k, std::int64_t bound) {
  std::vector<Rational> v;
  for (std::size_t i = 0; i < k; ++i) v.push_back(rng.rational(bound));
  return v;
}

// Sign pattern of leading principal minors: a definite form has no real
// (hence no rational) zeros.
bool definite(const Matrix<Rational>& g) {
  int pos = 0, alt = 0;
  const std::size_t n = g.rows();
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix<Rational> sub(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) sub(i, j) = g(i, j);
    const int s = det_fraction_free(sub).sign();
    if (s > 0) ++pos;
    if (s == ((k % 2) ? -1 : 1)) ++alt;
  }
  return pos == int(n) || alt == int(n);
}

Slp pad_outputs(const Slp& m, std::size_t total) {
  SlpBuilder b(m.in_arity(), std::vector<Rational>(m.in_arity(), Rational(1)));
  auto out = b.apply(m, b.inputs());
  if (out.size() > total) fail(ErrorKind::ArityMismatch, "cannot pad to fewer coordinates");
  out.resize(total, Traced(0));
  return b.finish(out, m.provenance());
}

}  // namespace

MPoly<Rational> sphere_form(std::size_t nvars) {
  if (nvars < 5) fail(ErrorKind::InvalidArgument, "the sphere needs five coordinates");
  Poly f(nvars);
  for (std::size_t i = 0; i < 4; ++i) f += var(nvars, i).pow(2);
  f -= var(nvars, 4).pow(2);
  return f;
}

VarNames instance_names(std::size_t nvars, std::size_t tail_vars, std::size_t tail_first) {
  return VarNames::coords(nvars) + VarNames::indexed("b", tail_vars, tail_first);
}

std::vector<MPoly<Rational>> expand_slp(const Slp& m) {
  const std::size_t k = m.in_arity();
  std::vector<Poly> in;
  for (std::size_t i = 0; i < k; ++i) in.push_back(var(k, i));
  return m.eval_with(std::span<const Poly>(in), [k](const Rational& c) { return Poly(k, c); });
}

MPoly<Rational> sylvester_resultant(const MPoly<Rational>& a, const MPoly<Rational>& b, std::size_t v) {
  const std::size_t nv = a.nvars();
  const auto ca = coefficients_in(a, v), cb = coefficients_in(b, v);
  const std::size_t da = ca.size() - 1, db = cb.size() - 1;
  const std::size_t n = da + db;
  if (n == 0) return Poly(nv, Rational(1));
  std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n, Poly(nv)));
  for (std::size_t r = 0; r < db; ++r)
    for (std::size_t k = 0; k <= da; ++k) m[r][r + k] = ca[da - k];
  for (std::size_t r = 0; r < da; ++r)
    for (std::size_t k = 0; k <= db; ++k) m[db + r][r + k] = cb[db - k];
  // Bareiss over the polynomial ring.
  Poly prev(nv, Rational(1));
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t p = k + 1;
      while (p < n && m[p][k].is_zero()) ++p;
      if (p == n) return Poly(nv);
      std::swap(m[k], m[p]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = exact_divide(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
      m[i][k] = Poly(nv);
    }
    prev = m[k][k];
  }
  Poly d = m[n - 1][n - 1];
  return negate ? -d : d;
}

LinearSubspace QuarticInstance::M() const {
  std::vector<std::size_t> zero;
  for (std::size_t i = 5; i <= n; ++i) zero.push_back(i);
  return LinearSubspace::coordinate(n + 1, zero);
}

void QuarticInstance::check() const {
  if (n < 5) fail(ErrorKind::InvalidArgument, "quartic instances live in P^n with n >= 5");
  if (F.nvars() != n + 1 || f.nvars() != n + 1) fail(ErrorKind::ArityMismatch, "F and f need n + 1 variables");
  if (!F.is_homogeneous(4) || F.is_zero()) fail(ErrorKind::InvalidArgument, "F is not a quartic form");
  if (!f.is_homogeneous(2) || f.is_zero()) fail(ErrorKind::InvalidArgument, "f is not a quadratic form");
  for (std::size_t i = 5; i <= n; ++i)
    if (f.involves(i)) fail(ErrorKind::InvalidArgument, "f must only involve x0..x4");
  if (alpha.is_zero()) fail(ErrorKind::NotDivisible, "alpha must be nonzero");
  Poly r = F;
  for (std::size_t i = 5; i <= n; ++i) r = specialize(r, i, Rational(0));
  if (r != f * f * alpha) fail(ErrorKind::NotDivisible, "F does not restrict to alpha f^2 on M");
}

nlohmann::json QuarticInstance::to_json() const {
  const VarNames names = VarNames::coords(n + 1);
  nlohmann::json j;
  j["version"] = 1;
  j["n"] = n;
  j["F"] = format_poly(F, names);
  j["f"] = format_poly(f, names);
  j["alpha"] = alpha.to_string();
  std::vector<std::string> m;
  for (std::size_t i = 5; i <= n; ++i) m.push_back(names[i]);
  j["M"] = m;
  if (gamma_coord) j["Gamma"] = names[*gamma_coord];
  if (epsilon) j["epsilon"] = epsilon->to_string();
  j["configuration"] = extra_terms ? "reduced" : "full";
  if (extra_terms) j["extra_terms"] = *extra_terms;
  if (!cubics.empty()) {
    std::vector<std::string> cs;
    for (const auto& c : cubics) cs.push_back(format_poly(c, names));
    j["cubics"] = cs;
  }
  j["seeds"] = seeds;
  return j;
}

QuarticInstance QuarticInstance::from_json(const nlohmann::json& j) {
  try {
    QuarticInstance q;
    if (j.at("version").get<int>() != 1) fail(ErrorKind::MalformedInput, "unsupported instance version");
    q.n = j.at("n").get<std::size_t>();
    if (q.n < 5 || q.n > 15) fail(ErrorKind::MalformedInput, "n out of range");
    const VarNames names = VarNames::coords(q.n + 1);
    q.F = parse_poly(j.at("F").get<std::string>(), names);
    q.f = parse_poly(j.at("f").get<std::string>(), names);
    q.alpha = Rational::parse(j.at("alpha").get<std::string>());
    if (j.contains("Gamma")) {
      const std::size_t k = names.find(j.at("Gamma").get<std::string>());
      if (k == names.size()) fail(ErrorKind::MalformedInput, "Gamma must name a coordinate");
      q.gamma_coord = k;
    }
    if (j.contains("epsilon")) q.epsilon = Rational::parse(j.at("epsilon").get<std::string>());
    if (j.contains("extra_terms")) q.extra_terms = j.at("extra_terms").get<std::size_t>();
    if (j.contains("cubics"))
      for (const auto& c : j.at("cubics")) q.cubics.push_back(parse_poly(c.get<std::string>(), names));
    if (j.contains("seeds")) q.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    return q;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::MalformedInput, std::string("instance JSON: ") + e.what());
  }
}

ConicSpec ConicSpec::circle() { return {{2, 3}, {1, 0, 0, 0, 1}}; }

ConicSpec ConicSpec::parse(const std::string& text) {
  if (text == "circle") return circle();
  ConicSpec s;
  bool have_zero = false, have_point = false;
  std::stringstream parts(text);
  std::string part;
  auto split = [](const std::string& list) {
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
  };
  while (std::getline(parts, part, ';')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) fail(ErrorKind::MalformedInput, "conic spec parts look like key=value");
    const std::string key = part.substr(0, eq), value = part.substr(eq + 1);
    if (key == "zero") {
      for (const auto& item : split(value)) {
        std::size_t pos = 0;
        unsigned long k = 0;
        try {
          k = std::stoul(item, &pos);
        } catch (const std::exception&) {
          pos = 0;
        }
        if (pos == 0 || pos != item.size() || k > 4) fail(ErrorKind::MalformedInput, "conic plane coordinate must be 0..4");
        s.zero_coords.push_back(k);
      }
      have_zero = true;
    } else if (key == "point") {
      for (const auto& item : split(value)) s.point.push_back(Rational::parse(item));
      have_point = true;
    } else {
      fail(ErrorKind::MalformedInput, "unknown conic spec key '" + key + "'");
    }
  }
  if (!have_zero || !have_point) fail(ErrorKind::MalformedInput, "conic spec needs zero= and point=");
  std::vector<std::size_t> z = s.zero_coords;
  std::sort(z.begin(), z.end());
  if (z.size() != 2 || z[0] == z[1]) fail(ErrorKind::MalformedInput, "conic plane needs two distinct zero coordinates");
  if (s.point.size() != 5) fail(ErrorKind::MalformedInput, "conic point needs five coordinates");
  return s;
}

std::string ConicSpec::to_string() const {
  std::string out = "zero=";
  for (std::size_t i = 0; i < zero_coords.size(); ++i) out += (i ? "," : "") + std::to_string(zero_coords[i]);
  out += ";point=";
  for (std::size_t i = 0; i < point.size(); ++i) out += (i ? "," : "") + point[i].to_string();
  return out;
}

Slp conic_curve(const MPoly<Rational>& f, const ConicSpec& spec, std::size_t total) {
  const Poly f5 = shrink(f, 5);
  const QuadricHypersurface q(f5);
  if (definite(q.gram())) fail(ErrorKind::NoRationalPoint, "the quadric is definite and has no rational point");
  for (auto k : spec.zero_coords)
    if (!spec.point[k].is_zero()) fail(ErrorKind::InvalidArgument, "conic point is not in the conic plane");
  return pad_outputs(conic_param(q, LinearSubspace::coordinate(5, spec.zero_coords), spec.point), total);
}

Slp Ci23Instance::surface_param() const {
  SlpBuilder b(2, {Rational(1), Rational(1)});
  const Traced t = b.input(0), u = b.input(1);
  auto g = b.apply(curve, {t});
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = g[i] + u * Traced(vertex.at(i));
  return b.finish(g, {"surface", {}});
}

ConeDecomposition decompose_cone(const MPoly<Rational>& F5, const MPoly<Rational>& f, const Rational& alpha,
                                 const MPoly<Rational>& q, std::size_t tail) {
  if (F5.nvars() != 6 + tail || f.nvars() != 6 + tail) fail(ErrorKind::ArityMismatch, "Y lives in P^5");
  if (q.nvars() != 7 || !q.is_homogeneous(2)) fail(ErrorKind::InvalidArgument, "q must be a quadratic form in x0..x6");
  const std::size_t nv = 7 + tail;
  const Poly f7 = place(shrink(f, 5), 5, 0, 7, 7);
  const Poly q0 = specialize(q, 5, Rational(0));
  ConeDecomposition d;
  d.lambda = q0.coefficient(f7.leading_monomial()) / f7.leading_coefficient();
  if (q0 != f7 * d.lambda) fail(ErrorKind::InvalidArgument, "q is not of the form x5 l + lambda f");
  if (d.lambda.is_zero()) fail(ErrorKind::LambdaZero, "lambda = 0: q contains M");
  d.l = exact_divide(q - f7 * d.lambda, var(7, 5));
  const Poly Fn = place(F5, 6, tail, 7, nv), fn = place(f, 6, tail, 7, nv), ln = place(d.l, 7, 0, 7, nv);
  d.c1 = exact_divide(Fn - fn * fn * alpha, var(nv, 5));
  d.c = d.c1 - ln * fn * (alpha / d.lambda);
  return d;
}

MPoly<Rational> decomposition_residual(const MPoly<Rational>& F5, const MPoly<Rational>& f, const Rational& alpha,
                                       const MPoly<Rational>& q, const ConeDecomposition& d, std::size_t tail) {
  const std::size_t nv = 7 + tail;
  const Poly Fn = place(F5, 6, tail, 7, nv), fn = place(f, 6, tail, 7, nv);
  const Poly qn = place(q, 7, 0, 7, nv), ln = place(d.l, 7, 0, 7, nv);
  const Poly x5 = var(nv, 5);
  return Fn * d.lambda - fn * qn * alpha - x5 * (d.c1 * d.lambda - ln * fn * alpha);
}

SolverReport solve_quadric_system(const MPoly<Rational>& F5, const MPoly<Rational>& f, const Rational& alpha,
                                  const Slp& gamma, std::uint64_t seed, std::size_t tail) {
  if (gamma.in_arity() != 1 || gamma.out_arity() != 7) fail(ErrorKind::ArityMismatch, "gamma must map t into P^6");
  SolverReport rep;
  Rng rng(derive_seed(seed, "quadric-system"));
  const Poly f5 = shrink(f, 5), f7 = place(f5, 5, 0, 7, 7);
  const QuadricHypersurface Q(f5);

  // (i) Quadrics in x0..x6 through points mu e6 + nu p, p on Q.
  Point<Rational> p0(gamma.eval({Rational(2)}));
  p0.resize(5);
  std::size_t k = 0;
  while (p0[k].is_zero()) ++k;
  const auto quad_monos = monomials_of_degree(7, 2);
  std::vector<std::vector<Rational>> rows;
  while (rows.size() < 40) {
    Point<Rational> d(5, Rational(0));
    for (std::size_t i = 0; i < 5; ++i)
      if (i != k) d[i] = Rational(static_cast<long>(rng.uniform(-9, 9)));
    const Point<Rational> pq = stereographic_point(Q.gram(), p0, d);
    if (is_zero_vector(pq)) continue;
    const Rational mu(static_cast<long>(rng.uniform(-9, 9))), nu(static_cast<long>(rng.uniform(1, 9)));
    std::vector<Rational> pt(7, Rational(0));
    for (std::size_t i = 0; i < 5; ++i) pt[i] = nu * pq[i];
    pt[6] = mu;
    std::vector<Rational> row;
    for (const auto& m : quad_monos) row.push_back(evaluate(Poly::monomial(m, Rational(1)), pt));
    rows.push_back(std::move(row));
  }
  rep.sample_points = rows.size();
  const Matrix<Rational> eval = Matrix<Rational>::from_rows(rows, quad_monos.size());
  const auto kernel = kernel_basis(eval);
  rep.quadric_space_dim = kernel.size();
  rep.projective_dim = kernel.empty() ? 0 : kernel.size() - 1;
  bool member = true;
  for (const auto& v : kernel) {
    Poly qk(7);
    for (std::size_t i = 0; i < v.size(); ++i) qk.add_term(quad_monos[i], v[i]);
    const Poly r = specialize(qk, 5, Rational(0));
    if (r.is_zero()) continue;
    const Rational ratio = r.coefficient(f7.leading_monomial()) / f7.leading_coefficient();
    if (r != f7 * ratio) member = false;
  }
  rep.membership_checked = member;

  // (ii) Conditions lambda c1(gamma) - alpha l(gamma) f(gamma) = 0.
  const std::size_t T = 1 + tail;
  const auto g1 = expand_slp(gamma);
  std::vector<Poly> images;
  for (std::size_t i = 0; i < 6; ++i) images.push_back(place(g1[i], 1, 0, 1, T));
  for (std::size_t j = 0; j < tail; ++j) images.push_back(var(T, 1 + j));
  const Poly c1 = exact_divide(F5 - f * f * alpha, var(6 + tail, 5));
  rep.obstruction = compose(c1, images);
  const Poly f_on = compose(f, images);
  std::vector<Poly> columns;
  for (std::size_t i = 0; i < 7; ++i) {
    const Poly li = i < 6 ? images[i] : Poly(T);
    columns.push_back(li * f_on * (-alpha));
  }
  columns.push_back(rep.obstruction);
  std::map<Monomial, std::size_t, GrevlexDescending> row_of;
  for (const auto& col : columns)
    for (const auto& [m, c] : col.terms()) row_of.emplace(m, 0);
  std::size_t r = 0;
  for (auto& [m, idx] : row_of) idx = r++;
  rep.conditions = Matrix<Rational>(row_of.size(), 8);
  for (std::size_t j = 0; j < 8; ++j)
    for (const auto& [m, c] : columns[j].terms()) rep.conditions(row_of.at(m), j) = c;
  rep.solutions = rep.conditions.rows() ? kernel_basis(rep.conditions) : kernel_basis(Matrix<Rational>(1, 8));

  // (iii) Search for a nonsingular member: 0/1 combinations, then random ones.
  auto quadric_of = [&](const std::vector<Rational>& coef) {
    std::vector<Rational> x(8, Rational(0));
    for (std::size_t s = 0; s < rep.solutions.size(); ++s)
      for (std::size_t i = 0; i < 8; ++i) x[i] += coef[s] * rep.solutions[s][i];
    Poly l(7);
    for (std::size_t i = 0; i < 7; ++i) l.add_term(Monomial::variable(7, i), x[i]);
    return var(7, 5) * l + f7 * x[7];
  };
  auto try_candidate = [&](const std::vector<Rational>& coef) {
    ++rep.candidates_tried;
    const Poly q = quadric_of(coef);
    if (q.is_zero() || det_fraction_free(gram_matrix(q)).is_zero()) return false;
    rep.witness = q;
    return true;
  };
  const std::size_t ns = rep.solutions.size();
  for (std::uint64_t mask = 1; ns > 0 && mask < (std::uint64_t{1} << ns) && !rep.witness; ++mask) {
    std::vector<Rational> coef(ns, Rational(0));
    for (std::size_t s = 0; s < ns; ++s)
      if (mask >> s & 1) coef[s] = 1;
    try_candidate(coef);
  }
  for (int trial = 0; ns > 0 && trial < 100 && !rep.witness; ++trial) {
    std::vector<Rational> coef;
    for (std::size_t s = 0; s < ns; ++s) coef.push_back(Rational(static_cast<long>(rng.uniform(-3, 3))));
    try_candidate(coef);
  }
  return rep;
}

Slp ci23_parametrize(const Ci23Instance& inst, std::uint64_t seed) {
  const std::size_t n = inst.n, N = n + 1;
  if (n < 5) fail(ErrorKind::InvalidArgument, "X23 needs n >= 5");
  if (inst.q.nvars() != N || inst.c.nvars() != N + inst.tail_vars || inst.vertex.size() != N)
    fail(ErrorKind::ArityMismatch, "Ci23 instance arities disagree");
  if (det_fraction_free(gram_matrix(inst.q)).is_zero()) fail(ErrorKind::InvalidArgument, "q must be nonsingular");
  const std::size_t fiber = n - 4, nin = 2 + fiber + inst.tail_vars;
  const QuadricHypersurface Q(inst.q);

  for (int attempt = 0;; ++attempt) {
    const std::uint64_t s_seed = derive_seed(seed, "ci23-sample-" + std::to_string(attempt));
    Rng rng(s_seed);
    try {
      SlpBuilder b(nin, random_point(rng, nin, 50));
      const auto in = b.inputs();
      const Traced t = in[0], u = in[1];
      const std::vector<Traced> tail(in.begin() + 2 + fiber, in.end());
      const auto g = b.apply(inst.curve, {t});
      Point<Traced> s(N), x(N);
      for (std::size_t i = 0; i < N; ++i) {
        x[i] = Traced(inst.vertex[i]);
        s[i] = g.at(i) + u * x[i];
      }
      const auto fq = fiber_quadric(inst.q, inst.c, s, tail);
      if (rank(pivot_view(fq.gram)) < 3) fail(ErrorKind::SectionSingular, "fibre quadric has rank below 3");

      // Chart of the fibre: L_s basis vectors independent modulo {s, x}.
      std::vector<std::vector<Rational>> span = {pivot_view(Matrix<Traced>(1, N, s)).row(0),
                                                 pivot_view(Matrix<Traced>(1, N, x)).row(0)};
      if (rank(Matrix<Rational>::from_rows(span, N)) != 2) fail(ErrorKind::SectionSingular, "base point equals the vertex");
      std::vector<Point<Traced>> ws;
      for (const auto& w : fq.basis) {
        span.push_back(pivot_view(Matrix<Traced>(1, N, w)).row(0));
        if (rank(Matrix<Rational>::from_rows(span, N)) == span.size()) {
          ws.push_back(w);
        } else {
          span.pop_back();
        }
      }
      if (ws.size() != fiber + 1) fail(ErrorKind::SectionSingular, "fibre chart has the wrong dimension");
      // Lead with a direction where the polar form of x is nonzero.
      std::size_t lead = ws.size();
      for (std::size_t i = 0; i < ws.size() && lead == ws.size(); ++i)
        if (!is_zero(Q.bilinear(x, ws[i]))) lead = i;
      if (lead == ws.size()) fail(ErrorKind::SectionSingular, "the generatrix direction is singular on the fibre quadric");
      std::swap(ws[0], ws[lead]);

      Point<Traced> w = ws[0];
      for (std::size_t k = 1; k < ws.size(); ++k)
        for (std::size_t i = 0; i < N; ++i) w[i] = w[i] + in[1 + k] * ws[k][i];
      const Point<Traced> d = stereographic_point(Q.gram(), x, w);
      const auto res = residual_point(inst.c, s, d, tail);
      return b.finish(res, {"ci23", {seed, s_seed}});
    } catch (const Error& e) {
      const auto k = e.kind();
      const bool generic = k == ErrorKind::SectionSingular || k == ErrorKind::TangentsCoincide ||
                           k == ErrorKind::LineInsideCubic || k == ErrorKind::PoleHit || k == ErrorKind::SingularPoint;
      if (!generic || attempt >= 4) throw;
    }
  }
}

namespace {

std::uint64_t prime_below(std::uint64_t x) {
  for (std::uint64_t p = x | 1;; p -= 2)
    if (is_prime(p)) return p;
}

// r/s with |r|, s <= sqrt(m / 2) and r = a s mod m, if one exists.
std::optional<Rational> rational_reconstruct(const Integer& a, const Integer& m) {
  Integer bound = sqrt(Integer(m / 2));
  Integer r0 = m, r1 = a % m, s0 = 0, s1 = 1;
  if (r1 < 0) r1 += m;
  while (r1 > bound) {
    Integer qt = r0 / r1;
    Integer t = r0 - qt * r1;
    r0 = r1;
    r1 = t;
    t = s0 - qt * s1;
    s0 = s1;
    s1 = t;
  }
  if (s1 == 0 || abs(s1) > bound) return std::nullopt;
  if (gcd(r1, s1) != 1) return std::nullopt;
  return Rational(r1, s1);
}

}  // namespace

InterpolationResult interpolate_quartic(const Slp& map, std::size_t samples, std::uint64_t seed) {
  // Over Q the quartics through the image form a saturated lattice; a basis
  // of it stays independent mod p and vanishes on the mod-p image, so the
  // kernel dimension mod p bounds the one over Q from above.
  if (map.out_arity() != 6) fail(ErrorKind::ArityMismatch, "interpolation expects a map into P^5");
  const auto monos = monomials_of_degree(6, 4);
  InterpolationResult out;
  std::vector<Integer> acc(monos.size(), 0);
  Integer modulus = 1;
  std::optional<std::vector<Rational>> previous;
  std::uint64_t p = prime_below(std::uint64_t{1} << 61);
  for (int round = 0; round < 12; ++round, p = prime_below(p - 2)) {
    PrimeScope scope(p);
    Rng rng(derive_seed(seed, "interpolate-" + std::to_string(p)));
    Matrix<ModP> m(samples, monos.size());
    std::size_t filled = 0;
    while (filled < samples) {
      std::vector<ModP> pt;
      for (std::size_t i = 0; i < map.in_arity(); ++i) pt.emplace_back(rng.below(p), p, true);
      std::vector<ModP> y;
      try {
        y = map.eval_mod(pt, p);
      } catch (const PoleHit&) {
        continue;
      }
      for (std::size_t j = 0; j < monos.size(); ++j) {
        ModP v(1, p, true);
        for (std::size_t i = 0; i < 6; ++i) v = v * y[i].pow(monos[j][i]);
        m(filled, j) = v;
      }
      ++filled;
    }
    const auto ker = kernel_basis(m);
    out.primes.push_back(p);
    if (round == 0) out.kernel_dim = ker.size();
    if (ker.size() != 1) {
      if (round == 0) return out;
      continue;  // unlucky prime
    }
    // Normalise the first nonzero coordinate to 1, then CRT.
    std::vector<ModP> v = ker[0];
    std::size_t lead = 0;
    while (v[lead].is_zero()) ++lead;
    const ModP inv = v[lead].inverse();
    const Integer P(static_cast<unsigned long>(p));
    for (std::size_t j = 0; j < v.size(); ++j) {
      const Integer r(static_cast<unsigned long>((v[j] * inv).residue()));
      // x = acc + modulus * ((r - acc) / modulus mod P)
      Integer diff = (r - acc[j]) % P;
      if (diff < 0) diff += P;
      Integer minv;
      mpz_invert(minv.get_mpz_t(), Integer(modulus % P).get_mpz_t(), P.get_mpz_t());
      acc[j] += modulus * ((diff * minv) % P);
    }
    modulus *= P;
    std::vector<Rational> lifted;
    bool ok = true;
    for (const auto& a : acc) {
      auto r = rational_reconstruct(a, modulus);
      if (!r) {
        ok = false;
        break;
      }
      lifted.push_back(*r);
    }
    if (ok && previous && *previous == lifted) {
      Poly quartic(6);
      for (std::size_t j = 0; j < monos.size(); ++j) quartic.add_term(monos[j], lifted[j]);
      // Exact check on rational points of the image.
      Rng vr(derive_seed(seed, "interpolate-verify"));
      bool vanishes = true;
      for (int k = 0; k < 3 && vanishes; ++k) {
        try {
          vanishes = evaluate(quartic, map.eval(random_point(vr, map.in_arity(), 20))).is_zero();
        } catch (const PoleHit&) {
        }
      }
      if (vanishes) out.quartic = std::move(quartic);
      return out;
    }
    if (ok) previous = lifted;
  }
  return out;
}

namespace {

Poly random_cubic(Rng& rng, std::size_t nvars) {
  Poly c(nvars);
  for (const auto& m : monomials_of_degree(nvars, 3)) c.add_term(m, Rational(static_cast<long>(rng.uniform(-2, 2))));
  return c;
}

Rational nonzero_small(Rng& rng) {
  const long v = static_cast<long>(rng.uniform(-2, 1));
  return Rational(v >= 0 ? v + 1 : v);
}

// a x_var^3 plus `extra` distinct random monomials other than that cube.
Poly sparse_cubic(Rng& rng, std::size_t nvars, std::size_t var, std::size_t extra) {
  const auto monos = monomials_of_degree(nvars, 3);
  const Monomial cube = Monomial::variable(nvars, var, 3);
  Poly c = Poly::monomial(cube, nonzero_small(rng));
  std::size_t added = 0;
  while (added < extra) {
    const Monomial& m = monos[rng.below(monos.size())];
    if (m == cube || !c.coefficient(m).is_zero()) continue;
    c.add_term(m, nonzero_small(rng));
    ++added;
  }
  return c;
}

}  // namespace

ReverseBuildResult reverse_build(ReverseBuildOptions opt) {
  if (opt.f.nvars() == 0) opt.f = sphere_form(7);
  if (opt.l.nvars() == 0) opt.l = var(7, 6);
  if (opt.f.nvars() != 7 || opt.l.nvars() != 7) fail(ErrorKind::ArityMismatch, "f and l live in x0..x6");
  if (opt.alpha.is_zero()) fail(ErrorKind::InvalidArgument, "alpha must be nonzero");
  Rng rng(derive_seed(opt.seed, "reverse-build"));
  ReverseBuildResult out;
  const Poly f6 = place(shrink(opt.f, 5), 5, 0, 6, 6);
  const Slp gamma = conic_curve(opt.f, opt.conic, 7);
  const auto g = expand_slp(gamma);

  // c1 = random cubic in x0..x5, corrected by cubics in the plane
  // coordinates so that c1(gamma(t)) = 0.
  Poly c1 = random_cubic(rng, 6);
  std::vector<std::size_t> plane;
  for (std::size_t i = 0; i < 5; ++i)
    if (std::find(opt.conic.zero_coords.begin(), opt.conic.zero_coords.end(), i) == opt.conic.zero_coords.end())
      plane.push_back(i);
  std::vector<Poly> corr;
  for (const auto& m : monomials_of_degree(plane.size(), 3)) {
    Poly mono(6, Rational(1));
    for (std::size_t k = 0; k < plane.size(); ++k) mono = mono * var(6, plane[k]).pow(m[k]);
    corr.push_back(mono);
  }
  std::vector<Poly> img(g.begin(), g.begin() + 6);
  auto coeffs_t = [&](const Poly& p) {
    const Poly r = compose(p, img);
    std::vector<Rational> v(7, Rational(0));
    for (const auto& [m, c] : r.terms()) v.at(m[0]) = c;
    return v;
  };
  Matrix<Rational> sys(7, corr.size());
  for (std::size_t j = 0; j < corr.size(); ++j) {
    const auto v = coeffs_t(corr[j]);
    for (std::size_t i = 0; i < 7; ++i) sys(i, j) = v[i];
  }
  auto rhs = coeffs_t(c1);
  for (auto& x : rhs) x = -x;
  const auto a = solve_particular(sys, rhs);
  if (!a) fail(ErrorKind::InvalidArgument, "cannot make the cubic vanish on the conic");
  for (std::size_t j = 0; j < corr.size(); ++j) c1 += corr[j] * (*a)[j];

  const Poly F5 = f6 * f6 * opt.alpha + var(6, 5) * c1;
  const Poly q = var(7, 5) * opt.l + opt.f * opt.lambda;
  if (det_fraction_free(gram_matrix(q)).is_zero()) fail(ErrorKind::InvalidArgument, "q = x5 l + lambda f is singular");
  out.decomposition = decompose_cone(F5, f6, opt.alpha, q);

  out.ci23.n = 6;
  out.ci23.q = q;
  out.ci23.c = out.decomposition.c;
  out.ci23.curve = gamma;
  out.ci23.vertex = coordinate_point(7, 6);

  out.quartic.n = 5;
  out.quartic.F = F5;
  out.quartic.f = f6;
  out.quartic.alpha = opt.alpha;
  out.quartic.seeds = {opt.seed};

  out.ci23_map = ci23_parametrize(out.ci23, derive_seed(opt.seed, "ci23"));
  out.quartic_map = compose(project_from_point(out.ci23.vertex), out.ci23_map);

  const auto interp = interpolate_quartic(out.quartic_map, opt.samples, derive_seed(opt.seed, "interpolate"));
  out.interpolation_kernel_dim = interp.kernel_dim;
  out.interpolation_primes = interp.primes;
  if (interp.kernel_dim == 0) fail(ErrorKind::InterpolationEmpty, "no quartic vanishes on the samples");
  if (interp.kernel_dim > 1) fail(ErrorKind::InterpolationAmbiguous, "samples do not determine the quartic");
  if (interp.quartic) {
    const Poly& r = *interp.quartic;
    const Rational scale = F5.coefficient(r.leading_monomial()) / r.leading_coefficient();
    out.interpolation_matches = !scale.is_zero() && r * scale == F5;
  }
  const Rational l6 = out.decomposition.l.coefficient(Monomial::variable(7, 6));
  out.resultant_matches =
      sylvester_resultant(q, out.decomposition.c, 6) == place(F5, 6, 0, 7, 7) * l6 && !l6.is_zero();
  return out;
}

namespace {

ParamOutcome parametrize_section(const Poly& F5, const Poly& f, const Rational& alpha, const ConicSpec& conic,
                                 std::size_t tail, std::uint64_t seed) {
  const Poly f7 = place(shrink(f, 5), 5, 0, 7, 7);
  const Slp gamma = conic_curve(f7, conic, 7);
  SolverReport rep = solve_quadric_system(F5, f, alpha, gamma, seed, tail);
  if (!rep.witness) {
    ObstructionReport ob;
    ob.obstruction_text = format_poly(rep.obstruction, VarNames({"t"}) + VarNames::indexed("b", tail, 6));
    ob.solver = std::move(rep);
    ob.F5 = F5;
    ob.f = f;
    ob.alpha = alpha;
    ob.gamma = gamma;
    ob.tail_vars = tail;
    return ob;
  }
  const ConeDecomposition dec = decompose_cone(F5, f, alpha, *rep.witness, tail);
  Ci23Instance inst;
  inst.n = 6;
  inst.q = *rep.witness;
  inst.c = dec.c;
  inst.tail_vars = tail;
  inst.curve = gamma;
  inst.vertex = coordinate_point(7, 6);
  const Slp x23 = ci23_parametrize(inst, derive_seed(seed, "ci23"));
  // Projection from e6 acts on the coordinate outputs only.
  const std::size_t nin = x23.in_arity();
  SlpBuilder b(nin, std::vector<Rational>(nin, Rational(1)));
  auto y = b.apply(x23, b.inputs());
  y = b.apply(project_from_point(inst.vertex), y);
  return b.finish(y, {"Y4", {seed}});
}

}  // namespace

ParamOutcome parametrize_Y4(const QuarticInstance& y, const ConicSpec& conic, std::uint64_t seed) {
  if (y.n != 5) fail(ErrorKind::InvalidArgument, "parametrize_Y4 expects a quartic in P^5");
  // A definite f has no rational point: report before any work.
  if (definite(QuadricHypersurface(shrink(y.f, 5)).gram()))
    fail(ErrorKind::NoRationalPoint, "the quadric is definite and has no rational point");
  y.check();
  return parametrize_section(y.F, y.f, y.alpha, conic, 0, seed);
}

SectionFamily generic_section(const QuarticInstance& h) {
  h.check();
  SectionFamily fam;
  fam.n = h.n;
  fam.base_params = h.n - 5;
  const std::size_t nv = 6 + fam.base_params;
  std::vector<Poly> images;
  for (std::size_t j = 0; j <= 5; ++j) images.push_back(var(nv, j));
  for (std::size_t i = 6; i <= h.n; ++i) images.push_back(var(nv, 6 + (i - 6)) * var(nv, 5));
  fam.quartic = compose(h.F, images);
  fam.substitution = Matrix<Rational>(h.n + 1, 6);
  for (std::size_t j = 0; j <= 5; ++j) fam.substitution(j, j) = 1;
  return fam;
}

ParamOutcome parametrize_H4(const QuarticInstance& h, const ConicSpec& conic, std::uint64_t seed) {
  if (h.n < 6) fail(ErrorKind::InvalidArgument, "parametrize_H4 needs n >= 6");
  if (definite(QuadricHypersurface(shrink(h.f, 5)).gram()))
    fail(ErrorKind::NoRationalPoint, "the quadric is definite and has no rational point");
  const SectionFamily fam = generic_section(h);
  const std::size_t tail = fam.base_params;
  const Poly f = place(shrink(h.f, 5), 5, 0, 6 + tail, 6 + tail);
  ParamOutcome inner = parametrize_section(fam.quartic, f, h.alpha, conic, tail, seed);
  if (std::holds_alternative<ObstructionReport>(inner)) return inner;
  const Slp& y = std::get<Slp>(inner);
  const std::size_t nin = h.n - 1;
  SlpBuilder b(nin, std::vector<Rational>(nin, Rational(1)));
  const auto in = b.inputs();
  const auto ys = b.apply(y, in);
  std::vector<Traced> x(ys.begin(), ys.end());
  for (std::size_t i = 6; i <= h.n; ++i) x.push_back(in[4 + (i - 6)] * ys[5]);
  return b.finish(x, {"H4", {seed}});
}

QuarticInstance build_real_example(std::size_t n, const Rational& epsilon, std::uint64_t seed,
                                   std::optional<std::size_t> extra_terms) {
  if (n < 8) fail(ErrorKind::InvalidArgument, "the example needs n >= 8");
  if (epsilon.sign() < 0) fail(ErrorKind::InvalidArgument, "epsilon must be nonnegative");
  if (extra_terms && n > 9) fail(ErrorKind::InvalidArgument, "the reduced configuration needs n <= 9");
  const std::size_t nv = n + 1;
  QuarticInstance h;
  h.n = n;
  h.f = sphere_form(nv);
  h.alpha = 1;
  h.gamma_coord = 4;
  h.epsilon = epsilon;
  h.extra_terms = extra_terms;
  h.seeds = {seed};
  h.F = h.f * h.f;
  Rng rng(derive_seed(seed, "example-cubics"));
  std::vector<std::size_t> cube_var = {0, 1, 2, 3, 4};
  for (std::size_t k = cube_var.size(); k > 1; --k) std::swap(cube_var[k - 1], cube_var[rng.below(k)]);
  for (std::size_t i = 5; i <= n; ++i) {
    h.F += var(nv, i).pow(4);
    Poly c = extra_terms ? sparse_cubic(rng, nv, cube_var[i - 5], *extra_terms) : random_cubic(rng, nv);
    if (!epsilon.is_zero()) h.F += var(nv, i) * c * epsilon;
    h.cubics.push_back(std::move(c));
  }
  return h;
}

}  // namespace unirat
