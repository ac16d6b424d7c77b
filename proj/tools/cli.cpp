#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "unirat/certify.hpp"
#include "unirat/pipeline.hpp"
#include "unirat/poly_text.hpp"
#include "unirat/prime_field.hpp"
#include "unirat/random.hpp"

namespace unirat::cli {

using json = nlohmann::json;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::BadPrime:
    case ErrorKind::MalformedInput:
    case ErrorKind::ArityMismatch:
    case ErrorKind::NoRationalPoint:
    case ErrorKind::OddCharacteristic:
      return kUsage;
    case ErrorKind::NotEmptyModP:
    case ErrorKind::DegreeCeilingExceeded:
    case ErrorKind::BudgetExceeded:
    case ErrorKind::RankDeficient:
    case ErrorKind::PoleHit:
      return kInconclusive;
    default:
      return kCertificateFailure;
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::MalformedInput, "cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::MalformedInput, path + ": " + e.what());
  }
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + path);
  out << j.dump(2) << "\n";
}

json new_report(const std::string& command, const std::vector<std::uint64_t>& seeds) {
  return json{{"version", 1},
              {"command", command},
              {"seeds", seeds},
              {"certificates", json::array()},
              {"notes", json::array()},
              {"timings", json::object()}};
}

// The largest primes below 2^31, in decreasing order, skipping `skip`.
std::vector<std::uint64_t> default_primes(std::size_t count) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = (std::uint64_t{1} << 31) - 1; out.size() < count; p -= 2)
    if (is_prime(p)) out.push_back(p);
  return out;
}

std::string configuration_text(const QuarticInstance& h) {
  if (!h.extra_terms) return "full (every cubic monomial in each c_i)";
  return "reduced (c_i = a_i x_s(i)^3 plus " + std::to_string(*h.extra_terms) + " random monomials)";
}

std::string instance_summary(const QuarticInstance& h) {
  std::ostringstream s;
  s << "quartic in P^" << h.n << " with " << h.F.size() << " terms\n";
  s << "F|_M = " << h.alpha << " * f^2 on M = {x5 = ... = x" << h.n << " = 0}, so F contains the double quadric\n";
  if (h.epsilon) {
    s << "epsilon = " << *h.epsilon;
    if (h.epsilon->is_zero()) s << " (singular by construction: Sing F contains Q)";
    s << "\n";
  }
  s << "configuration: " << configuration_text(h) << "\n";
  return s.str();
}

std::string outcome_name(int code) {
  switch (code) {
    case kSuccess: return "Success";
    case kObstruction: return "Obstruction";
    case kInconclusive: return "Inconclusive";
    default: return "Error";
  }
}

// Shared flags.
struct Globals {
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
};

// build-example --------------------------------------------------------------

struct BuildExampleArgs {
  std::size_t n = 8;
  std::string epsilon = "1/16";
  long extra_terms = -1;
  std::string out;
};

int cmd_build_example(const BuildExampleArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  if (a.n < 8) {
    err << "build-example: the real example needs n >= 8 (the construction exists for every n >= 8)\n";
    return kUsage;
  }
  const QuarticInstance h = build_real_example(
      a.n, Rational::parse(a.epsilon), g.seed,
      a.extra_terms < 0 ? std::nullopt : std::optional<std::size_t>(static_cast<std::size_t>(a.extra_terms)));
  h.check();
  write_json(a.out, h.to_json());
  out << instance_summary(h) << "wrote " << a.out << "\n";
  return kSuccess;
}

// certify --------------------------------------------------------------------

struct CertifyArgs {
  std::string instance;
  std::vector<std::uint64_t> primes;
  std::string gamma;
  std::string report;
  unsigned ceiling = 20;
  double budget = 1800;
};

int cmd_certify(const CertifyArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  const QuarticInstance h = QuarticInstance::from_json(read_json(a.instance));
  const VarNames names = VarNames::coords(h.n + 1);
  std::size_t gamma = h.gamma_coord.value_or(4);
  if (!a.gamma.empty()) {
    gamma = names.find(a.gamma);
    if (gamma == names.size()) {
      err << "certify: --gamma-chart must name a coordinate x0..x" << h.n << "\n";
      return kUsage;
    }
  }
  json report = new_report("certify", {g.seed});
  report["instance"] = h.to_json();
  report["configuration"] = configuration_text(h);
  out << instance_summary(h);

  // Smoothness: explicit primes are used as given; default primes are
  // replaced when screening rejects them.
  SmoothOptions so;
  so.degree_ceiling = a.ceiling;
  so.max_seconds = a.budget;
  const bool explicit_primes = !a.primes.empty();
  std::vector<std::uint64_t> primes = explicit_primes ? a.primes : default_primes(2);
  if (explicit_primes)
    for (auto p : primes) screen_prime(h.F, p);  // BadPrime is a usage error
  if (!explicit_primes) {
    std::vector<std::uint64_t> good;
    for (auto p : default_primes(8)) {
      try {
        screen_prime(h.F, p);
        good.push_back(p);
      } catch (const Error&) {
      }
      if (good.size() == 2) break;
    }
    primes = good;
  }
  std::vector<std::optional<SmoothModPCert>> certs(primes.size());
  std::vector<std::string> failures(primes.size());
  std::vector<double> secs(primes.size());
  parallel_for(primes.size(), g.jobs, [&](std::size_t i) {
    const auto t0 = Clock::now();
    try {
      certs[i] = certify_smooth_mod_p(h.F, primes[i], so, names);
    } catch (const Error& e) {
      failures[i] = e.what();
    }
    secs[i] = seconds_since(t0);
  });
  int code = kSuccess;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    report["timings"]["smooth_mod_" + std::to_string(primes[i])] = secs[i];
    if (certs[i]) {
      report["certificates"].push_back(seal(*certs[i]));
      out << "smooth mod " << primes[i] << ": certified (basis " << certs[i]->basis_size << ", max degree "
          << certs[i]->stats.max_degree << ", " << secs[i] << " s)\n";
    } else {
      report["notes"].push_back("smooth mod " + std::to_string(primes[i]) + ": " + failures[i]);
      out << "smooth mod " << primes[i] << ": inconclusive: " << failures[i] << "\n";
      code = kInconclusive;
    }
  }

  const auto t0 = Clock::now();
  try {
    const PositivityCert pc = certify_positive_on_hyperplane(h.F, gamma, names);
    report["certificates"].push_back(seal(pc));
    Rational dmin = -1;
    for (std::size_t i = 0; i < pc.diagonal.size(); ++i)
      if (i != gamma && (dmin.sign() < 0 || pc.diagonal[i] < dmin)) dmin = pc.diagonal[i];
    out << "positive on {" << names[gamma] << " = 0}: certified (" << pc.steps.size() << " absorption steps, min d_i "
        << dmin << ")\n";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::AbsorptionFails) throw;
    report["notes"].push_back(std::string("positivity: ") + e.what());
    out << "positivity: failed: " << e.what() << "\n";
    code = kCertificateFailure;
  }
  report["timings"]["positivity"] = seconds_since(t0);
  report["outcome"] = outcome_name(code);
  if (!a.report.empty()) write_json(a.report, report);
  out << "outcome: " << outcome_name(code) << "\n";
  return code;
}

// parametrize ----------------------------------------------------------------

struct ParametrizeArgs {
  std::string instance;
  std::string conic = "circle";
  std::string out;
  std::string report;
};

json map_certificates(const Slp& map, const QuarticInstance& h, std::uint64_t seed, json& report) {
  json certs = json::array();
  OnVarietyOptions ov;
  ov.seed = derive_seed(seed, "verify");
  auto t0 = Clock::now();
  certs.push_back(seal(check_on_variety(map, {h.F}, ov, VarNames::coords(h.n + 1))));
  report["timings"]["on_variety"] = seconds_since(t0);
  t0 = Clock::now();
  certs.push_back(seal(check_dominant(map, h.n - 1, derive_seed(seed, "dominance"))));
  report["timings"]["dominance"] = seconds_since(t0);
  return certs;
}

int cmd_parametrize(const ParametrizeArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  ConicSpec conic;
  try {
    conic = ConicSpec::parse(a.conic);
  } catch (const Error& e) {
    err << "parametrize: bad --conic: " << e.what() << "\n";
    return kUsage;
  }
  const QuarticInstance h = QuarticInstance::from_json(read_json(a.instance));
  h.check();
  json report = new_report("parametrize", {g.seed});
  report["instance"] = h.to_json();
  report["conic"] = conic.to_string();
  const auto t0 = Clock::now();
  const ParamOutcome res = h.n == 5 ? parametrize_Y4(h, conic, g.seed) : parametrize_H4(h, conic, g.seed);
  report["timings"]["parametrize"] = seconds_since(t0);
  if (const auto* ob = std::get_if<ObstructionReport>(&res)) {
    const QuadricSystemCert qc = certify_quadric_system(ob->F5, ob->f, ob->alpha, ob->gamma, g.seed, ob->tail_vars);
    report["certificates"].push_back(seal(qc));
    report["obstruction"] = json{{"polynomial", ob->obstruction_text},
                                 {"quadric_space_dim", ob->solver.quadric_space_dim},
                                 {"solution_dim", ob->solver.solutions.size()},
                                 {"candidates_tried", ob->solver.candidates_tried}};
    report["outcome"] = "Obstruction";
    if (!a.report.empty()) write_json(a.report, report);
    out << "obstruction: no nonsingular quadric x5*l + lambda*f has its cubic through the conic\n"
        << "c1(gamma(t)) = " << ob->obstruction_text << "\n"
        << "outcome: Obstruction\n";
    return kObstruction;
  }
  const Slp& map = std::get<Slp>(res);
  std::ofstream(a.out) << map.to_json().dump() << "\n";
  for (auto& c : map_certificates(map, h, g.seed, report)) report["certificates"].push_back(c);
  report["outcome"] = "Success";
  if (!a.report.empty()) write_json(a.report, report);
  out << "map with " << map.in_arity() << " parameters, " << map.size() << " nodes, wrote " << a.out << "\n"
      << "on-variety and rank-" << h.n - 1 << " dominance certified\noutcome: Success\n";
  return kSuccess;
}

// verify ---------------------------------------------------------------------

int cmd_verify(const std::string& slp_path, const std::string& inst_path, const std::string& report_path,
               const Globals& g, std::ostream& out) {
  const Slp map = Slp::from_json(read_json(slp_path));
  const QuarticInstance h = QuarticInstance::from_json(read_json(inst_path));
  if (map.out_arity() != h.n + 1) fail(ErrorKind::ArityMismatch, "SLP outputs do not match the instance");
  json report = new_report("verify", {g.seed});
  report["instance"] = h.to_json();
  for (auto& c : map_certificates(map, h, g.seed, report)) report["certificates"].push_back(c);
  report["outcome"] = "Success";
  if (!report_path.empty()) write_json(report_path, report);
  out << "on-variety and dominance verified\noutcome: Success\n";
  return kSuccess;
}

// replay ---------------------------------------------------------------------

int cmd_replay(const std::string& path, bool deep, std::ostream& out) {
  const json report = read_json(path);
  const auto problems = replay_report(report, deep);
  if (report.contains("certificates"))
    for (const auto& c : report["certificates"]) {
      const ReplayResult r = replay(c, deep);
      out << (r.ok ? "ok    " : "FAIL  ") << r.kind << (r.ok ? "" : ": " + r.reason) << "\n";
    }
  for (const auto& p : problems) out << "report: " << p << "\n";
  out << (problems.empty() ? "replay: accepted\n" : "replay: rejected\n");
  return problems.empty() ? kSuccess : kCertificateFailure;
}

// experiment lemma-singdim ---------------------------------------------------

struct ExperimentArgs {
  std::size_t trials = 50;
  std::size_t k = 2;
  std::uint64_t prime = 32003;
  std::string report;
};

int cmd_experiment(const ExperimentArgs& a, const Globals& g, std::ostream& out) {
  SingDimOptions o;
  o.trials = a.trials;
  o.extra = a.k;
  o.prime = a.prime;
  o.seed = g.seed;
  o.jobs = g.jobs;
  const auto t0 = Clock::now();
  const SingDimReport r = singular_dimension_experiment(o);
  json report = new_report("experiment lemma-singdim", {g.seed});
  report["timings"]["experiment"] = seconds_since(t0);
  report["certificates"].push_back(seal(r));
  report["outcome"] = "Success";
  if (!a.report.empty()) write_json(a.report, report);
  std::map<int, std::size_t> hist;
  for (int d : r.dims) ++hist[d];
  out << "base " << r.base_text << " in P^" << r.base_dim << ", dim Sing = " << r.base_singular_dim << "\n"
      << "k = " << r.extra << ", degree " << r.degree << ", p = " << r.prime << ", predicted dim Sing = " << r.predicted
      << (r.predicted < 0 ? " (empty)" : "") << "\n"
      << "dim Sing   trials\n";
  for (const auto& [d, c] : hist) out << (d == -2 ? std::string("excluded") : std::to_string(d)) << "\t" << c << "\n";
  out << "matched " << r.matched << "/" << (r.trials - r.excluded) << " = " << 100.0 * r.fraction() << "%\n"
      << "real example at n = " << r.example_n << ": predicted 3 - (n - 4) = " << 3 - (int(r.example_n) - 4)
      << ", i.e. " << (r.example_predicted < 0 ? "empty" : std::to_string(r.example_predicted)) << "\n";
  return kSuccess;
}

// reverse-build --------------------------------------------------------------

struct ReverseArgs {
  std::string out_instance;
  std::string out_x23;
  std::string report;
  std::size_t samples = 200;
};

int cmd_reverse_build(const ReverseArgs& a, const Globals& g, std::ostream& out) {
  ReverseBuildOptions opt;
  opt.seed = g.seed;
  opt.samples = a.samples;
  const auto t0 = Clock::now();
  const ReverseBuildResult r = reverse_build(opt);
  json report = new_report("reverse-build", {g.seed});
  report["timings"]["build"] = seconds_since(t0);
  report["instance"] = r.quartic.to_json();
  const VarNames n7 = VarNames::coords(7);

  report["certificates"].push_back(seal(certify_decomposition(r, a.samples, derive_seed(g.seed, "interpolate"))));
  report["certificates"].push_back(seal(certify_quadric_system(r.quartic.F, r.quartic.f, r.quartic.alpha, r.ci23.curve,
                                                               g.seed)));
  OnVarietyOptions ov;
  ov.seed = derive_seed(g.seed, "verify");
  report["certificates"].push_back(seal(check_on_variety(r.ci23_map, {r.ci23.q, r.ci23.c}, ov, n7)));
  report["certificates"].push_back(seal(check_dominant(r.ci23_map, 4, derive_seed(g.seed, "dominance"))));
  report["outcome"] = "Success";

  if (!a.out_instance.empty()) write_json(a.out_instance, r.quartic.to_json());
  if (!a.out_x23.empty())
    write_json(a.out_x23, json{{"version", 1},
                               {"n", 6},
                               {"vars", n7.names()},
                               {"q", format_poly(r.ci23.q, n7)},
                               {"c", format_poly(r.ci23.c, n7)},
                               {"conic", ConicSpec::circle().to_string()},
                               {"map", r.ci23_map.to_json()}});
  if (!a.report.empty()) write_json(a.report, report);
  out << "F5 = " << format_poly(r.quartic.F, VarNames::coords(6)) << "\n"
      << "q = " << format_poly(r.ci23.q, n7) << "\n"
      << "interpolation kernel dimension " << r.interpolation_kernel_dim << ", recovered F5: "
      << (r.interpolation_matches ? "yes" : "no") << "\nRes_x6(q, c) = l6 F5: " << (r.resultant_matches ? "yes" : "no")
      << "\nX23 map: " << r.ci23_map.in_arity() << " parameters, " << r.ci23_map.size() << " nodes\noutcome: Success\n";
  return kSuccess;
}

}  // namespace

std::vector<std::string> replay_report(const json& report, bool deep) {
  std::vector<std::string> problems;
  if (!report.is_object() || !report.contains("certificates") || !report.contains("outcome")) {
    problems.push_back("not a report");
    return problems;
  }
  std::map<std::string, std::size_t> kinds;
  for (const auto& c : report["certificates"]) {
    const ReplayResult r = replay(c, deep);
    if (!r.ok) problems.push_back(r.kind + ": " + r.reason);
    ++kinds[r.kind];
  }
  const std::string outcome = report["outcome"].is_string() ? report["outcome"].get<std::string>() : "";
  const std::string command = report.value("command", "");
  if (outcome == "Success") {
    if (report["certificates"].empty()) problems.push_back("success claimed without certificates");
    if (command == "certify" && (kinds["SmoothModP"] < 1 || kinds["Positivity"] < 1))
      problems.push_back("certify success needs smoothness and positivity certificates");
    if ((command == "parametrize" || command == "verify") && (kinds["OnVariety"] < 1 || kinds["Dominance"] < 1))
      problems.push_back("map success needs on-variety and dominance certificates");
  } else if (outcome == "Obstruction") {
    bool backed = false;
    for (const auto& c : report["certificates"])
      if (c.value("kind", "") == "QuadricSystem" && c["body"].value("infeasible", false)) {
        backed = true;
        if (!report.contains("obstruction") ||
            report["obstruction"].value("polynomial", "") != c["body"]["obstruction"].value("text", ""))
          problems.push_back("obstruction polynomial differs from its certificate");
      }
    if (!backed) problems.push_back("obstruction claimed without an infeasible quadric-system certificate");
  } else if (outcome != "Inconclusive" && outcome != "Error") {
    problems.push_back("unknown outcome");
  }
  return problems;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unirationality constructions for quartics containing a double quadric"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "seed for every random choice")->capture_default_str();
  app.add_option("--jobs", g.jobs, "worker threads for primes and trials")->capture_default_str();

  BuildExampleArgs be;
  auto* build = app.add_subcommand("build-example", "write the real quartic example in P^n")->fallthrough();
  build->add_option("--n", be.n, "ambient dimension (>= 8)")->required();
  build->add_option("--epsilon", be.epsilon, "perturbation scale (rational)")->capture_default_str();
  build->add_option("--extra-terms", be.extra_terms,
                    "reduced configuration: diagonal cubes plus this many random monomials per cubic");
  build->add_option("--out", be.out, "instance file")->required();

  CertifyArgs ca;
  auto* cert = app.add_subcommand("certify", "smoothness mod p and positivity on a hyperplane")->fallthrough();
  cert->add_option("--instance", ca.instance, "instance file")->required();
  cert->add_option("--prime", ca.primes, "prime for the smoothness check (repeatable)");
  cert->add_option("--gamma-chart", ca.gamma, "hyperplane coordinate, e.g. x4");
  cert->add_option("--report", ca.report, "report file");
  cert->add_option("--ceiling", ca.ceiling, "Groebner degree ceiling")->capture_default_str();
  cert->add_option("--budget", ca.budget, "seconds per Groebner run (0: none)")->capture_default_str();

  ParametrizeArgs pa;
  auto* param = app.add_subcommand("parametrize", "rational map onto the quartic")->fallthrough();
  param->add_option("--instance", pa.instance, "instance file")->required();
  param->add_option("--conic", pa.conic, "conic spec: circle or zero=i,j;point=a,b,c,d,e")->capture_default_str();
  param->add_option("--out", pa.out, "SLP file")->required();
  param->add_option("--report", pa.report, "report file");

  std::string v_slp, v_inst, v_report;
  auto* verify = app.add_subcommand("verify", "re-certify a stored map from scratch")->fallthrough();
  verify->add_option("--slp", v_slp, "SLP file")->required();
  verify->add_option("--instance", v_inst, "instance file")->required();
  verify->add_option("--report", v_report, "report file");

  std::string r_path;
  bool r_deep = false;
  auto* rep = app.add_subcommand("replay", "re-check the certificates stored in a report")->fallthrough();
  rep->add_option("--report", r_path, "report file")->required();
  rep->add_flag("--deep", r_deep, "also rerun the Groebner and interpolation steps");

  ExperimentArgs ea;
  auto* exp = app.add_subcommand("experiment", "statistical experiments")->fallthrough();
  exp->require_subcommand(1);
  auto* lemma = exp->add_subcommand("lemma-singdim", "singular-locus dimension of hypersurfaces through a fixed one")
                    ->fallthrough();
  lemma->add_option("--trials", ea.trials, "number of random hypersurfaces")->capture_default_str();
  lemma->add_option("--k", ea.k, "number of added variables")->capture_default_str();
  lemma->add_option("--prime", ea.prime, "characteristic")->capture_default_str();
  lemma->add_option("--report", ea.report, "report file");

  ReverseArgs ra;
  auto* rev = app.add_subcommand("reverse-build", "build a quartic in P^5 from a cone section")->fallthrough();
  rev->add_option("--out-instance", ra.out_instance, "quartic instance file");
  rev->add_option("--out-x23", ra.out_x23, "quadric, cubic and map file");
  rev->add_option("--report", ra.report, "report file");
  rev->add_option("--samples", ra.samples, "interpolation points")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*build) return cmd_build_example(be, g, out, err);
    if (*cert) return cmd_certify(ca, g, out, err);
    if (*param) return cmd_parametrize(pa, g, out, err);
    if (*verify) return cmd_verify(v_slp, v_inst, v_report, g, out);
    if (*rep) return cmd_replay(r_path, r_deep, out);
    if (*lemma) return cmd_experiment(ea, g, out);
    if (*rev) return cmd_reverse_build(ra, g, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kCertificateFailure;
  }
  return kUsage;
}

}  // namespace unirat::cli
