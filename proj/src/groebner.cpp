#include "unirat/groebner.hpp"

#include <algorithm>
#include <chrono>
#include <queue>
#include <sstream>
#include <unordered_set>

#include "unirat/errors.hpp"

namespace unirat {

namespace {

using u128 = unsigned __int128;
constexpr std::size_t kMaxVars = 16;

u128 guard_mask() {
  u128 h = 0;
  for (std::size_t i = 0; i < kMaxVars; ++i) h |= u128(0x80) << (8 * i);
  return h;
}
const u128 kGuard = guard_mask();

// Exponent of variable i lives in byte i, so for equal degree the grevlex
// larger monomial is the one with the numerically smaller packed value.
struct Mono {
  u128 packed = 0;
  std::uint32_t deg = 0;

  unsigned exp(std::size_t i) const { return unsigned((packed >> (8 * i)) & 0xff); }
  std::uint16_t support() const {
    std::uint16_t s = 0;
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (exp(i)) s |= std::uint16_t(1u << i);
    return s;
  }
};

inline bool operator==(const Mono& a, const Mono& b) { return a.packed == b.packed; }

inline bool greater(const Mono& a, const Mono& b) {
  if (a.deg != b.deg) return a.deg > b.deg;
  return a.packed < b.packed;
}

inline Mono mul(const Mono& a, const Mono& b) {
  Mono r{a.packed + b.packed, a.deg + b.deg};
  if (r.packed & kGuard) fail(ErrorKind::DegreeCeilingExceeded, "exponent exceeds 127");
  return r;
}

inline bool divides(const Mono& a, const Mono& b) {
  return (((b.packed | kGuard) - a.packed) & kGuard) == kGuard;
}

inline Mono div(const Mono& b, const Mono& a) { return Mono{b.packed - a.packed, b.deg - a.deg}; }

Mono lcm(const Mono& a, const Mono& b) {
  Mono r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    unsigned e = std::max(a.exp(i), b.exp(i));
    r.packed |= u128(e) << (8 * i);
    r.deg += e;
  }
  return r;
}

inline bool coprime(const Mono& a, const Mono& b) { return (a.support() & b.support()) == 0; }

struct Term {
  Mono m;
  std::uint32_t c;
};
using Poly = std::vector<Term>;  // grevlex descending, nonzero coefficients

class Field {
 public:
  explicit Field(std::uint64_t p) : p_(p) {}
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return std::uint32_t(std::uint64_t(a) * b % p_); }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    std::uint64_t s = std::uint64_t(a) + b;
    return std::uint32_t(s >= p_ ? s - p_ : s);
  }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : std::uint32_t(p_ - a); }
  std::uint32_t inv(std::uint32_t a) const {
    std::uint64_t base = a, acc = 1, e = p_ - 2;
    while (e) {
      if (e & 1) acc = acc * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return std::uint32_t(acc);
  }
  std::uint64_t p() const { return p_; }

 private:
  std::uint64_t p_;
};

struct Reducer {
  const Poly* poly;
  Mono lead;
  std::uint16_t support;
};

// Sum of scaled, shifted streams of terms, consumed in grevlex order and fully
// reduced against `reducers`.
Poly reduce_streams(const Field& F, std::vector<std::tuple<const Poly*, std::size_t, Mono, std::uint32_t>> init,
                    const std::vector<Reducer>& reducers, bool full = true) {
  struct Stream {
    const Poly* poly;
    std::size_t next;
    Mono mult;
    std::uint32_t coef;
  };
  struct Entry {
    Mono m;
    std::uint32_t stream;
  };
  auto cmp = [](const Entry& a, const Entry& b) { return greater(b.m, a.m); };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
  std::vector<Stream> streams;
  auto push_next = [&](std::uint32_t s) {
    Stream& st = streams[s];
    if (st.next < st.poly->size()) {
      heap.push({mul((*st.poly)[st.next].m, st.mult), s});
    }
  };
  for (auto& [poly, start, mult, coef] : init) {
    if (coef == 0) continue;
    streams.push_back({poly, start, mult, coef});
    push_next(std::uint32_t(streams.size() - 1));
  }

  Poly out;
  while (!heap.empty()) {
    Mono cur = heap.top().m;
    std::uint32_t sum = 0;
    while (!heap.empty() && heap.top().m == cur) {
      std::uint32_t s = heap.top().stream;
      heap.pop();
      Stream& st = streams[s];
      sum = F.add(sum, F.mul(st.coef, (*st.poly)[st.next].c));
      ++st.next;
      push_next(s);
    }
    if (sum == 0) continue;
    if (!full && !out.empty()) {
      out.push_back({cur, sum});
      continue;
    }
    const std::uint16_t sup = cur.support();
    const Reducer* red = nullptr;
    for (const auto& r : reducers) {
      if ((r.support & ~sup) != 0) continue;
      if (divides(r.lead, cur)) {
        red = &r;
        break;
      }
    }
    if (!red) {
      out.push_back({cur, sum});
      continue;
    }
    std::uint32_t lc = (*red->poly)[0].c;
    std::uint32_t coef = F.neg(lc == 1 ? sum : F.mul(sum, F.inv(lc)));
    streams.push_back({red->poly, 1, div(cur, red->lead), coef});
    push_next(std::uint32_t(streams.size() - 1));
  }
  return out;
}

void make_monic(const Field& F, Poly& p) {
  if (p.empty() || p[0].c == 1) return;
  std::uint32_t inv = F.inv(p[0].c);
  for (auto& t : p) t.c = F.mul(t.c, inv);
}

Poly to_internal(const MPoly<ModP>& f, std::uint64_t p) {
  if (f.nvars() > kMaxVars) fail(ErrorKind::InvalidArgument, "groebner engine supports at most 16 variables");
  Poly out;
  out.reserve(f.size());
  for (const auto& [m, c] : f.terms()) {
    if (c.modulus() != p && c.modulus() != 0) fail(ErrorKind::InvalidArgument, "generators over different primes");
    Mono mm;
    for (std::size_t i = 0; i < m.nvars(); ++i) {
      if (m[i] > 127) fail(ErrorKind::DegreeCeilingExceeded, "exponent exceeds 127");
      mm.packed |= u128(m[i]) << (8 * i);
    }
    mm.deg = m.degree();
    out.push_back({mm, std::uint32_t(c.residue())});
  }
  return out;
}

MPoly<ModP> to_public(const Poly& f, std::size_t nvars, std::uint64_t p) {
  MPoly<ModP> out(nvars);
  for (const auto& t : f) {
    std::vector<Monomial::Exp> e(nvars);
    for (std::size_t i = 0; i < nvars; ++i) e[i] = Monomial::Exp(t.m.exp(i));
    out.add_term(Monomial(std::move(e)), ModP(t.c, p, true));
  }
  return out;
}

std::uint64_t prime_of(const std::vector<MPoly<ModP>>& gens) {
  std::uint64_t p = 0;
  for (const auto& g : gens)
    for (const auto& [m, c] : g.terms()) {
      if (c.modulus() == 0) continue;
      if (p != 0 && c.modulus() != p) fail(ErrorKind::InvalidArgument, "generators over different primes");
      p = c.modulus();
    }
  if (p == 0) p = ModP::peek_modulus();
  if (p == 0) fail(ErrorKind::BadPrime, "cannot determine the prime of an all-zero generator list");
  if (p >= (std::uint64_t{1} << 31)) fail(ErrorKind::BadPrime, "groebner engine needs p < 2^31");
  return p;
}

struct MonoHash {
  std::size_t operator()(u128 v) const {
    std::uint64_t lo = std::uint64_t(v), hi = std::uint64_t(v >> 64);
    return std::size_t((lo ^ (hi * 0x9E3779B97F4A7C15ull)) * 0xBF58476D1CE4E5B9ull);
  }
};

bool homogeneous(const Poly& f) {
  for (const auto& t : f)
    if (t.m.deg != f[0].m.deg) return false;
  return true;
}

struct Element {
  Poly poly;
  unsigned sugar;
  bool active;
};

struct Pair {
  std::size_t i, j;
  Mono lcm;
  unsigned sugar;
};

class Engine {
 public:
  Engine(std::uint64_t p, std::size_t nvars, const GroebnerOptions& opt) : F_(p), nvars_(nvars), opt_(opt) {
    std_.insert(0);
  }

  // Enables the Hilbert function shortcut; callers check homogeneity.
  void track_standard_monomials() { track_ = !opt_.hilbert_function.empty(); }

  bool complete() const { return complete_; }

  void add_generator(Poly f) {
    if (f.empty()) return;
    unsigned sugar = 0;
    for (const auto& t : f) sugar = std::max<unsigned>(sugar, t.m.deg);
    Poly h = reduce_streams(F_, {{&f, 0, Mono{}, 1}}, reducers());
    if (h.empty()) return;
    make_monic(F_, h);
    update(std::move(h), sugar);
  }

  void run() {
    auto start = std::chrono::steady_clock::now();
    while (!pairs_.empty()) {
      if (opt_.stop_at_pure_powers && has_all_pure_powers()) {
        complete_ = false;
        break;
      }
      auto best = std::min_element(pairs_.begin(), pairs_.end(), [](const Pair& a, const Pair& b) {
        if (a.sugar != b.sugar) return a.sugar < b.sugar;
        return greater(b.lcm, a.lcm);
      });
      Pair pr = *best;
      *best = pairs_.back();
      pairs_.pop_back();
      ++stats_.pairs_considered;
      if (pr.sugar > opt_.degree_ceiling)
        fail(ErrorKind::DegreeCeilingExceeded,
             "S-pair of degree " + std::to_string(pr.sugar) + " exceeds ceiling " + std::to_string(opt_.degree_ceiling));
      stats_.max_degree = std::max(stats_.max_degree, pr.sugar);
      if (track_) {
        advance_standard(pr.sugar);
        std::uint64_t expected = pr.sugar < opt_.hilbert_function.size() ? opt_.hilbert_function[pr.sugar] : 0;
        if (std_.size() == expected) {
          ++stats_.pairs_skipped;
          continue;
        }
      }
      if (opt_.max_seconds > 0 && (stats_.pairs_considered & 63) == 0) {
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (s > opt_.max_seconds) fail(ErrorKind::BudgetExceeded, "wall-clock budget exhausted");
      }
      const Poly& a = elems_[pr.i].poly;
      const Poly& b = elems_[pr.j].poly;
      Mono ma = div(pr.lcm, a[0].m), mb = div(pr.lcm, b[0].m);
      Poly h = reduce_streams(F_, {{&a, 1, ma, 1}, {&b, 1, mb, F_.neg(1)}}, reducers());
      ++stats_.pairs_reduced;
      if (h.empty()) {
        ++stats_.zero_reductions;
        continue;
      }
      make_monic(F_, h);
      update(std::move(h), pr.sugar);
    }
    stats_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  // Minimal, inter-reduced basis sorted by increasing leading monomial. After
  // an early stop the active elements are returned as they are.
  std::vector<Poly> reduced_basis() const {
    std::vector<const Poly*> act;
    for (const auto& e : elems_)
      if (e.active) act.push_back(&e.poly);
    std::vector<Poly> out;
    if (!complete_) {
      for (const Poly* g : act) out.push_back(*g);
      std::sort(out.begin(), out.end(), [](const Poly& a, const Poly& b) { return greater(b[0].m, a[0].m); });
      return out;
    }
    for (std::size_t k = 0; k < act.size(); ++k) {
      std::vector<Reducer> others;
      for (std::size_t l = 0; l < act.size(); ++l)
        if (l != k) others.push_back({act[l], (*act[l])[0].m, (*act[l])[0].m.support()});
      Poly tail = reduce_streams(F_, {{act[k], 1, Mono{}, 1}}, others);
      Poly g;
      g.push_back((*act[k])[0]);
      g.insert(g.end(), tail.begin(), tail.end());
      out.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end(), [](const Poly& a, const Poly& b) { return greater(b[0].m, a[0].m); });
    return out;
  }

  const GroebnerStats& stats() const { return stats_; }

 private:
  std::vector<Reducer> reducers() const {
    std::vector<Reducer> r;
    for (const auto& e : elems_)
      if (e.active) r.push_back({&e.poly, e.poly[0].m, e.poly[0].m.support()});
    // Shortest reducer first keeps the number of live streams down.
    std::stable_sort(r.begin(), r.end(), [](const Reducer& a, const Reducer& b) { return a.poly->size() < b.poly->size(); });
    return r;
  }

  bool has_all_pure_powers() const { return pure_mask_ == (std::uint32_t(1) << nvars_) - 1; }

  // Moves the standard monomial set up to degree d. Standard monomials of the
  // next degree are the products s * x_i all of whose variable-quotients are
  // standard and which no leading monomial of that degree divides.
  void advance_standard(unsigned d) {
    while (std_deg_ < d) {
      const unsigned nd = std_deg_ + 1;
      std::vector<Mono> leads;
      for (const auto& e : elems_)
        if (e.poly[0].m.deg == nd) leads.push_back(e.poly[0].m);
      std::unordered_set<u128, MonoHash> next;
      for (u128 s : std_) {
        for (std::size_t i = 0; i < nvars_; ++i) {
          Mono m{s + (u128(1) << (8 * i)), nd};
          if (next.count(m.packed)) continue;
          bool ok = true;
          for (std::size_t j = 0; j < nvars_ && ok; ++j)
            if (m.exp(j) && !std_.count(m.packed - (u128(1) << (8 * j)))) ok = false;
          for (std::size_t k = 0; k < leads.size() && ok; ++k)
            if (divides(leads[k], m)) ok = false;
          if (ok) next.insert(m.packed);
        }
      }
      std_ = std::move(next);
      std_deg_ = nd;
    }
  }

  // Gebauer-Moeller update.
  void update(Poly h, unsigned sugar) {
    const Mono lh = h[0].m;
    if (track_ && lh.deg == std_deg_) std_.erase(lh.packed);
    {
      std::size_t nz = 0, var = 0;
      for (std::size_t i = 0; i < nvars_; ++i)
        if (lh.exp(i)) {
          ++nz;
          var = i;
        }
      if (nz == 1) pure_mask_ |= std::uint32_t(1) << var;
    }
    const std::size_t hi = elems_.size();
    elems_.push_back({std::move(h), sugar, true});

    struct Cand {
      std::size_t g;
      Mono lcm;
      bool coprime;
      bool keep;
    };
    std::vector<Cand> cand;
    for (std::size_t g = 0; g < hi; ++g) {
      if (!elems_[g].active) continue;
      const Mono& lg = elems_[g].poly[0].m;
      cand.push_back({g, lcm(lh, lg), coprime(lh, lg), true});
    }
    // Chain criterion among the new pairs: drop (h,g1) when another new pair's
    // lcm properly divides it, or equals it and comes first (keeping coprime
    // ones as representatives).
    for (std::size_t a = 0; a < cand.size(); ++a) {
      if (cand[a].coprime) continue;
      for (std::size_t b = 0; b < cand.size(); ++b) {
        if (a == b || !cand[b].keep) continue;
        if (!divides(cand[b].lcm, cand[a].lcm)) continue;
        bool equal = cand[b].lcm == cand[a].lcm;
        if (!equal || cand[b].coprime || b < a) {
          cand[a].keep = false;
          break;
        }
      }
    }
    // Old pairs made redundant by h.
    std::vector<Pair> kept;
    kept.reserve(pairs_.size());
    for (const auto& pr : pairs_) {
      if (divides(lh, pr.lcm)) {
        Mono l1 = lcm(elems_[pr.i].poly[0].m, lh), l2 = lcm(elems_[pr.j].poly[0].m, lh);
        if (!(l1 == pr.lcm) && !(l2 == pr.lcm)) continue;
      }
      kept.push_back(pr);
    }
    pairs_ = std::move(kept);
    for (const auto& c : cand) {
      if (!c.keep || c.coprime) continue;
      const Element& g = elems_[c.g];
      unsigned s = std::max(sugar + (c.lcm.deg - lh.deg), g.sugar + (c.lcm.deg - g.poly[0].m.deg));
      pairs_.push_back({c.g, hi, c.lcm, s});
    }
    for (std::size_t g = 0; g < hi; ++g)
      if (elems_[g].active && divides(lh, elems_[g].poly[0].m)) elems_[g].active = false;
  }

  Field F_;
  std::size_t nvars_;
  GroebnerOptions opt_;
  bool track_ = false;
  bool complete_ = true;
  unsigned std_deg_ = 0;
  std::unordered_set<u128, MonoHash> std_;
  std::uint32_t pure_mask_ = 0;
  std::vector<Element> elems_;
  std::vector<Pair> pairs_;
  GroebnerStats stats_;
};

std::vector<Poly> internal_basis(const GroebnerBasis& gb) {
  std::vector<Poly> out;
  for (const auto& g : gb.generators) out.push_back(to_internal(g, gb.prime));
  return out;
}

std::vector<Reducer> reducers_of(const std::vector<Poly>& basis) {
  std::vector<Reducer> r;
  for (const auto& g : basis)
    if (!g.empty()) r.push_back({&g, g[0].m, g[0].m.support()});
  return r;
}

}  // namespace

GroebnerBasis buchberger(const std::vector<MPoly<ModP>>& gens, const GroebnerOptions& options) {
  GroebnerBasis gb;
  gb.nvars = gens.empty() ? 0 : gens.front().nvars();
  for (const auto& g : gens)
    if (g.nvars() != gb.nvars) fail(ErrorKind::InvalidArgument, "generators with different variable counts");
  gb.prime = prime_of(gens);
  Engine engine(gb.prime, gb.nvars, options);
  std::vector<Poly> inputs;
  bool homog = true;
  for (const auto& g : gens) {
    inputs.push_back(to_internal(g, gb.prime));
    if (!inputs.back().empty() && !homogeneous(inputs.back())) homog = false;
  }
  if (homog) engine.track_standard_monomials();
  std::sort(inputs.begin(), inputs.end(), [](const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return !a.empty() && b.empty();
    return greater(b[0].m, a[0].m);
  });
  for (auto& f : inputs) engine.add_generator(std::move(f));
  engine.run();
  for (const auto& g : engine.reduced_basis()) gb.generators.push_back(to_public(g, gb.nvars, gb.prime));
  gb.stats = engine.stats();
  gb.complete = engine.complete();
  return gb;
}

std::vector<std::uint64_t> complete_intersection_hilbert(const std::vector<unsigned>& degrees, std::size_t nvars,
                                                         std::size_t max_degree) {
  if (degrees.size() > nvars) fail(ErrorKind::InvalidArgument, "more generators than variables");
  // Series arithmetic in signed 128-bit integers, truncated at max_degree.
  std::vector<__int128> s(max_degree + 1, 0);
  s[0] = 1;
  for (unsigned d : degrees)
    for (std::size_t k = max_degree + 1; k-- > d;) s[k] -= s[k - d];
  for (std::size_t v = 0; v < nvars; ++v)
    for (std::size_t k = 1; k <= max_degree; ++k) s[k] += s[k - 1];
  std::vector<std::uint64_t> out;
  for (auto x : s) out.push_back(x < 0 ? 0 : std::uint64_t(x));
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

MPoly<ModP> normal_form(const MPoly<ModP>& f, const GroebnerBasis& gb) {
  Field F(gb.prime);
  auto basis = internal_basis(gb);
  Poly pf = to_internal(f, gb.prime);
  Poly r = reduce_streams(F, {{&pf, 0, Mono{}, 1}}, reducers_of(basis));
  return to_public(r, f.nvars(), gb.prime);
}

bool is_groebner_basis(const GroebnerBasis& gb, std::size_t max_pairs) {
  Field F(gb.prime);
  auto basis = internal_basis(gb);
  auto reds = reducers_of(basis);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) pairs.emplace_back(i, j);
  std::size_t stride = 1;
  if (max_pairs > 0 && pairs.size() > max_pairs) stride = pairs.size() / max_pairs;
  for (std::size_t k = 0; k < pairs.size(); k += stride) {
    auto [i, j] = pairs[k];
    const Poly& a = basis[i];
    const Poly& b = basis[j];
    if (a.empty() || b.empty()) continue;
    Mono l = lcm(a[0].m, b[0].m);
    std::uint32_t ca = F.inv(a[0].c), cb = F.neg(F.inv(b[0].c));
    Poly h = reduce_streams(F, {{&a, 1, div(l, a[0].m), ca}, {&b, 1, div(l, b[0].m), cb}}, reds);
    if (!h.empty()) return false;
  }
  return true;
}

std::vector<unsigned> pure_power_degrees(const GroebnerBasis& gb, std::size_t nvars) {
  std::vector<unsigned> deg(nvars, 0);
  for (const auto& g : gb.generators) {
    if (g.is_zero()) continue;
    const Monomial& lm = g.leading_monomial();
    std::size_t nz = 0, var = 0;
    for (std::size_t i = 0; i < lm.nvars(); ++i)
      if (lm[i]) {
        ++nz;
        var = i;
      }
    if (nz == 0) {
      std::fill(deg.begin(), deg.end(), 0u);
      for (auto& d : deg) d = 0;
      return std::vector<unsigned>(nvars, 0u);  // unit ideal: handled by callers via dimension
    }
    if (nz == 1 && var < nvars && (deg[var] == 0 || lm[var] < deg[var])) deg[var] = lm[var];
  }
  return deg;
}

bool projective_empty(const GroebnerBasis& gb, std::size_t nvars) {
  for (const auto& g : gb.generators)
    if (!g.is_zero() && g.leading_monomial().degree() == 0) return true;
  auto deg = pure_power_degrees(gb, nvars);
  return std::all_of(deg.begin(), deg.end(), [](unsigned d) { return d > 0; });
}

int homogeneous_dimension(const GroebnerBasis& gb, std::size_t nvars) {
  if (nvars > 20) fail(ErrorKind::InvalidArgument, "dimension search limited to 20 variables");
  std::vector<std::uint32_t> supports;
  for (const auto& g : gb.generators) {
    if (g.is_zero()) continue;
    const Monomial& lm = g.leading_monomial();
    std::uint32_t s = 0;
    for (std::size_t i = 0; i < lm.nvars(); ++i)
      if (lm[i]) s |= 1u << i;
    if (s == 0) return -1;
    supports.push_back(s);
  }
  int best = 0;
  const std::uint32_t full = nvars == 32 ? ~0u : ((1u << nvars) - 1);
  for (std::uint32_t u = 0; u <= full; ++u) {
    int size = __builtin_popcount(u);
    if (size <= best) continue;
    bool ok = std::none_of(supports.begin(), supports.end(), [u](std::uint32_t s) { return (s & ~u) == 0; });
    if (ok) best = size;
    if (u == full) break;
  }
  return best;
}

int projective_dimension(const GroebnerBasis& gb, std::size_t nvars) {
  int d = homogeneous_dimension(gb, nvars);
  return d <= 0 ? -1 : d - 1;
}

std::string basis_fingerprint_text(const GroebnerBasis& gb) {
  std::ostringstream os;
  os << "p=" << gb.prime << ";n=" << gb.nvars;
  for (const auto& g : gb.generators) {
    os << ";";
    for (const auto& [m, c] : g.terms()) {
      os << c.residue() << "[";
      for (std::size_t i = 0; i < m.nvars(); ++i) os << (i ? "," : "") << m[i];
      os << "]";
    }
  }
  return os.str();
}

}  // namespace unirat
