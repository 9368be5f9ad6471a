#include "gltower/finite/model.hpp"

#include <map>
#include <random>
#include <set>

#include "gltower/errors.hpp"

namespace gltower::finite {

namespace {

std::uint32_t coeff_mod(const Rational& c, std::uint32_t q) {
  if (c.get_den() != 1) throw DomainError("AF coefficient " + c.get_str() + " is not an integer");
  const long v = c.get_num().get_si() % static_cast<long>(q);
  return static_cast<std::uint32_t>(v < 0 ? v + static_cast<long>(q) : v);
}

bool is_identity(const FqMat& m) { return m == FqMat::identity(m.dim(), m.modulus()); }

std::vector<Pattern> single_entries(int row_begin, int row_end, int col_begin, int col_end) {
  std::vector<Pattern> out;
  for (int r = row_begin; r < row_end; ++r)
    for (int c = col_begin; c < col_end; ++c) out.push_back({{r, c}});
  return out;
}

std::vector<Pattern> later_radicals(const Tower& t) {
  std::vector<Pattern> out;
  for (std::size_t i = 1; i < t.steps.size(); ++i)
    out.insert(out.end(), t.steps[i].v_basis.begin(), t.steps[i].v_basis.end());
  return out;
}

// All n2 x n1 matrices S over F_q, row-major, as pairing terms on the Hom
// block: S(v) = sum_{a,b} S[b][a] v[a][n1 + b].
template <class Visit>
void for_each_v1_functional(int n1, int n2, std::uint32_t q, Visit visit) {
  const std::size_t len = static_cast<std::size_t>(n1 * n2);
  std::vector<std::uint32_t> s(len, 0);
  for (;;) {
    std::vector<std::vector<std::uint32_t>> rows(static_cast<std::size_t>(n2), std::vector<std::uint32_t>(n1));
    std::vector<std::pair<Position, std::uint32_t>> terms;
    for (int b = 0; b < n2; ++b)
      for (int a = 0; a < n1; ++a) {
        const std::uint32_t v = s[static_cast<std::size_t>(b * n1 + a)];
        rows[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = v;
        if (v != 0) terms.push_back({{a, n1 + b}, v});
      }
    visit(rank_mod(rows, q), terms);
    std::size_t d = 0;
    while (d < len && ++s[d] == q) s[d++] = 0;
    if (d == len) break;
  }
}

std::string describe(const AdelePoint& g) { return "(" + g.x.to_string() + ", " + g.y.to_string() + ")"; }

}  // namespace

ToyAdeleRing::ToyAdeleRing(std::uint32_t q, int chi) : q_(q), chi_(chi) {
  if (!is_prime(q)) throw DomainError("q = " + std::to_string(q) + " is not prime");
  if (chi < 0 || chi > 1) throw DomainError("chi index must be 0 (trivial) or 1 (quadratic)");
  if (chi == 1 && q == 2) throw DomainError("F_2^* has no quadratic character");
}

Value ToyAdeleRing::psi(std::uint32_t x, std::uint32_t y) const {
  return zeta_power(static_cast<std::int64_t>(x) - static_cast<std::int64_t>(y));
}

int ToyAdeleRing::chi_value(std::uint32_t x) const {
  if (x % q_ == 0) throw DomainError("chi evaluated at 0");
  if (chi_ == 0) return 1;
  std::uint64_t r = 1;
  for (std::uint32_t e = 0; e < (q_ - 1) / 2; ++e) r = r * x % q_;
  return r == 1 ? 1 : -1;
}

int ToyAdeleRing::eta(std::uint32_t x, std::uint32_t y) const {
  return chi_value(static_cast<std::uint32_t>(static_cast<std::uint64_t>(x) * mod_inverse(y, q_) % q_));
}

AdelePoint operator*(const AdelePoint& a, const AdelePoint& b) { return {a.x * b.x, a.y * b.y}; }

AutFunction::AutFunction(std::shared_ptr<const FiniteGroup> base, std::vector<Value> values)
    : base_(std::move(base)), values_(std::move(values)) {
  if (values_.size() != base_->size()) throw DimensionMismatch("function table does not match its group");
}

Value AutFunction::operator()(const AdelePoint& g) const { return reduced(g.x.inverse() * g.y); }

AutFunction random_automorphic(std::shared_ptr<const FiniteGroup> base, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const std::uint32_t q = base->modulus();
  std::vector<Value> values;
  values.reserve(base->size());
  for (std::size_t i = 0; i < base->size(); ++i) {
    std::vector<Rational> c(q - 1);
    for (auto& x : c) x = static_cast<long>(gen() % 5) - 2;
    values.emplace_back(q, std::move(c));
  }
  return AutFunction(std::move(base), std::move(values));
}

AutFunction constant_function(std::shared_ptr<const FiniteGroup> base, const Value& c) {
  std::vector<Value> values(base->size(), c);
  return AutFunction(std::move(base), std::move(values));
}

AutFunction central_projector(const AutFunction& phi) {
  const FiniteGroup& b = phi.base();
  const FiniteGroup z = scalar_group(b.dim(), b.modulus());
  std::vector<Value> out;
  out.reserve(b.size());
  const Rational scale(1, static_cast<unsigned long>(z.size()));
  for (const auto& h : b.elements()) {
    Value acc(b.modulus());
    for (const auto& s : z.elements()) acc += phi.reduced(s * h);
    out.push_back(acc.scaled(scale));
  }
  return AutFunction(phi.base_ptr(), std::move(out));
}

bool is_central_invariant(const AutFunction& phi) {
  const FiniteGroup& b = phi.base();
  const FiniteGroup z = scalar_group(b.dim(), b.modulus());
  for (const auto& h : b.elements())
    for (const auto& s : z.elements())
      if (!(phi.reduced(s * h) == phi.reduced(h))) return false;
  return true;
}

std::uint32_t af_value(const Tower& t, const FqMat& n) {
  const std::uint32_t q = n.modulus();
  FqMat current = n;
  std::uint64_t acc = 0;
  for (const auto& st : t.steps) {
    FqMat l = current;
    std::set<Position> owned;
    for (const auto& p : st.v_basis)
      for (const auto& pos : p) {
        l.set(pos.row, pos.col, 0);
        owned.insert(pos);
      }
    const FqMat v = l.inverse() * current;
    for (int r = 0; r < n.dim(); ++r)
      for (int c = 0; c < n.dim(); ++c)
        if (!owned.contains({r, c}) && v(r, c) != (r == c ? 1u : 0u))
          throw ConstructionFailure("V_" + std::to_string(st.index) + " factor of " + n.to_string() + " leaves V_" +
                                    std::to_string(st.index));
    for (const auto& p : st.v_basis)
      for (const auto& pos : p)
        if (v(pos.row, pos.col) != v(p.front().row, p.front().col))
          throw ConstructionFailure("V_" + std::to_string(st.index) + " factor breaks a diagonal tie");
    for (const auto& term : st.f_restriction) acc += coeff_mod(term.coeff, q) * v(term.pos.row, term.pos.col);
    current = l;
  }
  if (!is_identity(current)) throw ConstructionFailure(n.to_string() + " is not in D_F");
  return static_cast<std::uint32_t>(acc % q);
}

CharacterDomain af_domain(const Tower& t, std::uint32_t q, EnumerationLimits limits) {
  const FiniteGroup d = unipotent_group("D_F", t.af.domain_basis, t.n(), q, limits);
  CharacterDomain out{"D_F", d.elements(), {}};
  out.f.reserve(d.size());
  for (const auto& n : d.elements()) out.f.push_back(af_value(t, n));
  return out;
}

CharacterDomain linear_character(const std::string& name, const std::vector<Pattern>& basis,
                                 const std::vector<std::pair<Position, std::uint32_t>>& terms, int n,
                                 std::uint32_t q) {
  const FiniteGroup g = unipotent_group(name, basis, n, q);
  for (const auto& a : g.elements())
    for (const auto& b : g.elements())
      if (!(a * b == b * a)) throw DomainError(name + " is not abelian");
  CharacterDomain out{name, g.elements(), {}};
  for (const auto& v : g.elements()) {
    std::uint64_t acc = 0;
    for (const auto& [pos, c] : terms) acc += static_cast<std::uint64_t>(c % q) * v(pos.row, pos.col);
    out.f.push_back(static_cast<std::uint32_t>(acc % q));
  }
  return out;
}

CharacterDomain negated(CharacterDomain d) {
  if (d.elements.empty()) return d;
  const std::uint32_t q = d.elements.front().modulus();
  for (auto& v : d.f) v = (q - v) % q;
  d.name = "-" + d.name;
  return d;
}

Value fourier_coefficient(const ToyAdeleRing& ring, const CharacterDomain& d, const AutFunction& phi,
                          const AdelePoint& g) {
  const std::uint32_t q = ring.q();
  const FqMat x_inv = g.x.inverse();
  // Group the terms by the power of zeta first; one rotation per bucket.
  std::vector<Value> buckets(q, Value(q));
  for (std::size_t i = 0; i < d.elements.size(); ++i) buckets[d.f[i]] += phi.reduced(x_inv * d.elements[i] * g.y);
  Value total(q);
  for (std::uint32_t k = 0; k < q; ++k) total += buckets[k].times_zeta(k);
  return total.scaled(Rational(1, static_cast<unsigned long>(d.elements.size())));
}

FiniteSetting make_setting(int n1, int n2, std::uint32_t q, FiniteLimits limits) {
  if (n1 + n2 > limits.max_n) {
    throw SizeLimit("finite model capped at n1 + n2 <= " + std::to_string(limits.max_n));
  }
  FiniteSetting s;
  s.n1 = n1;
  s.n2 = n2;
  s.q = q;
  s.tower = build_tower(n1, n2);
  const int n = n1 + n2;
  const auto& first = s.tower.steps.front();
  const auto& lim = limits.enumeration;

  s.p1 = std::make_shared<FiniteGroup>(units_of_span("P_1", first.p_lie_basis, n, q, lim));
  auto levi_basis = single_entries(0, n1, 0, n1);
  const auto lower = single_entries(n1, n, n1, n);
  levi_basis.insert(levi_basis.end(), lower.begin(), lower.end());
  s.levi = std::make_shared<FiniteGroup>(units_of_span("H", levi_basis, n, q, lim));
  s.center = std::make_shared<FiniteGroup>(scalar_group(n, q));
  s.v_rest = std::make_shared<FiniteGroup>(unipotent_group("V^1", later_radicals(s.tower), n, q, lim));
  s.zv = std::make_shared<FiniteGroup>(product_group("ZV^1", *s.center, *s.v_rest));
  s.p2 = std::make_shared<FiniteGroup>(units_of_span("P_2", s.tower.steps[1].p_lie_basis, n, q, lim));

  s.d_f = af_domain(s.tower, q, lim);
  std::vector<std::pair<Position, std::uint32_t>> f1;
  for (const auto& term : first.f_restriction) f1.push_back({term.pos, coeff_mod(term.coeff, q)});
  s.v1_f = linear_character("V_1", first.v_basis, f1, n, q);

  for_each_v1_functional(n1, n2, q, [&](int rank, const auto& terms) {
    if (rank == n2) s.open_orbit.push_back(linear_character("V_1", first.v_basis, terms, n, q));
  });

  s.sum_reps = coset_reps(*s.zv, *s.levi);
  s.orbit_reps = coset_reps(*s.p2, *s.levi);
  if (s.orbit_reps.size() != s.open_orbit.size()) {
    throw ConstructionFailure("P_2(E)\\H(E) has " + std::to_string(s.orbit_reps.size()) + " cosets but the open orbit has " +
                              std::to_string(s.open_orbit.size()) + " characters");
  }
  return s;
}

FiniteGroup brute_force_stabilizer(const FiniteSetting& s) {
  std::vector<FqMat> stab;
  for (const auto& h : s.levi->elements()) {
    const FqMat h_inv = h.inverse();
    bool fixes = true;
    for (std::size_t i = 0; i < s.v1_f.elements.size() && fixes; ++i) {
      const FqMat w = h_inv * s.v1_f.elements[i] * h;
      std::uint64_t acc = 0;
      for (const auto& term : s.tower.steps.front().f_restriction)
        acc += coeff_mod(term.coeff, s.q) * w(term.pos.row, term.pos.col);
      fixes = acc % s.q == s.v1_f.f[i];
    }
    if (fixes) stab.push_back(h);
  }
  return FiniteGroup("Stab(F|V_1)", s.n1 + s.n2, s.q, std::move(stab));
}

std::vector<CharacterDomain> all_v1_characters(const FiniteSetting& s) {
  std::vector<CharacterDomain> out;
  const int n = s.n1 + s.n2;
  for_each_v1_functional(s.n1, s.n2, s.q, [&](int, const auto& terms) {
    out.push_back(linear_character("V_1", s.tower.steps.front().v_basis, terms, n, s.q));
  });
  return out;
}

Value f_sum(const FiniteSetting& s, const AutFunction& phi, const AdelePoint& g) {
  const ToyAdeleRing ring(s.q);
  Value acc(s.q);
  for (const auto& gamma : s.sum_reps) acc += fourier_coefficient(ring, s.d_f, phi, diagonal(gamma) * g);
  return acc;
}

void check_f_sum_well_defined(const FiniteSetting& s, const AutFunction& phi, const AdelePoint& g) {
  const ToyAdeleRing ring(s.q);
  for (const auto& r : s.sum_reps) {
    const Value base = fourier_coefficient(ring, s.d_f, phi, diagonal(r) * g);
    for (const auto& z : s.zv->elements()) {
      if (!(fourier_coefficient(ring, s.d_f, phi, diagonal(z * r) * g) == base)) {
        throw WellDefinednessFailure("summand differs between representatives " + r.to_string() + " and " +
                                     (z * r).to_string() + " at g = " + describe(g));
      }
    }
  }
}

std::vector<AdelePoint> test_points(const FiniteGroup& b, std::size_t count, std::uint64_t seed,
                                    std::size_t exhaustive_up_to) {
  std::vector<AdelePoint> out;
  if (b.size() * b.size() <= exhaustive_up_to) {
    for (const auto& x : b.elements())
      for (const auto& y : b.elements()) out.push_back({x, y});
    return out;
  }
  const FqMat e = FqMat::identity(b.dim(), b.modulus());
  out.push_back({e, e});
  std::mt19937_64 gen(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& x = b[gen() % b.size()];
    const auto& y = b[gen() % b.size()];
    out.push_back({x, y});
  }
  return out;
}

FSumReport f_sum_checks(const FiniteSetting& s, const AutFunction& phi, std::size_t samples, std::uint64_t seed,
                        std::size_t exhaustive_up_to) {
  FSumReport rep;
  const FiniteGroup& b = *s.p1;
  const auto points = test_points(b, samples, seed, exhaustive_up_to);
  rep.points = points.size();
  rep.exhaustive = b.size() * b.size() <= exhaustive_up_to;

  for (const auto& g : points) {
    try {
      check_f_sum_well_defined(s, phi, g);
    } catch (const WellDefinednessFailure& e) {
      rep.well_defined = false;
      rep.diagnostic = e.what();
      return rep;
    }
  }

  if (rep.exhaustive) {
    // points enumerates B(A) as x-major pairs, so (x, y) sits at ix * |B| + iy.
    std::vector<Value> table;
    table.reserve(points.size());
    for (const auto& g : points) table.push_back(f_sum(s, phi, g));
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (const auto& gamma : b.elements()) {
        const AdelePoint t = diagonal(gamma) * points[i];
        const std::size_t j = b.index_of(t.x) * b.size() + b.index_of(t.y);
        ++rep.translations;
        if (!(table[j] == table[i])) {
          rep.invariant = false;
          rep.diagnostic = "f_sum(gamma g) != f_sum(g) for gamma = " + gamma.to_string() + ", g = " + describe(points[i]);
          return rep;
        }
      }
    }
    return rep;
  }

  std::mt19937_64 gen(seed ^ 0x5851f42d4c957f2dULL);
  for (const auto& g : points) {
    const Value base = f_sum(s, phi, g);
    for (std::size_t k = 0; k < samples; ++k) {
      const FqMat& gamma = b[gen() % b.size()];
      ++rep.translations;
      if (!(f_sum(s, phi, diagonal(gamma) * g) == base)) {
        rep.invariant = false;
        rep.diagnostic = "f_sum(gamma g) != f_sum(g) for gamma = " + gamma.to_string() + ", g = " + describe(g);
        return rep;
      }
    }
  }
  return rep;
}

Prop1Report prop1_orbit_identity(const FiniteSetting& s, const AutFunction& phi, const std::vector<AdelePoint>& points) {
  const ToyAdeleRing ring(s.q);
  Prop1Report rep;
  rep.characters = s.open_orbit.size();
  rep.cosets = s.orbit_reps.size();
  rep.lhs = Value(s.q);
  rep.rhs = Value(s.q);
  for (const auto& g : points) {
    Value lhs(s.q), rhs(s.q);
    for (const auto& chi : s.open_orbit) lhs += fourier_coefficient(ring, chi, phi, g);
    for (const auto& gamma : s.orbit_reps) rhs += fourier_coefficient(ring, s.v1_f, phi, diagonal(gamma) * g);
    ++rep.points;
    rep.lhs = lhs;
    rep.rhs = rhs;
    if (!(lhs == rhs)) {
      rep.holds = false;
      rep.witness = g;
      break;
    }
  }
  return rep;
}

bool fourier_inversion_holds(const FiniteSetting& s, const AutFunction& phi, const std::vector<AdelePoint>& points) {
  const ToyAdeleRing ring(s.q);
  const auto chars = all_v1_characters(s);
  for (const auto& g : points) {
    Value acc(s.q);
    for (const auto& chi : chars) acc += fourier_coefficient(ring, chi, phi, g);
    if (!(acc == phi(g))) return false;
  }
  return true;
}

Prop1Battery prop1_battery(const FiniteSetting& s, const std::vector<std::uint64_t>& seeds, Prop1Options opts) {
  Prop1Battery out;
  const FiniteGroup stab = brute_force_stabilizer(s);
  std::set<std::uint64_t> a, b;
  for (const auto& g : stab.elements()) a.insert(g.code());
  for (const auto& g : s.p2->elements()) b.insert(g.code());
  out.stabilizer_matches = a == b;

  out.pass = out.stabilizer_matches;
  for (std::uint64_t seed : seeds) {
    Prop1Run run;
    run.seed = seed;
    const AutFunction phi = random_automorphic(s.p1, seed);
    const auto points = test_points(*s.p1, opts.points, seed, opts.exhaustive_up_to);
    run.prop1 = prop1_orbit_identity(s, phi, points);
    run.fourier_inversion = fourier_inversion_holds(s, phi, points);
    run.f_sum = f_sum_checks(s, phi, opts.f_sum_samples, seed, opts.exhaustive_up_to);
    out.pass = out.pass && run.prop1.holds && run.fourier_inversion && run.f_sum.well_defined && run.f_sum.invariant;
    out.runs.push_back(std::move(run));
  }
  return out;
}

std::string to_string(AfSign s) { return s == AfSign::kNegated ? "negated" : "plus"; }

Tower reduced_tower(int n1, int n2, std::optional<Corner> corner) {
  const bool swap = n1 / n2 == 1;
  const int a = swap ? n2 : n1 - n2;
  const int b = swap ? n1 - n2 : n2;
  const Corner c = corner.value_or(swap ? Corner::kLowerRight : Corner::kUpperLeft);
  return build_tower(a, b, {.corner = c, .allow_equal_unit_pair = a == b});
}

std::vector<Corner> matching_corners(const FiniteSetting& s) {
  std::set<Position> v_block, f_block;
  for (std::size_t i = 1; i < s.tower.steps.size(); ++i) {
    for (const auto& p : s.tower.steps[i].v_basis)
      for (const auto& pos : p)
        if (pos.row < s.n1 && pos.col < s.n1) v_block.insert(pos);
    for (const auto& term : s.tower.steps[i].f_restriction)
      if (term.pos.row < s.n1 && term.pos.col < s.n1) f_block.insert(term.pos);
  }
  std::vector<Corner> out;
  for (Corner c : {Corner::kUpperLeft, Corner::kLowerRight}) {
    const Tower r = reduced_tower(s.n1, s.n2, c);
    std::set<Position> v, f;
    for (const auto& p : r.af.domain_basis) v.insert(p.begin(), p.end());
    for (const auto& term : r.af.support) f.insert(term.pos);
    if (v == v_block && f == f_block) out.push_back(c);
  }
  return out;
}

std::shared_ptr<const FiniteGroup> gl_block(const FiniteSetting& s) {
  return std::make_shared<FiniteGroup>(enumerate_gl(s.n1, s.q));
}

UnfoldReport unfolding_check(const FiniteSetting& s, const AutFunction& phi, const AutFunction& phi_prime,
                             UnfoldOptions opts, FiniteLimits limits) {
  if (s.n1 + s.n2 > limits.max_unfold_n) {
    throw SizeLimit("unfolding check capped at n1 + n2 <= " + std::to_string(limits.max_unfold_n));
  }
  for (const auto& u : s.v_rest->elements())
    for (int r = 0; r < s.n1 + s.n2; ++r)
      for (int c = 0; c < s.n1 + s.n2; ++c)
        if ((r >= s.n1 || c >= s.n1) && u(r, c) != (r == c ? 1u : 0u))
          throw DomainError("V^1 leaves the GL_n1 block; its action on g_1 is not defined");
  if (phi.base().name() != s.p1->name() || phi.base().size() != s.p1->size()) {
    throw DomainError("phi must live on P_1");
  }
  if (phi_prime.base().dim() != s.n1) throw DomainError("phi' must live on GL_n1");

  const ToyAdeleRing ring(s.q, opts.chi);
  const Tower reduced = reduced_tower(s.n1, s.n2, opts.corner);
  CharacterDomain d_prime = af_domain(reduced, s.q, limits.enumeration);
  if (opts.sign == AfSign::kNegated) d_prime = negated(std::move(d_prime));

  UnfoldReport rep;
  rep.reduced_n1 = reduced.n1;
  rep.reduced_n2 = reduced.n2;
  rep.corner = reduced.corner;
  rep.sign = opts.sign;

  auto eta_factor = [&](const AdelePoint& g) {
    const int a = ring.eta(g.x.block(0, s.n1).det(), g.y.block(0, s.n1).det());
    const int b = ring.eta(g.x.block(s.n1, s.n2).det(), g.y.block(s.n1, s.n2).det());
    // chi takes values +-1, so chi^-k = chi^k.
    const int sa = s.n2 % 2 == 0 ? 1 : a;
    const int sb = s.n1 % 2 == 0 ? 1 : b;
    return sa * sb;
  };
  auto lhs_integrand = [&](const AdelePoint& g) {
    const AdelePoint g1{g.x.block(0, s.n1), g.y.block(0, s.n1)};
    return (phi_prime(g1) * f_sum(s, phi, g)).scaled(Rational(eta_factor(g)));
  };
  std::map<std::pair<std::uint64_t, std::uint64_t>, Value> prime_cache;
  auto rhs_integrand = [&](const AdelePoint& g) {
    const AdelePoint g1{g.x.block(0, s.n1), g.y.block(0, s.n1)};
    const auto key = std::make_pair(g1.x.code(), g1.y.code());
    auto it = prime_cache.find(key);
    if (it == prime_cache.end()) it = prime_cache.emplace(key, fourier_coefficient(ring, d_prime, phi_prime, g1)).first;
    return (it->second * fourier_coefficient(ring, s.d_f, phi, g)).scaled(Rational(eta_factor(g)));
  };

  // Invariance spot checks on seeded sample points of H(A).
  const auto samples = test_points(*s.levi, opts.invariance_samples, 0x5eed);
  const std::size_t stride = std::max<std::size_t>(1, s.levi->size() / 8);
  for (const auto& g : samples) {
    const Value i0 = lhs_integrand(g);
    for (std::size_t h = 0; h < s.levi->size(); h += stride) {
      if (!(lhs_integrand(diagonal((*s.levi)[h]) * g) == i0)) {
        throw IntegrandNotInvariant("left integrand is not H(k)-invariant at " + describe(g));
      }
    }
    const Value r0 = rhs_integrand(g);
    for (const auto& u : s.v_rest->elements()) {
      const FqMat e = FqMat::identity(s.n1 + s.n2, s.q);
      if (!(rhs_integrand(AdelePoint{u, e} * g) == r0) || !(rhs_integrand(AdelePoint{e, u} * g) == r0)) {
        throw IntegrandNotInvariant("right integrand is not V^1(A)-invariant: u = " + u.to_string() + " at " +
                                    describe(g));
      }
    }
    for (const auto& z1 : s.center->elements())
      for (const auto& z2 : s.center->elements()) {
        if (!(lhs_integrand(AdelePoint{z1, z2} * g) == i0)) {
          throw IntegrandNotInvariant("left integrand is not Z(A)-invariant at " + describe(g));
        }
        if (!(rhs_integrand(AdelePoint{z1, z2} * g) == r0)) {
          throw IntegrandNotInvariant("right integrand is not Z(A)-invariant at " + describe(g));
        }
      }
  }

  const auto h_size = static_cast<unsigned long>(s.levi->size());
  const auto z_size = static_cast<unsigned long>(s.center->size());
  const auto v_size = static_cast<unsigned long>(s.v_rest->size());
  const FqMat e = FqMat::identity(s.n1 + s.n2, s.q);

  // H(k)Z(A)\H(A): points (1, y); each stands for |H| points of H(A).
  Value lhs_sum(s.q);
  for (const auto& y : s.levi->elements()) lhs_sum += lhs_integrand({e, y});
  rep.lhs = lhs_sum.scaled(Rational(1, z_size));
  rep.lhs_average = lhs_sum.scaled(Rational(1, h_size));

  Value rhs_sum(s.q);
  for (const auto& x : s.levi->elements())
    for (const auto& y : s.levi->elements()) rhs_sum += rhs_integrand({x, y});
  rep.rhs = rhs_sum.scaled(Rational(1, v_size * z_size * z_size));
  rep.rhs_average = rhs_sum.scaled(Rational(1, h_size * h_size));

  if (!rep.rhs.is_zero()) rep.ratio = rep.lhs * inverse(rep.rhs);
  if (!rep.rhs_average.is_zero()) rep.average_ratio = rep.lhs_average * inverse(rep.rhs_average);
  return rep;
}

UnfoldBattery unfolding_battery(const FiniteSetting& s, const std::vector<std::uint64_t>& seeds, UnfoldOptions opts,
                                FiniteLimits limits) {
  UnfoldBattery out;
  const auto gl = gl_block(s);
  bool consistent = true;
  for (std::uint64_t seed : seeds) {
    const AutFunction phi = central_projector(random_automorphic(s.p1, seed));
    const AutFunction phi_prime = central_projector(random_automorphic(gl, seed ^ 0x9e3779b97f4a7c15ULL));
    UnfoldRun run{seed, unfolding_check(s, phi, phi_prime, opts, limits)};
    if (run.report.ratio) {
      if (!out.constant) out.constant = run.report.ratio;
      else if (!(*out.constant == *run.report.ratio)) consistent = false;
    } else if (!run.report.lhs.is_zero()) {
      consistent = false;
    }
    out.runs.push_back(std::move(run));
  }
  out.constant_ratio = consistent && out.constant.has_value();
  out.ratio_is_one = out.constant_ratio && *out.constant == Value(s.q, Rational(1));
  out.corner_matches = matching_corners(s);
  return out;
}

}  // namespace gltower::finite
