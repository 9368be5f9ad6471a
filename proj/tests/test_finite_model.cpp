#include <doctest.h>

#include <map>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "gltower/finite/model.hpp"

using namespace gltower;
using namespace gltower::finite;

namespace {

long gl_order(int n, long q) {
  long order = 1, qn = 1;
  for (int i = 0; i < n; ++i) qn *= q;
  long qi = 1;
  for (int i = 0; i < n; ++i) {
    order *= qn - qi;
    qi *= q;
  }
  return order;
}

const FiniteSetting& setting(int n1, int n2, std::uint32_t q) {
  static std::map<std::tuple<int, int, std::uint32_t>, FiniteSetting> cache;
  const auto key = std::make_tuple(n1, n2, q);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, make_setting(n1, n2, q)).first;
  return it->second;
}

Value one(std::uint32_t q) { return Value(q, Rational(1)); }

std::set<std::uint64_t> codes(const std::vector<FqMat>& ms) {
  std::set<std::uint64_t> out;
  for (const auto& m : ms) out.insert(m.code());
  return out;
}

}  // namespace

TEST_CASE("F_q matrices: determinant, inverse, codes") {
  FqMat a(3, 3);
  a.set(0, 0, 2);
  a.set(0, 1, 1);
  a.set(1, 1, 1);
  a.set(2, 0, 1);
  a.set(2, 2, 2);
  CHECK(a.det() == 1);  // 2 * (1 * 2) = 4 = 1 mod 3
  CHECK(a * a.inverse() == FqMat::identity(3, 3));
  CHECK_THROWS_AS(FqMat(2, 5).inverse(), DomainError);
  CHECK_THROWS_AS(FqMat(7, 2), DomainError);
  FqMat b = a;
  b.set(1, 2, -1);
  CHECK(b(1, 2) == 2);
  CHECK(a.code() != b.code());
  CHECK(FqMat::block_diag(a.block(0, 2), a.block(2, 1)).block(0, 2) == a.block(0, 2));
}

TEST_CASE("enumerate_gl orders") {
  CHECK(enumerate_gl(1, 2).size() == 1);
  CHECK(enumerate_gl(2, 2).size() == 6);
  CHECK(static_cast<long>(enumerate_gl(3, 2).size()) == gl_order(3, 2));
  CHECK(enumerate_gl(3, 2).size() == 168);
  CHECK(static_cast<long>(enumerate_gl(2, 3).size()) == gl_order(2, 3));
  CHECK(static_cast<long>(enumerate_gl(2, 5).size()) == gl_order(2, 5));
  CHECK(enumerate_gl(2, 3).closed());
  CHECK_THROWS_AS(enumerate_gl(4, 3), SizeLimit);
  CHECK_THROWS_AS(enumerate_gl(3, 3, {.max_candidates = 1000}), SizeLimit);
  CHECK_THROWS_AS(enumerate_gl(2, 4), DomainError);
}

TEST_CASE("coset representatives are complete and duplicate free") {
  const FiniteGroup g = enumerate_gl(3, 2);
  const FiniteGroup b = units_of_span("B", {{{0, 0}}, {{1, 1}}, {{2, 2}}, {{0, 1}}, {{0, 2}}, {{1, 2}}}, 3, 2);
  CHECK(b.size() == 8);
  const auto reps = coset_reps(b, g);
  CHECK(reps.size() == 21);
  std::map<std::uint64_t, int> hits;
  for (const auto& r : reps)
    for (const auto& s : b.elements()) ++hits[(s * r).code()];
  CHECK(hits.size() == g.size());
  for (const auto& [code, count] : hits) CHECK(count == 1);
  // Distinct representatives lie in distinct cosets.
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = i + 1; j < reps.size(); ++j) CHECK_FALSE(b.contains(reps[i] * reps[j].inverse()));

  const FiniteGroup not_sub("X", 3, 2, {FqMat::identity(3, 2), reps.back()});
  CHECK_THROWS(coset_reps(not_sub, g));
}

TEST_CASE("pattern groups reject non-algebras") {
  CHECK_THROWS_AS(units_of_span("bad", {{{0, 0}}, {{0, 1}}}, 2, 2), DomainError);         // no identity
  CHECK_THROWS_AS(unipotent_group("bad", {{{0, 1}}, {{1, 2}}}, 3, 2), DomainError);       // E01 E12 = E02 missing
  CHECK_THROWS_AS(unipotent_group("bad", {{{1, 0}}}, 2, 2), DomainError);                 // lower triangular
  CHECK(unipotent_group("U", {{{0, 1}}, {{1, 2}}, {{0, 2}}}, 3, 3).size() == 27);
  CHECK(unipotent_group("U", {{{0, 1}}, {{1, 2}}, {{0, 2}}}, 3, 3).closed());
}

TEST_CASE("toy adele ring characters") {
  for (std::uint32_t q : {2u, 3u, 5u}) {
    const ToyAdeleRing ring(q);
    bool nontrivial = false;
    for (std::uint32_t x = 0; x < q; ++x) {
      CHECK(ring.psi(x, x) == one(q));
      for (std::uint32_t y = 0; y < q; ++y) {
        if (!(ring.psi(x, y) == one(q))) nontrivial = true;
        CHECK(ring.psi(x, y) * ring.psi(y, x) == one(q));
      }
    }
    CHECK(nontrivial);
  }
  const ToyAdeleRing quad(3, 1);
  CHECK(quad.chi_value(1) == 1);
  CHECK(quad.chi_value(2) == -1);
  for (std::uint32_t x = 1; x < 3; ++x) CHECK(quad.eta(x, x) == 1);
  CHECK(quad.eta(2, 1) == -1);
  const ToyAdeleRing quad5(5, 1);
  CHECK(quad5.chi_value(4) == 1);
  CHECK(quad5.chi_value(2) == -1);
  CHECK_THROWS_AS(ToyAdeleRing(2, 1), DomainError);
  CHECK_THROWS_AS(ToyAdeleRing(4), DomainError);
  CHECK_THROWS_AS(ToyAdeleRing(3, 2), DomainError);
}

TEST_CASE("automorphic functions: left invariance, determinism, central projection") {
  const auto& s = setting(2, 1, 3);
  const AutFunction phi = random_automorphic(s.p1, 11);
  CHECK(phi.values() == random_automorphic(s.p1, 11).values());
  CHECK_FALSE(phi.values() == random_automorphic(s.p1, 12).values());

  std::mt19937_64 gen(4);
  for (int i = 0; i < 20; ++i) {
    const auto& gamma = (*s.p1)[gen() % s.p1->size()];
    const AdelePoint g{(*s.p1)[gen() % s.p1->size()], (*s.p1)[gen() % s.p1->size()]};
    CHECK(phi(diagonal(gamma) * g) == phi(g));
  }

  CHECK_FALSE(is_central_invariant(phi));
  const AutFunction proj = central_projector(phi);
  CHECK(is_central_invariant(proj));
  CHECK(central_projector(proj).values() == proj.values());

  // Exhaustive on GL_3(F_2) and on P_1 for (2,1) at q = 2.
  const auto gl3 = std::make_shared<const FiniteGroup>(enumerate_gl(3, 2));
  const AutFunction on_gl = central_projector(random_automorphic(gl3, 3));
  CHECK(is_central_invariant(on_gl));
  const AutFunction on_p1 = central_projector(random_automorphic(setting(2, 1, 2).p1, 3));
  CHECK(is_central_invariant(on_p1));
}

TEST_CASE("(2,1) finite setting sizes") {
  const auto& s2 = setting(2, 1, 2);
  CHECK(s2.p1->size() == 24);
  CHECK(s2.levi->size() == 6);
  CHECK(s2.d_f.elements.size() == 8);
  CHECK(s2.sum_reps.size() == 3);
  CHECK(s2.orbit_reps.size() == 3);
  CHECK(s2.open_orbit.size() == 3);

  const auto& s3 = setting(2, 1, 3);
  CHECK(s3.p1->size() == 864);
  CHECK(s3.levi->size() == 96);
  CHECK(s3.sum_reps.size() == 16);
  CHECK(s3.orbit_reps.size() == 8);
  CHECK(s3.zv->size() == 6);
  CHECK(s3.p1->closed());
}

TEST_CASE("P_2 from the tower equals the stabilizer found by search") {
  for (auto [n1, n2, q] : {std::tuple{2, 1, 2u}, std::tuple{2, 1, 3u}, std::tuple{3, 1, 2u}}) {
    const auto& s = setting(n1, n2, q);
    const FiniteGroup stab = brute_force_stabilizer(s);
    CHECK(codes(stab.elements()) == codes(s.p2->elements()));
  }
}

TEST_CASE("group-level F is additive and reads the Whittaker entries") {
  for (auto [n1, n2, q] : {std::tuple{2, 1, 2u}, std::tuple{2, 1, 3u}, std::tuple{3, 1, 2u}}) {
    const auto& s = setting(n1, n2, q);
    const auto& d = s.d_f;
    std::map<std::uint64_t, std::uint32_t> f;
    for (std::size_t i = 0; i < d.elements.size(); ++i) {
      f[d.elements[i].code()] = d.f[i];
      std::uint32_t super = 0;
      for (int r = 0; r + 1 < n1 + n2; ++r) super += d.elements[i](r, r + 1);
      CHECK(d.f[i] == super % q);
    }
    for (const auto& a : d.elements)
      for (const auto& b : d.elements) CHECK(f.at((a * b).code()) == (f.at(a.code()) + f.at(b.code())) % q);
  }
  FqMat outside = FqMat::identity(3, 2);
  outside.set(1, 0, 1);
  CHECK_THROWS_AS(af_value(setting(2, 1, 2).tower, outside), ConstructionFailure);
}

TEST_CASE("fourier_coefficient: constants and orthogonality") {
  const auto& s = setting(2, 1, 3);
  const ToyAdeleRing ring(3);
  const Value c(3, std::vector<Rational>{Rational(2), Rational(-1, 3)});
  const AutFunction constant = constant_function(s.p1, c);
  const CharacterDomain zero_af = linear_character("V_1", s.tower.steps[0].v_basis, {}, 3, 3);
  const FqMat e = FqMat::identity(3, 3);
  CHECK(fourier_coefficient(ring, zero_af, constant, {e, e}) == c);
  CHECK(fourier_coefficient(ring, s.d_f, constant, {e, e}).is_zero());

  // phi = psi_k(F(.))^-1 on D_F, zero elsewhere: the coefficient at 1 is 1.
  std::vector<Value> values(s.p1->size(), Value(3));
  for (std::size_t i = 0; i < s.d_f.elements.size(); ++i)
    values[s.p1->index_of(s.d_f.elements[i])] = ring.zeta_power(-static_cast<std::int64_t>(s.d_f.f[i]));
  const AutFunction character(s.p1, values);
  CHECK(fourier_coefficient(ring, s.d_f, character, {e, e}) == one(3));
}

TEST_CASE("fourier_coefficient equivariance, exhaustive at q = 2 for (2,1)") {
  const auto& s = setting(2, 1, 2);
  const ToyAdeleRing ring(2);
  const AutFunction phi = random_automorphic(s.p1, 5);
  const auto points = test_points(*s.p1, 0, 0, 1'000'000);
  REQUIRE(points.size() == 576);
  std::vector<Value> at;
  for (const auto& g : points) at.push_back(fourier_coefficient(ring, s.d_f, phi, g));
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> where;
  for (std::size_t i = 0; i < points.size(); ++i) where[{points[i].x.code(), points[i].y.code()}] = i;
  for (std::size_t a = 0; a < s.d_f.elements.size(); ++a)
    for (std::size_t b = 0; b < s.d_f.elements.size(); ++b) {
      const AdelePoint v{s.d_f.elements[a], s.d_f.elements[b]};
      const Value factor = ring.psi(s.d_f.f[a], s.d_f.f[b]);
      for (std::size_t i = 0; i < points.size(); ++i) {
        const AdelePoint vg = v * points[i];
        CHECK(at[where.at({vg.x.code(), vg.y.code()})] == factor * at[i]);
      }
    }
}

TEST_CASE("fourier_coefficient equivariance, sampled for (2,1) at q = 3 and (3,1) at q = 2") {
  for (auto [n1, n2, q] : {std::tuple{2, 1, 3u}, std::tuple{3, 1, 2u}}) {
    const auto& s = setting(n1, n2, q);
    const ToyAdeleRing ring(q);
    const AutFunction phi = random_automorphic(s.p1, 8);
    std::mt19937_64 gen(21);
    for (const auto& g : test_points(*s.p1, 10, 9)) {
      const Value base = fourier_coefficient(ring, s.d_f, phi, g);
      for (int trial = 0; trial < 4; ++trial) {
        const std::size_t a = gen() % s.d_f.elements.size(), b = gen() % s.d_f.elements.size();
        const AdelePoint v{s.d_f.elements[a], s.d_f.elements[b]};
        CHECK(fourier_coefficient(ring, s.d_f, phi, v * g) == ring.psi(s.d_f.f[a], s.d_f.f[b]) * base);
      }
    }
  }
}

TEST_CASE("finite Fourier inversion on V_1") {
  for (std::uint32_t q : {2u, 3u}) {
    const auto& s = setting(2, 1, q);
    CHECK(all_v1_characters(s).size() == static_cast<std::size_t>(q * q));
    std::vector<AdelePoint> points;
    const FqMat e = FqMat::identity(3, q);
    for (const auto& w : s.v1_f.elements) points.push_back({e, w});
    const auto extra = test_points(*s.p1, 8, 77);
    points.insert(points.end(), extra.begin(), extra.end());
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      CHECK(fourier_inversion_holds(s, random_automorphic(s.p1, seed), points));
    }
  }
}

TEST_CASE("f_sum of a constant vanishes, matching the direct character sum") {
  for (std::uint32_t q : {2u, 3u}) {
    const auto& s = setting(2, 1, q);
    const FqMat e = FqMat::identity(3, q);
    const AutFunction ones = constant_function(s.p1, one(q));
    Value direct(q);
    for (std::uint32_t f : s.d_f.f) direct += Value::zeta_power(q, f);
    direct = direct.scaled(Rational(static_cast<long>(s.sum_reps.size()), static_cast<long>(s.d_f.elements.size())));
    CHECK(f_sum(s, ones, {e, e}) == direct);
    CHECK(direct.is_zero());
  }
}

TEST_CASE("f_sum is well defined and P_1(k)-invariant, exhaustive at q = 2") {
  const auto& s = setting(2, 1, 2);
  const auto points = test_points(*s.p1, 0, 0, 1'000'000);
  for (std::uint64_t seed : {1u, 2u}) {
    const AutFunction phi = random_automorphic(s.p1, seed);
    for (const auto& g : points) {
      CHECK_NOTHROW(check_f_sum_well_defined(s, phi, g));
      const Value base = f_sum(s, phi, g);
      for (const auto& p : s.p1->elements()) CHECK(f_sum(s, phi, diagonal(p) * g) == base);
    }
  }
}

TEST_CASE("f_sum_checks agrees with the direct loops") {
  const auto& s2 = setting(2, 1, 2);
  const AutFunction phi = random_automorphic(s2.p1, 7);
  const FSumReport full = f_sum_checks(s2, phi, 4, 1, 1'000'000);
  CHECK(full.exhaustive);
  CHECK(full.well_defined);
  CHECK(full.invariant);
  CHECK(full.points == s2.p1->size() * s2.p1->size());
  CHECK(full.translations == full.points * s2.p1->size());

  const auto& s3 = setting(2, 1, 3);
  const FSumReport sampled = f_sum_checks(s3, random_automorphic(s3.p1, 7), 4, 1, 0);
  CHECK_FALSE(sampled.exhaustive);
  CHECK(sampled.well_defined);
  CHECK(sampled.invariant);
  CHECK(sampled.points == 5);
  CHECK(sampled.translations == 20);
}

TEST_CASE("f_sum_checks flags a truncated coset sum") {
  FiniteSetting s = setting(2, 1, 2);
  s.sum_reps.pop_back();
  const FSumReport rep = f_sum_checks(s, random_automorphic(s.p1, 7), 4, 1, 1'000'000);
  CHECK(rep.well_defined);
  CHECK_FALSE(rep.invariant);
  CHECK(rep.diagnostic.find("f_sum(gamma g)") != std::string::npos);
}

TEST_CASE("f_sum invariance sampled at q = 3") {
  const auto& s = setting(2, 1, 3);
  const AutFunction phi = random_automorphic(s.p1, 3);
  std::mt19937_64 gen(99);
  for (const auto& g : test_points(*s.p1, 6, 5)) {
    CHECK_NOTHROW(check_f_sum_well_defined(s, phi, g));
    const Value base = f_sum(s, phi, g);
    for (int i = 0; i < 20; ++i) CHECK(f_sum(s, phi, diagonal((*s.p1)[gen() % s.p1->size()]) * g) == base);
  }
}

TEST_CASE("a quotient by the whole stabilizer is not well defined") {
  FiniteSetting s = setting(2, 1, 3);
  s.zv = s.p2;
  s.sum_reps = coset_reps(*s.p2, *s.levi);
  const AutFunction phi = random_automorphic(s.p1, 4);
  const FqMat e = FqMat::identity(3, 3);
  CHECK_THROWS_AS(check_f_sum_well_defined(s, phi, {e, e}), WellDefinednessFailure);
}

TEST_CASE("open-orbit identity over V_1") {
  for (std::uint32_t q : {2u, 3u}) {
    const auto& s = setting(2, 1, q);
    const auto points = test_points(*s.p1, 12, 31, 1000);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto rep = prop1_orbit_identity(s, random_automorphic(s.p1, seed), points);
      CHECK(rep.holds);
      CHECK(rep.characters == rep.cosets);
      CHECK(rep.characters == static_cast<std::size_t>(q * q - 1));
    }
  }
  const auto& s = setting(3, 1, 2);
  const auto rep = prop1_orbit_identity(s, random_automorphic(s.p1, 1), test_points(*s.p1, 6, 2));
  CHECK(rep.holds);
  CHECK(rep.characters == 7);
}

TEST_CASE("open-orbit identity: zero function and a single character") {
  const auto& s = setting(2, 1, 3);
  const FqMat e = FqMat::identity(3, 3);
  const auto zero = prop1_orbit_identity(s, constant_function(s.p1, Value(3)), {{e, e}});
  CHECK(zero.holds);
  CHECK(zero.lhs.is_zero());
  CHECK(zero.rhs.is_zero());

  // Phi(h) = zeta^-S(h) with S reading h[1][2] (rank one); only S survives at 1.
  std::vector<Value> values;
  for (const auto& h : s.p1->elements()) values.push_back(Value::zeta_power(3, -static_cast<std::int64_t>(h(1, 2))));
  const auto rep = prop1_orbit_identity(s, AutFunction(s.p1, values), {{e, e}});
  CHECK(rep.holds);
  CHECK(rep.lhs == one(3));
  CHECK(rep.rhs == one(3));
}

TEST_CASE("reduced towers and corner conventions") {
  const Tower r21 = reduced_tower(2, 1);
  CHECK(r21.n1 == 1);
  CHECK(r21.n2 == 1);
  const Tower r32 = reduced_tower(3, 2);
  CHECK(r32.n1 == 2);
  CHECK(r32.n2 == 1);
  CHECK(r32.corner == Corner::kLowerRight);
  const Tower r52 = reduced_tower(5, 2);
  CHECK(r52.n1 == 3);
  CHECK(r52.corner == Corner::kUpperLeft);
  CHECK(matching_corners(setting(2, 1, 2)) == std::vector<Corner>{Corner::kUpperLeft, Corner::kLowerRight});
}

TEST_CASE("unfolding: ratio is exactly 1 with compatible measures") {
  struct Case {
    std::uint32_t q;
    int chi;
    long average;
  };
  // Plain averages differ by the index of (Z V^1)(k) in H(k).
  for (const Case c : {Case{2, 0, 3}, Case{3, 0, 16}, Case{3, 1, 16}}) {
    const auto& s = setting(2, 1, c.q);
    std::vector<std::uint64_t> seeds(10);
    std::iota(seeds.begin(), seeds.end(), 0);
    const auto battery = unfolding_battery(s, seeds, {.chi = c.chi});
    CHECK(battery.runs.size() == 10);
    CHECK(battery.constant_ratio);
    CHECK(battery.ratio_is_one);
    for (const auto& run : battery.runs) {
      REQUIRE(run.report.ratio.has_value());
      CHECK(*run.report.ratio == one(c.q));
      REQUIRE(run.report.average_ratio.has_value());
      CHECK(*run.report.average_ratio == Value(c.q, Rational(c.average)));
    }
  }
}

TEST_CASE("unfolding: trivial inputs") {
  const auto& s = setting(2, 1, 2);
  const auto gl = gl_block(s);
  const auto zero = unfolding_check(s, constant_function(s.p1, one(2)), constant_function(gl, Value(2)));
  CHECK(zero.lhs.is_zero());
  CHECK(zero.rhs.is_zero());
  CHECK_FALSE(zero.ratio.has_value());

  const auto ones = unfolding_check(s, constant_function(s.p1, one(2)), constant_function(gl, one(2)));
  CHECK(ones.lhs == ones.rhs);
}

TEST_CASE("unfolding: the un-negated AF breaks V^1(A)-invariance once q > 2") {
  const auto& s3 = setting(2, 1, 3);
  const auto gl3 = gl_block(s3);
  const AutFunction phi = central_projector(random_automorphic(s3.p1, 1));
  const AutFunction phi_prime = central_projector(random_automorphic(gl3, 2));
  CHECK_THROWS_AS(unfolding_check(s3, phi, phi_prime, {.sign = AfSign::kPlus}), IntegrandNotInvariant);
  CHECK_NOTHROW(unfolding_check(s3, phi, phi_prime));

  // Over F_2 the two signs agree.
  const auto& s2 = setting(2, 1, 2);
  const auto gl2 = gl_block(s2);
  const AutFunction p = random_automorphic(s2.p1, 1);
  const AutFunction pp = random_automorphic(gl2, 2);
  CHECK(unfolding_check(s2, p, pp, {.sign = AfSign::kPlus}).lhs == unfolding_check(s2, p, pp).lhs);
}

TEST_CASE("unfolding: non-central inputs are rejected") {
  const auto& s = setting(2, 1, 3);
  const auto gl = gl_block(s);
  const AutFunction phi = random_automorphic(s.p1, 1);
  const AutFunction phi_prime = central_projector(random_automorphic(gl, 2));
  CHECK_THROWS_AS(unfolding_check(s, phi, phi_prime), IntegrandNotInvariant);
}

TEST_CASE("size limits") {
  CHECK_THROWS_AS(make_setting(3, 2, 2), SizeLimit);
  CHECK_THROWS_AS(make_setting(3, 1, 3, {.enumeration = {.max_candidates = 10'000}}), SizeLimit);
  const auto& s = setting(3, 1, 2);
  const auto gl = gl_block(s);
  CHECK_THROWS_AS(unfolding_check(s, random_automorphic(s.p1, 0), random_automorphic(gl, 0)), SizeLimit);
}

TEST_CASE("prop1 battery") {
  const auto& s = setting(2, 1, 2);
  const Prop1Battery b = prop1_battery(s, {0, 1, 2});
  CHECK(b.stabilizer_matches);
  CHECK(b.pass);
  REQUIRE(b.runs.size() == 3);
  for (const auto& r : b.runs) {
    CHECK(r.prop1.holds);
    CHECK(r.prop1.points == 576);
    CHECK(r.fourier_inversion);
    CHECK(r.f_sum.exhaustive);
  }
  const Prop1Battery again = prop1_battery(s, {0, 1, 2});
  for (std::size_t i = 0; i < 3; ++i) CHECK(again.runs[i].prop1.lhs == b.runs[i].prop1.lhs);

  const auto& s3 = setting(2, 1, 3);
  const Prop1Battery b3 = prop1_battery(s3, {5});
  CHECK(b3.pass);
  CHECK(b3.runs[0].prop1.points == 9);
  CHECK_FALSE(b3.runs[0].f_sum.exhaustive);
}
