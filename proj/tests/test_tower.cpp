#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "gltower/orbit_lemma.hpp"
#include "gltower/tower.hpp"
#include "oracles.hpp"

using namespace gltower;

namespace {

std::set<Position> entries(const std::vector<Pattern>& ps) {
  std::set<Position> out;
  for (const auto& p : ps) out.insert(p.begin(), p.end());
  return out;
}

std::set<Position> support_positions(const std::vector<AfTerm>& ts) {
  std::set<Position> out;
  for (const auto& t : ts) out.insert(t.pos);
  return out;
}

std::vector<std::vector<long long>> to_integers(const RationalMatrix& m) {
  std::vector<std::vector<long long>> out(m.rows(), std::vector<long long>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      REQUIRE(m(i, j).get_den() == 1);
      out[i][j] = m(i, j).get_num().get_si();
    }
  return out;
}

Tower with_zero_character(Tower t) {
  for (auto& st : t.steps) st.f_restriction.clear();
  t.af.support.clear();
  return t;
}

}  // namespace

TEST_CASE("(2,1): positions of V_1, V_2 and the Whittaker character") {
  const Tower t = build_tower(2, 1);
  REQUIRE(t.steps.size() == 2);
  CHECK(t.steps[0].v_basis == std::vector<Pattern>{{{0, 2}}, {{1, 2}}});
  CHECK(t.steps[0].f_restriction == std::vector<AfTerm>{{{1, 2}, Rational(1)}});
  CHECK(t.steps[1].v_basis == std::vector<Pattern>{{{0, 1}}});
  CHECK(t.steps[1].f_restriction == std::vector<AfTerm>{{{0, 1}, Rational(1)}});
  CHECK(entries(t.af.domain_basis) == std::set<Position>{{0, 1}, {0, 2}, {1, 2}});
}

TEST_CASE("(n1,1) towers are the Whittaker tower") {
  for (int n1 = 2; n1 <= 9; ++n1) {
    const Tower t = build_tower(n1, 1);
    const int n = n1 + 1;
    CHECK(static_cast<int>(t.steps.size()) == n1);
    std::set<Position> upper, superdiag;
    for (int r = 0; r < n; ++r)
      for (int c = r + 1; c < n; ++c) upper.insert({r, c});
    for (int r = 0; r + 1 < n; ++r) superdiag.insert({r, r + 1});
    CHECK(entries(t.af.domain_basis) == upper);
    for (const auto& p : t.af.domain_basis) CHECK(p.size() == 1);
    CHECK(support_positions(t.af.support) == superdiag);
    CHECK(t.af.support.size() == superdiag.size());
    for (const auto& term : t.af.support) CHECK(term.coeff == 1);

    RationalMatrix expect(static_cast<std::size_t>(n), static_cast<std::size_t>(n), Rational(0));
    for (const auto& pos : superdiag) expect(static_cast<std::size_t>(pos.row), static_cast<std::size_t>(pos.col)) = 1;
    CHECK(af_dual_matrix(t) == expect);
    CHECK(is_whittaker_character(t));
  }
  CHECK_FALSE(is_whittaker_character(build_tower(3, 2)));
  CHECK_FALSE(is_whittaker_character(build_tower(5, 3)));
}

TEST_CASE("(3,2): step dimensions and pairs") {
  const Tower t = build_tower(3, 2);
  REQUIRE(t.steps.size() == 3);
  std::vector<int> dims;
  std::vector<std::pair<int, int>> pairs;
  for (const auto& st : t.steps) {
    dims.push_back(st.dim_v());
    pairs.emplace_back(st.rows, st.cols);
  }
  CHECK(dims == std::vector<int>{6, 2, 1});
  CHECK(pairs == slow_euclid_pairs(t.chain));
  CHECK(dim_df(t) == 9);
  // The last radical is the diagonally tied entry pair E_{1,2} + E_{3,4}.
  CHECK(t.steps[2].v_basis == std::vector<Pattern>{{{1, 2}, {3, 4}}});
}

TEST_CASE("verify_open_orbit dimensions") {
  const Tower t21 = build_tower(2, 1);
  const auto r = verify_open_orbit(t21, 0);
  CHECK(r.dim_p == 7);
  CHECK(r.dim_stabilizer == 5);
  CHECK(r.dim_characters == 2);
  CHECK(r.open);

  const Tower t32 = build_tower(3, 2);
  const auto r32 = verify_open_orbit(t32, 0);
  CHECK(r32.dim_characters == 6);
  CHECK(r32.dim_p - r32.dim_stabilizer == 6);
  CHECK(r32.open);
}

TEST_CASE("zero character is neither open nor has the right stabilizer") {
  const Tower t = with_zero_character(build_tower_unchecked(2, 1));
  const auto r = verify_open_orbit(t, 0);
  CHECK_FALSE(r.open);
  CHECK(r.dim_stabilizer == r.dim_p);
  const auto s = verify_stabilizer_bullet(t, 0);
  CHECK_FALSE(s.equal);
  CHECK(s.dim_stabilizer > s.dim_expected);
  CHECK_FALSE(check_tower(t).empty());
  CHECK(af_dual_matrix(t).is_zero_matrix());
}

TEST_CASE("verify_stabilizer_bullet examples") {
  const Tower t21 = build_tower(2, 1);
  const auto s = verify_stabilizer_bullet(t21, 0);
  CHECK(s.equal);
  CHECK(s.dim_stabilizer == 5);
  CHECK(s.dim_expected == 5);

  const Tower t32 = build_tower(3, 2);
  for (std::size_t i = 0; i < t32.steps.size(); ++i) {
    const auto r = verify_stabilizer_bullet(t32, i);
    CHECK(r.expected_inside);
    CHECK(r.equal);
  }
  // Lie(P_2) for (3,2) is gl_1 + gl_2 (tied) + V_2: 1 + 4 + 2.
  CHECK(t32.steps[1].p_lie_basis.size() == 7);
  CHECK(verify_stabilizer_bullet(t32, 0).dim_stabilizer == 7 + 6);
}

TEST_CASE("J_F and J") {
  const Tower t21 = build_tower(2, 1);
  const RationalMatrix jf = af_dual_matrix(t21);
  CHECK(jf == rational_matrix({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}));
  CHECK(lemma_j_matrix(t21) == jf);
  CHECK(jordan_type(lemma_j_matrix(t21)) == Partition({3}));

  const RationalMatrix j32 = lemma_j_matrix(build_tower(3, 2));
  CHECK(matrix_power(j32, 5).is_zero_matrix());
  CHECK(jordan_type(j32) == Partition({4, 1}));
  CHECK(oracle::jordan_type(to_integers(j32)) == std::vector<int>{4, 1});

  const RationalMatrix j53 = lemma_j_matrix(build_tower(5, 3));
  CHECK(jordan_type(j53) == Partition({5, 2, 1}));
  CHECK(oracle::jordan_type(to_integers(j53)) == std::vector<int>{5, 2, 1});
}

TEST_CASE("J is supported on tower positions") {
  for (const auto& [n1, n2] : coprime_pairs(12)) {
    const Tower t = build_tower_unchecked(n1, n2);
    const auto domain = entries(t.af.domain_basis);
    const RationalMatrix j = lemma_j_matrix(t);
    for (std::size_t r = 0; r < j.rows(); ++r)
      for (std::size_t c = 0; c < j.cols(); ++c)
        if (sgn(j(r, c)) != 0) CHECK(domain.contains({static_cast<int>(r), static_cast<int>(c)}));
  }
}

TEST_CASE("dim_df examples") {
  CHECK(dim_df(build_tower(2, 1)) == 3);
  CHECK(dim_df(build_tower(3, 2)) == 9);
  CHECK(dim_df(build_tower(5, 3)) == 24);
}

TEST_CASE("all bullets hold for every pair with n1 + n2 <= 10") {
  for (const auto& [n1, n2] : coprime_pairs(10)) {
    CAPTURE(n1);
    CAPTURE(n2);
    const Tower t = build_tower_unchecked(n1, n2);
    CHECK(entry_disjoint(t));
    CHECK(bracket_closed(t));
    CHECK(static_cast<int>(t.steps.size()) == t.chain.quotient_sum());
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
      CHECK(verify_open_orbit(t, i).open);
      CHECK(verify_stabilizer_bullet(t, i).equal);
      CHECK(verify_normal_abelian(t, i));
      CHECK(t.steps[i].dim_v() == t.steps[i].rows * t.steps[i].cols);
    }
    CHECK(check_tower(t).empty());
    CHECK(dim_df(t) == oracle::slow_euclid_products(n1, n2));
    CHECK(2L * dim_df(t) == orbit_dim(claimed_partition(t.chain)));
  }
}

TEST_CASE("first step is the standard maximal parabolic") {
  for (const auto& [n1, n2] : coprime_pairs(9)) {
    const Tower t = build_tower(n1, n2);
    std::set<Position> block;
    for (int r = 0; r < n1; ++r)
      for (int c = n1; c < n1 + n2; ++c) block.insert({r, c});
    CHECK(entries(t.steps[0].v_basis) == block);
    CHECK(t.steps[0].f_restriction.size() == static_cast<std::size_t>(n2));
  }
}

TEST_CASE("conjugating by a permutation keeps every check passing") {
  std::mt19937_64 gen(2024);
  for (const auto& [n1, n2] : coprime_pairs(8)) {
    const Tower t = build_tower(n1, n2);
    std::vector<int> perm(static_cast<std::size_t>(t.n()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    const Tower moved = conjugate_by_permutation(t, perm);
    CHECK(check_tower(moved).empty());
    CHECK(dim_df(moved) == dim_df(t));

    // J_F is conjugated entrywise; its Jordan type cannot change.
    const auto n = static_cast<std::size_t>(t.n());
    RationalMatrix jf(n, n, Rational(0));
    for (const auto& term : moved.af.support)
      jf(static_cast<std::size_t>(term.pos.row), static_cast<std::size_t>(term.pos.col)) += term.coeff;
    const RationalMatrix orig = af_dual_matrix(t);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        CHECK(jf(static_cast<std::size_t>(perm[r]), static_cast<std::size_t>(perm[c])) == orig(r, c));
  }
  CHECK_THROWS_AS(conjugate_by_permutation(build_tower(2, 1), {0, 1}), DimensionMismatch);
}

TEST_CASE("broken towers are rejected") {
  Tower t = build_tower_unchecked(3, 2);
  // Double the character on one step: still open, but J_F is no longer a
  // 0/1 Weyl-Jordan matrix.
  for (auto& term : t.af.support) term.coeff = 2;
  CHECK_THROWS_AS(af_dual_matrix(t), NormalizationFailure);

  Tower outside = build_tower_unchecked(2, 1);
  outside.af.support.push_back({{2, 0}, Rational(1)});
  CHECK_THROWS_AS(af_dual_matrix(outside), NormalizationFailure);

  Tower overlap = build_tower_unchecked(2, 1);
  overlap.steps[1].v_basis.push_back({{0, 2}});
  CHECK_FALSE(entry_disjoint(overlap));
  CHECK_FALSE(check_tower(overlap).empty());
}

TEST_CASE("the (1,1) chain is only built on request") {
  CHECK_THROWS_AS(build_tower(1, 1), InvalidPair);
  const Tower t = build_tower(1, 1, {.corner = Corner::kUpperLeft, .allow_equal_unit_pair = true});
  REQUIRE(t.steps.size() == 1);
  CHECK(t.steps[0].v_basis == std::vector<Pattern>{{{0, 1}}});
  const Tower swapped = build_tower(1, 1, {.corner = Corner::kLowerRight, .allow_equal_unit_pair = true});
  CHECK(swapped.steps[0].v_basis == t.steps[0].v_basis);
}

TEST_CASE("AdditiveFunction::evaluate reads the support") {
  const Tower t = build_tower(2, 1);
  // domain order: (0,2), (1,2), (0,1)
  CHECK(t.af.evaluate({Rational(5), Rational(7), Rational(11)}) == 18);
  CHECK_THROWS_AS(t.af.evaluate({Rational(1)}), DimensionMismatch);
}
