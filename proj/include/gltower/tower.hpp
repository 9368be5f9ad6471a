#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gltower/euclid.hpp"
#include "gltower/exact/matrix.hpp"

namespace gltower {

/// 0-based matrix entry (row, col) in gl_n. Serialized 1-based.
struct Position {
  int row = 0;
  int col = 0;

  auto operator<=>(const Position&) const = default;
};

/// Sum of elementary matrices E_{r,c} over the listed entries. Every Lie
/// algebra in the tower has a basis of such 0/1 patterns; an entry list of
/// length > 1 comes from a factor embedded diagonally in several blocks.
using Pattern = std::vector<Position>;

struct AfTerm {
  Position pos;
  Rational coeff;

  bool operator==(const AfTerm&) const = default;
};

/// Additive function X -> sum coeff * X[pos] on the Lie algebra spanned by
/// domain_basis. On the group it is evaluated through the factorization
/// D_F = V_1 V_2 ... (see finite/model.hpp).
struct AdditiveFunction {
  int ambient = 0;
  std::vector<AfTerm> support;
  std::vector<Pattern> domain_basis;

  /// Value on a Lie algebra element given as coefficients over domain_basis.
  Rational evaluate(const std::vector<Rational>& coords) const;
};

/// Where the first parabolic puts its larger Levi factor.
enum class Corner { kUpperLeft, kLowerRight };

std::string to_string(Corner c);

struct TowerStep {
  int index = 0;  // 1-based
  int rows = 0;   // a_i: size of the Levi factor indexing the rows of V_i
  int cols = 0;   // b_i
  // Index ranges realizing the two Levi factors of P_i. A factor acting on
  // several ranges is embedded diagonally.
  std::vector<std::vector<int>> upper_copies;
  std::vector<std::vector<int>> lower_copies;
  std::vector<Pattern> v_basis;
  std::vector<AfTerm> f_restriction;
  // Lie(P_i) = gl(upper) + gl(lower) + Lie(V_i), all as patterns.
  std::vector<Pattern> p_lie_basis;

  int dim_v() const { return static_cast<int>(v_basis.size()); }
};

struct TowerOptions {
  Corner corner = Corner::kUpperLeft;
  bool allow_equal_unit_pair = false;
};

struct Tower {
  int n1 = 0;
  int n2 = 0;
  Corner corner = Corner::kUpperLeft;
  DivisionChain chain;
  std::vector<TowerStep> steps;
  // Lie(P_{K+1}) for K = number of steps: the stabilizer left after the last
  // step (a diagonally embedded GL_1).
  std::vector<Pattern> final_stabilizer_basis;
  AdditiveFunction af;

  int n() const { return n1 + n2; }
};

/// Builds V_i, P_i and F by explicit descent and checks every defining
/// property (open orbit, stabilizer, normality, entry-disjointness, bracket
/// closure) by exact linear algebra. Throws ConstructionFailure otherwise.
Tower build_tower(int n1, int n2, TowerOptions opts = {});

/// Same descent without the final checks; used to build deliberately broken
/// variants in tests.
Tower build_tower_unchecked(int n1, int n2, TowerOptions opts = {});

struct OpenOrbitReport {
  int step = 0;
  int dim_p = 0;
  int dim_stabilizer = 0;
  int dim_characters = 0;
  bool open = false;
};

struct StabilizerReport {
  int step = 0;
  int dim_stabilizer = 0;
  int dim_expected = 0;
  bool expected_inside = false;
  bool equal = false;
};

/// Lie stabilizer of F|V_i inside Lie(P_i), as coefficient vectors over
/// step.p_lie_basis (a kernel basis).
std::vector<std::vector<Rational>> lie_stabilizer(const Tower& t, std::size_t step);

OpenOrbitReport verify_open_orbit(const Tower& t, std::size_t step);

/// Compares the Lie stabilizer with Lie(P_{i+1}) + Lie(V_i) as subspaces.
StabilizerReport verify_stabilizer_bullet(const Tower& t, std::size_t step);

/// [Lie(P_i), Lie(V_i)] lies in Lie(V_i) and Lie(V_i) is abelian.
bool verify_normal_abelian(const Tower& t, std::size_t step);

bool entry_disjoint(const Tower& t);
bool bracket_closed(const Tower& t);

/// J_F with F(X) = tr(J_F X^t) on Lie(D_F). Throws NormalizationFailure unless
/// each projection to Lie(V_i) is strictly upper triangular and a permutation
/// conjugate of a nilpotent Jordan matrix.
RationalMatrix af_dual_matrix(const Tower& t);

/// Orthogonal projection (trace pairing) of a matrix to Lie(V_i).
RationalMatrix project_to_step(const RationalMatrix& m, const TowerStep& step);

/// J = J_1 + ... + J_K where J_i keeps, from the projection of J_F to Lie(V_i),
/// only the smallest-row entry of each family of diagonally tied entries.
RationalMatrix lemma_j_matrix(const Tower& t);

int dim_df(const Tower& t);

/// Relabels every index by perm (perm[i] is the image of i). The result is the
/// same tower conjugated by a permutation matrix.
Tower conjugate_by_permutation(const Tower& t, const std::vector<int>& perm);

/// D_F is the full upper unipotent group and F is the sum of the
/// superdiagonal entries with coefficient 1.
bool is_whittaker_character(const Tower& t);

/// Runs every check of build_tower and returns a diagnostic, empty on success.
std::string check_tower(const Tower& t);

}  // namespace gltower
