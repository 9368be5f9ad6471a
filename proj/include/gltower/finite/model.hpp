#pragma once

// Doubled-field model: E = F_q, A = E x E, k = E embedded diagonally.
// A point of G(A) is a pair (x, y) of matrices over E. A function on
// G(k)\G(A) is determined by its values on (1, h), i.e. phi(x, y) = Phi(x^-1 y).
// Every "integral" over a quotient is a finite sum.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gltower/exact/scalar.hpp"
#include "gltower/finite/field.hpp"
#include "gltower/tower.hpp"

namespace gltower::finite {

using Value = CyclotomicRational;

/// psi_k(x, y) = zeta^(x - y); eta(x, y) = chi(x / y).
class ToyAdeleRing {
 public:
  // chi = 0 is the trivial character of E^*, chi = 1 the quadratic one
  // (requires odd q).
  explicit ToyAdeleRing(std::uint32_t q, int chi = 0);

  std::uint32_t q() const { return q_; }
  int chi() const { return chi_; }

  Value zeta_power(std::int64_t k) const { return Value::zeta_power(q_, k); }
  Value psi(std::uint32_t x, std::uint32_t y) const;
  int chi_value(std::uint32_t x) const;
  int eta(std::uint32_t x, std::uint32_t y) const;

 private:
  std::uint32_t q_;
  int chi_;
};

struct AdelePoint {
  FqMat x;
  FqMat y;
};

AdelePoint operator*(const AdelePoint& a, const AdelePoint& b);
/// The diagonal image of a k-point.
inline AdelePoint diagonal(const FqMat& g) { return {g, g}; }

/// Function on B(k)\B(A) for a finite matrix group B, stored as Phi on B(E).
class AutFunction {
 public:
  AutFunction(std::shared_ptr<const FiniteGroup> base, std::vector<Value> values);

  const FiniteGroup& base() const { return *base_; }
  std::shared_ptr<const FiniteGroup> base_ptr() const { return base_; }
  const std::vector<Value>& values() const { return values_; }

  Value operator()(const AdelePoint& g) const;
  const Value& reduced(const FqMat& h) const { return values_[base_->index_of(h)]; }

 private:
  std::shared_ptr<const FiniteGroup> base_;
  std::vector<Value> values_;
};

/// Values are small integer combinations of powers of zeta, drawn from
/// mt19937_64(seed).
AutFunction random_automorphic(std::shared_ptr<const FiniteGroup> base, std::uint64_t seed);
AutFunction constant_function(std::shared_ptr<const FiniteGroup> base, const Value& c);
/// Average over the scalar matrices of the base group.
AutFunction central_projector(const AutFunction& phi);
bool is_central_invariant(const AutFunction& phi);

/// The E-points of a unipotent group D together with F(n) mod q for every n.
struct CharacterDomain {
  std::string name;
  std::vector<FqMat> elements;
  std::vector<std::uint32_t> f;
};

/// D_F(E) for a tower with the group-level F. F is evaluated by peeling off
/// V_1, V_2, ... in turn: n = l v with v in V_i and l free of V_i entries.
CharacterDomain af_domain(const Tower& t, std::uint32_t q, EnumerationLimits limits = {});

/// Group-level F of a tower at one element of D_F(E).
std::uint32_t af_value(const Tower& t, const FqMat& n);

/// Linear character X -> sum coeff * X[pos] on an abelian pattern group.
CharacterDomain linear_character(const std::string& name, const std::vector<Pattern>& basis,
                                 const std::vector<std::pair<Position, std::uint32_t>>& terms, int n,
                                 std::uint32_t q);

CharacterDomain negated(CharacterDomain d);

/// Average over D(E) of phi((1, v) g) * zeta^F(v), i.e. the integral over
/// D(k)\D(A) of phi(ng) psi_k^-1(F(n)).
Value fourier_coefficient(const ToyAdeleRing& ring, const CharacterDomain& d, const AutFunction& phi,
                          const AdelePoint& g);

struct FiniteLimits {
  EnumerationLimits enumeration;
  int max_n = 4;         // n1 + n2 for towers in the finite model
  int max_unfold_n = 3;  // n1 + n2 for the unfolding identity
};

/// Groups and coset data shared by every check for one pair and one q.
struct FiniteSetting {
  int n1 = 0;
  int n2 = 0;
  std::uint32_t q = 2;
  Tower tower;
  std::shared_ptr<const FiniteGroup> p1;      // P_1(E)
  std::shared_ptr<const FiniteGroup> levi;    // H(E) = GL_n1 x GL_n2
  std::shared_ptr<const FiniteGroup> center;  // Z(E)
  std::shared_ptr<const FiniteGroup> v_rest;  // V^1(E), the product of V_i for i >= 2
  std::shared_ptr<const FiniteGroup> zv;      // (Z V^1)(E)
  std::shared_ptr<const FiniteGroup> p2;      // P_2(E), from Lie(P_2)
  CharacterDomain d_f;                        // D_F(E) with F
  CharacterDomain v1_f;                       // V_1(E) with F|V_1
  std::vector<CharacterDomain> open_orbit;    // V_1 characters of rank n2
  std::vector<FqMat> sum_reps;                // (Z V^1)(E) \ H(E)
  std::vector<FqMat> orbit_reps;              // P_2(E) \ H(E)
};

FiniteSetting make_setting(int n1, int n2, std::uint32_t q, FiniteLimits limits = {});

/// Stabilizer of F|V_1 in H(E) by direct search, for comparison with P_2(E).
FiniteGroup brute_force_stabilizer(const FiniteSetting& s);

/// All characters of V_1(E), including the trivial one.
std::vector<CharacterDomain> all_v1_characters(const FiniteSetting& s);

/// Sum over (Z V^1)(k)\H(k) of the D_F coefficient at gamma g.
Value f_sum(const FiniteSetting& s, const AutFunction& phi, const AdelePoint& g);

/// Compares the summand over every element of every coset; throws
/// WellDefinednessFailure with the offending representative.
void check_f_sum_well_defined(const FiniteSetting& s, const AutFunction& phi, const AdelePoint& g);

/// Identity plus seeded random points of B(A), or all of B(A) when it has at
/// most `exhaustive_up_to` elements.
std::vector<AdelePoint> test_points(const FiniteGroup& b, std::size_t count, std::uint64_t seed,
                                    std::size_t exhaustive_up_to = 0);

struct FSumReport {
  bool well_defined = true;
  bool invariant = true;
  std::size_t points = 0;
  std::size_t translations = 0;  // (point, gamma) pairs compared
  bool exhaustive = false;
  std::string diagnostic;
};

/// Well-definedness of f_sum and f_sum(gamma g) == f_sum(g) for gamma in
/// P_1(k). Exhaustive over P_1(A) x P_1(k) when |P_1(A)| <= exhaustive_up_to,
/// otherwise `samples` random points against `samples` random gamma each.
FSumReport f_sum_checks(const FiniteSetting& s, const AutFunction& phi, std::size_t samples, std::uint64_t seed,
                        std::size_t exhaustive_up_to);

struct Prop1Report {
  bool holds = true;
  std::size_t characters = 0;
  std::size_t cosets = 0;
  std::size_t points = 0;
  std::optional<AdelePoint> witness;
  Value lhs;  // at the witness, or at the last point checked
  Value rhs;
};

/// Sum of the coefficients over rank-n2 characters of V_1 against the sum of
/// the F|V_1 coefficient over P_2(k)\H(k), at each point.
Prop1Report prop1_orbit_identity(const FiniteSetting& s, const AutFunction& phi, const std::vector<AdelePoint>& points);

/// phi(g) == sum over all V_1 characters of the coefficient at g.
bool fourier_inversion_holds(const FiniteSetting& s, const AutFunction& phi, const std::vector<AdelePoint>& points);

struct Prop1Options {
  std::size_t points = 8;  // random points per seed when not exhaustive
  std::size_t exhaustive_up_to = 1000;
  std::size_t f_sum_samples = 4;
};

struct Prop1Run {
  std::uint64_t seed = 0;
  Prop1Report prop1;
  bool fourier_inversion = false;
  FSumReport f_sum;
};

struct Prop1Battery {
  std::vector<Prop1Run> runs;
  bool stabilizer_matches = false;  // P_2(E) equals the brute-force stabilizer
  bool pass = false;
};

/// For each seed: phi = random_automorphic(P_1, seed), then the orbit
/// identity, Fourier inversion and the f_sum checks on the same points.
Prop1Battery prop1_battery(const FiniteSetting& s, const std::vector<std::uint64_t>& seeds, Prop1Options opts = {});

enum class AfSign { kNegated, kPlus };
std::string to_string(AfSign s);

struct UnfoldOptions {
  int chi = 0;
  // Sign of the AF used for the coefficient of phi'. The V^1(A)-invariance
  // of the right-hand integrand forces kNegated once q > 2.
  AfSign sign = AfSign::kNegated;
  // Defaults to the replacement rule: upper-left, swapped to lower-right when
  // k_1 = 1.
  std::optional<Corner> corner;
  std::size_t invariance_samples = 6;
};

struct UnfoldReport {
  Value lhs;  // measures compatible with the unfolding
  Value rhs;
  std::optional<Value> ratio;
  Value lhs_average;  // plain averages over the quotients
  Value rhs_average;
  std::optional<Value> average_ratio;
  int reduced_n1 = 0;  // pair and corner of the tower used for phi'
  int reduced_n2 = 0;
  Corner corner = Corner::kUpperLeft;
  AfSign sign = AfSign::kNegated;
};

/// The reduced tower for phi' per the replacement rule with the given corner.
Tower reduced_tower(int n1, int n2, std::optional<Corner> corner = std::nullopt);

/// Corner conventions whose reduced tower has the same V positions and F
/// support as V^1 and F|V^1 read inside the GL_n1 block.
std::vector<Corner> matching_corners(const FiniteSetting& s);

/// Both sides of the unfolding identity for one pair (phi, phi'). phi must be
/// central-invariant on P_1 and phi' scalar-invariant on GL_n1. Throws
/// IntegrandNotInvariant when either integrand fails its invariance spot
/// checks, and SizeLimit above FiniteLimits::max_unfold_n.
UnfoldReport unfolding_check(const FiniteSetting& s, const AutFunction& phi, const AutFunction& phi_prime,
                             UnfoldOptions opts = {}, FiniteLimits limits = {});

/// GL_n1(E) as a shared group, for phi'.
std::shared_ptr<const FiniteGroup> gl_block(const FiniteSetting& s);

struct UnfoldRun {
  std::uint64_t seed = 0;
  UnfoldReport report;
};

struct UnfoldBattery {
  std::vector<UnfoldRun> runs;
  std::optional<Value> constant;  // the common lhs/rhs ratio
  bool constant_ratio = false;
  bool ratio_is_one = false;
  std::vector<Corner> corner_matches;
};

/// phi and phi' are seeded random functions, centrally projected.
UnfoldBattery unfolding_battery(const FiniteSetting& s, const std::vector<std::uint64_t>& seeds, UnfoldOptions opts = {},
                                FiniteLimits limits = {});

}  // namespace gltower::finite
