#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "gltower/tower.hpp"

namespace gltower::finite {

inline constexpr int kMaxDim = 6;

/// Small square matrix over F_q, q prime. Entries live in [0, q).
class FqMat {
 public:
  FqMat() = default;
  FqMat(int n, std::uint32_t q);

  static FqMat identity(int n, std::uint32_t q);
  static FqMat scalar(int n, std::uint32_t q, std::uint32_t c);

  int dim() const { return n_; }
  std::uint32_t modulus() const { return q_; }

  std::uint32_t operator()(int r, int c) const { return a_[static_cast<std::size_t>(r * n_ + c)]; }
  void set(int r, int c, std::int64_t v);

  FqMat operator*(const FqMat& o) const;
  bool operator==(const FqMat& o) const = default;

  std::uint32_t det() const;
  bool invertible() const { return det() != 0; }
  FqMat inverse() const;  // throws DomainError when singular

  // Top-left or bottom-right diagonal block.
  FqMat block(int start, int size) const;
  static FqMat block_diag(const FqMat& a, const FqMat& b);

  /// Base-q digits of the entries, row-major. Injective for fixed (n, q).
  std::uint64_t code() const;

  std::string to_string() const;

 private:
  int n_ = 0;
  std::uint32_t q_ = 2;
  std::array<std::uint8_t, kMaxDim * kMaxDim> a_{};
};

std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t q);

/// A finite matrix group, listed in a fixed order, with O(1) membership.
class FiniteGroup {
 public:
  FiniteGroup() = default;
  FiniteGroup(std::string name, int n, std::uint32_t q, std::vector<FqMat> elements);

  const std::string& name() const { return name_; }
  int dim() const { return n_; }
  std::uint32_t modulus() const { return q_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<FqMat>& elements() const { return elements_; }
  const FqMat& operator[](std::size_t i) const { return elements_[i]; }

  bool contains(const FqMat& g) const { return index_.contains(g.code()); }
  // Throws DomainError when g is not in the group.
  std::size_t index_of(const FqMat& g) const;

  /// Every product of two elements lies in the group (exhaustive).
  bool closed() const;

 private:
  std::string name_;
  int n_ = 0;
  std::uint32_t q_ = 2;
  std::vector<FqMat> elements_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

struct EnumerationLimits {
  // Upper bound on the number of candidate matrices visited by any single
  // enumeration.
  std::uint64_t max_candidates = 2'000'000;
};

/// GL_n(F_q). Throws SizeLimit if q^(n^2) exceeds the limit.
FiniteGroup enumerate_gl(int n, std::uint32_t q, EnumerationLimits limits = {});

/// Invertible elements of the span of 0/1 patterns. The span must contain the
/// identity and be closed under multiplication; DomainError otherwise.
FiniteGroup units_of_span(const std::string& name, const std::vector<Pattern>& basis, int n, std::uint32_t q,
                          EnumerationLimits limits = {});

/// I + span(basis) for nilpotent patterns whose span is closed under
/// multiplication. This is the group of E-points of the unipotent group with
/// that Lie algebra.
FiniteGroup unipotent_group(const std::string& name, const std::vector<Pattern>& basis, int n, std::uint32_t q,
                            EnumerationLimits limits = {});

/// Nonzero scalar matrices.
FiniteGroup scalar_group(int n, std::uint32_t q);

/// The set {a b : a in A, b in B}, checked to be a group of size |A||B|.
FiniteGroup product_group(const std::string& name, const FiniteGroup& a, const FiniteGroup& b);

/// Representatives of the right cosets sub \ group, the first element of each
/// coset in the group's order. Verified complete and duplicate free.
std::vector<FqMat> coset_reps(const FiniteGroup& sub, const FiniteGroup& group);

/// Rank of a rectangular matrix over F_q given by rows.
int rank_mod(std::vector<std::vector<std::uint32_t>> rows, std::uint32_t q);

}  // namespace gltower::finite
