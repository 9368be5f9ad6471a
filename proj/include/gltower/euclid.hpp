#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace gltower {

/// Division chain of the Euclidean algorithm for a coprime pair n1 > n2:
/// remainders n_1, ..., n_{s+2} with n_i = n_{i+1} k_i + n_{i+2},
/// n_{s+1} = 1 and n_{s+2} = 0.
struct DivisionChain {
  int n1 = 0;
  int n2 = 0;
  std::vector<int> remainders;  // n_1 .. n_{s+2}
  std::vector<int> quotients;   // k_1 .. k_s

  std::size_t s() const { return quotients.size(); }
  // 1-based accessors matching the usual indexing of the chain.
  int n(std::size_t i) const { return remainders.at(i - 1); }
  int k(std::size_t i) const { return quotients.at(i - 1); }
  int quotient_sum() const;

  bool operator==(const DivisionChain&) const = default;
};

struct ChainOptions {
  // Admit the degenerate (1,1) chain (s = 1, k_1 = 1). It shows up when the
  // reduced pair (n1 - n2, n2) of a smaller tower has equal entries.
  bool allow_equal_unit_pair = false;
};

/// Throws InvalidPair when n1 <= n2 or n2 < 1 and NotCoprime when the chain
/// ends above 1.
DivisionChain euclid_chain(int n1, int n2, ChainOptions opts = {});

/// The subtraction-only refinement of the chain: each division with quotient
/// k_i becomes k_i steps. Pairs are (rows, cols) of the successive Hom blocks,
/// so the larger coordinate is replaced by the difference at each step and the
/// orientation is kept, e.g. (3,2), (1,2), (1,1).
std::vector<std::pair<int, int>> slow_euclid_pairs(const DivisionChain& chain);

/// Weakly decreasing list of positive parts.
class Partition {
 public:
  Partition() = default;
  // Sorts the parts; throws DomainError for nonpositive parts.
  explicit Partition(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  int size() const { return n_; }
  std::size_t length() const { return parts_.size(); }

  bool operator==(const Partition&) const = default;

 private:
  std::vector<int> parts_;
  int n_ = 0;
};

/// Ordered list of positive block sizes (a Levi type).
class Composition {
 public:
  Composition() = default;
  explicit Composition(std::vector<int> blocks);

  const std::vector<int>& blocks() const { return blocks_; }
  int size() const { return n_; }

  bool operator==(const Composition&) const = default;

 private:
  std::vector<int> blocks_;
  int n_ = 0;
};

/// [(k_1+...+k_s+1)^{n_{s+1}}, (k_1+...+k_{s-1})^{n_s-n_{s+1}}, ..., k_1^{n_2-n_3}]
Partition claimed_partition(const DivisionChain& chain);

/// n_{s+1} repeated k_s + 1 times, then n_j repeated k_{j-1} times for
/// j = s down to 2.
Composition levi_blocks(const DivisionChain& chain);

/// Richardson orbit of the block parabolic: transpose of the sorted blocks.
Partition richardson_partition(const Composition& blocks);

Partition transpose(const Partition& p);

/// n^2 - sum of squared parts of the transpose.
long orbit_dim(const Partition& p);

}  // namespace gltower
