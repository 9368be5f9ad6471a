#include "gltower/euclid.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>

#include "gltower/errors.hpp"

namespace gltower {

int DivisionChain::quotient_sum() const { return std::accumulate(quotients.begin(), quotients.end(), 0); }

DivisionChain euclid_chain(int n1, int n2, ChainOptions opts) {
  const std::string pair = "(" + std::to_string(n1) + "," + std::to_string(n2) + ")";
  const bool unit_pair = opts.allow_equal_unit_pair && n1 == 1 && n2 == 1;
  if (n2 < 1 || (n1 <= n2 && !unit_pair)) {
    throw InvalidPair("pair " + pair + " must satisfy n1 > n2 >= 1");
  }
  DivisionChain chain{n1, n2, {n1, n2}, {}};
  while (chain.remainders.back() != 0) {
    const int a = chain.remainders[chain.remainders.size() - 2];
    const int b = chain.remainders.back();
    chain.quotients.push_back(a / b);
    chain.remainders.push_back(a % b);
  }
  const int last_nonzero = chain.remainders[chain.remainders.size() - 2];
  if (last_nonzero != 1) {
    throw NotCoprime("pair " + pair + " is not coprime (gcd " + std::to_string(last_nonzero) + ")");
  }
  return chain;
}

std::vector<std::pair<int, int>> slow_euclid_pairs(const DivisionChain& chain) {
  std::vector<std::pair<int, int>> out;
  int a = chain.n1;
  int b = chain.n2;
  while (true) {
    out.emplace_back(a, b);
    if (a == b) break;
    if (a > b) {
      a -= b;
    } else {
      b -= a;
    }
  }
  return out;
}

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (int x : parts_) {
    if (x <= 0) throw DomainError("partition parts must be positive");
  }
  std::sort(parts_.begin(), parts_.end(), std::greater<>());
  n_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

Composition::Composition(std::vector<int> blocks) : blocks_(std::move(blocks)) {
  for (int x : blocks_) {
    if (x <= 0) throw DomainError("composition blocks must be positive");
  }
  n_ = std::accumulate(blocks_.begin(), blocks_.end(), 0);
}

Partition claimed_partition(const DivisionChain& chain) {
  const std::size_t s = chain.s();
  std::vector<int> parts;
  int prefix = 0;
  for (std::size_t j = 1; j <= s; ++j) {
    prefix += chain.k(j);
    const int value = prefix + (j == s ? 1 : 0);
    const int mult = chain.n(j + 1) - chain.n(j + 2);
    parts.insert(parts.end(), static_cast<std::size_t>(mult), value);
  }
  return Partition(std::move(parts));
}

Composition levi_blocks(const DivisionChain& chain) {
  const std::size_t s = chain.s();
  std::vector<int> blocks(static_cast<std::size_t>(chain.k(s) + 1), chain.n(s + 1));
  for (std::size_t j = s; j >= 2; --j) {
    blocks.insert(blocks.end(), static_cast<std::size_t>(chain.k(j - 1)), chain.n(j));
  }
  return Composition(std::move(blocks));
}

Partition richardson_partition(const Composition& blocks) {
  if (blocks.blocks().empty()) throw DomainError("empty composition");
  return transpose(Partition(blocks.blocks()));
}

Partition transpose(const Partition& p) {
  std::vector<int> t;
  const int largest = p.parts().empty() ? 0 : p.parts().front();
  for (int j = 1; j <= largest; ++j) {
    t.push_back(static_cast<int>(std::count_if(p.parts().begin(), p.parts().end(), [j](int x) { return x >= j; })));
  }
  return Partition(std::move(t));
}

long orbit_dim(const Partition& p) {
  const long n = p.size();
  long sq = 0;
  const Partition t = transpose(p);
  for (int x : t.parts()) sq += static_cast<long>(x) * x;
  return n * n - sq;
}

}  // namespace gltower
