#pragma once

#include <string>
#include <vector>

#include "gltower/euclid.hpp"
#include "gltower/exact/matrix.hpp"
#include "gltower/tower.hpp"

namespace gltower {

/// Jordan type of a nilpotent matrix from the ranks of its powers:
/// #{blocks of size >= j} = rank(m^{j-1}) - rank(m^j). Throws NotNilpotent.
template <ExactField T>
Partition jordan_type(const Matrix<T>& m);

extern template Partition jordan_type(const Matrix<Rational>&);
extern template Partition jordan_type(const Matrix<ModP>&);

struct LemmaReport {
  int n1 = 0;
  int n2 = 0;
  Partition jordan_type_of_j;
  Partition claimed;
  Partition richardson;
  long dim_orbit = 0;
  int dim_df = 0;
  bool all_bullets_ok = false;
  bool verdict = false;
  std::string diagnostic;  // empty when verdict holds
};

struct LemmaOptions {
  // Checking every tower bullet dominates the cost of a report.
  bool check_bullets = true;
};

/// Never throws for a valid-looking pair: construction failures end up in a
/// report with verdict false and a diagnostic. Invalid or non-coprime pairs
/// still throw, since no report is meaningful for them.
LemmaReport verify_lemma(int n1, int n2, LemmaOptions opts = {});

/// Report for an already built (possibly modified) tower.
LemmaReport verify_lemma(const Tower& t, LemmaOptions opts = {});

/// Reports for every coprime n1 > n2 >= 1 with n1 + n2 <= max_n, ordered
/// lexicographically by (n1, n2). Pairs are evaluated concurrently.
std::vector<LemmaReport> scan_verify(int max_n, LemmaOptions opts = {});

/// The pairs scan_verify visits, in order.
std::vector<std::pair<int, int>> coprime_pairs(int max_n);

}  // namespace gltower
