#include "gltower/orbit_lemma.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <thread>

#include "gltower/errors.hpp"
#include "gltower/tower.hpp"

namespace gltower {

template <ExactField T>
Partition jordan_type(const Matrix<T>& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("Jordan type of non-square matrix " + m.shape());
  const std::size_t n = m.rows();
  std::vector<std::size_t> ranks{n};
  Matrix<T> power = Matrix<T>::identity(n, m.zero());
  for (std::size_t j = 1; j <= n; ++j) {
    power = power * m;
    ranks.push_back(rank(power));
  }
  if (ranks.back() != 0) throw NotNilpotent("matrix is not nilpotent (rank of m^n is " + std::to_string(ranks.back()) + ")");
  // at_least[j] = number of blocks of size >= j
  std::vector<int> parts;
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t at_least = ranks[j - 1] - ranks[j];
    const std::size_t next = j < n ? ranks[j] - ranks[j + 1] : 0;
    parts.insert(parts.end(), at_least - next, static_cast<int>(j));
  }
  return Partition(std::move(parts));
}

template Partition jordan_type(const Matrix<Rational>&);
template Partition jordan_type(const Matrix<ModP>&);

LemmaReport verify_lemma(const Tower& t, LemmaOptions opts) {
  LemmaReport rep;
  rep.n1 = t.n1;
  rep.n2 = t.n2;
  rep.claimed = claimed_partition(t.chain);
  rep.richardson = richardson_partition(levi_blocks(t.chain));
  rep.dim_orbit = orbit_dim(rep.claimed);
  rep.dim_df = dim_df(t);
  try {
    if (opts.check_bullets) {
      rep.diagnostic = check_tower(t);
      rep.all_bullets_ok = rep.diagnostic.empty();
    } else {
      rep.all_bullets_ok = true;
    }
    rep.jordan_type_of_j = jordan_type(lemma_j_matrix(t));
  } catch (const Error& e) {
    rep.all_bullets_ok = false;
    rep.diagnostic = e.what();
    rep.verdict = false;
    return rep;
  }
  const bool partitions_agree = rep.jordan_type_of_j == rep.claimed && rep.claimed == rep.richardson;
  const bool dims_agree = rep.dim_orbit == 2L * rep.dim_df;
  rep.verdict = partitions_agree && dims_agree && rep.all_bullets_ok;
  if (rep.diagnostic.empty()) {
    if (!partitions_agree) rep.diagnostic = "partitions disagree";
    else if (!dims_agree) rep.diagnostic = "orbit dimension differs from 2 dim D_F";
  }
  return rep;
}

LemmaReport verify_lemma(int n1, int n2, LemmaOptions opts) {
  const DivisionChain chain = euclid_chain(n1, n2);
  try {
    return verify_lemma(build_tower_unchecked(n1, n2), opts);
  } catch (const Error& e) {
    LemmaReport rep;
    rep.n1 = n1;
    rep.n2 = n2;
    rep.claimed = claimed_partition(chain);
    rep.richardson = richardson_partition(levi_blocks(chain));
    rep.dim_orbit = orbit_dim(rep.claimed);
    rep.diagnostic = e.what();
    return rep;
  }
}

std::vector<std::pair<int, int>> coprime_pairs(int max_n) {
  std::vector<std::pair<int, int>> pairs;
  for (int n1 = 2; n1 < max_n; ++n1) {
    for (int n2 = 1; n2 < n1 && n1 + n2 <= max_n; ++n2) {
      if (std::gcd(n1, n2) == 1) pairs.emplace_back(n1, n2);
    }
  }
  return pairs;
}

std::vector<LemmaReport> scan_verify(int max_n, LemmaOptions opts) {
  if (max_n < 3) throw InvalidPair("scan bound must be at least 3");
  const auto pairs = coprime_pairs(max_n);
  std::vector<LemmaReport> out(pairs.size());
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  // Static round-robin split; each report lands at its own index, so the
  // order never depends on scheduling.
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < pairs.size(); i += workers) {
        out[i] = verify_lemma(pairs[i].first, pairs[i].second, opts);
      }
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

}  // namespace gltower
