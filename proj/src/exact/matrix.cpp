#include "gltower/exact/matrix.hpp"

#include <random>

namespace gltower {

RationalMatrix random_invertible(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DimensionMismatch("random_invertible needs n >= 1");
  // mt19937_64 output is fixed by the standard; the reduction to {-2..2} is
  // done by hand so results do not depend on the library's distributions.
  std::mt19937_64 gen(seed);
  while (true) {
    RationalMatrix m(n, n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) = static_cast<long>(gen() % 5) - 2;
      }
    }
    if (rank(m) == n) return m;
  }
}

RationalMatrix rational_matrix(const std::vector<std::vector<long>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  RationalMatrix m(r, c, Rational(0));
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw DimensionMismatch("ragged row list");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

namespace {

template <class T>
constexpr bool kIsField = ExactField<T>;

template <class T>
Matrix<T> column_matrix(const std::vector<T>& v, const T& zero) {
  Matrix<T> m(v.size(), 1, zero);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

}  // namespace

std::size_t rank(const ExactMatrix& m) {
  return std::visit(
      [](const auto& mat) -> std::size_t {
        using T = std::decay_t<decltype(mat(0, 0))>;
        if constexpr (kIsField<T>) {
          return rank(mat);
        } else {
          throw DomainError("rank requires a field; Z[zeta_p] is not one");
        }
      },
      m);
}

std::vector<ExactMatrix> kernel_basis(const ExactMatrix& m) {
  return std::visit(
      [](const auto& mat) -> std::vector<ExactMatrix> {
        using T = std::decay_t<decltype(mat(0, 0))>;
        if constexpr (kIsField<T>) {
          std::vector<ExactMatrix> out;
          for (const auto& v : kernel_basis(mat)) out.emplace_back(column_matrix(v, mat.zero()));
          return out;
        } else {
          throw DomainError("kernel requires a field; Z[zeta_p] is not one");
        }
      },
      m);
}

}  // namespace gltower
