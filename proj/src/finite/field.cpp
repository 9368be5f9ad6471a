#include "gltower/finite/field.hpp"

#include <set>
#include <sstream>

#include "gltower/errors.hpp"
#include "gltower/exact/scalar.hpp"

namespace gltower::finite {

namespace {

std::uint64_t checked_power(std::uint32_t q, std::size_t e, std::uint64_t limit) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (v > limit / q) return limit + 1;
    v *= q;
  }
  return v;
}

void require_field(std::uint32_t q) {
  if (!is_prime(q)) throw DomainError("modulus " + std::to_string(q) + " is not prime");
}

FqMat pattern_combination(const std::vector<Pattern>& basis, const std::vector<std::uint32_t>& coeffs, int n,
                          std::uint32_t q, bool add_identity) {
  FqMat m = add_identity ? FqMat::identity(n, q) : FqMat(n, q);
  for (std::size_t b = 0; b < basis.size(); ++b) {
    if (coeffs[b] == 0) continue;
    for (const auto& pos : basis[b]) m.set(pos.row, pos.col, m(pos.row, pos.col) + coeffs[b]);
  }
  return m;
}

// Coefficients of m over entry-disjoint patterns, if m is in their span.
bool in_span(const FqMat& m, const std::vector<Pattern>& basis) {
  const int n = m.dim();
  std::vector<bool> owned(static_cast<std::size_t>(n * n), false);
  for (const auto& p : basis) {
    const std::uint32_t v = m(p.front().row, p.front().col);
    for (const auto& pos : p) {
      owned[static_cast<std::size_t>(pos.row * n + pos.col)] = true;
      if (m(pos.row, pos.col) != v) return false;
    }
  }
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (!owned[static_cast<std::size_t>(r * n + c)] && m(r, c) != 0) return false;
  return true;
}

void require_disjoint(const std::vector<Pattern>& basis) {
  std::set<Position> seen;
  for (const auto& p : basis) {
    if (p.empty()) throw DomainError("empty pattern");
    for (const auto& pos : p)
      if (!seen.insert(pos).second) throw DomainError("patterns overlap");
  }
}

void require_algebra(const std::vector<Pattern>& basis, int n, std::uint32_t q) {
  std::vector<FqMat> mats;
  for (const auto& p : basis) {
    FqMat m(n, q);
    for (const auto& pos : p) m.set(pos.row, pos.col, 1);
    mats.push_back(m);
  }
  for (const auto& a : mats)
    for (const auto& b : mats)
      if (!in_span(a * b, basis)) throw DomainError("pattern span is not closed under multiplication");
}

template <class Keep>
std::vector<FqMat> enumerate_span(const std::vector<Pattern>& basis, int n, std::uint32_t q, bool add_identity,
                                  EnumerationLimits limits, Keep keep) {
  const std::uint64_t total = checked_power(q, basis.size(), limits.max_candidates);
  if (total > limits.max_candidates) {
    throw SizeLimit("enumeration of " + std::to_string(basis.size()) + " coordinates over F_" + std::to_string(q) +
                    " exceeds " + std::to_string(limits.max_candidates) + " candidates");
  }
  std::vector<FqMat> out;
  std::vector<std::uint32_t> coeffs(basis.size(), 0);
  for (std::uint64_t i = 0; i < total; ++i) {
    FqMat m = pattern_combination(basis, coeffs, n, q, add_identity);
    if (keep(m)) out.push_back(m);
    for (std::size_t d = 0; d < coeffs.size(); ++d) {
      if (++coeffs[d] < q) break;
      coeffs[d] = 0;
    }
  }
  return out;
}

}  // namespace

std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t q) {
  return inverse(ModP(a, q)).value();
}

FqMat::FqMat(int n, std::uint32_t q) : n_(n), q_(q) {
  if (n < 1 || n > kMaxDim) throw DomainError("matrix size " + std::to_string(n) + " outside 1.." + std::to_string(kMaxDim));
  if (q > 255) throw DomainError("modulus too large for the finite model");
}

FqMat FqMat::identity(int n, std::uint32_t q) { return scalar(n, q, 1); }

FqMat FqMat::scalar(int n, std::uint32_t q, std::uint32_t c) {
  FqMat m(n, q);
  for (int i = 0; i < n; ++i) m.set(i, i, c);
  return m;
}

void FqMat::set(int r, int c, std::int64_t v) {
  const auto q = static_cast<std::int64_t>(q_);
  a_[static_cast<std::size_t>(r * n_ + c)] = static_cast<std::uint8_t>(((v % q) + q) % q);
}

FqMat FqMat::operator*(const FqMat& o) const {
  if (n_ != o.n_ || q_ != o.q_) throw DimensionMismatch("F_q matrix product of incompatible operands");
  FqMat out(n_, q_);
  for (int r = 0; r < n_; ++r) {
    for (int c = 0; c < n_; ++c) {
      std::uint32_t acc = 0;
      for (int k = 0; k < n_; ++k) acc += (*this)(r, k) * o(k, c);
      out.a_[static_cast<std::size_t>(r * n_ + c)] = static_cast<std::uint8_t>(acc % q_);
    }
  }
  return out;
}

std::uint32_t FqMat::det() const {
  FqMat m = *this;
  std::uint64_t d = 1;
  for (int c = 0; c < n_; ++c) {
    int p = c;
    while (p < n_ && m(p, c) == 0) ++p;
    if (p == n_) return 0;
    if (p != c) {
      for (int j = 0; j < n_; ++j) {
        const std::uint32_t t = m(p, j);
        m.set(p, j, m(c, j));
        m.set(c, j, t);
      }
      d = (q_ - d % q_) % q_;
    }
    d = d * m(c, c) % q_;
    const std::uint32_t inv = mod_inverse(m(c, c), q_);
    for (int r = c + 1; r < n_; ++r) {
      const std::uint32_t f = m(r, c) * inv % q_;
      if (f == 0) continue;
      for (int j = c; j < n_; ++j) m.set(r, j, static_cast<std::int64_t>(m(r, j)) - static_cast<std::int64_t>(f * m(c, j)));
    }
  }
  return static_cast<std::uint32_t>(d);
}

FqMat FqMat::inverse() const {
  FqMat m = *this;
  FqMat inv = identity(n_, q_);
  for (int c = 0; c < n_; ++c) {
    int p = c;
    while (p < n_ && m(p, c) == 0) ++p;
    if (p == n_) throw DomainError("singular matrix over F_" + std::to_string(q_));
    for (int j = 0; j < n_; ++j) {
      std::uint32_t t = m(p, j);
      m.set(p, j, m(c, j));
      m.set(c, j, t);
      t = inv(p, j);
      inv.set(p, j, inv(c, j));
      inv.set(c, j, t);
    }
    const std::uint32_t s = mod_inverse(m(c, c), q_);
    for (int j = 0; j < n_; ++j) {
      m.set(c, j, m(c, j) * s);
      inv.set(c, j, inv(c, j) * s);
    }
    for (int r = 0; r < n_; ++r) {
      if (r == c || m(r, c) == 0) continue;
      const std::int64_t f = m(r, c);
      for (int j = 0; j < n_; ++j) {
        m.set(r, j, m(r, j) - f * m(c, j));
        inv.set(r, j, inv(r, j) - f * inv(c, j));
      }
    }
  }
  return inv;
}

FqMat FqMat::block(int start, int size) const {
  FqMat out(size, q_);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) out.set(r, c, (*this)(start + r, start + c));
  return out;
}

FqMat FqMat::block_diag(const FqMat& a, const FqMat& b) {
  if (a.q_ != b.q_) throw DomainError("block_diag over different fields");
  FqMat out(a.n_ + b.n_, a.q_);
  for (int r = 0; r < a.n_; ++r)
    for (int c = 0; c < a.n_; ++c) out.set(r, c, a(r, c));
  for (int r = 0; r < b.n_; ++r)
    for (int c = 0; c < b.n_; ++c) out.set(a.n_ + r, a.n_ + c, b(r, c));
  return out;
}

std::uint64_t FqMat::code() const {
  std::uint64_t v = 0;
  for (int i = n_ * n_ - 1; i >= 0; --i) v = v * q_ + a_[static_cast<std::size_t>(i)];
  return v;
}

std::string FqMat::to_string() const {
  std::ostringstream os;
  os << '[';
  for (int r = 0; r < n_; ++r) {
    os << (r ? ",[" : "[");
    for (int c = 0; c < n_; ++c) os << (c ? "," : "") << (*this)(r, c);
    os << ']';
  }
  os << ']';
  return os.str();
}

FiniteGroup::FiniteGroup(std::string name, int n, std::uint32_t q, std::vector<FqMat> elements)
    : name_(std::move(name)), n_(n), q_(q), elements_(std::move(elements)) {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (!index_.emplace(elements_[i].code(), i).second) throw DomainError(name_ + ": duplicate element");
  }
}

std::size_t FiniteGroup::index_of(const FqMat& g) const {
  auto it = index_.find(g.code());
  if (it == index_.end()) throw DomainError(g.to_string() + " is not in " + name_);
  return it->second;
}

bool FiniteGroup::closed() const {
  for (const auto& a : elements_)
    for (const auto& b : elements_)
      if (!contains(a * b)) return false;
  return true;
}

FiniteGroup enumerate_gl(int n, std::uint32_t q, EnumerationLimits limits) {
  require_field(q);
  std::vector<Pattern> all;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) all.push_back({{r, c}});
  auto elems = enumerate_span(all, n, q, false, limits, [](const FqMat& m) { return m.invertible(); });
  return FiniteGroup("GL_" + std::to_string(n), n, q, std::move(elems));
}

FiniteGroup units_of_span(const std::string& name, const std::vector<Pattern>& basis, int n, std::uint32_t q,
                          EnumerationLimits limits) {
  require_field(q);
  require_disjoint(basis);
  if (!in_span(FqMat::identity(n, q), basis)) throw DomainError(name + ": span does not contain the identity");
  require_algebra(basis, n, q);
  auto elems = enumerate_span(basis, n, q, false, limits, [](const FqMat& m) { return m.invertible(); });
  return FiniteGroup(name, n, q, std::move(elems));
}

FiniteGroup unipotent_group(const std::string& name, const std::vector<Pattern>& basis, int n, std::uint32_t q,
                            EnumerationLimits limits) {
  require_field(q);
  require_disjoint(basis);
  for (const auto& p : basis)
    for (const auto& pos : p)
      if (pos.row >= pos.col) throw DomainError(name + ": pattern is not strictly upper triangular");
  require_algebra(basis, n, q);
  auto elems = enumerate_span(basis, n, q, true, limits, [](const FqMat&) { return true; });
  return FiniteGroup(name, n, q, std::move(elems));
}

FiniteGroup scalar_group(int n, std::uint32_t q) {
  require_field(q);
  std::vector<FqMat> elems;
  for (std::uint32_t c = 1; c < q; ++c) elems.push_back(FqMat::scalar(n, q, c));
  return FiniteGroup("Z", n, q, std::move(elems));
}

FiniteGroup product_group(const std::string& name, const FiniteGroup& a, const FiniteGroup& b) {
  std::vector<FqMat> elems;
  std::set<std::uint64_t> seen;
  for (const auto& x : a.elements())
    for (const auto& y : b.elements()) {
      const FqMat p = x * y;
      if (seen.insert(p.code()).second) elems.push_back(p);
    }
  if (elems.size() != a.size() * b.size()) throw DomainError(name + ": factors intersect nontrivially");
  FiniteGroup g(name, a.dim(), a.modulus(), std::move(elems));
  // Closure on generators: every a-element times every b-element and back.
  for (const auto& x : a.elements())
    for (const auto& y : b.elements())
      if (!g.contains(y * x)) throw DomainError(name + ": product set is not a group");
  return g;
}

std::vector<FqMat> coset_reps(const FiniteGroup& sub, const FiniteGroup& group) {
  for (const auto& s : sub.elements())
    if (!group.contains(s)) throw DomainError(sub.name() + " is not contained in " + group.name());
  std::vector<bool> covered(group.size(), false);
  std::vector<FqMat> reps;
  for (std::size_t i = 0; i < group.size(); ++i) {
    if (covered[i]) continue;
    reps.push_back(group[i]);
    for (const auto& s : sub.elements()) {
      const std::size_t j = group.index_of(s * group[i]);
      if (covered[j]) throw DomainError(sub.name() + " is not a subgroup of " + group.name());
      covered[j] = true;
    }
  }
  if (reps.size() * sub.size() != group.size()) throw DomainError("coset decomposition is incomplete");
  return reps;
}

int rank_mod(std::vector<std::vector<std::uint32_t>> rows, std::uint32_t q) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] % q == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    const std::uint32_t inv = mod_inverse(rows[r][c] % q, q);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      const std::uint32_t f = rows[i][c] % q * inv % q;
      if (f == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) rows[i][j] = (rows[i][j] % q + q * q - f * (rows[r][j] % q)) % q;
    }
    ++r;
  }
  return static_cast<int>(r);
}

}  // namespace gltower::finite
