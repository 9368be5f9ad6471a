#include "gltower/tower.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>

#include "gltower/errors.hpp"

namespace gltower {

namespace {

using Sparse = std::map<Position, Rational>;
using Range = std::vector<int>;

Range iota_range(int begin, int end) {
  Range r(static_cast<std::size_t>(end - begin));
  std::iota(r.begin(), r.end(), begin);
  return r;
}

Range slice(const Range& r, std::size_t begin, std::size_t end) {
  return Range(r.begin() + static_cast<std::ptrdiff_t>(begin), r.begin() + static_cast<std::ptrdiff_t>(end));
}

Sparse to_sparse(const Pattern& p) {
  Sparse s;
  for (const auto& pos : p) s[pos] += 1;
  return s;
}

Sparse product(const Sparse& a, const Sparse& b) {
  std::multimap<int, std::pair<int, const Rational*>> b_by_row;
  for (const auto& [pos, v] : b) b_by_row.emplace(pos.row, std::make_pair(pos.col, &v));
  Sparse out;
  for (const auto& [pa, va] : a) {
    auto [lo, hi] = b_by_row.equal_range(pa.col);
    for (auto it = lo; it != hi; ++it) out[{pa.row, it->second.first}] += va * *it->second.second;
  }
  std::erase_if(out, [](const auto& kv) { return sgn(kv.second) == 0; });
  return out;
}

Sparse bracket(const Sparse& a, const Sparse& b) {
  Sparse ab = product(a, b);
  for (const auto& [pos, v] : product(b, a)) ab[pos] -= v;
  std::erase_if(ab, [](const auto& kv) { return sgn(kv.second) == 0; });
  return ab;
}

/// Coordinates of `m` over entry-disjoint patterns, if m lies in their span.
class PatternSpan {
 public:
  explicit PatternSpan(const std::vector<Pattern>& basis) : size_(basis.size()) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (const auto& pos : basis[i]) {
        if (!owner_.emplace(pos, i).second) disjoint_ = false;
      }
      sizes_.push_back(basis[i].size());
    }
  }

  bool disjoint() const { return disjoint_; }

  std::optional<std::vector<Rational>> coordinates(const Sparse& m) const {
    std::vector<Rational> coords(size_);
    std::vector<std::size_t> hits(size_, 0);
    for (const auto& [pos, v] : m) {
      auto it = owner_.find(pos);
      if (it == owner_.end()) return std::nullopt;
      const std::size_t b = it->second;
      if (hits[b] == 0) {
        coords[b] = v;
      } else if (coords[b] != v) {
        return std::nullopt;
      }
      ++hits[b];
    }
    for (std::size_t b = 0; b < size_; ++b) {
      if (hits[b] != 0 && hits[b] != sizes_[b]) return std::nullopt;
    }
    return coords;
  }

 private:
  std::size_t size_;
  std::map<Position, std::size_t> owner_;
  std::vector<std::size_t> sizes_;
  bool disjoint_ = true;
};

Rational functional(const std::vector<AfTerm>& f, const Sparse& m) {
  Rational acc = 0;
  for (const auto& term : f) {
    auto it = m.find(term.pos);
    if (it != m.end()) acc += term.coeff * it->second;
  }
  return acc;
}

std::vector<Pattern> gl_patterns(const std::vector<Range>& copies) {
  std::vector<Pattern> out;
  const std::size_t m = copies.front().size();
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      Pattern p;
      for (const auto& R : copies) p.push_back({R[r], R[c]});
      out.push_back(std::move(p));
    }
  }
  return out;
}

RationalMatrix patterns_matrix(const std::vector<Pattern>& ps, int n) {
  RationalMatrix m(ps.size(), static_cast<std::size_t>(n * n), Rational(0));
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (const auto& pos : ps[i]) m(i, static_cast<std::size_t>(pos.row * n + pos.col)) += 1;
  }
  return m;
}

void sort_copies(std::vector<Range>& copies) {
  std::sort(copies.begin(), copies.end(), [](const Range& a, const Range& b) { return a.front() < b.front(); });
}

std::vector<Pattern> expected_stabilizer(const Tower& t, std::size_t i) {
  std::vector<Pattern> out =
      i + 1 < t.steps.size() ? t.steps[i + 1].p_lie_basis : t.final_stabilizer_basis;
  // Lie(P_{i+1}) already contains V_{i+1}; add V_i.
  const auto& v = t.steps[i].v_basis;
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

RationalMatrix stabilizer_equations(const Tower& t, std::size_t i) {
  const auto& st = t.steps.at(i);
  RationalMatrix m(st.v_basis.size(), st.p_lie_basis.size(), Rational(0));
  std::vector<Sparse> vs;
  for (const auto& v : st.v_basis) vs.push_back(to_sparse(v));
  for (std::size_t x = 0; x < st.p_lie_basis.size(); ++x) {
    const Sparse px = to_sparse(st.p_lie_basis[x]);
    for (std::size_t v = 0; v < vs.size(); ++v) m(v, x) = functional(st.f_restriction, bracket(px, vs[v]));
  }
  return m;
}

struct JordanWitness {
  std::vector<int> block_sizes;
  std::vector<int> order;  // order[j] = index placed at Jordan position j
};

// For a strictly upper triangular partial permutation matrix, arranges its
// chains e_c -> e_r -> ... -> 0 as Jordan blocks.
std::optional<JordanWitness> jordan_witness(const RationalMatrix& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<int> col_of_row(static_cast<std::size_t>(n), -1);
  std::vector<bool> col_used(static_cast<std::size_t>(n), false);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const Rational& x = m(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      if (sgn(x) == 0) continue;
      if (x != 1 || c <= r) return std::nullopt;
      if (col_of_row[static_cast<std::size_t>(r)] != -1 || col_used[static_cast<std::size_t>(c)]) return std::nullopt;
      col_of_row[static_cast<std::size_t>(r)] = c;
      col_used[static_cast<std::size_t>(c)] = true;
    }
  }
  JordanWitness w;
  // A chain ends at an index t whose column is empty (m e_t = 0).
  for (int t = 0; t < n; ++t) {
    bool column_empty = true;
    for (int r = 0; r < n; ++r) {
      if (col_of_row[static_cast<std::size_t>(r)] == t) column_empty = false;
    }
    if (!column_empty) continue;
    int len = 0;
    for (int x = t; x != -1; x = col_of_row[static_cast<std::size_t>(x)]) {
      w.order.push_back(x);
      ++len;
    }
    w.block_sizes.push_back(len);
  }
  if (static_cast<int>(w.order.size()) != n) return std::nullopt;
  return w;
}

bool is_weyl_jordan(const RationalMatrix& m) {
  const auto w = jordan_witness(m);
  if (!w) return false;
  // Rebuild sigma J_lambda sigma^{-1} and compare entrywise.
  const std::size_t n = m.rows();
  RationalMatrix rebuilt(n, n, Rational(0));
  std::size_t start = 0;
  for (int b : w->block_sizes) {
    for (std::size_t j = start; j + 1 < start + static_cast<std::size_t>(b); ++j) {
      rebuilt(static_cast<std::size_t>(w->order[j]), static_cast<std::size_t>(w->order[j + 1])) = 1;
    }
    start += static_cast<std::size_t>(b);
  }
  return rebuilt == m;
}

}  // namespace

std::string to_string(Corner c) { return c == Corner::kUpperLeft ? "upper-left" : "lower-right"; }

Rational AdditiveFunction::evaluate(const std::vector<Rational>& coords) const {
  if (coords.size() != domain_basis.size()) throw DimensionMismatch("coordinate vector does not match D_F");
  std::map<Position, Rational> coeff;
  for (const auto& term : support) coeff[term.pos] += term.coeff;
  Rational acc = 0;
  for (std::size_t b = 0; b < domain_basis.size(); ++b) {
    if (sgn(coords[b]) == 0) continue;
    for (const auto& pos : domain_basis[b]) {
      auto it = coeff.find(pos);
      if (it != coeff.end()) acc += coords[b] * it->second;
    }
  }
  return acc;
}

Tower build_tower_unchecked(int n1, int n2, TowerOptions opts) {
  Tower t;
  t.n1 = n1;
  t.n2 = n2;
  t.corner = opts.corner;
  t.chain = euclid_chain(n1, n2, {opts.allow_equal_unit_pair});
  const int n = n1 + n2;
  t.af.ambient = n;
  const int first = opts.corner == Corner::kUpperLeft ? n1 : n2;

  std::vector<Range> upper{iota_range(0, first)};
  std::vector<Range> lower{iota_range(first, n)};
  std::vector<std::pair<Range, Range>> v_copies{{upper.front(), lower.front()}};

  for (int index = 1;; ++index) {
    TowerStep st;
    st.index = index;
    const std::size_t u = upper.front().size();
    const std::size_t w = lower.front().size();
    st.rows = static_cast<int>(u);
    st.cols = static_cast<int>(w);
    st.upper_copies = upper;
    st.lower_copies = lower;
    for (std::size_t r = 0; r < u; ++r) {
      for (std::size_t c = 0; c < w; ++c) {
        Pattern p;
        for (const auto& [R, C] : v_copies) p.push_back({R[r], C[c]});
        // Generic character: the identity on the square corner of the Hom
        // block nearest the diagonal (bottom-left).
        const bool identity = u >= w ? r == u - w + c : r == c;
        if (identity) {
          for (const auto& pos : p) st.f_restriction.push_back({pos, Rational(1)});
        }
        st.v_basis.push_back(std::move(p));
      }
    }
    st.p_lie_basis = gl_patterns(upper);
    const auto lower_gl = gl_patterns(lower);
    st.p_lie_basis.insert(st.p_lie_basis.end(), lower_gl.begin(), lower_gl.end());
    st.p_lie_basis.insert(st.p_lie_basis.end(), st.v_basis.begin(), st.v_basis.end());

    t.af.support.insert(t.af.support.end(), st.f_restriction.begin(), st.f_restriction.end());
    t.af.domain_basis.insert(t.af.domain_basis.end(), st.v_basis.begin(), st.v_basis.end());
    t.steps.push_back(std::move(st));

    if (u == w) {
      if (u != 1) throw ConstructionFailure("descent reached a non-unit square pair");
      Pattern torus;
      for (const auto& R : upper) torus.push_back({R[0], R[0]});
      for (const auto& R : lower) torus.push_back({R[0], R[0]});
      std::sort(torus.begin(), torus.end());
      t.final_stabilizer_basis = {torus};
      break;
    }

    std::vector<Range> next_upper, next_lower;
    v_copies.clear();
    if (u > w) {
      // Stabilizer: upper block [[A, B], [0, Y]] with Y tied to the lower factor.
      for (const auto& R : upper) {
        next_upper.push_back(slice(R, 0, u - w));
        next_lower.push_back(slice(R, u - w, u));
        v_copies.emplace_back(slice(R, 0, u - w), slice(R, u - w, u));
      }
      next_lower.insert(next_lower.end(), lower.begin(), lower.end());
    } else {
      // Stabilizer: lower block [[Y, C], [0, D]] with Y tied to the upper factor.
      next_upper = upper;
      for (const auto& R : lower) {
        next_upper.push_back(slice(R, 0, u));
        next_lower.push_back(slice(R, u, w));
        v_copies.emplace_back(slice(R, 0, u), slice(R, u, w));
      }
    }
    sort_copies(next_upper);
    sort_copies(next_lower);
    upper = std::move(next_upper);
    lower = std::move(next_lower);
  }
  return t;
}

std::vector<std::vector<Rational>> lie_stabilizer(const Tower& t, std::size_t step) {
  return kernel_basis(stabilizer_equations(t, step));
}

OpenOrbitReport verify_open_orbit(const Tower& t, std::size_t step) {
  const auto& st = t.steps.at(step);
  OpenOrbitReport rep;
  rep.step = st.index;
  rep.dim_p = static_cast<int>(st.p_lie_basis.size());
  rep.dim_stabilizer = static_cast<int>(lie_stabilizer(t, step).size());
  // V_i is abelian, so its character space has dimension dim V_i.
  rep.dim_characters = st.dim_v();
  rep.open = rep.dim_p - rep.dim_stabilizer == rep.dim_characters;
  return rep;
}

StabilizerReport verify_stabilizer_bullet(const Tower& t, std::size_t step) {
  const auto& st = t.steps.at(step);
  StabilizerReport rep;
  rep.step = st.index;
  const RationalMatrix eqs = stabilizer_equations(t, step);
  const auto kernel = kernel_basis(eqs);
  rep.dim_stabilizer = static_cast<int>(kernel.size());

  const auto expected = expected_stabilizer(t, step);
  rep.dim_expected = static_cast<int>(rank(patterns_matrix(expected, t.n())));

  // Containment plus equal dimension is equality of subspaces.
  const PatternSpan p_span(st.p_lie_basis);
  rep.expected_inside = p_span.disjoint();
  for (const auto& e : expected) {
    if (!rep.expected_inside) break;
    const auto coords = p_span.coordinates(to_sparse(e));
    if (!coords) {
      rep.expected_inside = false;
      break;
    }
    for (std::size_t r = 0; r < eqs.rows() && rep.expected_inside; ++r) {
      Rational acc = 0;
      for (std::size_t x = 0; x < eqs.cols(); ++x) acc += eqs(r, x) * (*coords)[x];
      if (sgn(acc) != 0) rep.expected_inside = false;
    }
  }
  rep.equal = rep.expected_inside && rep.dim_expected == rep.dim_stabilizer;
  return rep;
}

bool verify_normal_abelian(const Tower& t, std::size_t step) {
  const auto& st = t.steps.at(step);
  const PatternSpan v_span(st.v_basis);
  if (!v_span.disjoint()) return false;
  std::vector<Sparse> vs;
  for (const auto& v : st.v_basis) vs.push_back(to_sparse(v));
  for (std::size_t a = 0; a < vs.size(); ++a) {
    for (std::size_t b = a + 1; b < vs.size(); ++b) {
      if (!bracket(vs[a], vs[b]).empty()) return false;
    }
  }
  for (const auto& p : st.p_lie_basis) {
    const Sparse sp = to_sparse(p);
    for (const auto& v : vs) {
      if (!v_span.coordinates(bracket(sp, v))) return false;
    }
  }
  return true;
}

bool entry_disjoint(const Tower& t) {
  std::set<Position> seen;
  for (const auto& st : t.steps) {
    for (const auto& p : st.v_basis) {
      for (const auto& pos : p) {
        if (!seen.insert(pos).second) return false;
      }
    }
  }
  return true;
}

bool bracket_closed(const Tower& t) {
  const PatternSpan span(t.af.domain_basis);
  if (!span.disjoint()) return false;
  std::vector<Sparse> basis;
  for (const auto& p : t.af.domain_basis) basis.push_back(to_sparse(p));
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (std::size_t b = a + 1; b < basis.size(); ++b) {
      if (!span.coordinates(bracket(basis[a], basis[b]))) return false;
    }
  }
  return true;
}

RationalMatrix project_to_step(const RationalMatrix& m, const TowerStep& step) {
  RationalMatrix out(m.rows(), m.cols(), Rational(0));
  for (const auto& beta : step.v_basis) {
    // <m, beta> / <beta, beta> with <X, Y> = tr(X Y^t).
    Rational pairing = 0;
    for (const auto& pos : beta) pairing += m(static_cast<std::size_t>(pos.row), static_cast<std::size_t>(pos.col));
    const Rational lambda = pairing / static_cast<long>(beta.size());
    for (const auto& pos : beta) out(static_cast<std::size_t>(pos.row), static_cast<std::size_t>(pos.col)) += lambda;
  }
  return out;
}

RationalMatrix af_dual_matrix(const Tower& t) {
  const auto n = static_cast<std::size_t>(t.n());
  RationalMatrix j(n, n, Rational(0));
  std::set<Position> domain_entries;
  for (const auto& b : t.af.domain_basis) domain_entries.insert(b.begin(), b.end());
  for (const auto& term : t.af.support) {
    if (!domain_entries.contains(term.pos)) throw NormalizationFailure("AF support entry outside Lie(D_F)");
    j(static_cast<std::size_t>(term.pos.row), static_cast<std::size_t>(term.pos.col)) += term.coeff;
  }
  for (const auto& st : t.steps) {
    const RationalMatrix pr = project_to_step(j, st);
    if (pr.is_zero_matrix()) continue;
    if (!is_weyl_jordan(pr)) {
      throw NormalizationFailure("projection of J_F to V_" + std::to_string(st.index) +
                                 " is not an upper triangular Weyl conjugate of a Jordan matrix");
    }
  }
  return j;
}

RationalMatrix lemma_j_matrix(const Tower& t) {
  const RationalMatrix jf = af_dual_matrix(t);
  const auto n = static_cast<std::size_t>(t.n());
  RationalMatrix j(n, n, Rational(0));
  for (const auto& st : t.steps) {
    const RationalMatrix pr = project_to_step(jf, st);
    for (const auto& beta : st.v_basis) {
      const Position first = *std::min_element(beta.begin(), beta.end());
      const Rational& v = pr(static_cast<std::size_t>(first.row), static_cast<std::size_t>(first.col));
      if (sgn(v) != 0) j(static_cast<std::size_t>(first.row), static_cast<std::size_t>(first.col)) = v;
    }
  }
  if (!matrix_power(j, static_cast<unsigned>(n)).is_zero_matrix()) {
    throw ConstructionFailure("J is not nilpotent");
  }
  return j;
}

int dim_df(const Tower& t) {
  int d = 0;
  for (const auto& st : t.steps) d += st.dim_v();
  return d;
}

Tower conjugate_by_permutation(const Tower& t, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != t.n()) throw DimensionMismatch("permutation has wrong size");
  auto map_pos = [&](Position p) { return Position{perm[static_cast<std::size_t>(p.row)], perm[static_cast<std::size_t>(p.col)]}; };
  auto map_pattern = [&](const Pattern& p) {
    Pattern out;
    for (const auto& pos : p) out.push_back(map_pos(pos));
    return out;
  };
  auto map_patterns = [&](const std::vector<Pattern>& ps) {
    std::vector<Pattern> out;
    for (const auto& p : ps) out.push_back(map_pattern(p));
    return out;
  };
  auto map_terms = [&](const std::vector<AfTerm>& ts) {
    std::vector<AfTerm> out;
    for (const auto& term : ts) out.push_back({map_pos(term.pos), term.coeff});
    return out;
  };
  auto map_copies = [&](const std::vector<Range>& cs) {
    std::vector<Range> out;
    for (const auto& R : cs) {
      Range m;
      for (int x : R) m.push_back(perm[static_cast<std::size_t>(x)]);
      out.push_back(std::move(m));
    }
    return out;
  };
  Tower out = t;
  for (auto& st : out.steps) {
    st.upper_copies = map_copies(st.upper_copies);
    st.lower_copies = map_copies(st.lower_copies);
    st.v_basis = map_patterns(st.v_basis);
    st.f_restriction = map_terms(st.f_restriction);
    st.p_lie_basis = map_patterns(st.p_lie_basis);
  }
  out.final_stabilizer_basis = map_patterns(t.final_stabilizer_basis);
  out.af.support = map_terms(t.af.support);
  out.af.domain_basis = map_patterns(t.af.domain_basis);
  return out;
}

bool is_whittaker_character(const Tower& t) {
  const int n = t.n();
  std::set<Position> domain;
  for (const auto& p : t.af.domain_basis) {
    if (p.size() != 1) return false;
    domain.insert(p.front());
  }
  if (static_cast<int>(domain.size()) != n * (n - 1) / 2) return false;
  for (const auto& pos : domain)
    if (pos.row >= pos.col) return false;
  if (static_cast<int>(t.af.support.size()) != n - 1) return false;
  std::set<Position> seen;
  for (const auto& term : t.af.support) {
    if (term.pos.col != term.pos.row + 1 || term.coeff != 1) return false;
    seen.insert(term.pos);
  }
  return static_cast<int>(seen.size()) == n - 1;
}

std::string check_tower(const Tower& t) {
  if (!entry_disjoint(t)) return "V_i are not entry-disjoint";
  if (!bracket_closed(t)) return "span of the V_i is not closed under the bracket";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& st = t.steps[i];
    const std::string where = "step " + std::to_string(st.index) + ": ";
    if (st.dim_v() != st.rows * st.cols) return where + "dim V_i differs from a_i * b_i";
    if (!verify_normal_abelian(t, i)) return where + "V_i is not an abelian normal subalgebra of Lie(P_i)";
    const auto open = verify_open_orbit(t, i);
    if (!open.open) return where + "character is not in the open orbit";
    const auto stab = verify_stabilizer_bullet(t, i);
    if (!stab.equal) return where + "stabilizer differs from Lie(P_{i+1}) + Lie(V_i)";
  }
  return {};
}

Tower build_tower(int n1, int n2, TowerOptions opts) {
  Tower t = build_tower_unchecked(n1, n2, opts);
  const std::string diag = check_tower(t);
  if (!diag.empty()) {
    throw ConstructionFailure("tower (" + std::to_string(n1) + "," + std::to_string(n2) + "): " + diag);
  }
  return t;
}

}  // namespace gltower
