#include "gltower/exact/scalar.hpp"

#include <numeric>
#include <sstream>
#include <tuple>

namespace gltower {

Rational make_rational(long num, long den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

Rational inverse(const Rational& a) {
  if (sgn(a) == 0) throw DomainError("inverse of zero");
  return Rational(1) / a;
}

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------- ModP

ModP::ModP(std::int64_t value, std::uint32_t p) : p_(p) {
  if (!is_prime(p)) throw DomainError("modulus " + std::to_string(p) + " is not prime");
  std::int64_t r = value % static_cast<std::int64_t>(p);
  if (r < 0) r += p;
  value_ = static_cast<std::uint32_t>(r);
}

ModP ModP::operator+(const ModP& o) const {
  if (p_ != o.p_) throw DomainError("mixed prime fields");
  ModP r = *this;
  r.value_ = static_cast<std::uint32_t>((static_cast<std::uint64_t>(value_) + o.value_) % p_);
  return r;
}

ModP ModP::operator-(const ModP& o) const {
  if (p_ != o.p_) throw DomainError("mixed prime fields");
  ModP r = *this;
  r.value_ = static_cast<std::uint32_t>((static_cast<std::uint64_t>(value_) + p_ - o.value_) % p_);
  return r;
}

ModP ModP::operator*(const ModP& o) const {
  if (p_ != o.p_) throw DomainError("mixed prime fields");
  ModP r = *this;
  r.value_ = static_cast<std::uint32_t>((static_cast<std::uint64_t>(value_) * o.value_) % p_);
  return r;
}

ModP ModP::operator-() const {
  ModP r = *this;
  r.value_ = value_ == 0 ? 0 : p_ - value_;
  return r;
}

ModP inverse(const ModP& a) {
  if (a.is_zero()) throw DomainError("inverse of zero in F_p");
  // Extended Euclid on (value, p).
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = a.p_, new_r = a.value_;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
  }
  return ModP(t, a.p_);
}

std::string to_string(const ModP& a) { return std::to_string(a.value()); }

std::ostream& operator<<(std::ostream& os, const ModP& a) {
  return os << a.value() << " (mod " << a.modulus() << ")";
}

// ---------------------------------------------------------------- Cyclotomic

namespace {

std::uint32_t checked_order(std::uint32_t p) {
  if (!is_prime(p)) throw DomainError("cyclotomic order " + std::to_string(p) + " is not prime");
  return p;
}

}  // namespace

template <class Coeff>
Cyclotomic<Coeff>::Cyclotomic(std::uint32_t p) : p_(checked_order(p)), c_(p - 1) {}

template <class Coeff>
Cyclotomic<Coeff>::Cyclotomic(std::uint32_t p, const Coeff& scalar) : Cyclotomic(p) {
  c_[0] = scalar;
}

template <class Coeff>
Cyclotomic<Coeff>::Cyclotomic(std::uint32_t p, std::vector<Coeff> coeffs) : Cyclotomic(p) {
  if (coeffs.size() == p - 1) {
    c_ = std::move(coeffs);
  } else if (coeffs.size() == p) {
    c_ = fold(p, std::move(coeffs));
  } else {
    throw DimensionMismatch("cyclotomic coefficient vector has wrong length");
  }
}

template <class Coeff>
std::vector<Coeff> Cyclotomic<Coeff>::fold(std::uint32_t p, std::vector<Coeff> full) {
  const Coeff top = full[p - 1];
  full.pop_back();
  if (top != 0) {
    for (auto& x : full) x -= top;
  }
  return full;
}

template <class Coeff>
Cyclotomic<Coeff> Cyclotomic<Coeff>::zeta_power(std::uint32_t p, std::int64_t k) {
  std::vector<Coeff> full(p);
  std::int64_t e = k % static_cast<std::int64_t>(p);
  if (e < 0) e += p;
  full[static_cast<std::size_t>(e)] = 1;
  return Cyclotomic(p, std::move(full));
}

template <class Coeff>
bool Cyclotomic<Coeff>::is_zero() const {
  for (const auto& x : c_) {
    if (x != 0) return false;
  }
  return true;
}

template <class Coeff>
bool Cyclotomic<Coeff>::is_scalar() const {
  for (std::size_t i = 1; i < c_.size(); ++i) {
    if (c_[i] != 0) return false;
  }
  return true;
}

template <class Coeff>
void Cyclotomic<Coeff>::check_same(const Cyclotomic& o) const {
  if (p_ != o.p_) throw DomainError("mixed cyclotomic orders");
}

template <class Coeff>
Cyclotomic<Coeff>& Cyclotomic<Coeff>::operator+=(const Cyclotomic& o) {
  check_same(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

template <class Coeff>
Cyclotomic<Coeff>& Cyclotomic<Coeff>::operator-=(const Cyclotomic& o) {
  check_same(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

template <class Coeff>
Cyclotomic<Coeff> Cyclotomic<Coeff>::operator+(const Cyclotomic& o) const {
  Cyclotomic r = *this;
  r += o;
  return r;
}

template <class Coeff>
Cyclotomic<Coeff> Cyclotomic<Coeff>::operator-(const Cyclotomic& o) const {
  Cyclotomic r = *this;
  r -= o;
  return r;
}

template <class Coeff>
Cyclotomic<Coeff> Cyclotomic<Coeff>::operator-() const {
  Cyclotomic r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

template <class Coeff>
Cyclotomic<Coeff> Cyclotomic<Coeff>::operator*(const Cyclotomic& o) const {
  check_same(o);
  std::vector<Coeff> full(p_);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) {
      if (o.c_[j] == 0) continue;
      full[(i + j) % p_] += c_[i] * o.c_[j];
    }
  }
  Cyclotomic r(p_);
  r.c_ = fold(p_, std::move(full));
  return r;
}

template <class Coeff>
Cyclotomic<Coeff> Cyclotomic<Coeff>::scaled(const Coeff& s) const {
  Cyclotomic r = *this;
  for (auto& x : r.c_) x *= s;
  return r;
}

template <class Coeff>
Cyclotomic<Coeff> Cyclotomic<Coeff>::times_zeta(std::int64_t k) const {
  std::int64_t e = k % static_cast<std::int64_t>(p_);
  if (e < 0) e += p_;
  if (e == 0) return *this;
  std::vector<Coeff> full(p_);
  for (std::size_t i = 0; i < c_.size(); ++i) full[(i + static_cast<std::size_t>(e)) % p_] = c_[i];
  Cyclotomic r(p_);
  r.c_ = fold(p_, std::move(full));
  return r;
}

template <class Coeff>
Cyclotomic<Coeff> Cyclotomic<Coeff>::galois(std::uint32_t j) const {
  if (j % p_ == 0) throw DomainError("Galois exponent divisible by p");
  std::vector<Coeff> full(p_);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    full[(static_cast<std::uint64_t>(i) * j) % p_] += c_[i];
  }
  Cyclotomic r(p_);
  r.c_ = fold(p_, std::move(full));
  return r;
}

template class Cyclotomic<BigInt>;
template class Cyclotomic<Rational>;

CyclotomicRational to_rational(const CyclotomicInteger& a) {
  std::vector<Rational> c;
  c.reserve(a.coeffs().size());
  for (const auto& x : a.coeffs()) c.emplace_back(x);
  return CyclotomicRational(a.prime(), std::move(c));
}

Rational norm(const CyclotomicRational& a) {
  CyclotomicRational prod = a;
  for (std::uint32_t j = 2; j < a.prime(); ++j) prod *= a.galois(j);
  if (!prod.is_scalar()) throw DomainError("norm did not land in Q");
  return prod.coeffs()[0];
}

CyclotomicRational inverse(const CyclotomicRational& a) {
  if (a.is_zero()) throw DomainError("inverse of zero in Q(zeta_p)");
  CyclotomicRational conj(a.prime(), Rational(1));
  for (std::uint32_t j = 2; j < a.prime(); ++j) conj *= a.galois(j);
  const CyclotomicRational n = a * conj;
  return conj.scaled(Rational(1) / n.coeffs()[0]);
}

namespace {

template <class Coeff>
std::string render(const Cyclotomic<Coeff>& a) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    const auto& x = a.coeffs()[i];
    if (x == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0) {
      os << x.get_str();
    } else {
      if (x != 1) os << "(" << x.get_str() << ")*";
      os << "z";
      if (i > 1) os << "^" << i;
    }
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace

std::string to_string(const CyclotomicInteger& a) { return render(a); }
std::string to_string(const CyclotomicRational& a) { return render(a); }

std::ostream& operator<<(std::ostream& os, const CyclotomicInteger& a) { return os << render(a); }
std::ostream& operator<<(std::ostream& os, const CyclotomicRational& a) { return os << render(a); }

}  // namespace gltower
