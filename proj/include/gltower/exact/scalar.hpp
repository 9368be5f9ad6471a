#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "gltower/errors.hpp"

namespace gltower {

using BigInt = mpz_class;
// mpq_class keeps values canonical (lowest terms, positive denominator) through
// arithmetic; make_rational canonicalizes on construction.
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
std::string to_string(const Rational& r);

bool is_prime(std::uint32_t p);

/// Residue class modulo a prime p, stored in [0, p).
class ModP {
 public:
  ModP() = default;
  ModP(std::int64_t value, std::uint32_t p);

  std::uint32_t value() const { return value_; }
  std::uint32_t modulus() const { return p_; }
  bool is_zero() const { return value_ == 0; }

  ModP operator+(const ModP& o) const;
  ModP operator-(const ModP& o) const;
  ModP operator*(const ModP& o) const;
  ModP operator-() const;
  ModP& operator+=(const ModP& o) { return *this = *this + o; }
  ModP& operator-=(const ModP& o) { return *this = *this - o; }
  ModP& operator*=(const ModP& o) { return *this = *this * o; }

  bool operator==(const ModP& o) const = default;

  friend ModP inverse(const ModP& a);

 private:
  std::uint32_t value_ = 0;
  std::uint32_t p_ = 2;
};

/// Element of Z[zeta_p] (Coeff = BigInt) or Q(zeta_p) (Coeff = Rational) in
/// the power basis {1, zeta, ..., zeta^(p-2)}. The relation
/// zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2)) makes the coefficient vector
/// canonical, so equality is coefficient-wise.
template <class Coeff>
class Cyclotomic {
 public:
  Cyclotomic() = default;
  explicit Cyclotomic(std::uint32_t p);
  Cyclotomic(std::uint32_t p, const Coeff& scalar);
  Cyclotomic(std::uint32_t p, std::vector<Coeff> coeffs);

  static Cyclotomic zeta_power(std::uint32_t p, std::int64_t k);

  std::uint32_t prime() const { return p_; }
  const std::vector<Coeff>& coeffs() const { return c_; }
  bool is_zero() const;
  // True when the value lies in the prime subfield (only the constant term).
  bool is_scalar() const;

  Cyclotomic operator+(const Cyclotomic& o) const;
  Cyclotomic operator-(const Cyclotomic& o) const;
  Cyclotomic operator*(const Cyclotomic& o) const;
  Cyclotomic operator-() const;
  Cyclotomic& operator+=(const Cyclotomic& o);
  Cyclotomic& operator-=(const Cyclotomic& o);
  Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

  Cyclotomic scaled(const Coeff& s) const;
  // Multiplication by zeta^k; a permutation of the length-p representation.
  Cyclotomic times_zeta(std::int64_t k) const;
  // Galois automorphism zeta -> zeta^j, gcd(j, p) = 1.
  Cyclotomic galois(std::uint32_t j) const;

  bool operator==(const Cyclotomic& o) const { return p_ == o.p_ && c_ == o.c_; }

 private:
  void check_same(const Cyclotomic& o) const;
  // Length-p representation in Z[x]/(x^p - 1) folded back to the power basis.
  static std::vector<Coeff> fold(std::uint32_t p, std::vector<Coeff> full);

  std::uint32_t p_ = 2;
  std::vector<Coeff> c_ = std::vector<Coeff>(1);
};

using CyclotomicInteger = Cyclotomic<BigInt>;
using CyclotomicRational = Cyclotomic<Rational>;

CyclotomicRational to_rational(const CyclotomicInteger& a);
// Field inverse in Q(zeta_p): the product of the nontrivial Galois conjugates
// divided by the norm.
CyclotomicRational inverse(const CyclotomicRational& a);
Rational norm(const CyclotomicRational& a);

Rational inverse(const Rational& a);

std::string to_string(const ModP& a);
std::string to_string(const CyclotomicInteger& a);
std::string to_string(const CyclotomicRational& a);

std::ostream& operator<<(std::ostream& os, const ModP& a);
std::ostream& operator<<(std::ostream& os, const CyclotomicInteger& a);
std::ostream& operator<<(std::ostream& os, const CyclotomicRational& a);

// Zero and one in the same domain as a sample value; matrices use these to
// build identities without knowing the modulus statically.
inline Rational zero_like(const Rational&) { return Rational(0); }
inline Rational one_like(const Rational&) { return Rational(1); }
inline ModP zero_like(const ModP& a) { return ModP(0, a.modulus()); }
inline ModP one_like(const ModP& a) { return ModP(1, a.modulus()); }
template <class C>
Cyclotomic<C> zero_like(const Cyclotomic<C>& a) {
  return Cyclotomic<C>(a.prime());
}
template <class C>
Cyclotomic<C> one_like(const Cyclotomic<C>& a) {
  return Cyclotomic<C>(a.prime(), C(1));
}

inline bool is_zero(const Rational& a) { return sgn(a) == 0; }
inline bool is_zero(const ModP& a) { return a.is_zero(); }
template <class C>
bool is_zero(const Cyclotomic<C>& a) {
  return a.is_zero();
}

extern template class Cyclotomic<BigInt>;
extern template class Cyclotomic<Rational>;

}  // namespace gltower
