#pragma once

#include <string>
#include <vector>

#include "adtnc/gf.hpp"

namespace adtnc {

/* Polynomials in the delay indeterminate D over a finite field. Coefficients
 * are stored lowest degree first with no trailing zeros; the empty vector is
 * the zero polynomial. */
class Poly {
 public:
  Poly() = default;  // zero
  explicit Poly(const Fe& constant) {
    if (!constant.is_zero()) c_.push_back(constant);
  }
  explicit Poly(std::vector<Fe> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly one(const Gf* f) { return Poly(Fe(f, 1)); }
  static Poly monomial(const Fe& coeff, int deg);

  bool is_zero() const { return c_.empty(); }
  int degree() const { return int(c_.size()) - 1; }  // -1 for zero
  const Gf* field() const { return c_.empty() ? nullptr : c_.back().field(); }
  Fe coeff(int k) const {
    return (k >= 0 && k < int(c_.size())) ? c_[k] : Fe();
  }
  Fe lead() const { return c_.empty() ? Fe() : c_.back(); }

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  friend bool operator==(const Poly& a, const Poly& b);
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  // Quotient and remainder; divisor must be nonzero.
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
  Poly monic() const;

  // Multiply by D^k (k >= 0).
  Poly shifted(int k) const;
  // Drop every term of degree >= order.
  Poly truncated(int order) const;

  Fe eval(const Fe& at) const;

  std::string str() const;  // "0", "1+D+2*D^2", "D^3"

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    const Gf* f = field();
    if (f)  // bind embedded unbound zeros so coeff() stays field-consistent
      for (auto& c : c_)
        if (!c.field()) c = Fe(f, 0);
  }
  std::vector<Fe> c_;
};

// Monic greatest common divisor; gcd(0, 0) = 0.
Poly gcd(Poly a, Poly b);

// Multiplicative inverse of a as a power series, truncated below `order`:
// a * result = 1 (mod D^order). Requires a(0) != 0.
Poly series_inverse(const Poly& a, int order);

/* Rational functions num/den over GF(q)(D), kept canonical: gcd(num, den) = 1
 * and den monic; the zero element is 0/1. A default-constructed Rat is an
 * unbound zero that adopts the other operand's field. */
class Rat {
 public:
  Rat() = default;  // zero
  explicit Rat(const Fe& c) : Rat(Poly(c)) {}
  explicit Rat(Poly num) : num_(std::move(num)) {
    if (const Gf* f = num_.field()) den_ = Poly::one(f);
  }
  Rat(Poly num, Poly den);

  static Rat zero(const Gf* f) { return Rat(Poly(), Poly::one(f)); }
  static Rat one(const Gf* f) { return Rat(Poly::one(f)); }

  const Poly& num() const { return num_; }
  const Poly& den() const;  // empty only for the default-constructed zero
  bool is_zero() const { return num_.is_zero(); }
  const Gf* field() const {
    return num_.field() ? num_.field() : den_.field();
  }

  friend Rat operator+(const Rat& a, const Rat& b);
  friend Rat operator-(const Rat& a, const Rat& b);
  friend Rat operator*(const Rat& a, const Rat& b);
  friend Rat operator/(const Rat& a, const Rat& b);
  Rat operator-() const;
  Rat inverse() const;
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  friend bool operator==(const Rat& a, const Rat& b);
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }

  bool is_polynomial() const;
  // Power-series coefficients up to degree order-1; requires den(0) != 0.
  Poly series(int order) const;
  // Value at D = at; fails when the denominator vanishes there.
  Fe eval(const Fe& at) const;
  bool defined_at(const Fe& at) const;

  std::string str() const;  // "(num)/(den)"

 private:
  void normalize();
  Poly num_, den_;  // den_ empty only in the unbound zero
};

}  // namespace adtnc
