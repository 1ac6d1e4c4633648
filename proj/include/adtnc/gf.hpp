#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adtnc/error.hpp"
#include "adtnc/rng.hpp"

namespace adtnc {

/* Finite fields GF(p) for prime p < 2^16 and GF(2^m) for m <= 16.
 *
 * Elements are encoded as integers in [0, q): for GF(p) the residue itself,
 * for GF(2^m) the coefficient bit pattern of the representative polynomial
 * (bit i = coefficient of x^i). Extension fields reduce modulo a fixed,
 * published irreducible polynomial per degree; a custom modulus may be
 * supplied and is checked for irreducibility by trial division against all
 * monic polynomials of degree <= m/2.
 *
 * Instances are interned and immutable; the returned pointer stays valid for
 * the lifetime of the process and can be shared freely across threads.
 */
class Gf {
 public:
  static const Gf* get(uint32_t p, uint32_t m = 1);
  static const Gf* get(uint32_t p, uint32_t m, const std::vector<uint32_t>& modulus);
  // q must be a prime < 2^16 or a power of two <= 2^16.
  static const Gf* from_order(uint64_t q);

  uint32_t characteristic() const { return p_; }
  uint32_t degree() const { return m_; }
  uint32_t order() const { return q_; }
  // Coefficients of the reduction modulus, lowest degree first, length m+1.
  // Empty for prime fields.
  std::vector<uint32_t> modulus() const;

  uint32_t add(uint32_t a, uint32_t b) const {
    check(a), check(b);
    return m_ == 1 ? (a + b) % p_ : (a ^ b);
  }
  uint32_t sub(uint32_t a, uint32_t b) const {
    check(a), check(b);
    return m_ == 1 ? (a + p_ - b) % p_ : (a ^ b);
  }
  uint32_t neg(uint32_t a) const {
    check(a);
    return m_ == 1 ? (p_ - a) % p_ : a;
  }
  uint32_t mul(uint32_t a, uint32_t b) const;
  uint32_t pow(uint32_t a, uint64_t e) const;
  uint32_t inv(uint32_t a) const;
  uint32_t div(uint32_t a, uint32_t b) const { return mul(a, inv(b)); }

  uint32_t uniform(SplitRng& rng) const { return uint32_t(rng.bounded(q_)); }

  // Base-p digits of the encoding, lowest first, length m.
  std::vector<uint32_t> coeffs(uint32_t v) const;

  std::string describe() const;  // "GF(2^8)" / "GF(5)"

 private:
  Gf(uint32_t p, uint32_t m, uint32_t mod_bits);

  void check(uint32_t v) const {
    if (v >= q_) throw UsageError("field value out of range for " + describe());
  }

  uint32_t p_, m_, q_;
  uint32_t mod_bits_;  // bit pattern incl. the x^m term; 0 for prime fields
};

/* Field element: a value bound to its field. The default-constructed element
 * is an unbound zero that adopts the other operand's field, which makes
 * accumulator loops natural. Only zero may be unbound.
 */
class Fe {
 public:
  Fe() = default;
  Fe(const Gf* f, uint32_t v) : f_(f), v_(v) {
    if (!f_) throw UsageError("Fe: null field");
    if (v_ >= f_->order()) throw UsageError("Fe: value out of range");
  }

  const Gf* field() const { return f_; }
  uint32_t value() const { return v_; }
  bool is_zero() const { return v_ == 0; }

  Fe zero_like() const { return f_ ? Fe(f_, 0) : Fe(); }

  friend Fe operator+(const Fe& a, const Fe& b) {
    const Gf* f = join(a, b);
    return f ? Fe(f, f->add(a.v_, b.v_)) : Fe();
  }
  friend Fe operator-(const Fe& a, const Fe& b) {
    const Gf* f = join(a, b);
    return f ? Fe(f, f->sub(a.v_, b.v_)) : Fe();
  }
  friend Fe operator*(const Fe& a, const Fe& b) {
    const Gf* f = join(a, b);
    return f ? Fe(f, f->mul(a.v_, b.v_)) : Fe();
  }
  friend Fe operator/(const Fe& a, const Fe& b) {
    const Gf* f = join(a, b);
    if (!f) throw ArithmeticError("division by zero");
    return Fe(f, f->div(a.v_, b.v_));
  }
  Fe operator-() const { return f_ ? Fe(f_, f_->neg(v_)) : Fe(); }
  Fe inverse() const {
    if (!f_ || v_ == 0) throw ArithmeticError("inverse of zero");
    return Fe(f_, f_->inv(v_));
  }
  Fe& operator+=(const Fe& o) { return *this = *this + o; }
  Fe& operator-=(const Fe& o) { return *this = *this - o; }
  Fe& operator*=(const Fe& o) { return *this = *this * o; }

  friend bool operator==(const Fe& a, const Fe& b) {
    if (a.v_ == 0 && b.v_ == 0) return true;
    if (a.f_ && b.f_ && a.f_ != b.f_)
      throw UsageError("comparing elements of different fields");
    return a.v_ == b.v_;
  }
  friend bool operator!=(const Fe& a, const Fe& b) { return !(a == b); }

  std::string str() const { return std::to_string(v_); }

 private:
  // Operands must agree on the field; unbound zeros adopt. Returns nullptr
  // only when both sides are unbound zeros.
  static const Gf* join(const Fe& a, const Fe& b) {
    if (a.f_ && b.f_ && a.f_ != b.f_)
      throw UsageError("mixing elements of different fields");
    return a.f_ ? a.f_ : b.f_;
  }

  const Gf* f_ = nullptr;
  uint32_t v_ = 0;
};

// Embeds v from a subfield into an extension of it. Supported when both fields
// share characteristic 2 and degree(small) divides degree(big), or the fields
// coincide. The image of the small field's generator is cached per field pair.
uint32_t embed(const Gf* small, const Gf* big, uint32_t v);

}  // namespace adtnc
