#include "adtnc/poly.hpp"

#include <algorithm>

namespace adtnc {

Poly Poly::monomial(const Fe& coeff, int deg) {
  if (deg < 0) throw UsageError("monomial degree must be >= 0");
  if (coeff.is_zero()) return Poly();
  std::vector<Fe> c(deg + 1, coeff.zero_like());
  c[deg] = coeff;
  return Poly(std::move(c));
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<Fe> c(std::max(a.c_.size(), b.c_.size()));
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(int(i)) + b.coeff(int(i));
  return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) {
  std::vector<Fe> c(std::max(a.c_.size(), b.c_.size()));
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(int(i)) - b.coeff(int(i));
  return Poly(std::move(c));
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<Fe> c(a.c_.size() + b.c_.size() - 1);
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return Poly(std::move(c));
}

Poly Poly::operator-() const {
  std::vector<Fe> c(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) c[i] = -c_[i];
  return Poly(std::move(c));
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.c_.size() != b.c_.size()) return false;
  for (size_t i = 0; i < a.c_.size(); ++i)
    if (a.c_[i] != b.c_[i]) return false;
  return true;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw ArithmeticError("polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly(), a};
  const Fe lead_inv = b.lead().inverse();
  std::vector<Fe> rem(a.c_);
  std::vector<Fe> quo(a.degree() - b.degree() + 1, lead_inv.zero_like());
  for (int k = a.degree() - b.degree(); k >= 0; --k) {
    Fe c = rem[k + b.degree()] * lead_inv;
    quo[k] = c;
    if (c.is_zero()) continue;
    for (int i = 0; i <= b.degree(); ++i)
      rem[k + i] = rem[k + i] - c * b.coeff(i);
  }
  return {Poly(std::move(quo)), Poly(std::move(rem))};
}

Poly Poly::monic() const {
  if (is_zero()) return Poly();
  const Fe s = lead().inverse();
  std::vector<Fe> c(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) c[i] = c_[i] * s;
  return Poly(std::move(c));
}

Poly Poly::shifted(int k) const {
  if (k < 0) throw UsageError("shift must be >= 0");
  if (is_zero()) return Poly();
  std::vector<Fe> c(c_.size() + size_t(k), c_[0].zero_like());
  std::copy(c_.begin(), c_.end(), c.begin() + k);
  return Poly(std::move(c));
}

Poly Poly::truncated(int order) const {
  if (order <= 0) return Poly();
  if (degree() < order) return *this;
  return Poly(std::vector<Fe>(c_.begin(), c_.begin() + order));
}

Fe Poly::eval(const Fe& at) const {
  Fe acc;
  for (int i = degree(); i >= 0; --i) acc = acc * at + c_[i];
  return acc;
}

std::string Poly::str() const {
  if (is_zero()) return "0";
  std::string out;
  for (int k = 0; k <= degree(); ++k) {
    const Fe c = c_[k];
    if (c.is_zero()) continue;
    if (!out.empty()) out += "+";
    const bool unit = c.value() == 1;
    if (k == 0)
      out += c.str();
    else if (k == 1)
      out += unit ? "D" : c.str() + "*D";
    else
      out += (unit ? "" : c.str() + "*") + std::string("D^") + std::to_string(k);
  }
  return out;
}

Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Poly series_inverse(const Poly& a, int order) {
  if (order <= 0) return Poly();
  const Fe a0 = a.coeff(0);
  if (a0.is_zero())
    throw ArithmeticError("series inverse needs a nonzero constant term");
  const Fe a0inv = a0.inverse();
  std::vector<Fe> b(size_t(order), a0inv.zero_like());
  b[0] = a0inv;
  for (int k = 1; k < order; ++k) {
    Fe s;
    for (int j = 1; j <= k; ++j) s += a.coeff(j) * b[k - j];
    b[k] = -(a0inv * s);
  }
  return Poly(std::move(b));
}

Rat::Rat(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw ArithmeticError("rational with zero denominator");
  normalize();
}

void Rat::normalize() {
  if (num_.is_zero()) {
    const Gf* f = den_.field();
    den_ = f ? Poly::one(f) : Poly();
    return;
  }
  Poly g = gcd(num_, den_);
  if (g.degree() > 0) {
    num_ = divmod(num_, g).first;
    den_ = divmod(den_, g).first;
  }
  const Fe s = den_.lead().inverse();
  num_ = num_ * Poly(s);
  den_ = den_ * Poly(s);
}

const Poly& Rat::den() const { return den_; }

namespace {
const Gf* rat_field(const Rat& a, const Rat& b) {
  const Gf* fa = a.field();
  const Gf* fb = b.field();
  if (fa && fb && fa != fb) throw UsageError("mixing rationals over different fields");
  return fa ? fa : fb;
}
}  // namespace

Rat operator+(const Rat& a, const Rat& b) {
  const Gf* f = rat_field(a, b);
  if (!f) return Rat();
  if (a.is_zero()) return b.is_zero() ? Rat::zero(f) : b;
  if (b.is_zero()) return a;
  return Rat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }

Rat Rat::operator-() const {
  if (is_zero()) return *this;
  return Rat(-num_, den_);
}

Rat operator*(const Rat& a, const Rat& b) {
  const Gf* f = rat_field(a, b);
  if (!f) return Rat();
  if (a.is_zero() || b.is_zero()) return Rat::zero(f);
  return Rat(a.num_ * b.num_, a.den_ * b.den_);
}

Rat operator/(const Rat& a, const Rat& b) { return a * b.inverse(); }

Rat Rat::inverse() const {
  if (is_zero()) throw ArithmeticError("inverse of the zero rational");
  return Rat(den_, num_);
}

bool operator==(const Rat& a, const Rat& b) {
  if (a.is_zero() && b.is_zero()) return true;
  return a.num_ == b.num_ && a.den_ == b.den_;
}

bool Rat::is_polynomial() const {
  return is_zero() || den_.degree() == 0;
}

Poly Rat::series(int order) const {
  if (is_zero()) return Poly();
  return (num_ * series_inverse(den_, order)).truncated(order);
}

Fe Rat::eval(const Fe& at) const {
  if (is_zero()) return at.zero_like();
  const Fe d = den_.eval(at);
  if (d.is_zero())
    throw ArithmeticError("rational undefined at evaluation point");
  return num_.eval(at) / d;
}

bool Rat::defined_at(const Fe& at) const {
  if (is_zero()) return true;
  return !den_.eval(at).is_zero();
}

std::string Rat::str() const {
  if (is_zero()) return "(0)/(1)";
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

}  // namespace adtnc
