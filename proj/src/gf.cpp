#include "adtnc/gf.hpp"

#include <bit>
#include <map>
#include <mutex>
#include <tuple>

namespace adtnc {
namespace {

bool is_prime(uint32_t n) {
  if (n < 2) return false;
  for (uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

int gf2_deg(uint64_t a) { return a == 0 ? -1 : 63 - std::countl_zero(a); }

uint64_t gf2_mod(uint64_t a, uint64_t b) {
  int db = gf2_deg(b);
  for (int da = gf2_deg(a); da >= db; da = gf2_deg(a)) a ^= b << (da - db);
  return a;
}

// Trial division by every monic polynomial of degree 1..m/2 over GF(2).
bool gf2_irreducible(uint32_t mod_bits, uint32_t m) {
  for (uint32_t d = 1; 2 * d <= m; ++d)
    for (uint64_t q = uint64_t{1} << d; q < (uint64_t{2} << d); ++q)
      if (gf2_mod(mod_bits, q) == 0) return false;
  return true;
}

// Published irreducible (primitive) polynomials per degree, as bit patterns.
constexpr uint32_t kDefaultModulus[17] = {
    0,      0x3,    0x7,    0xB,    0x13,   0x25,   0x43,    0x83,   0x11D,
    0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003,  0x1100B};

struct Key {
  uint32_t p, m, mod;
  bool operator<(const Key& o) const {
    return std::tie(p, m, mod) < std::tie(o.p, o.m, o.mod);
  }
};

std::map<Key, const Gf*>& intern_table() {
  static std::map<Key, const Gf*> t;
  return t;
}
std::mutex& intern_mutex() {
  static std::mutex m;
  return m;
}

uint32_t modulus_to_bits(uint32_t p, uint32_t m, const std::vector<uint32_t>& coeffs) {
  if (coeffs.size() != m + 1)
    throw UsageError("field modulus must have m+1 coefficients");
  uint32_t bits = 0;
  for (uint32_t i = 0; i <= m; ++i) {
    uint32_t c = coeffs[i] % p;
    if (coeffs[i] > 1) throw UsageError("field modulus coefficients must be 0 or 1");
    if (c) bits |= uint32_t{1} << i;
  }
  if (!(bits >> m & 1)) throw UsageError("field modulus must be monic of degree m");
  return bits;
}

}  // namespace

Gf::Gf(uint32_t p, uint32_t m, uint32_t mod_bits)
    : p_(p), m_(m), q_(m == 1 ? p : (uint32_t{1} << m)), mod_bits_(mod_bits) {}

const Gf* Gf::get(uint32_t p, uint32_t m) {
  if (m > 1) {
    if (p != 2) throw UsageError("extension fields are supported for characteristic 2 only");
    if (m > 16) throw UsageError("GF(2^m) supported up to m = 16");
    return get(p, m, {});
  }
  return get(p, 1, {});
}

const Gf* Gf::get(uint32_t p, uint32_t m, const std::vector<uint32_t>& modulus) {
  if (m == 0) throw UsageError("field degree must be positive");
  if (p >= (uint32_t{1} << 16)) throw UsageError("field characteristic must be < 2^16");
  if (!is_prime(p)) throw UsageError("field characteristic must be prime");
  uint32_t mod_bits = 0;
  if (m > 1) {
    if (p != 2) throw UsageError("extension fields are supported for characteristic 2 only");
    if (m > 16) throw UsageError("GF(2^m) supported up to m = 16");
    mod_bits = modulus.empty() ? kDefaultModulus[m] : modulus_to_bits(p, m, modulus);
    if (!gf2_irreducible(mod_bits, m))
      throw UsageError("field modulus is reducible over GF(2)");
  } else if (!modulus.empty()) {
    throw UsageError("prime fields take no modulus");
  }

  Key key{p, m, mod_bits};
  std::lock_guard<std::mutex> lock(intern_mutex());
  auto& tab = intern_table();
  auto it = tab.find(key);
  if (it != tab.end()) return it->second;
  const Gf* f = new Gf(p, m, mod_bits);  // interned for process lifetime
  tab.emplace(key, f);
  return f;
}

const Gf* Gf::from_order(uint64_t q) {
  if (q >= 2 && (q & (q - 1)) == 0) {
    uint32_t m = uint32_t(std::countr_zero(q));
    return get(2, m);
  }
  if (q < (uint64_t{1} << 16) && is_prime(uint32_t(q))) return get(uint32_t(q), 1);
  throw UsageError("field order must be a prime < 2^16 or a power of two <= 2^16");
}

std::vector<uint32_t> Gf::modulus() const {
  std::vector<uint32_t> c;
  if (m_ == 1) return c;
  c.resize(m_ + 1);
  for (uint32_t i = 0; i <= m_; ++i) c[i] = mod_bits_ >> i & 1;
  return c;
}

uint32_t Gf::mul(uint32_t a, uint32_t b) const {
  check(a), check(b);
  if (m_ == 1) return uint32_t(uint64_t(a) * b % p_);
  // Carryless product, then reduction by the modulus bit pattern.
  uint64_t acc = 0, x = a;
  for (uint64_t y = b; y; y >>= 1, x <<= 1)
    if (y & 1) acc ^= x;
  for (int bit = gf2_deg(acc); bit >= int(m_); bit = gf2_deg(acc))
    acc ^= uint64_t(mod_bits_) << (bit - m_);
  return uint32_t(acc);
}

uint32_t Gf::pow(uint32_t a, uint64_t e) const {
  check(a);
  uint32_t r = m_ == 1 ? 1 % p_ : 1;
  uint32_t base = a;
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

uint32_t Gf::inv(uint32_t a) const {
  check(a);
  if (a == 0) throw ArithmeticError("inverse of zero in " + describe());
  return pow(a, uint64_t(q_) - 2);
}

std::vector<uint32_t> Gf::coeffs(uint32_t v) const {
  check(v);
  std::vector<uint32_t> c(m_);
  for (uint32_t i = 0; i < m_; ++i) {
    c[i] = v % p_;
    v /= p_;
  }
  return c;
}

std::string Gf::describe() const {
  if (m_ == 1) return "GF(" + std::to_string(p_) + ")";
  return "GF(2^" + std::to_string(m_) + ")";
}

uint32_t embed(const Gf* small, const Gf* big, uint32_t v) {
  if (small == big) return v;
  if (!small || !big) throw UsageError("embed: null field");
  if (small->characteristic() != 2 || big->characteristic() != 2 ||
      big->degree() % small->degree() != 0)
    throw UsageError("embed: " + small->describe() + " is not a subfield of " +
                     big->describe());

  static std::map<std::pair<const Gf*, const Gf*>, uint32_t> roots;
  static std::mutex mu;
  uint32_t root = 0;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = roots.find({small, big});
    if (it != roots.end()) {
      root = it->second;
    } else {
      // Smallest root of the small field's modulus inside the big field.
      auto mod = small->modulus();
      bool found = false;
      for (uint32_t r = 0; r < big->order() && !found; ++r) {
        uint32_t acc = 0, p = 1;
        for (uint32_t i = 0; i < mod.size(); ++i) {
          if (mod[i]) acc = big->add(acc, p);
          p = big->mul(p, r);
        }
        if (acc == 0) {
          root = r;
          found = true;
        }
      }
      if (!found) throw ArithmeticError("embed: no root of subfield modulus found");
      roots.emplace(std::make_pair(small, big), root);
    }
  }

  uint32_t acc = 0, p = 1;
  for (uint32_t i = 0; i < small->degree(); ++i) {
    if (v >> i & 1) acc = big->add(acc, p);
    p = big->mul(p, root);
  }
  return acc;
}

}  // namespace adtnc
