#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "polystring/base.hpp"

namespace polystring {

// GF(p^k) with exact arithmetic. Elements are uint64 codes packing the
// little-endian coefficient vector in base p: code = c0 + c1*p + ... The
// modulus is the lexicographically smallest monic irreducible polynomial of
// degree k (coefficient vector compared constant term first), so a field
// built twice compares identically.
class Fq {
 public:
  using Elt = std::uint64_t;

  Fq(std::uint64_t p, std::uint32_t k = 1) : p_(p), k_(k) {
    if (k == 0) throw Error("extension degree must be at least 1");
    if (p < 2) throw NonPrime("characteristic must be a prime");
    size_ = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
      if (size_ > (1ULL << 40) / p) throw Overflow("field size p^k exceeds supported width");
      size_ *= p;
    }
    if (!is_prime(p)) throw NonPrime("characteristic " + std::to_string(p) + " is not prime");
    if (k_ > 1) modulus_ = smallest_irreducible();
    factor_into(size_ - 1, unit_factors_);
  }

  std::uint64_t p() const { return p_; }
  std::uint32_t k() const { return k_; }
  std::uint64_t size() const { return size_; }
  // Non-leading coefficients of the modulus, constant term first (empty for k=1).
  const std::vector<std::uint64_t>& modulus() const { return modulus_; }

  Elt zero() const { return 0; }
  Elt one() const { return 1; }

  Elt from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += static_cast<std::int64_t>(p_);
    return static_cast<Elt>(r);
  }

  std::vector<std::uint64_t> coeffs(Elt a) const {
    std::vector<std::uint64_t> c(k_);
    for (std::uint32_t i = 0; i < k_; ++i) { c[i] = a % p_; a /= p_; }
    return c;
  }

  Elt from_coeffs(const std::vector<std::uint64_t>& c) const {
    if (c.size() > k_) throw BadFormat("coefficient vector longer than extension degree");
    Elt a = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
      if (c[i] >= p_) throw BadFormat("coefficient not reduced mod p");
      a = a * p_ + c[i];
    }
    return a;
  }

  Elt add(Elt a, Elt b) const {
    if (k_ == 1) { Elt s = a + b; return s >= p_ ? s - p_ : s; }
    Elt out = 0, mul = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
      Elt s = a % p_ + b % p_;
      if (s >= p_) s -= p_;
      out += s * mul;
      mul *= p_; a /= p_; b /= p_;
    }
    return out;
  }

  Elt neg(Elt a) const {
    if (k_ == 1) return a == 0 ? 0 : p_ - a;
    Elt out = 0, mul = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
      Elt d = a % p_;
      out += (d == 0 ? 0 : p_ - d) * mul;
      mul *= p_; a /= p_;
    }
    return out;
  }

  Elt sub(Elt a, Elt b) const { return add(a, neg(b)); }

  Elt mul(Elt a, Elt b) const {
    if (k_ == 1) return (a * b) % p_;
    std::uint64_t da[kMaxDeg], db[kMaxDeg], prod[2 * kMaxDeg - 1] = {0};
    for (std::uint32_t i = 0; i < k_; ++i) { da[i] = a % p_; a /= p_; }
    for (std::uint32_t i = 0; i < k_; ++i) { db[i] = b % p_; b /= p_; }
    for (std::uint32_t i = 0; i < k_; ++i)
      for (std::uint32_t j = 0; j < k_; ++j)
        prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
    // Reduce by the monic modulus: x^k = -modulus_ (as a vector).
    for (std::uint32_t d = 2 * k_ - 2; d >= k_; --d) {
      std::uint64_t c = prod[d];
      if (c == 0) continue;
      prod[d] = 0;
      for (std::uint32_t j = 0; j < k_; ++j) {
        std::uint64_t sub = c * modulus_[j] % p_;
        std::uint64_t& slot = prod[d - k_ + j];
        slot = (slot + p_ - sub) % p_;
      }
    }
    Elt out = 0;
    for (std::uint32_t i = k_; i-- > 0;) out = out * p_ + prod[i];
    return out;
  }

  Elt pow(Elt a, std::int64_t e) const {
    if (e < 0) { a = inv(a); e = -e; }
    Elt r = 1;
    std::uint64_t n = static_cast<std::uint64_t>(e);
    while (n) {
      if (n & 1) r = mul(r, a);
      a = mul(a, a);
      n >>= 1;
    }
    return r;
  }

  Elt inv(Elt a) const {
    if (a == 0) throw DivisionByZero("inverse of zero");
    return pow(a, static_cast<std::int64_t>(size_ - 2));
  }

  // Multiplicative order; divides p^k - 1.
  std::uint64_t order(Elt a) const {
    if (a == 0) throw DivisionByZero("order of zero");
    std::uint64_t o = size_ - 1;
    for (auto [f, m] : unit_factors_) {
      (void)m;
      while (o % f == 0 && pow(a, static_cast<std::int64_t>(o / f)) == 1) o /= f;
    }
    return o;
  }

  // Lexicographic comparison of coefficient vectors, constant term first.
  bool lex_less(Elt a, Elt b) const {
    if (k_ == 1) return a < b;
    for (std::uint32_t i = 0; i < k_; ++i) {
      std::uint64_t da = a % p_, db = b % p_;
      if (da != db) return da < db;
      a /= p_; b /= p_;
    }
    return false;
  }

  // Element with lex rank r (rank 0 is zero); inverse of lex ordering.
  Elt lex_element(std::uint64_t r) const {
    if (k_ == 1) return r;
    // digits of r in base p, most significant digit -> c0
    std::vector<std::uint64_t> c(k_);
    for (std::uint32_t i = k_; i-- > 0;) { c[i] = r % p_; r /= p_; }
    return from_coeffs(c);
  }

  // Canonical square root: the root whose coefficient vector is
  // lexicographically smaller, or nullopt for non-squares. sqrt(0) = 0.
  std::optional<Elt> sqrt(Elt a) const {
    if (a == 0) return Elt{0};
    if (p_ == 2) {
      // Squaring is the Frobenius, hence bijective.
      Elt r = a;
      for (std::uint32_t i = 1; i < k_; ++i) r = mul(r, r);
      return r;
    }
    std::uint64_t n = size_ - 1;
    if (pow(a, static_cast<std::int64_t>(n / 2)) != 1) return std::nullopt;
    Elt r = tonelli_shanks(a);
    Elt r2 = neg(r);
    if (lex_less(r2, r)) r = r2;
    return r;
  }

  // Lexicographically smallest element of exact multiplicative order n.
  Elt element_of_order(std::uint64_t n) const {
    if (n == 0) throw NoSuchOrder("order must be positive");
    if (n == 1) return 1;
    if ((size_ - 1) % n != 0) throw NoSuchOrder("no element of order " + std::to_string(n));
    std::vector<std::pair<std::uint64_t, std::uint32_t>> nf;
    factor_into(n, nf);
    auto exact = [&](Elt g) {
      for (auto [f, m] : nf) {
        (void)m;
        if (pow(g, static_cast<std::int64_t>(n / f)) == 1) return false;
      }
      return true;
    };
    std::uint64_t phi = n;
    for (auto [f, m] : nf) { (void)m; phi -= phi / f; }
    if (phi <= 100'000) {
      // Find one element of order n, then minimize over the phi(n) of them.
      Elt g = 0;
      for (std::uint64_t r = 1; r < size_; ++r) {
        Elt h = lex_element(r);
        Elt cand = pow(h, static_cast<std::int64_t>((size_ - 1) / n));
        if (cand != 1 && exact(cand)) { g = cand; break; }
      }
      if (g == 0) throw NoSuchOrder("order search failed");  // unreachable: group is cyclic
      Elt best = g;
      Elt cur = g;
      for (std::uint64_t j = 2; j <= n; ++j) {
        cur = mul(cur, g);
        if (j < n && std::gcd(j, n) == 1 && lex_less(cur, best)) best = cur;
      }
      return best;
    }
    // Dense orders: first hit of a direct scan is already the lex minimum.
    for (std::uint64_t r = 1; r < size_; ++r) {
      Elt h = lex_element(r);
      if (order(h) == n) return h;
    }
    throw NoSuchOrder("order search failed");
  }

  const std::vector<std::pair<std::uint64_t, std::uint32_t>>& unit_factors() const {
    return unit_factors_;
  }

  bool same_as(const Fq& o) const { return p_ == o.p_ && k_ == o.k_; }

 private:
  static constexpr std::uint32_t kMaxDeg = 40;  // p^k <= 2^40 forces k <= 40

  static bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

  static void factor_into(std::uint64_t n,
                          std::vector<std::pair<std::uint64_t, std::uint32_t>>& out) {
    for (std::uint64_t d = 2; d * d <= n; ++d) {
      if (n % d) continue;
      std::uint32_t m = 0;
      while (n % d == 0) { n /= d; ++m; }
      out.emplace_back(d, m);
    }
    if (n > 1) out.emplace_back(n, 1);
  }

  // --- dense polynomial helpers over GF(p), little-endian coefficient vectors ---

  static std::uint32_t poly_deg(const std::vector<std::uint64_t>& f) {
    std::uint32_t d = static_cast<std::uint32_t>(f.size());
    while (d > 0 && f[d - 1] == 0) --d;
    return d == 0 ? 0 : d - 1;
  }

  // Remainder of a mod b (b non-zero), in place on a copy.
  std::vector<std::uint64_t> poly_rem(std::vector<std::uint64_t> a,
                                      const std::vector<std::uint64_t>& b) const {
    std::uint32_t db = poly_deg(b);
    std::uint64_t lead_inv = mod_inv(b[db]);
    while (true) {
      std::uint32_t da = poly_deg(a);
      if ((da == 0 && a[0] == 0) || da < db) break;
      std::uint64_t c = a[da] * lead_inv % p_;
      for (std::uint32_t j = 0; j <= db; ++j) {
        std::uint64_t sub = c * b[j] % p_;
        std::uint64_t& slot = a[da - db + j];
        slot = (slot + p_ - sub) % p_;
      }
    }
    return a;
  }

  std::uint64_t mod_inv(std::uint64_t a) const {
    // p is prime, a != 0
    std::uint64_t r = 1, base = a % p_, e = p_ - 2;
    while (e) {
      if (e & 1) r = r * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return r;
  }

  // Lexicographically smallest monic irreducible of degree k over GF(p),
  // found by trial division against every monic polynomial of degree <= k/2.
  std::vector<std::uint64_t> smallest_irreducible() const {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < k_; ++i) count *= p_;
    for (std::uint64_t rank = 0; rank < count; ++rank) {
      // rank digits in base p, most significant digit -> constant coefficient,
      // matching the lex order on (c0,...,c_{k-1}).
      std::vector<std::uint64_t> f(k_ + 1, 0);
      std::uint64_t r = rank;
      for (std::uint32_t i = k_; i-- > 0;) { f[i] = r % p_; r /= p_; }
      f[k_] = 1;
      if (f[0] == 0) continue;  // divisible by x
      if (poly_is_irreducible(f)) return {f.begin(), f.begin() + k_};
    }
    throw Error("no irreducible polynomial found");  // unreachable
  }

  bool poly_is_irreducible(const std::vector<std::uint64_t>& f) const {
    std::uint32_t d = poly_deg(f);
    if (d == 1) return true;
    // Enumerate monic divisors degree 1..d/2.
    for (std::uint32_t e = 1; e <= d / 2; ++e) {
      std::uint64_t count = 1;
      for (std::uint32_t i = 0; i < e; ++i) count *= p_;
      for (std::uint64_t code = 0; code < count; ++code) {
        std::vector<std::uint64_t> g(e + 1);
        std::uint64_t r = code;
        for (std::uint32_t i = 0; i < e; ++i) { g[i] = r % p_; r /= p_; }
        g[e] = 1;
        auto rem = poly_rem(f, g);
        if (poly_deg(rem) == 0 && rem[0] == 0) return false;
      }
    }
    return true;
  }

  Elt tonelli_shanks(Elt a) const {
    std::uint64_t n = size_ - 1;
    std::uint64_t t = n, s = 0;
    while (t % 2 == 0) { t /= 2; ++s; }
    // find a non-residue, scanning in lex order
    Elt z = 0;
    for (std::uint64_t r = 1; r < size_; ++r) {
      Elt h = lex_element(r);
      if (pow(h, static_cast<std::int64_t>(n / 2)) != 1) { z = h; break; }
    }
    Elt c = pow(z, static_cast<std::int64_t>(t));
    Elt x = pow(a, static_cast<std::int64_t>((t + 1) / 2));
    Elt b = pow(a, static_cast<std::int64_t>(t));
    std::uint64_t m = s;
    while (b != 1) {
      std::uint64_t i = 0;
      Elt bb = b;
      while (bb != 1) { bb = mul(bb, bb); ++i; }
      Elt e = c;
      for (std::uint64_t j = 0; j + i + 1 < m; ++j) e = mul(e, e);
      x = mul(x, e);
      c = mul(e, e);
      b = mul(b, c);
      m = i;
    }
    return x;
  }

  std::uint64_t p_, size_;
  std::uint32_t k_;
  std::vector<std::uint64_t> modulus_;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> unit_factors_;
};

// Field embedding GF(p^j) -> GF(p^k) for j | k, mapping the subfield
// generator to the lexicographically smallest root of its modulus. Constants
// (degree-0 elements) map to themselves.
inline Fq::Elt embed(const Fq& sub, const Fq& sup, Fq::Elt a) {
  if (sub.p() != sup.p() || sup.k() % sub.k() != 0)
    throw Error("no embedding between these fields");
  if (sub.k() == 1) return a;
  if (sub.k() == sup.k()) {
    if (sub.modulus() != sup.modulus()) throw Error("incompatible moduli");
    return a;
  }
  if (sup.size() > 2'000'000)
    throw CapExceeded("embed-root-scan", sup.size(), 2'000'000);
  static std::map<std::tuple<std::uint64_t, std::uint32_t, std::uint32_t>, Fq::Elt> cache;
  static std::mutex mx;
  Fq::Elt root = 0;
  {
    std::lock_guard<std::mutex> lock(mx);
    auto key = std::make_tuple(sub.p(), sub.k(), sup.k());
    auto it = cache.find(key);
    if (it != cache.end()) {
      root = it->second;
    } else {
      bool found = false;
      for (std::uint64_t r = 0; r < sup.size() && !found; ++r) {
        Fq::Elt cand = sup.lex_element(r);
        // evaluate the subfield modulus at cand
        Fq::Elt acc = 1, val = 0;
        for (std::uint32_t i = 0; i < sub.k(); ++i) {
          val = sup.add(val, sup.mul(sub.modulus()[i], acc));
          acc = sup.mul(acc, cand);
        }
        val = sup.add(val, acc);  // monic leading term
        if (val == 0) { root = cand; found = true; }
      }
      if (!found) throw Error("embedding root not found");
      cache[key] = root;
    }
  }
  Fq::Elt out = 0, acc = 1;
  for (std::uint64_t c : sub.coeffs(a)) {
    out = sup.add(out, sup.mul(c, acc));
    acc = sup.mul(acc, root);
  }
  return out;
}

}  // namespace polystring
