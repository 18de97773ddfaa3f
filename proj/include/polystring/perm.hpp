#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "polystring/base.hpp"

namespace polystring {

// Permutation of {0, ..., n-1}, stored as its image vector. Composition is
// left-to-right: (a * b) applies a first, then b, so (a * b)[i] = b[a[i]].
class Perm {
 public:
  Perm() = default;
  explicit Perm(std::uint32_t n) : img_(n) { std::iota(img_.begin(), img_.end(), 0); }
  explicit Perm(std::vector<std::uint32_t> img) : img_(std::move(img)) {
    std::vector<bool> seen(img_.size(), false);
    for (std::uint32_t v : img_) {
      if (v >= img_.size() || seen[v]) throw BadFormat("not a permutation");
      seen[v] = true;
    }
  }

  static Perm identity(std::uint32_t n) { return Perm(n); }

  // Cycles use 0-based points; points absent from every cycle are fixed.
  static Perm from_cycles(std::uint32_t n, const std::vector<std::vector<std::uint32_t>>& cycles) {
    std::vector<std::uint32_t> img(n);
    std::iota(img.begin(), img.end(), 0);
    std::vector<bool> used(n, false);
    for (const auto& cyc : cycles) {
      for (std::uint32_t p : cyc) {
        if (p >= n) throw BadFormat("cycle point out of range");
        if (used[p]) throw BadFormat("cycles are not disjoint");
        used[p] = true;
      }
      for (std::size_t i = 0; i + 1 < cyc.size(); ++i) img[cyc[i]] = cyc[i + 1];
      if (!cyc.empty()) img[cyc.back()] = cyc.front();
    }
    return Perm(std::move(img));
  }

  std::uint32_t degree() const { return static_cast<std::uint32_t>(img_.size()); }
  std::uint32_t operator[](std::uint32_t p) const { return img_[p]; }
  const std::vector<std::uint32_t>& images() const { return img_; }

  bool is_identity() const {
    for (std::uint32_t i = 0; i < img_.size(); ++i)
      if (img_[i] != i) return false;
    return true;
  }

  Perm operator*(const Perm& o) const {
    if (degree() != o.degree()) throw DegreeMismatch("permutation degrees differ");
    std::vector<std::uint32_t> r(img_.size());
    for (std::uint32_t i = 0; i < img_.size(); ++i) r[i] = o.img_[img_[i]];
    Perm out;
    out.img_ = std::move(r);
    return out;
  }

  Perm inverse() const {
    std::vector<std::uint32_t> r(img_.size());
    for (std::uint32_t i = 0; i < img_.size(); ++i) r[img_[i]] = i;
    Perm out;
    out.img_ = std::move(r);
    return out;
  }

  Perm conjugated(const Perm& g) const { return g.inverse() * (*this) * g; }

  bool operator==(const Perm& o) const { return img_ == o.img_; }
  bool operator!=(const Perm& o) const { return img_ != o.img_; }
  bool operator<(const Perm& o) const { return img_ < o.img_; }

  // Order as lcm of cycle lengths.
  std::uint64_t order() const {
    std::uint64_t ord = 1;
    std::vector<bool> seen(img_.size(), false);
    for (std::uint32_t i = 0; i < img_.size(); ++i) {
      if (seen[i]) continue;
      std::uint64_t len = 0;
      std::uint32_t j = i;
      while (!seen[j]) { seen[j] = true; j = img_[j]; ++len; }
      std::uint64_t g = std::gcd(ord, len);
      if (ord / g > (1ULL << 62) / len) throw Overflow("permutation order overflows");
      ord = ord / g * len;
    }
    return ord;
  }

  bool is_involution() const {
    bool moved = false;
    for (std::uint32_t i = 0; i < img_.size(); ++i) {
      if (img_[img_[i]] != i) return false;
      if (img_[i] != i) moved = true;
    }
    return moved;
  }

  // Nontrivial cycles in standard form: each starts at its smallest point,
  // cycles sorted by that point.
  std::vector<std::vector<std::uint32_t>> cycles() const {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<bool> seen(img_.size(), false);
    for (std::uint32_t i = 0; i < img_.size(); ++i) {
      if (seen[i] || img_[i] == i) { seen[i] = true; continue; }
      std::vector<std::uint32_t> cyc;
      std::uint32_t j = i;
      while (!seen[j]) { seen[j] = true; cyc.push_back(j); j = img_[j]; }
      out.push_back(std::move(cyc));
    }
    return out;
  }

  std::uint32_t smallest_moved() const {
    for (std::uint32_t i = 0; i < img_.size(); ++i)
      if (img_[i] != i) return i;
    throw Error("identity moves no point");
  }

  std::size_t hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::uint32_t v : img_) {
      h ^= v;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }

 private:
  std::vector<std::uint32_t> img_;
};

struct PermHash {
  std::size_t operator()(const Perm& p) const { return p.hash(); }
};

inline bool commutes(const Perm& a, const Perm& b) {
  if (a.degree() != b.degree()) throw DegreeMismatch("permutation degrees differ");
  for (std::uint32_t i = 0; i < a.degree(); ++i)
    if (b[a[i]] != a[b[i]]) return false;
  return true;
}

// Order of a*b without materializing the product.
inline std::uint64_t product_order(const Perm& a, const Perm& b) {
  if (a.degree() != b.degree()) throw DegreeMismatch("permutation degrees differ");
  std::uint64_t ord = 1;
  std::vector<bool> seen(a.degree(), false);
  for (std::uint32_t i = 0; i < a.degree(); ++i) {
    if (seen[i]) continue;
    std::uint64_t len = 0;
    std::uint32_t j = i;
    while (!seen[j]) { seen[j] = true; j = b[a[j]]; ++len; }
    std::uint64_t g = std::gcd(ord, len);
    if (ord / g > (1ULL << 62) / len) throw Overflow("permutation order overflows");
    ord = ord / g * len;
  }
  return ord;
}

}  // namespace polystring
