#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include "polystring/base.hpp"
#include "polystring/perm.hpp"

namespace polystring {

struct BuildOptions {
  // When set, chain construction keeps strengthening until the chain order
  // matches; a mismatch that cannot be closed raises an Error.
  std::optional<std::uint64_t> expected_order;
  bool force_deterministic = false;
  bool force_random = false;
  std::uint64_t seed = 0x5eedULL;
  // At or below this degree the deterministic Schreier closure runs; above
  // it the seeded random-strengthening build is used.
  std::uint32_t deterministic_threshold = 4608;
  std::uint32_t consecutive_trivial = 48;
};

// Stabilizer chain with Schreier-vector transversals. Base points are the
// smallest moved points of the residues that created their levels, so the
// base is strictly increasing along the chain.
class StabChain {
 public:
  explicit StabChain(std::uint32_t degree) : degree_(degree) {}

  struct Level {
    std::uint32_t base = 0;
    std::vector<std::uint32_t> acting;  // pool indices of generators acting here
    std::vector<std::uint32_t> orbit;   // discovery order; orbit[0] == base
    std::vector<std::int32_t> via;      // per point: pool index, -1 root, -2 absent
    std::vector<std::uint32_t> parent;  // per point
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> children;
    // cursors for the incremental Schreier closure
    std::size_t done_orbit = 0, done_acting = 0;
  };

  std::uint32_t degree() const { return degree_; }
  const std::vector<Level>& levels() const { return levels_; }
  const Perm& pool_gen(std::uint32_t idx) const { return pool_[idx]; }

  std::vector<std::uint32_t> base_points() const {
    std::vector<std::uint32_t> b;
    for (const auto& L : levels_) b.push_back(L.base);
    return b;
  }

  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (const auto& L : levels_) {
      std::uint64_t s = L.orbit.size();
      if (o > (1ULL << 62) / s) throw Overflow("group order overflows");
      o *= s;
    }
    return o;
  }

  // x^(u_delta), walking the Schreier tree of level L.
  std::uint32_t up_image(const Level& L, std::uint32_t delta, std::uint32_t x) const {
    path_.clear();
    while (delta != L.base) {
      path_.push_back(static_cast<std::uint32_t>(L.via[delta]));
      delta = L.parent[delta];
    }
    for (std::size_t i = path_.size(); i-- > 0;) x = pool_[path_[i]][x];
    return x;
  }

  // y^(u_delta^{-1}).
  std::uint32_t down_image(const Level& L, std::uint32_t delta, std::uint32_t y) const {
    while (delta != L.base) {
      y = pool_inv_[static_cast<std::uint32_t>(L.via[delta])][y];
      delta = L.parent[delta];
    }
    return y;
  }

  // Explicit transversal element mapping the base point to delta.
  Perm transversal(const Level& L, std::uint32_t delta) const {
    path_.clear();
    while (delta != L.base) {
      path_.push_back(static_cast<std::uint32_t>(L.via[delta]));
      delta = L.parent[delta];
    }
    Perm u = Perm::identity(degree_);
    for (std::size_t i = path_.size(); i-- > 0;) u = u * pool_[path_[i]];
    return u;
  }

  // Reduces h in place through levels start.., multiplying away transversal
  // parts. Returns the first level whose orbit is missed, or levels count.
  std::uint32_t sift_from(Perm& h, std::uint32_t start) const {
    for (std::uint32_t l = start; l < levels_.size(); ++l) {
      const Level& L = levels_[l];
      std::uint32_t delta = h[L.base];
      if (delta == L.base) continue;
      if (L.via[delta] == -2) return l;
      while (delta != L.base) {
        h = h * pool_inv_[static_cast<std::uint32_t>(L.via[delta])];
        delta = h[L.base];
      }
    }
    return static_cast<std::uint32_t>(levels_.size());
  }

  // Point-tracked sift: necessary for membership; records the orbit point
  // reached at each level.
  bool point_sift(const Perm& g, std::vector<std::uint32_t>& deltas) const {
    deltas.resize(levels_.size());
    for (std::uint32_t l = 0; l < levels_.size(); ++l) {
      std::uint32_t x = g[levels_[l].base];
      for (std::uint32_t j = 0; j < l; ++j) x = down_image(levels_[j], deltas[j], x);
      if (levels_[l].via[x] == -2) return false;
      deltas[l] = x;
    }
    return true;
  }

  // Image of one point under the residue left by a successful point_sift.
  std::uint32_t residue_image(std::uint32_t gx, const std::vector<std::uint32_t>& deltas) const {
    for (std::uint32_t j = 0; j < levels_.size(); ++j)
      gx = down_image(levels_[j], deltas[j], gx);
    return gx;
  }

  // Exact membership by full residue computation.
  bool contains_full(const Perm& g) const {
    std::vector<std::uint32_t> deltas;
    if (!point_sift(g, deltas)) return false;
    Perm h = g;
    return sift_from(h, 0) == levels_.size() && h.is_identity();
  }

  // Exact membership when g and this chain's group both lie in an ambient
  // group with the given base: the sift residue fixes every chain base
  // point, so within the ambient group it is trivial iff it also fixes the
  // ambient base.
  bool contains(const Perm& g, const std::vector<std::uint32_t>& ambient_base) const {
    if (!point_sift(g, scratch_)) return false;
    for (std::uint32_t b : ambient_base)
      if (residue_image(g[b], scratch_) != b) return false;
    return true;
  }

  // Same membership test driven by precomputed images: base_imgs are the
  // images of this chain's base points under g, ambient_imgs those of
  // ambient_base. Avoids materializing g.
  bool contains_by_images(const std::vector<std::uint32_t>& base_imgs,
                          const std::vector<std::uint32_t>& ambient_imgs,
                          const std::vector<std::uint32_t>& ambient_base) const {
    scratch_.resize(levels_.size());
    for (std::uint32_t l = 0; l < levels_.size(); ++l) {
      std::uint32_t x = base_imgs[l];
      for (std::uint32_t j = 0; j < l; ++j) x = down_image(levels_[j], scratch_[j], x);
      if (levels_[l].via[x] == -2) return false;
      scratch_[l] = x;
    }
    for (std::size_t i = 0; i < ambient_base.size(); ++i)
      if (residue_image(ambient_imgs[i], scratch_) != ambient_base[i]) return false;
    return true;
  }

  // Sifts g and installs a nontrivial residue as a strong generator,
  // extending every affected orbit. Returns true if the chain grew.
  bool insert(Perm g) {
    std::uint32_t l = sift_from(g, 0);
    if (g.is_identity()) return false;
    if (l == levels_.size()) {
      Level L;
      L.base = g.smallest_moved();
      L.via.assign(degree_, -2);
      L.parent.assign(degree_, 0);
      L.children.assign(degree_, {});
      L.via[L.base] = -1;
      L.orbit.push_back(L.base);
      levels_.push_back(std::move(L));
    }
    std::uint32_t idx = static_cast<std::uint32_t>(pool_.size());
    pool_inv_.push_back(g.inverse());
    pool_.push_back(std::move(g));
    for (std::uint32_t j = 0; j <= l; ++j) {
      levels_[j].acting.push_back(idx);
      extend_orbit(j, idx);
    }
    return true;
  }

  // Incremental Schreier closure: when it finishes, every Schreier
  // generator of every level sifts to the identity, which makes the chain
  // exact. Intended for moderate degrees.
  void complete_deterministic() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::uint32_t l = 0; l < levels_.size(); ++l)
        if (close_level(l)) { changed = true; break; }
    }
  }

  // Seeded product-replacement strengthening; deterministic across runs.
  void strengthen_random(const std::vector<Perm>& gens, const BuildOptions& opt) {
    std::vector<Perm> r;
    for (const Perm& g : gens)
      if (!g.is_identity()) r.push_back(g);
    if (r.empty()) return;
    const std::size_t n0 = r.size();
    while (r.size() < 8) r.push_back(r[r.size() % n0]);
    Perm acc = Perm::identity(degree_);
    SplitMix64 rng(opt.seed);
    auto step = [&]() -> const Perm& {
      std::size_t i = rng.below(r.size());
      std::size_t j = rng.below(r.size() - 1);
      if (j >= i) ++j;
      if (rng.next() & 1) r[i] = r[i] * r[j];
      else r[i] = r[j] * r[i];
      if (rng.next() & 1) acc = acc * r[i];
      else acc = r[i] * acc;
      return acc;
    };
    for (int warm = 0; warm < 60; ++warm) step();
    const std::uint64_t target = opt.expected_order.value_or(0);
    std::uint32_t quiet = 0;
    std::uint64_t rounds = 0;
    while (true) {
      if (quiet >= opt.consecutive_trivial) {
        if (target == 0 || order() == target) break;
        if (order() > target) throw Error("chain order exceeds the expected order");
        quiet = 0;
      }
      if (++rounds > 2'000'000) throw Error("random strengthening failed to converge");
      if (insert(step())) quiet = 0;
      else ++quiet;
    }
  }

 private:
  void extend_orbit(std::uint32_t l, std::uint32_t new_gen) {
    Level& L = levels_[l];
    std::size_t frontier_start = L.orbit.size();
    for (std::size_t i = 0; i < frontier_start; ++i) {
      std::uint32_t x = L.orbit[i];
      std::uint32_t y = pool_[new_gen][x];
      if (L.via[y] == -2) {
        L.via[y] = static_cast<std::int32_t>(new_gen);
        L.parent[y] = x;
        L.children[x].push_back({y, new_gen});
        L.orbit.push_back(y);
      }
    }
    for (std::size_t i = frontier_start; i < L.orbit.size(); ++i) {
      std::uint32_t x = L.orbit[i];
      for (std::uint32_t e : L.acting) {
        std::uint32_t y = pool_[e][x];
        if (L.via[y] == -2) {
          L.via[y] = static_cast<std::int32_t>(e);
          L.parent[y] = x;
          L.children[x].push_back({y, e});
          L.orbit.push_back(y);
        }
      }
    }
  }

  // Processes the Schreier generators of level l not seen in earlier
  // passes. Returns true if the chain grew anywhere.
  bool close_level(std::uint32_t l) {
    // levels_ may reallocate whenever insert() runs, so the level is
    // re-addressed by index throughout.
    const std::size_t done_o = levels_[l].done_orbit, done_a = levels_[l].done_acting;
    const std::size_t acting0 = levels_[l].acting.size();
    bool grew = false;
    for (std::size_t oi = 0; oi < levels_[l].orbit.size(); ++oi) {
      std::size_t g0 = oi < done_o ? done_a : 0;
      for (std::size_t gi = g0; gi < levels_[l].acting.size(); ++gi) {
        const Level& L = levels_[l];
        std::uint32_t delta = L.orbit[oi];
        std::uint32_t e = L.acting[gi];
        std::uint32_t image = pool_[e][delta];
        // the tree edge's own Schreier generator is the identity
        if (L.via[image] == static_cast<std::int32_t>(e) && L.parent[image] == delta) continue;
        Perm s = transversal(L, delta) * pool_[e] * transversal(L, image).inverse();
        sift_from(s, l + 1);
        if (!s.is_identity()) {
          insert(std::move(s));
          grew = true;
        }
      }
    }
    // Pairs (oi, gi) with gi below the pass-entry acting size are covered
    // for every orbit index reached; later additions are re-swept.
    levels_[l].done_orbit = levels_[l].orbit.size();
    levels_[l].done_acting = grew ? acting0 : levels_[l].acting.size();
    return grew;
  }

  std::uint32_t degree_;
  std::vector<Level> levels_;
  std::vector<Perm> pool_, pool_inv_;
  mutable std::vector<std::uint32_t> path_;
  mutable std::vector<std::uint32_t> scratch_;

  friend class PermGroup;
};

class PermGroup {
 public:
  PermGroup(std::uint32_t degree, std::vector<Perm> gens, BuildOptions opt = {})
      : degree_(degree), gens_(std::move(gens)), chain_(degree) {
    for (const Perm& g : gens_)
      if (g.degree() != degree) throw DegreeMismatch("generator degree mismatch");
    bool deterministic = !opt.force_random &&
        (opt.force_deterministic || degree <= opt.deterministic_threshold);
    for (const Perm& g : gens_) chain_.insert(g);
    if (deterministic) {
      chain_.complete_deterministic();
      verified_ = true;
    } else {
      chain_.strengthen_random(gens_, opt);
      verified_ = opt.expected_order.has_value();
    }
    if (opt.expected_order && chain_.order() != *opt.expected_order)
      throw Error("group order " + std::to_string(chain_.order()) +
                  " does not match the expected " + std::to_string(*opt.expected_order));
    order_ = chain_.order();
  }

  std::uint32_t degree() const { return degree_; }
  const std::vector<Perm>& gens() const { return gens_; }
  const StabChain& chain() const { return chain_; }
  std::uint64_t order() const { return order_; }
  bool verified() const { return verified_; }
  void mark_verified(std::uint64_t expected) {
    if (order_ != expected)
      throw Error("group order " + std::to_string(order_) +
                  " does not match the expected " + std::to_string(expected));
    verified_ = true;
  }
  std::vector<std::uint32_t> base_points() const { return chain_.base_points(); }

  bool contains(const Perm& g) const {
    if (g.degree() != degree_) throw DegreeMismatch("element degree mismatch");
    return chain_.contains_full(g);
  }

  bool contains(const Perm& g, const std::vector<std::uint32_t>& ambient_base) const {
    if (g.degree() != degree_) throw DegreeMismatch("element degree mismatch");
    return chain_.contains(g, ambient_base);
  }

  // Streams every element exactly once (identity included). The callback
  // may return void, or false to stop early.
  template <typename F>
  void for_each_element(F&& f) const {
    const auto& levels = chain_.levels_;
    if (levels.empty()) {
      bool stop = false;
      call(f, Perm::identity(degree_), stop);
      return;
    }
    bool stop = false;
    std::function<void(int, const Perm&)> rec = [&](int l, const Perm& deeper) {
      if (stop) return;
      if (l < 0) { call(f, deeper, stop); return; }
      const StabChain::Level& L = levels[static_cast<std::size_t>(l)];
      std::function<void(std::uint32_t, const Perm&)> walk =
          [&](std::uint32_t pt, const Perm& u) {
            if (stop) return;
            rec(l - 1, deeper * u);
            for (auto [child, e] : L.children[pt]) {
              if (stop) return;
              walk(child, u * chain_.pool_[e]);
            }
          };
      walk(L.base, Perm::identity(degree_));
    };
    rec(static_cast<int>(levels.size()) - 1, Perm::identity(degree_));
  }

  // Streams the images of a fixed point tuple under every element without
  // materializing elements. The callback gets the image vector and must
  // return true to continue.
  template <typename F>
  void for_each_point_images(const std::vector<std::uint32_t>& points, F&& f) const {
    const auto& levels = chain_.levels_;
    std::vector<std::uint32_t> start(points);
    if (levels.empty()) { f(static_cast<const std::vector<std::uint32_t>&>(start)); return; }
    bool stop = false;
    std::function<void(int, const std::vector<std::uint32_t>&)> rec =
        [&](int l, const std::vector<std::uint32_t>& imgs) {
          if (stop) return;
          if (l < 0) {
            if (!f(imgs)) stop = true;
            return;
          }
          const StabChain::Level& L = levels[static_cast<std::size_t>(l)];
          std::function<void(std::uint32_t, const std::vector<std::uint32_t>&)> walk =
              [&](std::uint32_t pt, const std::vector<std::uint32_t>& v) {
                if (stop) return;
                rec(l - 1, v);
                for (auto [child, e] : L.children[pt]) {
                  if (stop) return;
                  std::vector<std::uint32_t> w(v.size());
                  for (std::size_t i = 0; i < v.size(); ++i) w[i] = chain_.pool_[e][v[i]];
                  walk(child, w);
                }
              };
          walk(L.base, imgs);
        };
    rec(static_cast<int>(levels.size()) - 1, start);
  }

  std::vector<Perm> elements(std::uint64_t cap) const {
    if (order_ > cap) throw CapExceeded("element-enumeration", order_, cap);
    std::vector<Perm> out;
    out.reserve(order_);
    for_each_element([&](const Perm& g) { out.push_back(g); });
    return out;
  }

 private:
  template <typename F>
  static void call(F& f, const Perm& g, bool& stop) {
    if constexpr (std::is_same_v<std::invoke_result_t<F&, const Perm&>, bool>) {
      if (!f(g)) stop = true;
    } else {
      f(g);
    }
  }

  std::uint32_t degree_;
  std::vector<Perm> gens_;
  StabChain chain_;
  std::uint64_t order_ = 1;
  bool verified_ = false;
};

// |A ∩ B| by streaming the smaller group's elements as point images and
// testing membership in the other through an ambient base. Both groups and
// the ambient base must belong to one verified ambient group.
inline std::uint64_t intersection_order(const PermGroup& A, const PermGroup& B,
                                        const std::vector<std::uint32_t>& ambient_base) {
  const PermGroup& small = A.order() <= B.order() ? A : B;
  const PermGroup& big = A.order() <= B.order() ? B : A;
  if (small.order() > caps().intersection)
    throw CapExceeded("intersection", small.order(), caps().intersection);
  std::vector<std::uint32_t> points = big.base_points();
  const std::size_t nb = points.size();
  points.insert(points.end(), ambient_base.begin(), ambient_base.end());
  std::uint64_t count = 0;
  small.for_each_point_images(points, [&](const std::vector<std::uint32_t>& imgs) {
    std::vector<std::uint32_t> base_imgs(imgs.begin(), imgs.begin() + nb);
    std::vector<std::uint32_t> amb_imgs(imgs.begin() + nb, imgs.end());
    if (big.chain().contains_by_images(base_imgs, amb_imgs, ambient_base)) ++count;
    return true;
  });
  return count;
}

// A ∩ B as a group, built by streaming the smaller side and keeping chain
// closure over the matches; the result's order is verified against the
// direct match count.
inline PermGroup intersection(const PermGroup& A, const PermGroup& B,
                              const std::vector<std::uint32_t>& ambient_base) {
  const PermGroup& small = A.order() <= B.order() ? A : B;
  const PermGroup& big = A.order() <= B.order() ? B : A;
  if (small.order() > caps().intersection)
    throw CapExceeded("intersection", small.order(), caps().intersection);
  StabChain C(small.degree());
  std::uint64_t count = 0;
  small.for_each_element([&](const Perm& g) {
    if (big.contains(g, ambient_base)) {
      ++count;
      Perm h = g;
      if (!(C.sift_from(h, 0) == static_cast<std::uint32_t>(C.levels().size()) &&
            h.is_identity()))
        C.insert(g);
    }
  });
  std::vector<Perm> gens;
  for (const auto& L : C.levels())
    for (std::uint32_t e : L.acting) gens.push_back(C.pool_gen(e));
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  PermGroup result(small.degree(), gens,
                   BuildOptions{.expected_order = count, .force_deterministic = true});
  return result;
}

}  // namespace polystring
