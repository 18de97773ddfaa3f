#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "polystring/base.hpp"
#include "polystring/group.hpp"
#include "polystring/perm.hpp"

namespace polystring {

// Elements of <gens> by plain product closure; exact at any degree, meant
// for small orders only.
inline std::vector<Perm> closure_elements(std::uint32_t degree, const std::vector<Perm>& gens,
                                          std::uint64_t cap) {
  std::vector<Perm> elems{Perm::identity(degree)};
  std::unordered_map<Perm, std::uint32_t, PermHash> seen;
  seen.emplace(elems[0], 0);
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (const Perm& g : gens) {
      Perm h = elems[i] * g;
      if (seen.emplace(h, static_cast<std::uint32_t>(elems.size())).second) {
        elems.push_back(std::move(h));
        if (elems.size() > cap) throw CapExceeded("closure", elems.size(), cap);
      }
    }
  return elems;
}

struct ConjClass {
  Perm rep;  // lexicographically smallest member
  std::uint64_t size = 0;
  std::uint64_t element_order = 0;
};

// All conjugacy classes, sorted by (element order, class size, rep).
inline std::vector<ConjClass> conjugacy_classes(const PermGroup& G,
                                                std::uint64_t cap = caps().classes) {
  std::vector<Perm> elems = G.elements(cap);
  std::unordered_map<Perm, std::uint32_t, PermHash> index;
  index.reserve(elems.size() * 2);
  for (std::uint32_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], i);
  std::vector<Perm> conj_by;
  for (const Perm& g : G.gens()) conj_by.push_back(g);
  std::vector<bool> assigned(elems.size(), false);
  std::vector<ConjClass> out;
  std::vector<std::uint32_t> queue;
  for (std::uint32_t start = 0; start < elems.size(); ++start) {
    if (assigned[start]) continue;
    queue.clear();
    queue.push_back(start);
    assigned[start] = true;
    const Perm* best = &elems[start];
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const Perm& e = elems[queue[qi]];
      for (const Perm& g : conj_by) {
        Perm c = e.conjugated(g);
        std::uint32_t ci = index.at(c);
        if (!assigned[ci]) {
          assigned[ci] = true;
          queue.push_back(ci);
          if (elems[ci] < *best) best = &elems[ci];
        }
      }
    }
    ConjClass cls;
    cls.rep = *best;
    cls.size = queue.size();
    cls.element_order = cls.rep.order();
    out.push_back(std::move(cls));
  }
  std::sort(out.begin(), out.end(), [](const ConjClass& a, const ConjClass& b) {
    if (a.element_order != b.element_order) return a.element_order < b.element_order;
    if (a.size != b.size) return a.size < b.size;
    return a.rep < b.rep;
  });
  return out;
}

inline std::vector<Perm> involution_class_reps(const PermGroup& G,
                                               std::uint64_t cap = caps().classes) {
  std::vector<Perm> out;
  for (const ConjClass& c : conjugacy_classes(G, cap))
    if (c.element_order == 2) out.push_back(c.rep);
  return out;
}

inline bool is_normal(const PermGroup& G, const PermGroup& N) {
  for (const Perm& n : N.gens())
    for (const Perm& g : G.gens())
      if (!N.contains(n.conjugated(g))) return false;
  return true;
}

// Smallest normal subgroup of G containing the seeds.
inline PermGroup normal_closure(const PermGroup& G, const std::vector<Perm>& seeds) {
  StabChain C(G.degree());
  std::vector<Perm> gens;
  auto try_add = [&](const Perm& p) {
    Perm h = p;
    if (C.sift_from(h, 0) == static_cast<std::uint32_t>(C.levels().size()) && h.is_identity())
      return false;
    C.insert(p);
    gens.push_back(p);
    return true;
  };
  for (const Perm& s : seeds) try_add(s);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (const Perm& g : G.gens()) try_add(gens[i].conjugated(g));
  return PermGroup(G.degree(), gens);
}

// Every normal subgroup of G, the trivial one and G itself included,
// obtained by closing the normal closures of the conjugacy classes under
// pairwise join. Sorted by order.
inline std::vector<PermGroup> normal_subgroups(const PermGroup& G,
                                               std::uint64_t cap = caps().classes) {
  std::vector<PermGroup> found;
  auto known = [&](const PermGroup& H) {
    for (const PermGroup& K : found) {
      if (K.order() != H.order()) continue;
      bool sub = true;
      for (const Perm& g : H.gens())
        if (!K.contains(g)) { sub = false; break; }
      if (sub) return true;
    }
    return false;
  };
  found.emplace_back(G.degree(), std::vector<Perm>{});  // trivial subgroup
  for (const ConjClass& c : conjugacy_classes(G, cap)) {
    if (c.element_order == 1) continue;
    PermGroup cl = normal_closure(G, {c.rep});
    if (!known(cl)) found.push_back(std::move(cl));
  }
  for (std::size_t a = 0; a < found.size(); ++a)
    for (std::size_t b = a + 1; b < found.size(); ++b) {
      if (found.size() > 128)
        throw CapExceeded("normal-subgroups", found.size(), 128);
      std::vector<Perm> joint = found[a].gens();
      const auto& bg = found[b].gens();
      joint.insert(joint.end(), bg.begin(), bg.end());
      PermGroup J(G.degree(), joint);
      if (!known(J)) found.push_back(std::move(J));
    }
  std::sort(found.begin(), found.end(),
            [](const PermGroup& x, const PermGroup& y) { return x.order() < y.order(); });
  return found;
}

// Canonical representative of the right coset K*g: image-minimal under the
// greedy walk down K's chain. Equal cosets yield equal representatives.
inline Perm canonical_coset_rep(const PermGroup& K, Perm g) {
  for (const auto& L : K.chain().levels()) {
    std::uint32_t best = L.orbit[0];
    std::uint32_t best_img = g[best];
    for (std::uint32_t d : L.orbit)
      if (g[d] < best_img) { best = d; best_img = g[d]; }
    if (best != L.base) g = K.chain().transversal(L, best) * g;
  }
  return g;
}

struct CosetAction {
  std::uint32_t index = 0;
  std::vector<Perm> images;  // aligned with the input elements
};

// Action of G on the right cosets of K, returning the induced permutations
// of the requested elements.
inline CosetAction coset_action(const PermGroup& G, const PermGroup& K,
                                const std::vector<Perm>& elems) {
  std::uint64_t index = G.order() / K.order();
  if (index > caps().quotient) throw CapExceeded("quotient", index, caps().quotient);
  std::unordered_map<Perm, std::uint32_t, PermHash> id_of;
  std::vector<Perm> reps;
  reps.push_back(canonical_coset_rep(K, Perm::identity(G.degree())));
  id_of.emplace(reps[0], 0);
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (const Perm& s : G.gens()) {
      Perm t = canonical_coset_rep(K, reps[i] * s);
      if (id_of.emplace(t, static_cast<std::uint32_t>(reps.size())).second)
        reps.push_back(std::move(t));
    }
  if (reps.size() != index) throw Error("coset walk disagrees with the subgroup index");
  CosetAction out;
  out.index = static_cast<std::uint32_t>(reps.size());
  for (const Perm& e : elems) {
    std::vector<std::uint32_t> img(reps.size());
    for (std::uint32_t i = 0; i < reps.size(); ++i)
      img[i] = id_of.at(canonical_coset_rep(K, reps[i] * e));
    out.images.emplace_back(std::move(img));
  }
  return out;
}

struct QuotientResult {
  std::uint32_t degree = 0;
  std::vector<Perm> images;      // aligned with the input elements
  std::vector<Perm> gen_images;  // images of G's generators
  std::uint64_t order = 0;       // |G| / |N|, verified
};

// Permutation images of the given elements in G/N. Acts on cosets of N
// directly when the index fits the quotient cap; otherwise searches for an
// overgroup K of N whose coset action still has kernel exactly N, verified
// through the image order.
inline QuotientResult quotient_images(const PermGroup& G, const PermGroup& N,
                                      const std::vector<Perm>& elems) {
  if (G.order() % N.order() != 0) throw Error("subgroup order does not divide the group order");
  const std::uint64_t target = G.order() / N.order();
  std::vector<Perm> wanted = elems;
  for (const Perm& g : G.gens()) wanted.push_back(g);

  auto attempt = [&](const PermGroup& K) -> std::optional<QuotientResult> {
    if (G.order() / K.order() > caps().quotient) return std::nullopt;
    CosetAction act = coset_action(G, K, wanted);
    std::vector<Perm> gi(act.images.end() - static_cast<std::ptrdiff_t>(G.gens().size()),
                         act.images.end());
    // The image chain can never overshoot the true image order, and the true
    // image order is |G|/|core K| <= target, so an exact match proves the
    // kernel is exactly N.
    PermGroup image(act.index, gi);
    if (image.order() != target) return std::nullopt;
    QuotientResult out;
    out.degree = act.index;
    out.images.assign(act.images.begin(),
                      act.images.end() - static_cast<std::ptrdiff_t>(G.gens().size()));
    out.gen_images = std::move(gi);
    out.order = target;
    return out;
  };

  if (auto r = attempt(N)) return *r;

  const auto& gens = G.gens();
  const std::size_t ng = gens.size();
  if (ng > 20) throw CapExceeded("quotient-overgroup-search", ng, 20);
  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 1; m < (1u << ng); ++m) masks.push_back(m);
  std::sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    if (pa != pb) return pa < pb;
    return a < b;
  });
  for (std::uint32_t m : masks) {
    std::vector<Perm> kg = N.gens();
    for (std::size_t i = 0; i < ng; ++i)
      if (m & (1u << i)) kg.push_back(gens[i]);
    PermGroup K(G.degree(), kg);
    if (K.order() == G.order()) continue;
    if (K.order() % N.order() != 0) continue;
    if (auto r = attempt(K)) return *r;
  }
  throw CapExceeded("quotient", G.order() / N.order(), caps().quotient);
}

// Does t_i -> s_i extend to an automorphism of G? Decided through the order
// of the graph subgroup of G x G spanned by the pairs. Pass assume_generating
// when both tuples are already known to generate G.
inline bool extends_to_automorphism(const PermGroup& G, const std::vector<Perm>& a,
                                    const std::vector<Perm>& b,
                                    bool assume_generating = false) {
  if (a.size() != b.size()) throw DegreeMismatch("tuples differ in length");
  std::uint32_t n = G.degree();
  if (!assume_generating) {
    PermGroup A(n, a), B(n, b);
    if (A.order() != G.order() || B.order() != G.order()) return false;
  }
  std::vector<Perm> pairs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<std::uint32_t> img(2 * n);
    for (std::uint32_t x = 0; x < n; ++x) {
      img[x] = a[i][x];
      img[n + x] = n + b[i][x];
    }
    pairs.emplace_back(std::move(img));
  }
  PermGroup graph(2 * n, pairs);
  return graph.order() == G.order();
}

}  // namespace polystring
