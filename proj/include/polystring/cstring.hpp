#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polystring/base.hpp"
#include "polystring/group.hpp"
#include "polystring/structure.hpp"

namespace polystring {

inline bool all_involutions(const std::vector<Perm>& t) {
  if (t.empty()) return false;
  for (const Perm& p : t)
    if (!p.is_involution()) return false;
  return true;
}

// Non-adjacent generators must commute.
inline bool string_condition(const std::vector<Perm>& t) {
  for (std::size_t i = 0; i + 2 < t.size(); ++i)
    for (std::size_t j = i + 2; j < t.size(); ++j)
      if (!commutes(t[i], t[j])) return false;
  return true;
}

// Orders of the products of consecutive generators.
inline std::vector<std::uint64_t> schlafli_symbol(const std::vector<Perm>& t) {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) out.push_back(product_order(t[i], t[i + 1]));
  return out;
}

// Subgroups spanned by contiguous runs of the tuple, built on demand.
// Expected orders, when known, are applied so that chains above the
// deterministic degree threshold still come out verified.
class ParabolicCache {
 public:
  ParabolicCache(std::uint32_t degree, std::vector<Perm> t,
                 std::map<std::pair<int, int>, std::uint64_t> expected = {},
                 std::uint64_t seed = 0x5eedULL)
      : degree_(degree), t_(std::move(t)), expected_(std::move(expected)), seed_(seed) {}

  // Inclusive 0-based range; an empty range yields the trivial group.
  const PermGroup& range(int i, int j) {
    auto key = std::make_pair(i, j);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<Perm> gens;
    for (int k = i; k <= j; ++k) gens.push_back(t_.at(static_cast<std::size_t>(k)));
    BuildOptions opt;
    opt.seed = seed_;
    auto ex = expected_.find(key);
    if (ex != expected_.end()) opt.expected_order = ex->second;
    // With a pinned order the randomized build is both sound and much
    // faster than the deterministic closure at moderate degrees.
    if (opt.expected_order && degree_ > 1024) opt.force_random = true;
    return cache_.emplace(key, PermGroup(degree_, std::move(gens), opt)).first->second;
  }

  // Pre-register an already-built subgroup for a range (typically the whole
  // tuple's group, which the caller usually has), avoiding a rebuild.
  void seed_group(int i, int j, const PermGroup& g) { cache_.emplace(std::make_pair(i, j), g); }

  const std::vector<Perm>& tuple() const { return t_; }
  std::uint32_t degree() const { return degree_; }

 private:
  std::uint32_t degree_;
  std::vector<Perm> t_;
  std::map<std::pair<int, int>, std::uint64_t> expected_;
  std::uint64_t seed_;
  std::map<std::pair<int, int>, PermGroup> cache_;
};

// Intersection condition for contiguous runs, applied recursively: a run
// satisfies it when both one-shorter runs do and the two overlapping
// subgroups meet exactly in the subgroup of the overlap.
inline bool intersection_property(ParabolicCache& pc, int lo, int hi,
                                  const std::vector<std::uint32_t>& ambient_base,
                                  std::map<std::pair<int, int>, bool>& memo) {
  if (hi - lo + 1 <= 2) return true;
  auto key = std::make_pair(lo, hi);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  bool ok = intersection_property(pc, lo, hi - 1, ambient_base, memo) &&
            intersection_property(pc, lo + 1, hi, ambient_base, memo);
  if (ok) {
    std::uint64_t meet =
        intersection_order(pc.range(lo, hi - 1), pc.range(lo + 1, hi), ambient_base);
    ok = meet == pc.range(lo + 1, hi - 1).order();
  }
  memo[key] = ok;
  return ok;
}

inline bool intersection_property(ParabolicCache& pc, const std::vector<std::uint32_t>& ambient_base) {
  std::map<std::pair<int, int>, bool> memo;
  return intersection_property(pc, 0, static_cast<int>(pc.tuple().size()) - 1, ambient_base,
                               memo);
}

struct StringCheck {
  bool involutions = false;
  bool generates = false;
  bool string_cond = false;
  bool intersection = false;
  std::vector<std::uint64_t> schlafli;
  std::uint64_t group_order = 0;
  std::string failure;  // empty when everything holds

  bool ok() const { return involutions && generates && string_cond && intersection; }
};

// Full check that the cache's tuple is a string C-group presentation of G,
// reusing whatever subgroup builds the cache already holds.
inline StringCheck verify_cstring_cached(const PermGroup& G, ParabolicCache& pc) {
  StringCheck out;
  out.group_order = G.order();
  const std::vector<Perm>& t = pc.tuple();
  if (t.empty()) { out.failure = "empty generator tuple"; return out; }
  out.involutions = all_involutions(t);
  if (!out.involutions) { out.failure = "a generator is not an involution"; return out; }
  out.string_cond = string_condition(t);
  out.schlafli = schlafli_symbol(t);
  if (!out.string_cond) { out.failure = "non-adjacent generators fail to commute"; return out; }
  int n = static_cast<int>(t.size());
  out.generates = pc.range(0, n - 1).order() == G.order();
  if (!out.generates) { out.failure = "tuple does not generate the group"; return out; }
  out.intersection = intersection_property(pc, G.base_points());
  if (!out.intersection) { out.failure = "intersection condition fails"; return out; }
  return out;
}

// Full check that the tuple is a string C-group presentation of G.
inline StringCheck verify_cstring(const PermGroup& G, const std::vector<Perm>& t,
                                  std::map<std::pair<int, int>, std::uint64_t> expected = {}) {
  ParabolicCache pc(G.degree(), t, std::move(expected));
  return verify_cstring_cached(G, pc);
}

inline std::vector<Perm> dual_tuple(std::vector<Perm> t) {
  std::reverse(t.begin(), t.end());
  return t;
}

// Outcome of the quotient test against one normal subgroup.
struct QuotientOutcome {
  std::uint64_t normal_order = 0;
  std::string label;      // optional description of the normal subgroup
  bool collapsed = false; // images lose distinctness or triviality
  bool cstring = false;   // meaningful only when not collapsed
};

struct UnravelledCheck {
  bool unravelled = false;
  std::vector<QuotientOutcome> outcomes;
};

// The tuple collapses in a quotient when the images are no longer n
// distinct nontrivial involutions.
inline bool images_collapse(const std::vector<Perm>& images) {
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].is_identity()) return true;
    for (std::size_t j = i + 1; j < images.size(); ++j)
      if (images[i] == images[j]) return true;
  }
  return false;
}

// A tuple is unravelled when it fails to induce a string C-group of every
// proper quotient: for each given normal subgroup the images either
// collapse or break one of the string C-group conditions.
inline UnravelledCheck check_unravelled(const PermGroup& G, const std::vector<Perm>& t,
                                        const std::vector<PermGroup>& normals,
                                        const std::vector<std::string>& labels = {}) {
  UnravelledCheck out;
  out.unravelled = true;
  for (std::size_t i = 0; i < normals.size(); ++i) {
    const PermGroup& N = normals[i];
    if (N.order() == 1 || N.order() == G.order()) continue;
    QuotientOutcome oc;
    oc.normal_order = N.order();
    if (i < labels.size()) oc.label = labels[i];
    QuotientResult q = quotient_images(G, N, t);
    oc.collapsed = images_collapse(q.images);
    if (!oc.collapsed) {
      PermGroup image(q.degree, q.gen_images, BuildOptions{.expected_order = q.order});
      StringCheck sc = verify_cstring(image, q.images);
      oc.cstring = sc.ok();
      if (oc.cstring) out.unravelled = false;
    }
    out.outcomes.push_back(std::move(oc));
  }
  return out;
}

// Convenience wrapper computing the normal subgroups first; subject to the
// conjugacy-class cap.
inline UnravelledCheck check_unravelled(const PermGroup& G, const std::vector<Perm>& t) {
  return check_unravelled(G, t, normal_subgroups(G));
}

}  // namespace polystring
