#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "polystring/base.hpp"
#include "polystring/cstring.hpp"
#include "polystring/group.hpp"

namespace polystring {

// Face counts [1, f_1, ..., f_n, 1] with f_j the index of the subgroup
// spanned by all generators except the j-th.
struct FVector {
  std::vector<std::uint64_t> entries;
  bool operator==(const FVector& o) const { return entries == o.entries; }
};

inline FVector f_vector(const PermGroup& G, const std::vector<Perm>& t,
                        const std::vector<std::uint64_t>& expected_complements = {}) {
  FVector out;
  out.entries.push_back(1);
  for (std::size_t j = 0; j < t.size(); ++j) {
    std::vector<Perm> gens;
    for (std::size_t i = 0; i < t.size(); ++i)
      if (i != j) gens.push_back(t[i]);
    std::uint64_t sub = 1;
    if (!gens.empty()) {
      BuildOptions opt;
      if (j < expected_complements.size() && expected_complements[j] != 0)
        opt.expected_order = expected_complements[j];
      sub = PermGroup(G.degree(), std::move(gens), opt).order();
    }
    out.entries.push_back(G.order() / sub);
  }
  out.entries.push_back(1);
  return out;
}

// Sizes of the spheres around a fixed chamber in the chamber graph:
// breadth-first layers from the identity in the Cayley graph on the tuple,
// the identity itself excluded.
struct DiscStructure {
  std::vector<std::uint64_t> layers;
  std::uint32_t diameter = 0;
  std::uint64_t total = 0;  // 1 + sum of layers
  bool sum_matches_order = false;
};

inline DiscStructure disc_structure(std::uint32_t degree, const std::vector<Perm>& t,
                                    std::uint64_t order) {
  if (order > caps().bfs)
    throw CapExceeded("chamber-graph breadth-first search", order, caps().bfs);
  std::unordered_set<Perm, PermHash> seen;
  std::vector<Perm> frontier;
  frontier.push_back(Perm::identity(degree));
  seen.insert(frontier.front());
  DiscStructure out;
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const Perm& g : frontier)
      for (const Perm& s : t) {
        Perm h = g * s;
        if (seen.insert(h).second) next.push_back(std::move(h));
      }
    if (!next.empty()) out.layers.push_back(next.size());
    frontier = std::move(next);
  }
  out.diameter = static_cast<std::uint32_t>(out.layers.size());
  out.total = 1;
  for (std::uint64_t l : out.layers) out.total += l;
  out.sum_matches_order = out.total == order;
  return out;
}

enum class GraphFormat { dot, edgelist };

// Chamber graph with vertices numbered in breadth-first discovery order and
// edges labelled by the 1-based index of the generator joining them.
inline std::string export_chamber_graph(std::uint32_t degree, const std::vector<Perm>& t,
                                        std::uint64_t order, GraphFormat fmt) {
  if (order > caps().export_limit)
    throw CapExceeded("chamber-graph export", order, caps().export_limit);
  std::unordered_map<Perm, std::uint64_t, PermHash> index;
  std::vector<Perm> discovered;
  discovered.push_back(Perm::identity(degree));
  index.emplace(discovered.front(), 0);
  std::ostringstream os;
  if (fmt == GraphFormat::dot) os << "graph {\n";
  for (std::uint64_t u = 0; u < discovered.size(); ++u) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      Perm v = discovered[u] * t[i];
      auto it = index.find(v);
      std::uint64_t vi;
      if (it == index.end()) {
        vi = discovered.size();
        index.emplace(v, vi);
        discovered.push_back(std::move(v));
      } else {
        vi = it->second;
      }
      if (u < vi) {
        if (fmt == GraphFormat::dot)
          os << "  v" << u << " -- v" << vi << " [label=\"" << (i + 1) << "\"];\n";
        else
          os << u << " " << vi << " " << (i + 1) << "\n";
      }
    }
  }
  if (fmt == GraphFormat::dot) os << "}\n";
  return os.str();
}

// Published tables for two groups whose generators are not part of this
// library (central triple covers of the symmetric groups of degree 6 and
// 7).  When a user-supplied group matches one of these profiles, computed
// values are compared and differences reported as notes — never as errors,
// since the printed tables are known to contain typos.
struct ReferenceProfile {
  std::string label;
  std::uint64_t order = 0;
  std::vector<std::uint64_t> schlafli;
  std::vector<std::uint64_t> printed_betti;
  std::vector<std::uint64_t> printed_layers;
};

inline const std::vector<ReferenceProfile>& reference_profiles() {
  static const std::vector<ReferenceProfile> profiles = {
      {"triple cover of Sym(6)",
       2160,
       {4, 5, 4},
       {1, 18, 135, 13, 18, 1},
       {4, 9, 18, 34, 61, 108, 162, 218, 303, 358, 373, 276, 154, 70, 9, 2}},
      {"triple cover of Sym(7)",
       15120,
       {4, 6, 4},
       {1, 63, 945, 945, 63, 1},
       {4, 9, 18, 34, 62, 113, 204, 366, 601, 963, 1454, 2036, 2562, 2696, 2005, 1219, 514,
        188, 57, 10, 4, 1}},
  };
  return profiles;
}

inline std::vector<std::string> reference_diffs(std::uint64_t order,
                                                const std::vector<std::uint64_t>& schlafli,
                                                const FVector& fv, const DiscStructure& ds) {
  std::vector<std::string> notes;
  for (const ReferenceProfile& rp : reference_profiles()) {
    if (rp.order != order || rp.schlafli != schlafli) continue;
    if (!fv.entries.empty() && fv.entries != rp.printed_betti) {
      std::ostringstream os;
      os << rp.label << ": computed face counts differ from the published table at";
      for (std::size_t i = 0; i < std::max(fv.entries.size(), rp.printed_betti.size()); ++i) {
        std::uint64_t a = i < fv.entries.size() ? fv.entries[i] : 0;
        std::uint64_t b = i < rp.printed_betti.size() ? rp.printed_betti[i] : 0;
        if (a != b) os << " [entry " << i << ": computed " << a << ", published " << b << "]";
      }
      os << "; the computed values satisfy the coset formula and are authoritative";
      notes.push_back(os.str());
    }
    if (!ds.layers.empty() && ds.layers != rp.printed_layers) {
      std::ostringstream os;
      os << rp.label << ": computed disc sizes differ from the published table at";
      for (std::size_t i = 0; i < std::max(ds.layers.size(), rp.printed_layers.size()); ++i) {
        std::uint64_t a = i < ds.layers.size() ? ds.layers[i] : 0;
        std::uint64_t b = i < rp.printed_layers.size() ? rp.printed_layers[i] : 0;
        if (a != b)
          os << " [distance " << (i + 1) << ": computed " << a << ", published " << b << "]";
      }
      os << "; computed layers sum with the base chamber to " << ds.total;
      notes.push_back(os.str());
    }
  }
  return notes;
}

}  // namespace polystring
