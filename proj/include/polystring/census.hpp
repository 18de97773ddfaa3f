#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "polystring/base.hpp"
#include "polystring/cstring.hpp"
#include "polystring/group.hpp"
#include "polystring/perm.hpp"
#include "polystring/polytope.hpp"
#include "polystring/structure.hpp"

namespace polystring {

// ---------------------------------------------------------------------------
// Exhaustive enumeration of the C-strings of one group, up to isomorphism
// (an automorphism of the group carrying one ordered tuple to the other).
// Dual pairs are counted separately unless self-dual.
//
// Search shape: depth-first over ordered involution tuples. The first entry
// ranges over involution class representatives (every tuple is conjugate to
// one starting at a representative; the final isomorphism dedup absorbs the
// residual redundancy), later entries over all involutions commuting with
// every non-adjacent predecessor. Each extension must keep the recursive
// intersection condition on contiguous runs; a tuple is recorded when it
// generates the whole group and its rank lies in the requested window.
// ---------------------------------------------------------------------------

struct CensusOptions {
  int rank_min = 3;
  int rank_max = 8;
  bool conjugacy_reduction = true;
  // When false (the published counting convention), adjacent generators
  // must not commute, i.e. every symbol entry is at least 3. Degenerate
  // strings with an entry of 2 decompose the group as a direct product and
  // are excluded from the reference tables.
  bool allow_degenerate = false;
  double budget_seconds = 0;  // 0 = no budget
  std::uint64_t cap = 0;      // 0 = caps().census
};

struct CensusRecord {
  int rank = 0;
  std::vector<std::uint64_t> schlafli;
  bool self_dual = false;
  bool unravelled = false;
  FVector f_vector;
  std::vector<Perm> tuple;  // representative, first found in search order
};

struct CensusRankCounts {
  int rank = 0;
  std::uint64_t total = 0, self_dual = 0, unravelled = 0;
};

struct CensusRow {
  std::vector<CensusRankCounts> per_rank;  // ascending rank, empty ranks omitted
  std::uint64_t total = 0, self_dual = 0, unravelled = 0;

  // Table cell notation: total(self-dual)[unravelled].
  static std::string cell(std::uint64_t t, std::uint64_t s, std::uint64_t u) {
    std::ostringstream os;
    os << t << "(" << s << ")[" << u << "]";
    return os.str();
  }
  std::string rendered() const { return cell(total, self_dual, unravelled); }
  std::string rendered_rank(int rank) const {
    for (const CensusRankCounts& r : per_rank)
      if (r.rank == rank) return cell(r.total, r.self_dual, r.unravelled);
    return cell(0, 0, 0);
  }
};

inline CensusRow census_row(const std::vector<CensusRecord>& records) {
  CensusRow out;
  std::map<int, CensusRankCounts> by_rank;
  for (const CensusRecord& r : records) {
    CensusRankCounts& c = by_rank[r.rank];
    c.rank = r.rank;
    ++c.total;
    if (r.self_dual) ++c.self_dual;
    if (r.unravelled) ++c.unravelled;
  }
  for (auto& [rank, c] : by_rank) {
    out.per_rank.push_back(c);
    out.total += c.total;
    out.self_dual += c.self_dual;
    out.unravelled += c.unravelled;
  }
  return out;
}

// One raw search hit: tuple entries as indices into the canonical involution
// list, plus the orders of all contiguous runs (row-major over i <= j),
// which serve as a cheap isomorphism invariant during dedup.
struct RawHit {
  std::vector<std::uint32_t> idx;
  std::vector<std::uint64_t> run_orders;
};

// Resumable search state. Everything needed to continue the depth-first
// walk: the current prefix, the per-depth candidate cursors, and the hits
// collected so far. The involution list it indexes into is reproducible
// from the group alone, and inv_hash guards against resuming with the
// wrong group.
struct CensusFrontier {
  std::uint32_t version = 1;
  std::uint64_t group_order = 0;
  std::uint32_t degree = 0;
  std::uint64_t inv_hash = 0;
  int rank_min = 3, rank_max = 8;
  bool conjugacy_reduction = true;
  bool allow_degenerate = false;
  bool started = false, complete = false;
  std::vector<std::uint32_t> prefix;
  std::vector<std::uint32_t> cursor;  // size == prefix.size() + 1 once started
  std::vector<RawHit> raw;
};

class CensusEngine {
 public:
  CensusEngine(const PermGroup& G, CensusOptions opt = {}) : G_(G), opt_(opt) {
    std::uint64_t cap = opt_.cap ? opt_.cap : caps().census;
    if (G.order() > cap) throw CapExceeded("census", G.order(), cap);
    if (opt_.rank_min < 1 || opt_.rank_max < opt_.rank_min)
      throw BadFormat("census rank window is empty");
    elems_ = G.elements(cap);
    std::sort(elems_.begin(), elems_.end());
    index_.reserve(elems_.size() * 2);
    for (std::uint32_t i = 0; i < elems_.size(); ++i) index_.emplace(elems_[i], i);
    identity_index_ = index_.at(Perm::identity(G.degree()));
    for (std::uint32_t i = 0; i < elems_.size(); ++i)
      if (elems_[i].is_involution() && !elems_[i].is_identity()) inv_.push_back(i);
    if (opt_.conjugacy_reduction) {
      for (const Perm& rep : involution_class_reps(G)) {
        auto pos = std::lower_bound(inv_.begin(), inv_.end(), index_.at(rep));
        level0_.push_back(static_cast<std::uint32_t>(pos - inv_.begin()));
      }
      std::sort(level0_.begin(), level0_.end());
    } else {
      for (std::uint32_t i = 0; i < inv_.size(); ++i) level0_.push_back(i);
    }
  }

  const PermGroup& group() const { return G_; }
  std::uint64_t involution_count() const { return inv_.size(); }

  // Hash of the canonical involution list; identifies the search space.
  std::uint64_t involution_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint32_t i : inv_)
      for (std::uint32_t x = 0; x < G_.degree(); ++x) {
        h ^= elems_[i][x];
        h *= 0x100000001b3ULL;
      }
    return h;
  }

  CensusFrontier fresh_frontier() const {
    CensusFrontier f;
    f.group_order = G_.order();
    f.degree = G_.degree();
    f.inv_hash = involution_hash();
    f.rank_min = opt_.rank_min;
    f.rank_max = opt_.rank_max;
    f.conjugacy_reduction = opt_.conjugacy_reduction;
    f.allow_degenerate = opt_.allow_degenerate;
    return f;
  }

  // Continues (or starts) the walk described by f. Returns true when the
  // search space is exhausted; false means the time budget expired and f
  // holds a resumable snapshot.
  bool run(CensusFrontier& f) {
    check_frontier(f);
    if (f.complete) return true;
    using clock = std::chrono::steady_clock;
    auto deadline = clock::now() + std::chrono::duration_cast<clock::duration>(
                                       std::chrono::duration<double>(opt_.budget_seconds));
    if (!f.started) {
      f.started = true;
      f.prefix.clear();
      f.cursor.assign(1, 0);
    }
    layers_.clear();
    for (std::size_t d = 0; d < f.prefix.size(); ++d)
      if (!try_extend(f.prefix, d, f.prefix[d]))
        throw BadFormat("census state fails its own feasibility replay");
    std::uint64_t ticks = 0;
    while (true) {
      std::size_t d = f.prefix.size();
      const std::vector<std::uint32_t>& cands = d == 0 ? level0_ : all_candidates();
      bool descended = false;
      for (std::uint32_t ci = f.cursor[d]; ci < cands.size(); ++ci) {
        if (opt_.budget_seconds > 0 && (++ticks & 63) == 0 && clock::now() > deadline) {
          f.cursor[d] = ci;
          return false;
        }
        std::uint32_t cand = cands[ci];
        if (!try_extend(f.prefix, d, cand)) continue;
        f.cursor[d] = ci + 1;
        f.prefix.push_back(cand);
        f.cursor.push_back(0);
        int rank = static_cast<int>(f.prefix.size());
        if (rank >= opt_.rank_min && rank <= opt_.rank_max && layers_.back()[0].full)
          record_hit(f);
        if (rank < opt_.rank_max) {
          descended = true;
          break;
        }
        f.prefix.pop_back();
        f.cursor.pop_back();
        layers_.pop_back();
      }
      if (descended) continue;
      if (f.prefix.empty()) {
        f.complete = true;
        return true;
      }
      f.prefix.pop_back();
      f.cursor.pop_back();
      layers_.pop_back();
    }
  }

  // Dedup by isomorphism and classify: self-duality, unravelledness,
  // f-vector. Output is canonically ordered (rank, symbol, representative).
  std::vector<CensusRecord> finalize(const CensusFrontier& f) {
    check_frontier(f);
    std::vector<CensusRecord> records;
    std::vector<std::vector<Perm>> rec_tuples;
    // Bucket raw hits by the run-order profile so the expensive automorphism
    // test only runs between plausible partners.
    std::map<std::vector<std::uint64_t>, std::vector<std::size_t>> buckets;
    for (const RawHit& hit : f.raw) {
      std::vector<Perm> tuple = materialize(hit);
      std::vector<std::size_t>& bucket = buckets[hit.run_orders];
      bool fresh = true;
      for (std::size_t ri : bucket)
        if (extends_to_automorphism(G_, rec_tuples[ri], tuple, true)) {
          fresh = false;
          break;
        }
      if (!fresh) continue;
      bucket.push_back(records.size());
      CensusRecord rec;
      rec.rank = static_cast<int>(hit.idx.size());
      rec.schlafli = schlafli_symbol(tuple);
      rec.tuple = tuple;
      rec_tuples.push_back(std::move(tuple));
      records.push_back(std::move(rec));
    }
    if (!records.empty()) {
      std::vector<PermGroup> normals = normal_subgroups(G_);
      for (CensusRecord& rec : records) {
        std::vector<Perm> rev(rec.tuple.rbegin(), rec.tuple.rend());
        rec.self_dual = extends_to_automorphism(G_, rec.tuple, rev, true);
        rec.unravelled = check_unravelled(G_, rec.tuple, normals).unravelled;
        rec.f_vector = f_vector(G_, rec.tuple);
      }
    }
    std::sort(records.begin(), records.end(), [](const CensusRecord& a, const CensusRecord& b) {
      if (a.rank != b.rank) return a.rank < b.rank;
      if (a.schlafli != b.schlafli) return a.schlafli < b.schlafli;
      return a.tuple < b.tuple;
    });
    return records;
  }

 private:
  struct RunSet {
    bool full = false;                // the whole group; members not stored
    std::vector<std::uint32_t> set;   // sorted element indices otherwise
    std::uint64_t size(std::uint64_t group_order) const {
      return full ? group_order : set.size();
    }
  };

  const std::vector<std::uint32_t>& all_candidates() const {
    if (all_.empty() && !inv_.empty()) {
      all_.resize(inv_.size());
      for (std::uint32_t i = 0; i < inv_.size(); ++i) all_[i] = i;
    }
    return all_;
  }

  void check_frontier(const CensusFrontier& f) const {
    if (f.version != 1) throw BadFormat("unknown census state version");
    if (f.group_order != G_.order() || f.degree != G_.degree() ||
        f.inv_hash != involution_hash() || f.rank_min != opt_.rank_min ||
        f.rank_max != opt_.rank_max || f.conjugacy_reduction != opt_.conjugacy_reduction ||
        f.allow_degenerate != opt_.allow_degenerate)
      throw BadFormat("census state does not match this group and option set");
  }

  const Perm& inv_perm(std::uint32_t i) const { return elems_[inv_[i]]; }

  std::vector<Perm> materialize(const RawHit& hit) const {
    std::vector<Perm> out;
    for (std::uint32_t i : hit.idx) out.push_back(inv_perm(i));
    return out;
  }

  // Subgroup generated by base (already closed) and the given elements, as
  // sorted element indices; flips to `full` at the whole group's order.
  RunSet close_with(const RunSet& base, const std::vector<std::uint32_t>& gens) {
    RunSet out;
    if (base.full) {
      out.full = true;
      return out;
    }
    if (stamp_.size() != elems_.size()) stamp_.assign(elems_.size(), 0);
    ++epoch_;
    std::vector<std::uint32_t> queue;
    auto add = [&](std::uint32_t e) {
      if (stamp_[e] != epoch_) {
        stamp_[e] = epoch_;
        queue.push_back(e);
      }
    };
    add(identity_index_);
    for (std::uint32_t e : base.set) add(e);
    for (std::uint32_t g : gens) add(g);
    for (std::size_t qi = 0; qi < queue.size(); ++qi)
      for (std::uint32_t g : gens) {
        Perm prod = elems_[queue[qi]] * elems_[g];
        add(index_.at(prod));
      }
    if (queue.size() == elems_.size()) {
      out.full = true;
      return out;
    }
    out.set = std::move(queue);
    std::sort(out.set.begin(), out.set.end());
    return out;
  }

  static std::uint64_t meet_size(const RunSet& a, const RunSet& b, std::uint64_t group_order) {
    if (a.full) return b.size(group_order);
    if (b.full) return a.size(group_order);
    std::uint64_t n = 0;
    auto ia = a.set.begin();
    auto ib = b.set.begin();
    while (ia != a.set.end() && ib != b.set.end()) {
      if (*ia < *ib) ++ia;
      else if (*ib < *ia) ++ib;
      else { ++n; ++ia; ++ib; }
    }
    return n;
  }

  // Distinctness, the string condition against non-adjacent predecessors,
  // and the recursive intersection condition for every run ending at the
  // candidate. On success the new layer (layers_[d][i] = subgroup of the
  // run t_i..t_d as an element set) stays pushed; on failure the layer
  // stack is left unchanged.
  bool try_extend(const std::vector<std::uint32_t>& prefix, std::size_t d, std::uint32_t cand) {
    for (std::size_t j = 0; j < d; ++j)
      if (prefix[j] == cand) return false;
    const Perm& c = inv_perm(cand);
    for (std::size_t j = 0; j + 2 <= d; ++j)
      if (!commutes(c, inv_perm(prefix[j]))) return false;
    if (!opt_.allow_degenerate && d >= 1 && commutes(c, inv_perm(prefix[d - 1]))) return false;
    std::vector<RunSet> layer(d + 1);
    RunSet single;
    single.set = {identity_index_, inv_[cand]};
    std::sort(single.set.begin(), single.set.end());
    layer[d] = std::move(single);
    for (std::size_t i = d; i-- > 0;) {
      // Intersection identity for the run t_i..t_d once it has length >= 3;
      // it only involves already-built sets, so it prunes before the
      // closure below is paid for.
      if (i + 2 <= d) {
        std::uint64_t meet = meet_size(layers_[d - 1][i], layer[i + 1], G_.order());
        if (meet != layers_[d - 1][i + 1].size(G_.order())) return false;
      }
      std::vector<std::uint32_t> gens;
      for (std::size_t j = i; j < d; ++j) gens.push_back(inv_[prefix[j]]);
      gens.push_back(inv_[cand]);
      layer[i] = close_with(layers_[d - 1][i], gens);
    }
    layers_.push_back(std::move(layer));
    return true;
  }

  void record_hit(CensusFrontier& f) {
    RawHit hit;
    hit.idx = f.prefix;
    const std::size_t n = f.prefix.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) hit.run_orders.push_back(layers_[j][i].size(G_.order()));
    f.raw.push_back(std::move(hit));
  }

  const PermGroup& G_;
  CensusOptions opt_;
  std::vector<Perm> elems_;  // all elements, sorted
  std::unordered_map<Perm, std::uint32_t, PermHash> index_;
  std::uint32_t identity_index_ = 0;
  std::vector<std::uint32_t> inv_;     // element indices of the involutions
  std::vector<std::uint32_t> level0_;  // candidate positions for the first entry
  mutable std::vector<std::uint32_t> all_;
  std::vector<std::vector<RunSet>> layers_;
  std::vector<std::uint32_t> stamp_;  // closure scratch, epoch-stamped
  std::uint32_t epoch_ = 0;
};

// One-call enumeration covering the common case.
inline std::vector<CensusRecord> enumerate_cstrings(const PermGroup& G, int rank_min = 3,
                                                    int rank_max = 8,
                                                    const CensusOptions& base = {}) {
  CensusOptions opt = base;
  opt.rank_min = rank_min;
  opt.rank_max = rank_max;
  CensusEngine engine(G, opt);
  CensusFrontier f = engine.fresh_frontier();
  engine.run(f);
  if (!f.complete) throw CapExceeded("census budget", 0, 0);
  return engine.finalize(f);
}

struct SelftestReport {
  bool ok = false;
  std::uint64_t reduced_total = 0, brute_total = 0;
  std::map<int, std::uint64_t> reduced_by_rank, brute_by_rank;
};

// Oracle for the conjugacy reduction: re-enumerates with the reduction
// disabled (every involution may start a tuple) and compares class counts.
inline SelftestReport census_selftest(const PermGroup& G, int rank_min = 3, int rank_max = 8) {
  if (G.order() > 5000) throw CapExceeded("census-selftest", G.order(), 5000);
  SelftestReport rep;
  CensusOptions reduced;
  reduced.rank_min = rank_min;
  reduced.rank_max = rank_max;
  std::vector<CensusRecord> a = enumerate_cstrings(G, rank_min, rank_max, reduced);
  CensusOptions brute;
  brute.rank_min = rank_min;
  brute.rank_max = rank_max;
  brute.conjugacy_reduction = false;
  std::vector<CensusRecord> b = enumerate_cstrings(G, rank_min, rank_max, brute);
  rep.reduced_total = a.size();
  rep.brute_total = b.size();
  for (const CensusRecord& r : a) ++rep.reduced_by_rank[r.rank];
  for (const CensusRecord& r : b) ++rep.brute_by_rank[r.rank];
  rep.ok = rep.reduced_total == rep.brute_total && rep.reduced_by_rank == rep.brute_by_rank;
  return rep;
}

}  // namespace polystring
