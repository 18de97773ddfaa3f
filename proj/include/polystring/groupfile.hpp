#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "polystring/base.hpp"
#include "polystring/ff.hpp"
#include "polystring/group.hpp"
#include "polystring/matperm.hpp"
#include "polystring/matrix.hpp"
#include "polystring/perm.hpp"

namespace polystring {

// ---------------------------------------------------------------------------
// Group-definition files ("polystring-groupfile/1"): a JSON carrier for
// permutation or matrix groups, with an optional generator-index tuple
// marking a candidate string and optional normal-subgroup generator lists.
// Permutations are written in 1-based disjoint cycle notation; matrix
// entries are field-element codes c0 + c1 p + ... + c_{k-1} p^{k-1} for the
// canonical modulus of GF(p^k), listed row-major.
// ---------------------------------------------------------------------------

// 1-based disjoint cycle notation; the identity renders as "()".
inline std::string perm_to_cycles(const Perm& g) {
  std::ostringstream os;
  std::vector<bool> seen(g.degree(), false);
  bool any = false;
  for (std::uint32_t start = 0; start < g.degree(); ++start) {
    if (seen[start] || g[start] == start) continue;
    any = true;
    os << '(';
    std::uint32_t x = start;
    bool first = true;
    do {
      seen[x] = true;
      os << (first ? "" : ",") << (x + 1);
      first = false;
      x = g[x];
    } while (x != start);
    os << ')';
  }
  if (!any) return "()";
  return os.str();
}

inline Perm perm_from_cycles_text(std::uint32_t degree, const std::string& text) {
  std::vector<std::vector<std::uint32_t>> cycles;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  while (i < text.size()) {
    if (text[i] != '(') throw BadFormat("expected '(' in cycle notation: " + text);
    ++i;
    std::vector<std::uint32_t> cyc;
    skip_ws();
    while (i < text.size() && text[i] != ')') {
      if (!std::isdigit(static_cast<unsigned char>(text[i])))
        throw BadFormat("expected a point in cycle notation: " + text);
      std::uint64_t v = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        v = v * 10 + static_cast<std::uint64_t>(text[i] - '0');
        if (v > degree) throw BadFormat("cycle point exceeds the degree: " + text);
        ++i;
      }
      if (v == 0) throw BadFormat("cycle points are 1-based: " + text);
      cyc.push_back(static_cast<std::uint32_t>(v - 1));
      skip_ws();
      if (i < text.size() && (text[i] == ',' || text[i] == ' ')) {
        ++i;
        skip_ws();
      }
    }
    if (i >= text.size()) throw BadFormat("unterminated cycle: " + text);
    ++i;  // ')'
    if (cyc.size() == 1) throw BadFormat("a cycle needs at least two points: " + text);
    if (!cyc.empty()) cycles.push_back(std::move(cyc));
    skip_ws();
  }
  return Perm::from_cycles(degree, cycles);
}

struct GroupFile {
  std::string kind;  // "permutation" or "matrix"

  // Permutation kind.
  std::uint32_t degree = 0;
  std::vector<std::string> perm_gens;
  std::vector<std::vector<std::string>> perm_normals;

  // Matrix kind.
  std::uint64_t p = 0;
  std::uint32_t k = 1;
  std::uint32_t dimension = 0;
  std::vector<std::vector<std::uint64_t>> mat_gens;
  std::vector<std::vector<std::vector<std::uint64_t>>> mat_normals;

  // Shared optional data: a known order (0 = unknown) and a candidate
  // string as 1-based indices into the generator list (empty = none).
  std::uint64_t order = 0;
  std::vector<std::uint32_t> cstring;

  std::size_t generator_count() const {
    return kind == "matrix" ? mat_gens.size() : perm_gens.size();
  }
  std::size_t normal_count() const {
    return kind == "matrix" ? mat_normals.size() : perm_normals.size();
  }
};

inline nlohmann::ordered_json groupfile_to_json(const GroupFile& gf) {
  nlohmann::ordered_json j;
  j["format"] = "polystring-groupfile/1";
  j["kind"] = gf.kind;
  if (gf.kind == "permutation") {
    j["degree"] = gf.degree;
    j["generators"] = gf.perm_gens;
  } else {
    j["p"] = gf.p;
    j["k"] = gf.k;
    j["dimension"] = gf.dimension;
    j["generators"] = gf.mat_gens;
  }
  if (gf.order) j["order"] = gf.order;
  if (!gf.cstring.empty()) j["cstring"] = gf.cstring;
  if (gf.kind == "permutation" && !gf.perm_normals.empty()) j["normal_subgroups"] = gf.perm_normals;
  if (gf.kind == "matrix" && !gf.mat_normals.empty()) j["normal_subgroups"] = gf.mat_normals;
  return j;
}

inline GroupFile groupfile_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw BadFormat("groupfile must be a JSON object");
  if (!j.contains("format") || !j["format"].is_string() ||
      j["format"].get<std::string>() != "polystring-groupfile/1")
    throw BadFormat("missing or unsupported groupfile format tag");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw BadFormat("groupfile needs a kind field");
  GroupFile gf;
  gf.kind = j["kind"].get<std::string>();
  auto need_uint = [&](const char* field) -> std::uint64_t {
    if (!j.contains(field) || !j[field].is_number_unsigned())
      throw BadFormat(std::string("groupfile needs an unsigned field ") + field);
    return j[field].get<std::uint64_t>();
  };
  if (!j.contains("generators") || !j["generators"].is_array() || j["generators"].empty())
    throw BadFormat("groupfile needs a nonempty generators array");

  if (gf.kind == "permutation") {
    gf.degree = static_cast<std::uint32_t>(need_uint("degree"));
    if (gf.degree == 0) throw BadFormat("degree must be positive");
    for (const auto& g : j["generators"]) {
      if (!g.is_string()) throw BadFormat("permutation generators must be cycle strings");
      gf.perm_gens.push_back(g.get<std::string>());
    }
  } else if (gf.kind == "matrix") {
    gf.p = need_uint("p");
    gf.k = static_cast<std::uint32_t>(need_uint("k"));
    gf.dimension = static_cast<std::uint32_t>(need_uint("dimension"));
    if (gf.dimension == 0) throw BadFormat("dimension must be positive");
    for (const auto& g : j["generators"]) {
      if (!g.is_array() || g.size() != std::size_t{gf.dimension} * gf.dimension)
        throw BadFormat("matrix generators must be row-major lists of dimension^2 entries");
      std::vector<std::uint64_t> entries;
      for (const auto& e : g) {
        if (!e.is_number_unsigned()) throw BadFormat("matrix entries must be unsigned codes");
        entries.push_back(e.get<std::uint64_t>());
      }
      gf.mat_gens.push_back(std::move(entries));
    }
  } else {
    throw BadFormat("unknown groupfile kind " + gf.kind);
  }

  if (j.contains("order")) {
    if (!j["order"].is_number_unsigned() || j["order"].get<std::uint64_t>() == 0)
      throw BadFormat("order, when present, must be a positive integer");
    gf.order = j["order"].get<std::uint64_t>();
  }
  if (j.contains("cstring")) {
    if (!j["cstring"].is_array()) throw BadFormat("cstring must be an index array");
    for (const auto& e : j["cstring"]) {
      if (!e.is_number_unsigned()) throw BadFormat("cstring indices must be unsigned");
      std::uint64_t idx = e.get<std::uint64_t>();
      if (idx == 0 || idx > gf.generator_count())
        throw BadFormat("cstring index out of range (indices are 1-based)");
      gf.cstring.push_back(static_cast<std::uint32_t>(idx));
    }
  }
  if (j.contains("normal_subgroups")) {
    if (!j["normal_subgroups"].is_array()) throw BadFormat("normal_subgroups must be an array");
    for (const auto& sub : j["normal_subgroups"]) {
      if (!sub.is_array() || sub.empty())
        throw BadFormat("each normal subgroup needs a nonempty generator list");
      if (gf.kind == "permutation") {
        std::vector<std::string> gens;
        for (const auto& g : sub) {
          if (!g.is_string()) throw BadFormat("normal subgroup generators must match the kind");
          gens.push_back(g.get<std::string>());
        }
        gf.perm_normals.push_back(std::move(gens));
      } else {
        std::vector<std::vector<std::uint64_t>> gens;
        for (const auto& g : sub) {
          if (!g.is_array() || g.size() != std::size_t{gf.dimension} * gf.dimension)
            throw BadFormat("normal subgroup generators must match the kind");
          std::vector<std::uint64_t> entries;
          for (const auto& e : g) {
            if (!e.is_number_unsigned()) throw BadFormat("matrix entries must be unsigned codes");
            entries.push_back(e.get<std::uint64_t>());
          }
          gens.push_back(std::move(entries));
        }
        gf.mat_normals.push_back(std::move(gens));
      }
    }
  }
  return gf;
}

// Row action of an invertible matrix on all nonzero vectors of the module,
// for matrix groups with no recognized block structure. The vector
// (v_0,...,v_{d-1}) has index v_0 + v_1 S + ... + v_{d-1} S^{d-1} - 1 with
// S the field size.
inline Perm generic_matrix_perm(const Mat& M) {
  const Fq& F = M.field();
  std::uint32_t d = M.dim();
  std::uint64_t S = F.size(), span = 1;
  for (std::uint32_t i = 0; i < d; ++i) {
    span *= S;
    if (span > (1ULL << 31)) throw CapExceeded("permutation degree", span, 1ULL << 31);
  }
  std::vector<std::uint32_t> img(span - 1);
  std::vector<bool> hit(span - 1, false);
  std::vector<std::uint64_t> v(d), w(d);
  for (std::uint64_t code = 1; code < span; ++code) {
    std::uint64_t c = code;
    for (std::uint32_t i = 0; i < d; ++i) {
      v[i] = c % S;
      c /= S;
    }
    std::fill(w.begin(), w.end(), 0);
    for (std::uint32_t j = 0; j < d; ++j)
      for (std::uint32_t i = 0; i < d; ++i) w[j] = F.add(w[j], F.mul(v[i], M.at(i, j)));
    std::uint64_t out = 0;
    for (std::uint32_t i = d; i-- > 0;) out = out * S + w[i];
    if (out == 0) throw Singular("a generator matrix is singular");
    if (hit[out - 1]) throw Singular("a generator matrix is singular");
    hit[out - 1] = true;
    img[code - 1] = static_cast<std::uint32_t>(out - 1);
  }
  return Perm(std::move(img));
}

// A parsed groupfile: the generators as permutations, the marked string
// tuple (empty when the file has none), any supplied normal-subgroup
// generator lists, and the group itself.
struct LoadedGroup {
  std::uint32_t degree = 0;
  std::vector<Perm> gens;
  std::vector<Perm> tuple;
  std::vector<std::vector<Perm>> normal_gens;
  PermGroup group;
};

inline LoadedGroup load_group(const GroupFile& gf) {
  std::uint32_t degree = 0;
  std::vector<Perm> gens;
  std::vector<std::vector<Perm>> normal_gens;

  if (gf.kind == "permutation") {
    degree = gf.degree;
    for (const std::string& s : gf.perm_gens) gens.push_back(perm_from_cycles_text(degree, s));
    for (const auto& sub : gf.perm_normals) {
      std::vector<Perm> ngens;
      for (const std::string& s : sub) ngens.push_back(perm_from_cycles_text(degree, s));
      normal_gens.push_back(std::move(ngens));
    }
  } else {
    Fq F(gf.p, gf.k);
    auto to_mat = [&](const std::vector<std::uint64_t>& entries) {
      Mat M(F, gf.dimension);
      std::size_t idx = 0;
      for (std::uint32_t i = 0; i < gf.dimension; ++i)
        for (std::uint32_t j = 0; j < gf.dimension; ++j) {
          if (entries[idx] >= F.size()) throw BadFormat("matrix entry is not a field code");
          M.at(i, j) = entries[idx++];
        }
      return M;
    };
    std::vector<Mat> mats;
    for (const auto& e : gf.mat_gens) mats.push_back(to_mat(e));
    std::vector<std::vector<Mat>> nmats;
    for (const auto& sub : gf.mat_normals) {
      std::vector<Mat> ms;
      for (const auto& e : sub) ms.push_back(to_mat(e));
      nmats.push_back(std::move(ms));
    }

    // Prefer the two-block action when every matrix is block-structured;
    // otherwise act on all nonzero vectors of the full module.
    bool blocks = gf.dimension % 2 == 0;
    if (blocks) {
      try {
        for (const Mat& M : mats) (void)split_blocks(M);
        for (const auto& sub : nmats)
          for (const Mat& M : sub) (void)split_blocks(M);
      } catch (const NotBlockShaped&) {
        blocks = false;
      }
    }
    auto convert = [&](const Mat& M) { return blocks ? matrix_to_perm(M) : generic_matrix_perm(M); };
    for (const Mat& M : mats) gens.push_back(convert(M));
    for (const auto& sub : nmats) {
      std::vector<Perm> ngens;
      for (const Mat& M : sub) ngens.push_back(convert(M));
      normal_gens.push_back(std::move(ngens));
    }
    if (gens.empty()) throw BadFormat("no generators");
    degree = gens.front().degree();
  }

  std::vector<Perm> tuple;
  for (std::uint32_t idx : gf.cstring) tuple.push_back(gens[idx - 1]);

  BuildOptions opt;
  if (gf.order) {
    opt.expected_order = gf.order;
    if (degree > 1024) opt.force_random = true;
  }
  return LoadedGroup{degree, gens, std::move(tuple), std::move(normal_gens),
                     PermGroup(degree, gens, opt)};
}

}  // namespace polystring
