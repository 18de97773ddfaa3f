#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "polystring/cstring.hpp"

using namespace polystring;

namespace {

// Signed permutations of three coordinates, acting on {e1,e2,e3,-e1,-e2,-e3}.
std::vector<Perm> cube_tuple() {
  return {Perm({1, 0, 2, 4, 3, 5}),   // swap first two coordinates
          Perm({0, 2, 1, 3, 5, 4}),   // swap last two coordinates
          Perm({0, 1, 5, 3, 4, 2})};  // flip the sign of the third
}

std::vector<Perm> simplex_tuple() {
  return {Perm::from_cycles(4, {{0, 1}}), Perm::from_cycles(4, {{1, 2}}),
          Perm::from_cycles(4, {{2, 3}})};
}

std::set<Perm> element_set(std::uint32_t degree, const std::vector<Perm>& gens) {
  auto v = closure_elements(degree, gens, 100000);
  return std::set<Perm>(v.begin(), v.end());
}

// Direct check of the intersection condition over all pairs of subsets of
// the generator index set, by materializing every subgroup.
bool brute_intersection_property(std::uint32_t degree, const std::vector<Perm>& t) {
  int n = static_cast<int>(t.size());
  std::vector<std::set<Perm>> by_mask;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<Perm> gens;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) gens.push_back(t[static_cast<std::size_t>(i)]);
    if (gens.empty()) gens.push_back(Perm::identity(degree));
    by_mask.push_back(element_set(degree, gens));
  }
  for (int a = 0; a < (1 << n); ++a)
    for (int b = 0; b < (1 << n); ++b) {
      std::size_t meet = 0;
      for (const Perm& g : by_mask[static_cast<std::size_t>(a)])
        if (by_mask[static_cast<std::size_t>(b)].count(g)) ++meet;
      if (meet != by_mask[static_cast<std::size_t>(a & b)].size()) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("tuple predicates") {
  auto t = cube_tuple();
  CHECK(all_involutions(t));
  CHECK(string_condition(t));
  CHECK(schlafli_symbol(t) == std::vector<std::uint64_t>{3, 4});

  auto bad = t;
  bad[0] = Perm::from_cycles(6, {{0, 1, 2}});
  CHECK_FALSE(all_involutions(bad));

  // Two non-adjacent reflections that do not commute.
  std::vector<Perm> tangled = {Perm::from_cycles(4, {{0, 1}}), Perm::from_cycles(4, {{1, 2}}),
                               Perm::from_cycles(4, {{0, 2}})};
  CHECK_FALSE(string_condition(tangled));

  CHECK_FALSE(all_involutions({}));
}

TEST_CASE("cube reflections verify as a string C-group") {
  auto t = cube_tuple();
  PermGroup G(6, t);
  REQUIRE(G.order() == 48);
  StringCheck sc = verify_cstring(G, t);
  CHECK(sc.involutions);
  CHECK(sc.string_cond);
  CHECK(sc.generates);
  CHECK(sc.intersection);
  CHECK(sc.ok());
  CHECK(sc.failure.empty());
  CHECK(sc.schlafli == std::vector<std::uint64_t>{3, 4});
  CHECK(sc.group_order == 48);
}

TEST_CASE("simplex reflections verify as a string C-group") {
  auto t = simplex_tuple();
  PermGroup G(4, t);
  REQUIRE(G.order() == 24);
  StringCheck sc = verify_cstring(G, t);
  CHECK(sc.ok());
  CHECK(sc.schlafli == std::vector<std::uint64_t>{3, 3});
}

TEST_CASE("low ranks verify directly") {
  std::vector<Perm> rank1 = {Perm::from_cycles(2, {{0, 1}})};
  PermGroup c2(2, rank1);
  CHECK(verify_cstring(c2, rank1).ok());
  CHECK(verify_cstring(c2, rank1).schlafli.empty());

  // Two reflections of a square through edges and through a diagonal.
  std::vector<Perm> rank2 = {Perm::from_cycles(4, {{0, 1}, {2, 3}}), Perm::from_cycles(4, {{1, 3}})};
  PermGroup d4(4, rank2);
  REQUIRE(d4.order() == 8);
  StringCheck sc = verify_cstring(d4, rank2);
  CHECK(sc.ok());
  CHECK(sc.schlafli == std::vector<std::uint64_t>{4});
}

TEST_CASE("generation failure is reported") {
  // The tuple spans only a proper subgroup of the ambient group.
  std::vector<Perm> t = {Perm::from_cycles(4, {{0, 1}}), Perm::from_cycles(4, {{1, 2}})};
  PermGroup s4(4, simplex_tuple());
  StringCheck sc = verify_cstring(s4, t);
  CHECK(sc.involutions);
  CHECK(sc.string_cond);
  CHECK_FALSE(sc.generates);
  CHECK_FALSE(sc.ok());
  CHECK(sc.failure == "tuple does not generate the group");
}

TEST_CASE("intersection failure is detected") {
  // t3 = t1*t2 inside a Klein four-group: everything commutes and the
  // tuple generates, but the overlap of the two facet subgroups is too big.
  std::vector<Perm> t = {Perm::from_cycles(4, {{0, 1}}), Perm::from_cycles(4, {{2, 3}}),
                         Perm::from_cycles(4, {{0, 1}, {2, 3}})};
  PermGroup v4(4, t);
  REQUIRE(v4.order() == 4);
  StringCheck sc = verify_cstring(v4, t);
  CHECK(sc.involutions);
  CHECK(sc.string_cond);
  CHECK(sc.generates);
  CHECK_FALSE(sc.intersection);
  CHECK_FALSE(sc.ok());
  CHECK(sc.failure == "intersection condition fails");
}

TEST_CASE("recursive intersection check matches the subset-pair definition") {
  struct Case {
    std::uint32_t degree;
    std::vector<Perm> t;
  };
  std::vector<Case> cases;
  cases.push_back({6, cube_tuple()});
  cases.push_back({4, simplex_tuple()});
  cases.push_back({4,
                   {Perm::from_cycles(4, {{0, 1}}), Perm::from_cycles(4, {{2, 3}}),
                    Perm::from_cycles(4, {{0, 1}, {2, 3}})}});
  // Rank-4 hypercube tuple on {±e1,..,±e4}.
  cases.push_back({8,
                   {Perm({1, 0, 2, 3, 5, 4, 6, 7}), Perm({0, 2, 1, 3, 4, 6, 5, 7}),
                    Perm({0, 1, 3, 2, 4, 5, 7, 6}), Perm({0, 1, 2, 7, 4, 5, 6, 3})}});

  for (const auto& c : cases) {
    ParabolicCache pc(c.degree, c.t);
    PermGroup whole(c.degree, c.t);
    bool fast = intersection_property(pc, whole.base_points());
    bool slow = brute_intersection_property(c.degree, c.t);
    CHECK(fast == slow);
  }
}

TEST_CASE("duality reverses the symbol and preserves validity") {
  auto t = cube_tuple();
  auto d = dual_tuple(t);
  PermGroup G(6, t);
  StringCheck sc = verify_cstring(G, d);
  CHECK(sc.ok());
  auto sym = schlafli_symbol(t);
  std::reverse(sym.begin(), sym.end());
  CHECK(sc.schlafli == sym);

  // Reversal of the degenerate example still fails.
  std::vector<Perm> bad = {Perm::from_cycles(4, {{0, 1}}), Perm::from_cycles(4, {{2, 3}}),
                           Perm::from_cycles(4, {{0, 1}, {2, 3}})};
  PermGroup v4(4, bad);
  CHECK_FALSE(verify_cstring(v4, dual_tuple(bad)).ok());
}

TEST_CASE("image collapse detection") {
  CHECK(images_collapse({Perm::identity(3), Perm::from_cycles(3, {{0, 1}})}));
  CHECK(images_collapse({Perm::from_cycles(3, {{0, 1}}), Perm::from_cycles(3, {{0, 1}})}));
  CHECK_FALSE(images_collapse({Perm::from_cycles(3, {{0, 1}}), Perm::from_cycles(3, {{1, 2}})}));
}

TEST_CASE("simplex tuple is unravelled") {
  auto t = simplex_tuple();
  PermGroup G(4, t);
  UnravelledCheck uc = check_unravelled(G, t);
  CHECK(uc.unravelled);
  // Proper nontrivial normal subgroups of the simplex group: orders 4 and 12.
  REQUIRE(uc.outcomes.size() == 2);
  for (const auto& oc : uc.outcomes) CHECK(oc.collapsed);
}

TEST_CASE("cube tuple is not unravelled") {
  auto t = cube_tuple();
  PermGroup G(6, t);
  UnravelledCheck uc = check_unravelled(G, t);
  CHECK_FALSE(uc.unravelled);
  // The central quotient of the cube group carries the halved cube tuple, a
  // genuine string C-group, so the order-2 center is a witness.
  bool center_witness = false;
  for (const auto& oc : uc.outcomes)
    if (oc.normal_order == 2 && !oc.collapsed && oc.cstring) center_witness = true;
  CHECK(center_witness);
}
