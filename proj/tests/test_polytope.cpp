#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <sstream>
#include <vector>

#include "polystring/constructions.hpp"
#include "polystring/polytope.hpp"

using namespace polystring;

namespace {

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("face counts of the octahedral tuple") {
  GenTuple b3 = coxeter_b_tuple(3);
  PermGroup G(b3.degree, b3.gens);
  REQUIRE(G.order() == 48);
  FVector fv = f_vector(G, b3.gens);
  CHECK(fv.entries == std::vector<std::uint64_t>{1, 6, 12, 8, 1});
}

TEST_CASE("face counts of the simplex tuple") {
  std::vector<Perm> t = {Perm::from_cycles(4, {{0, 1}}), Perm::from_cycles(4, {{1, 2}}),
                         Perm::from_cycles(4, {{2, 3}})};
  PermGroup G(4, t);
  FVector fv = f_vector(G, t);
  CHECK(fv.entries == std::vector<std::uint64_t>{1, 4, 6, 4, 1});
}

TEST_CASE("rank-2 face counts are the polygon sizes") {
  // Dihedral group of order 8 acting on the square.
  std::vector<Perm> t = {Perm::from_cycles(4, {{0, 1}, {2, 3}}), Perm::from_cycles(4, {{1, 3}})};
  PermGroup G(4, t);
  REQUIRE(G.order() == 8);
  CHECK(f_vector(G, t).entries == std::vector<std::uint64_t>{1, 4, 4, 1});

  std::vector<Perm> s3 = {Perm::from_cycles(3, {{0, 1}}), Perm::from_cycles(3, {{1, 2}})};
  PermGroup H(3, s3);
  CHECK(f_vector(H, s3).entries == std::vector<std::uint64_t>{1, 3, 3, 1});
}

TEST_CASE("dual face counts are reversed") {
  GenTuple b4 = coxeter_b_tuple(4);
  PermGroup G(b4.degree, b4.gens);
  REQUIRE(G.order() == 384);
  FVector fv = f_vector(G, b4.gens);
  FVector fd = f_vector(G, dual_tuple(b4.gens));
  std::vector<std::uint64_t> rev = fv.entries;
  std::reverse(rev.begin(), rev.end());
  CHECK(fd.entries == rev);
  CHECK(fv.entries == std::vector<std::uint64_t>{1, 8, 24, 32, 16, 1});
}

TEST_CASE("disc structure of small dihedral and octahedral graphs") {
  // The Cayley graph of the order-6 dihedral group on two reflections is a
  // hexagon: layers 2,2,1.
  std::vector<Perm> s3 = {Perm::from_cycles(3, {{0, 1}}), Perm::from_cycles(3, {{1, 2}})};
  DiscStructure hex = disc_structure(3, s3, 6);
  CHECK(hex.layers == std::vector<std::uint64_t>{2, 2, 1});
  CHECK(hex.diameter == 3);
  CHECK(hex.total == 6);
  CHECK(hex.sum_matches_order);

  // Octagon for the order-8 dihedral group.
  std::vector<Perm> d4 = {Perm::from_cycles(4, {{0, 1}, {2, 3}}), Perm::from_cycles(4, {{1, 3}})};
  CHECK(disc_structure(4, d4, 8).layers == std::vector<std::uint64_t>{2, 2, 2, 1});

  GenTuple b3 = coxeter_b_tuple(3);
  DiscStructure ds = disc_structure(b3.degree, b3.gens, 48);
  CHECK(ds.sum_matches_order);
  CHECK(ds.total == 48);
  // Diameter of a finite reflection group's chamber graph is the number of
  // positive roots: 9 for rank 3 with the 4-branch.
  CHECK(ds.diameter == 9);
}

TEST_CASE("order-1296 example: symbol, face counts and discs") {
  GenTuple ex = example55_tuple();
  PermGroup G(ex.degree, ex.gens);
  REQUIRE(G.order() == 1296);
  StringCheck sc = verify_cstring(G, ex.gens);
  CHECK(sc.ok());
  CHECK(sc.schlafli == std::vector<std::uint64_t>{4, 3, 4});

  FVector fv = f_vector(G, ex.gens);
  CHECK(fv.entries == std::vector<std::uint64_t>{1, 27, 81, 81, 27, 1});

  DiscStructure ds = disc_structure(ex.degree, ex.gens, G.order());
  CHECK(ds.diameter == 18);
  CHECK(ds.layers ==
        std::vector<std::uint64_t>{4, 9, 17, 28, 42, 60, 81, 105, 129, 147, 157, 155, 138,
                                   109, 71, 33, 9, 1});
  CHECK(ds.total == 1296);
  CHECK(ds.sum_matches_order);
}

TEST_CASE("chamber graph export") {
  std::vector<Perm> s3 = {Perm::from_cycles(3, {{0, 1}}), Perm::from_cycles(3, {{1, 2}})};
  std::string edges = export_chamber_graph(3, s3, 6, GraphFormat::edgelist);
  CHECK(count_lines(edges) == 6);  // hexagon: 6 vertices, 6 edges
  // Every line is "u v i" with label 1 or 2.
  std::istringstream is(edges);
  std::uint64_t u, v;
  int label;
  while (is >> u >> v >> label) {
    CHECK(u < v);
    CHECK(v < 6);
    CHECK((label == 1 || label == 2));
  }

  std::string dot = export_chamber_graph(3, s3, 6, GraphFormat::dot);
  CHECK(dot.rfind("graph {", 0) == 0);
  CHECK(dot.find("v0 -- ") != std::string::npos);
  CHECK(count_lines(dot) == 8);  // brace lines plus one line per edge

  // 3-regular graph on 48 chambers has 72 edges.
  GenTuple b3 = coxeter_b_tuple(3);
  CHECK(count_lines(export_chamber_graph(b3.degree, b3.gens, 48, GraphFormat::edgelist)) == 72);
}

TEST_CASE("export respects the size cap") {
  auto saved = caps().export_limit;
  caps().export_limit = 10;
  std::vector<Perm> s3 = {Perm::from_cycles(3, {{0, 1}}), Perm::from_cycles(3, {{1, 2}})};
  CHECK_THROWS_AS(export_chamber_graph(3, s3, 48, GraphFormat::edgelist), CapExceeded);
  caps().export_limit = saved;
}

TEST_CASE("reference tables produce notes, never failures") {
  // Matching profile with a corrected fourth face count: exactly one note,
  // pointing at entry 3.
  FVector fv{{1, 18, 135, 135, 18, 1}};
  DiscStructure ds;
  ds.layers = {4, 9, 18, 34, 61, 108, 162, 218, 303, 358, 373, 276, 154, 70, 9, 2};
  ds.total = 2160;
  auto notes = reference_diffs(2160, {4, 5, 4}, fv, ds);
  REQUIRE(notes.size() == 1);
  CHECK(notes[0].find("entry 3") != std::string::npos);
  CHECK(notes[0].find("computed 135") != std::string::npos);
  CHECK(notes[0].find("published 13") != std::string::npos);

  // A non-matching order yields no notes at all.
  CHECK(reference_diffs(48, {4, 5, 4}, fv, ds).empty());

  // The degree-7 profile's printed discs sum to one more than the group
  // order, so any correct computation must flag at least one distance.
  DiscStructure ds7;
  ds7.layers = {4, 9, 18, 34, 62, 113, 204, 366, 601, 963, 1454,
                2036, 2562, 2696, 2005, 1219, 514, 188, 57, 10, 4};  // shorter by one
  ds7.total = 15120;
  FVector fv7{{1, 63, 945, 945, 63, 1}};
  auto notes7 = reference_diffs(15120, {4, 6, 4}, fv7, ds7);
  REQUIRE(notes7.size() == 1);
  CHECK(notes7[0].find("disc sizes differ") != std::string::npos);
}
