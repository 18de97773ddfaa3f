// Tour of the library on one concrete polytope: the 4-dimensional
// hypercube. Its symmetry group is the rank-4 hyperoctahedral group; the
// built-in reflection tuple is a string of type [3,3,4] (the 16-cell),
// and reversing the tuple yields the hypercube itself.

#include <polystring/constructions.hpp>
#include <polystring/cstring.hpp>
#include <polystring/polytope.hpp>

#include <iostream>

using namespace polystring;

namespace {

template <typename T>
void print_vec(const char* label, const std::vector<T>& v) {
  std::cout << label << " [";
  for (std::size_t i = 0; i < v.size(); ++i) std::cout << (i ? "," : "") << v[i];
  std::cout << "]\n";
}

}  // namespace

int main() {
  GenTuple cube = coxeter_b_tuple(4);
  PermGroup G(cube.degree, cube.gens);
  std::cout << "hypercube symmetry group: degree " << cube.degree << ", order " << G.order()
            << "\n";

  StringCheck sc = verify_cstring(G, cube.gens);
  std::cout << "string check: " << (sc.ok() ? "passes" : "fails") << "\n";
  print_vec("schlafli symbol:", sc.schlafli);

  // Face counts by the coset formula: 8 vertices, 24 edges, 32 triangles,
  // 16 tetrahedra, bracketed by the two improper faces.
  print_vec("face counts:", f_vector(G, cube.gens).entries);

  // The reversed tuple describes the dual polytope — the hypercube, with
  // 16 vertices, 32 edges, 24 squares, and 8 cubes.
  std::vector<Perm> rev(cube.gens.rbegin(), cube.gens.rend());
  StringCheck dual = verify_cstring(G, rev);
  print_vec("dual symbol:", dual.schlafli);
  print_vec("dual face counts:", f_vector(G, rev).entries);

  // Chamber graph: flags at distance i from a fixed flag. The diameter is
  // the reflection length of the longest group element.
  DiscStructure ds = disc_structure(cube.degree, cube.gens, G.order());
  print_vec("disc sizes:", ds.layers);
  std::cout << "diameter " << ds.diameter << ", layer sum + 1 = " << ds.total
            << (ds.sum_matches_order ? " (matches the order)" : " (MISMATCH)") << "\n";
  return sc.ok() && dual.ok() && ds.sum_matches_order ? 0 : 1;
}
