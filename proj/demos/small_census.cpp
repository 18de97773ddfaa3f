// Census in miniature: enumerate every string carried by two small
// reflection groups, and print each record the way the summary tables
// render a row — total(self-dual)[unravelled].

#include <polystring/census.hpp>
#include <polystring/constructions.hpp>

#include <iostream>

using namespace polystring;

namespace {

void census_of(const std::string& desc) {
  GenTuple t = coxeter_group(desc);
  PermGroup G(t.degree, t.gens);

  CensusEngine engine(G, {});
  CensusFrontier frontier = engine.fresh_frontier();
  engine.run(frontier);
  std::vector<CensusRecord> records = engine.finalize(frontier);
  CensusRow row = census_row(records);

  std::cout << desc << " (order " << G.order() << "): " << row.rendered() << "\n";
  for (const CensusRecord& r : records) {
    std::cout << "  rank " << r.rank << "  [";
    for (std::size_t i = 0; i < r.schlafli.size(); ++i)
      std::cout << (i ? "," : "") << r.schlafli[i];
    std::cout << "]";
    if (r.self_dual) std::cout << "  self-dual";
    if (r.unravelled) std::cout << "  unravelled";
    std::cout << "\n";
  }
}

}  // namespace

int main() {
  // The rank-3 demihypercube substrate is the symmetric group on four
  // letters: three strings, all unravelled, one self-dual.
  census_of("D:3");
  // The rank-3 hyperoctahedral group: eight strings, none unravelled.
  census_of("B:3");
  return 0;
}
