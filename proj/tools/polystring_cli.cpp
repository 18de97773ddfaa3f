// Command-line surface: verify group files, run censuses, inspect chamber
// graphs, construct the built-in families, and scan the congruence family
// of field sizes. JSON reports go to stdout, a short human summary to
// stderr; exit 0 = all checks pass, 1 = a mathematical check failed,
// 2 = usage or resource error.

#include <CLI11.hpp>

#include <polystring/census.hpp>
#include <polystring/constructions.hpp>
#include <polystring/cstring.hpp>
#include <polystring/groupfile.hpp>
#include <polystring/polytope.hpp>
#include <polystring/report.hpp>
#include <polystring/structure.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace polystring;

namespace {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadFormat("cannot open " + path);
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw BadFormat("bad JSON in " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw BadFormat("cannot write " + path);
  out << text;
}

void emit(const ReportJson& rep) { std::cout << rep.dump(2) << "\n"; }

std::string symbol_text(const std::vector<std::uint64_t>& s) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << ']';
  return os.str();
}

std::string basename_of(const std::string& path) {
  std::size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

ReportJson group_summary(const std::string& kind, std::uint32_t degree, const PermGroup& G) {
  ReportJson j;
  j["kind"] = kind;
  j["degree"] = degree;
  j["order"] = G.order();
  j["order_verified"] = G.verified();
  return j;
}

// Shared by `verify` and `construct example55`: the string check plus the
// derived facts that make sense once it passes, with machine-readable
// notes about anything skipped or any difference from a published table.
void string_facts(ReportJson& rep, const PermGroup& G, std::uint32_t degree,
                  const std::vector<Perm>& tuple, const std::vector<PermGroup>* supplied_normals,
                  std::vector<std::string>& notes, bool& math_ok) {
  StringCheck sc = verify_cstring(G, tuple);
  rep["cstring"] = string_check_json(sc);
  math_ok = sc.ok();
  if (!sc.ok()) return;

  if (supplied_normals) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < supplied_normals->size(); ++i)
      labels.push_back("supplied-" + std::to_string(i + 1));
    rep["unravelled"] = unravelled_json(check_unravelled(G, tuple, *supplied_normals, labels));
    notes.push_back(
        "quotient checks used the normal subgroups supplied by the file; completeness of that "
        "list is not verified");
  } else {
    try {
      rep["unravelled"] = unravelled_json(check_unravelled(G, tuple));
    } catch (const CapExceeded& e) {
      rep["unravelled"] = nullptr;
      notes.push_back(std::string("unravelled status not computed: ") + e.what());
    }
  }

  FVector fv = f_vector(G, tuple);
  rep["f_vector"] = fv.entries;

  DiscStructure ds;
  if (G.order() <= caps().bfs) {
    ds = disc_structure(degree, tuple, G.order());
    rep["disc"] = disc_json(ds);
    if (!ds.sum_matches_order) math_ok = false;
  } else {
    rep["disc"] = nullptr;
    notes.push_back("disc structure skipped: the group order exceeds the breadth-first cap");
  }
  for (const std::string& n : reference_diffs(G.order(), sc.schlafli, fv, ds)) notes.push_back(n);
}

// ---------------------------------------------------------------------------

int cmd_verify(const std::string& path) {
  GroupFile gf = groupfile_from_json(read_json_file(path));
  if (gf.cstring.empty())
    throw BadFormat("groupfile carries no cstring index tuple; nothing to verify");
  LoadedGroup lg = load_group(gf);

  ReportJson rep = report_envelope("verify");
  rep["input"] = basename_of(path);
  rep["group"] = group_summary(gf.kind, lg.degree, lg.group);

  std::vector<std::string> notes;
  std::vector<PermGroup> supplied;
  for (const auto& ngens : lg.normal_gens) {
    PermGroup N(lg.degree, ngens);
    if (!is_normal(lg.group, N)) throw BadFormat("a supplied normal subgroup is not normal");
    supplied.push_back(std::move(N));
  }
  bool math_ok = false;
  string_facts(rep, lg.group, lg.degree, lg.tuple, supplied.empty() ? nullptr : &supplied, notes,
               math_ok);
  rep["notes"] = notes;
  emit(rep);

  std::cerr << "verify " << basename_of(path) << ": order " << lg.group.order() << ", "
            << (math_ok ? "string checks pass" : "a string check FAILED") << "; " << notes.size()
            << " note(s)\n";
  return math_ok ? 0 : 1;
}

int cmd_chambers(const std::string& path, const std::string& dot_path) {
  GroupFile gf = groupfile_from_json(read_json_file(path));
  if (gf.cstring.empty())
    throw BadFormat("groupfile carries no cstring index tuple; no chamber graph to walk");
  LoadedGroup lg = load_group(gf);

  ReportJson rep = report_envelope("chambers");
  rep["input"] = basename_of(path);
  rep["group"] = group_summary(gf.kind, lg.degree, lg.group);
  DiscStructure ds = disc_structure(lg.degree, lg.tuple, lg.group.order());
  rep["disc"] = disc_json(ds);

  if (!dot_path.empty()) {
    if (lg.group.order() > caps().export_limit)
      throw CapExceeded("chamber-export", lg.group.order(), caps().export_limit);
    std::vector<Perm> elems = lg.group.elements(caps().export_limit);
    std::sort(elems.begin(), elems.end());
    std::unordered_map<Perm, std::uint32_t, PermHash> index;
    for (std::uint32_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], i);
    std::ostringstream os;
    os << "graph chambers {\n";
    for (std::uint32_t i = 0; i < elems.size(); ++i)
      for (std::size_t g = 0; g < lg.tuple.size(); ++g) {
        std::uint32_t k = index.at(elems[i] * lg.tuple[g]);
        if (i < k) os << "  n" << i << " -- n" << k << " [label=" << (g + 1) << "];\n";
      }
    os << "}\n";
    write_text_file(dot_path, os.str());
    rep["dot"] = dot_path;
  }
  emit(rep);
  std::cerr << "chambers " << basename_of(path) << ": diameter " << ds.diameter << ", layer sum "
            << ds.total << (ds.sum_matches_order ? " matches" : " MISMATCHES") << " the order\n";
  return ds.sum_matches_order ? 0 : 1;
}

int cmd_census(const std::string& path, const std::string& coxeter, int rank_min, int rank_max,
               double budget, bool allow_degenerate, const std::string& checkpoint, bool csv) {
  if (path.empty() == coxeter.empty())
    throw BadFormat("census needs exactly one source: a groupfile or --coxeter");

  std::string label;
  std::uint32_t degree = 0;
  std::vector<Perm> gens;
  std::string kind = "permutation";
  std::uint64_t expected = 0;
  if (!coxeter.empty()) {
    GenTuple t = coxeter_group(coxeter);
    label = coxeter;
    degree = t.degree;
    gens = t.gens;
  } else {
    GroupFile gf = groupfile_from_json(read_json_file(path));
    LoadedGroup lg = load_group(gf);
    label = basename_of(path);
    degree = lg.degree;
    gens = lg.gens;
    kind = gf.kind;
    expected = gf.order;
  }
  BuildOptions opt;
  if (expected) {
    opt.expected_order = expected;
    if (degree > 1024) opt.force_random = true;
  }
  PermGroup G(degree, gens, opt);

  CensusOptions copt;
  copt.rank_min = rank_min;
  copt.rank_max = rank_max;
  copt.allow_degenerate = allow_degenerate;
  copt.budget_seconds = budget;
  CensusEngine engine(G, copt);

  CensusFrontier frontier;
  bool resumed = false;
  if (!checkpoint.empty() && std::ifstream(checkpoint).good()) {
    frontier = frontier_from_json(read_json_file(checkpoint));
    resumed = true;
  } else {
    frontier = engine.fresh_frontier();
  }
  bool done = engine.run(frontier);
  if (!checkpoint.empty()) write_text_file(checkpoint, frontier_to_json(frontier).dump(2) + "\n");

  if (!done) {
    ReportJson rep = report_envelope("census");
    rep["group"] = group_summary(kind, degree, G);
    rep["label"] = label;
    rep["complete"] = false;
    rep["resumed"] = resumed;
    rep["raw_hits"] = frontier.raw.size();
    if (!checkpoint.empty()) rep["checkpoint"] = checkpoint;
    emit(rep);
    std::cerr << "census " << label << ": budget exhausted after " << frontier.raw.size()
              << " raw hit(s); "
              << (checkpoint.empty() ? "no checkpoint path given, progress discarded"
                                     : "frontier saved to " + checkpoint)
              << "\n";
    return 2;
  }

  std::vector<CensusRecord> records = engine.finalize(frontier);
  CensusRow row = census_row(records);
  if (csv) {
    std::cout << census_csv(label, row);
  } else {
    ReportJson rep = report_envelope("census");
    rep["group"] = group_summary(kind, degree, G);
    rep["label"] = label;
    rep["complete"] = true;
    rep["resumed"] = resumed;
    ReportJson options;
    options["rank_min"] = rank_min;
    options["rank_max"] = rank_max;
    options["allow_degenerate"] = allow_degenerate;
    rep["options"] = std::move(options);
    rep["row"] = census_row_json(row);
    ReportJson recs = ReportJson::array();
    for (const CensusRecord& r : records) recs.push_back(census_record_json(r));
    rep["records"] = std::move(recs);
    emit(rep);
  }
  std::cerr << "census " << label << ": " << row.rendered() << " across "
            << row.per_rank.size() << " rank(s)\n";
  return 0;
}

GroupFile thm12_groupfile(const Thm12Instance& inst) {
  GroupFile gf;
  gf.kind = "matrix";
  gf.p = inst.F->p();
  gf.k = inst.F->k();
  gf.dimension = 6;
  for (const Mat* M : {&inst.t1, &inst.t2, &inst.t3, &inst.t4}) {
    std::vector<std::uint64_t> entries;
    for (std::uint32_t i = 0; i < 6; ++i)
      for (std::uint32_t j = 0; j < 6; ++j) entries.push_back(M->at(i, j));
    gf.mat_gens.push_back(std::move(entries));
  }
  gf.order = inst.G.order();
  gf.cstring = {1, 2, 3, 4};
  return gf;
}

GroupFile thm13_groupfile(const Thm13Instance& inst) {
  GroupFile gf;
  gf.kind = "matrix";
  gf.p = inst.F->p();
  gf.k = inst.F->k();
  gf.dimension = 6;
  for (const Mat* M : {&inst.t1, &inst.t2, &inst.t3, &inst.t4}) {
    std::vector<std::uint64_t> entries;
    for (std::uint32_t i = 0; i < 6; ++i)
      for (std::uint32_t j = 0; j < 6; ++j) entries.push_back(M->at(i, j));
    gf.mat_gens.push_back(std::move(entries));
  }
  gf.order = inst.G.order();
  gf.cstring = {1, 2, 3, 4};
  return gf;
}

GroupFile perm_groupfile(const GenTuple& t, std::uint64_t order) {
  GroupFile gf;
  gf.kind = "permutation";
  gf.degree = t.degree;
  for (const Perm& g : t.gens) gf.perm_gens.push_back(perm_to_cycles(g));
  gf.order = order;
  for (std::uint32_t i = 1; i <= t.gens.size(); ++i) gf.cstring.push_back(i);
  return gf;
}

int cmd_construct_thm12(std::uint64_t q) {
  ReportJson rep = report_envelope("construct");
  rep["family"] = "thm12";
  rep["q"] = q;
  Thm12Conditions c = check_thm12_conditions(q);
  ReportJson cond;
  cond["divisibility"] = c.divisibility;
  cond["square"] = c.square;
  cond["eigen"] = c.eigen;
  cond["eigen_order"] = c.eigen_order;
  cond["all"] = c.all();
  rep["conditions"] = std::move(cond);
  if (!c.all()) {
    emit(rep);
    std::cerr << "construct thm12: " << c.summary() << "\n";
    return 1;
  }
  Thm12Instance inst = build_thm12(q);
  ChainReport chain = verify_thm12_chain(inst);
  rep["schlafli"] = schlafli_symbol(inst.tuple);
  rep["chain"] = chain_json(chain);
  rep["group_file"] = groupfile_to_json(thm12_groupfile(inst));
  emit(rep);
  std::cerr << "construct thm12 q=" << q << ": order " << inst.G.order() << ", symbol "
            << symbol_text(schlafli_symbol(inst.tuple)) << ", chain "
            << (chain.all_pass() ? "passes" : "FAILS") << "\n";
  return chain.all_pass() ? 0 : 1;
}

int cmd_construct_thm13(std::uint64_t p) {
  ReportJson rep = report_envelope("construct");
  rep["family"] = "thm13";
  rep["p"] = p;
  Thm13Conditions c = check_thm13_conditions(p);
  ReportJson cond;
  cond["prime"] = c.prime;
  cond["mod3"] = c.mod3;
  cond["mod8"] = c.mod8;
  cond["all"] = c.all();
  rep["conditions"] = std::move(cond);
  if (!c.all()) {
    emit(rep);
    std::cerr << "construct thm13: " << c.summary() << "\n";
    return 1;
  }
  Thm13Instance inst = build_thm13(p);
  ChainReport chain = verify_thm13_chain(inst);
  rep["schlafli"] = schlafli_symbol(inst.tuple);
  rep["chain"] = chain_json(chain);
  rep["group_file"] = groupfile_to_json(thm13_groupfile(inst));
  emit(rep);
  std::cerr << "construct thm13 p=" << p << ": order " << inst.G.order() << ", symbol "
            << symbol_text(schlafli_symbol(inst.tuple)) << ", chain "
            << (chain.all_pass() ? "passes" : "FAILS") << "\n";
  return chain.all_pass() ? 0 : 1;
}

int cmd_construct_example55() {
  GenTuple ex = example55_tuple();
  PermGroup G(ex.degree, ex.gens);
  ReportJson rep = report_envelope("construct");
  rep["family"] = "example55";
  rep["group"] = group_summary("permutation", ex.degree, G);
  std::vector<std::string> notes;
  bool math_ok = false;
  string_facts(rep, G, ex.degree, ex.gens, nullptr, notes, math_ok);
  rep["notes"] = notes;
  rep["group_file"] = groupfile_to_json(perm_groupfile(ex, G.order()));
  emit(rep);
  std::cerr << "construct example55: order " << G.order() << ", "
            << (math_ok ? "string checks pass" : "a string check FAILED") << "\n";
  return math_ok ? 0 : 1;
}

int cmd_construct_coxeter(const std::string& desc) {
  GenTuple t = coxeter_group(desc);
  PermGroup G(t.degree, t.gens);
  ReportJson rep = report_envelope("construct");
  rep["family"] = "coxeter";
  rep["descriptor"] = desc;
  rep["group"] = group_summary("permutation", t.degree, G);
  StringCheck sc = verify_cstring(G, t.gens);
  rep["cstring"] = string_check_json(sc);
  if (sc.ok()) rep["f_vector"] = f_vector(G, t.gens).entries;
  rep["group_file"] = groupfile_to_json(perm_groupfile(t, G.order()));
  emit(rep);
  std::cerr << "construct coxeter " << desc << ": order " << G.order() << ", "
            << (sc.ok() ? "string checks pass (" + symbol_text(sc.schlafli) + ")"
                        : "not a string: " + sc.failure)
            << "\n";
  return sc.ok() ? 0 : 1;
}

int cmd_scan_primes(std::uint64_t bound) {
  PrimeScan scan = scan_primes(bound);
  ReportJson rep = report_envelope("scan-primes");
  rep["bound"] = bound;
  rep["total"] = scan.prime_power_matches.size();
  rep["failing"] = scan.prime_power_failing;
  rep["prime_total"] = scan.prime_matches.size();
  rep["prime_failing"] = scan.prime_failing;
  ReportJson anomalies = ReportJson::array();
  for (std::uint64_t q : scan.prime_power_matches) {
    auto [p, k] = split_prime_power(q);
    if (k > 1) {
      ReportJson a;
      a["q"] = q;
      a["p"] = p;
      a["k"] = k;
      a["note"] = "proper prime power included in the published counting convention";
      anomalies.push_back(std::move(a));
    }
  }
  rep["anomalies"] = std::move(anomalies);
  emit(rep);
  std::cerr << "scan-primes to " << bound << ": " << scan.prime_power_matches.size()
            << " candidates, " << scan.prime_power_failing.size() << " failing ("
            << scan.prime_matches.size() << "/" << scan.prime_failing.size()
            << " counting primes only)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"string C-group toolkit: verification, censuses, and explicit families"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "worker threads (output is deterministic regardless)")
      ->check(CLI::PositiveNumber);

  std::function<int()> run;

  auto* verify = app.add_subcommand("verify", "check the string marked in a groupfile");
  static std::string verify_path;
  verify->add_option("groupfile", verify_path, "group definition file")->required();
  verify->callback([&] { run = [] { return cmd_verify(verify_path); }; });

  auto* census = app.add_subcommand("census", "enumerate all strings carried by a group");
  static std::string census_path, census_coxeter, census_checkpoint;
  static int census_rank_min = 3, census_rank_max = 8;
  static double census_budget = 0;
  static bool census_allow_degenerate = false, census_csv = false;
  census->add_option("groupfile", census_path, "group definition file");
  census->add_option("--coxeter", census_coxeter, "built-in reflection group, e.g. B:4");
  census->add_option("--rank-min", census_rank_min, "smallest rank to record")
      ->check(CLI::Range(1, 16));
  census->add_option("--rank-max", census_rank_max, "largest rank to search")
      ->check(CLI::Range(1, 16));
  census->add_option("--budget", census_budget, "time budget in seconds (0 = none)")
      ->check(CLI::NonNegativeNumber);
  census->add_flag("--allow-degenerate", census_allow_degenerate,
                   "also record strings with a symbol entry of 2");
  census->add_option("--checkpoint", census_checkpoint, "frontier file to resume from and save to");
  census->add_flag("--csv", census_csv, "emit table rows as CSV instead of a JSON report");
  census->callback([&] {
    run = [] {
      return cmd_census(census_path, census_coxeter, census_rank_min, census_rank_max,
                        census_budget, census_allow_degenerate, census_checkpoint, census_csv);
    };
  });

  auto* chambers = app.add_subcommand("chambers", "disc structure of the chamber graph");
  static std::string chambers_path, chambers_dot;
  chambers->add_option("groupfile", chambers_path, "group definition file")->required();
  chambers->add_option("--dot", chambers_dot, "write the chamber graph in DOT format");
  chambers->callback([&] { run = [] { return cmd_chambers(chambers_path, chambers_dot); }; });

  auto* construct = app.add_subcommand("construct", "build a known family member and verify it");
  construct->require_subcommand(1);
  auto* thm12 = construct->add_subcommand("thm12", "the [4,q+1,4] family");
  static std::uint64_t thm12_q = 0;
  thm12->add_option("--q", thm12_q, "field size, q = 1 mod 6 with further conditions")->required();
  thm12->callback([&] { run = [] { return cmd_construct_thm12(thm12_q); }; });
  auto* thm13 = construct->add_subcommand("thm13", "the [4,p,4] family");
  static std::uint64_t thm13_p = 0;
  thm13->add_option("--p", thm13_p, "prime, p = 1 mod 3 and 5 mod 8")->required();
  thm13->callback([&] { run = [] { return cmd_construct_thm13(thm13_p); }; });
  auto* ex55 = construct->add_subcommand("example55", "the soluble order-1296 string");
  ex55->callback([&] { run = [] { return cmd_construct_example55(); }; });
  auto* cox = construct->add_subcommand("coxeter", "a reflection group string, e.g. B:4");
  static std::string cox_desc;
  cox->add_option("descriptor", cox_desc, "FAMILY:RANK")->required();
  cox->callback([&] { run = [] { return cmd_construct_coxeter(cox_desc); }; });

  auto* scan = app.add_subcommand("scan-primes", "scan the congruence family of field sizes");
  static std::uint64_t scan_max = 0;
  scan->add_option("--max", scan_max, "inclusive upper bound")->required();
  scan->callback([&] { run = [] { return cmd_scan_primes(scan_max); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    return run ? run() : 2;
  } catch (const CapExceeded& e) {
    std::cerr << "resource cap exceeded: " << e.what() << "\n";
    return 2;
  } catch (const BadFormat& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const NonPrime& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const DegreeMismatch& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const Singular& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const UnfaithfulAction& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  }
}
