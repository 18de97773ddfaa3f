#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polystring/census.hpp"
#include "polystring/constructions.hpp"
#include "polystring/cstring.hpp"
#include "polystring/groupfile.hpp"
#include "polystring/polytope.hpp"

namespace polystring {

// ---------------------------------------------------------------------------
// Report serialization ("polystring-report/1"): every command emits one
// JSON document with a stable field order and integer-only numbers, so a
// rerun on the same inputs produces byte-identical output.
// ---------------------------------------------------------------------------

using ReportJson = nlohmann::ordered_json;

inline ReportJson report_envelope(const std::string& command) {
  ReportJson j;
  j["format"] = "polystring-report/1";
  j["command"] = command;
  return j;
}

inline ReportJson string_check_json(const StringCheck& sc) {
  ReportJson j;
  j["involutions"] = sc.involutions;
  j["string_condition"] = sc.string_cond;
  j["generates"] = sc.generates;
  j["intersection"] = sc.intersection;
  j["ok"] = sc.ok();
  if (!sc.failure.empty()) j["failure"] = sc.failure;
  j["schlafli"] = sc.schlafli;
  if (sc.group_order) j["group_order"] = sc.group_order;
  return j;
}

inline ReportJson chain_json(const ChainReport& chain) {
  ReportJson j;
  ReportJson items = ReportJson::array();
  for (const ChainItem& it : chain.items) {
    ReportJson e;
    e["id"] = it.id;
    e["claim"] = it.claim;
    e["pass"] = it.pass;
    if (!it.detail.empty()) e["detail"] = it.detail;
    items.push_back(std::move(e));
  }
  j["items"] = std::move(items);
  ReportJson numbers;
  for (const auto& [key, value] : chain.numbers) numbers[key] = value;
  j["numbers"] = std::move(numbers);
  j["all_pass"] = chain.all_pass();
  return j;
}

inline ReportJson unravelled_json(const UnravelledCheck& uc) {
  ReportJson j;
  j["unravelled"] = uc.unravelled;
  ReportJson quotients = ReportJson::array();
  for (const QuotientOutcome& oc : uc.outcomes) {
    ReportJson e;
    e["normal_order"] = oc.normal_order;
    if (!oc.label.empty()) e["label"] = oc.label;
    e["collapsed"] = oc.collapsed;
    if (!oc.collapsed) e["cstring"] = oc.cstring;
    quotients.push_back(std::move(e));
  }
  j["quotients"] = std::move(quotients);
  return j;
}

inline ReportJson disc_json(const DiscStructure& ds) {
  ReportJson j;
  j["layers"] = ds.layers;
  j["diameter"] = ds.diameter;
  j["total"] = ds.total;
  j["sum_matches_order"] = ds.sum_matches_order;
  return j;
}

inline ReportJson census_record_json(const CensusRecord& r) {
  ReportJson j;
  j["rank"] = r.rank;
  j["schlafli"] = r.schlafli;
  j["self_dual"] = r.self_dual;
  j["unravelled"] = r.unravelled;
  j["f_vector"] = r.f_vector.entries;
  std::vector<std::string> tuple;
  for (const Perm& g : r.tuple) tuple.push_back(perm_to_cycles(g));
  j["tuple"] = tuple;
  return j;
}

inline ReportJson census_row_json(const CensusRow& row) {
  ReportJson j;
  j["total"] = row.total;
  j["self_dual"] = row.self_dual;
  j["unravelled"] = row.unravelled;
  j["rendered"] = row.rendered();
  ReportJson ranks = ReportJson::array();
  for (const CensusRankCounts& c : row.per_rank) {
    ReportJson e;
    e["rank"] = c.rank;
    e["total"] = c.total;
    e["self_dual"] = c.self_dual;
    e["unravelled"] = c.unravelled;
    e["rendered"] = CensusRow::cell(c.total, c.self_dual, c.unravelled);
    ranks.push_back(std::move(e));
  }
  j["per_rank"] = std::move(ranks);
  return j;
}

// Table-style CSV for census rows: one line per rank plus a totals line.
inline std::string census_csv(const std::string& label, const CensusRow& row) {
  std::ostringstream os;
  os << "group,rank,total,self_dual,unravelled\n";
  for (const CensusRankCounts& c : row.per_rank)
    os << label << ',' << c.rank << ',' << c.total << ',' << c.self_dual << ',' << c.unravelled
       << '\n';
  os << label << ",all," << row.total << ',' << row.self_dual << ',' << row.unravelled << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Census checkpoints ("polystring-census-checkpoint/1"): a JSON dump of the
// resumable search frontier. The involution list it refers to is recomputed
// from the group, and the embedded hash guards against resuming against the
// wrong group or options.
// ---------------------------------------------------------------------------

inline ReportJson frontier_to_json(const CensusFrontier& f) {
  ReportJson j;
  j["format"] = "polystring-census-checkpoint/1";
  j["version"] = f.version;
  j["group_order"] = f.group_order;
  j["degree"] = f.degree;
  j["inv_hash"] = f.inv_hash;
  j["rank_min"] = f.rank_min;
  j["rank_max"] = f.rank_max;
  j["conjugacy_reduction"] = f.conjugacy_reduction;
  j["allow_degenerate"] = f.allow_degenerate;
  j["started"] = f.started;
  j["complete"] = f.complete;
  j["prefix"] = f.prefix;
  j["cursor"] = f.cursor;
  ReportJson raw = ReportJson::array();
  for (const RawHit& h : f.raw) {
    ReportJson e;
    e["idx"] = h.idx;
    e["run_orders"] = h.run_orders;
    raw.push_back(std::move(e));
  }
  j["raw"] = std::move(raw);
  return j;
}

inline CensusFrontier frontier_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("format") || !j["format"].is_string() ||
      j["format"].get<std::string>() != "polystring-census-checkpoint/1")
    throw BadFormat("missing or unsupported checkpoint format tag");
  CensusFrontier f;
  auto get = [&](const char* field, auto& out) {
    if (!j.contains(field)) throw BadFormat(std::string("checkpoint lacks field ") + field);
    try {
      j[field].get_to(out);
    } catch (const nlohmann::json::exception&) {
      throw BadFormat(std::string("checkpoint field has the wrong type: ") + field);
    }
  };
  get("version", f.version);
  get("group_order", f.group_order);
  get("degree", f.degree);
  get("inv_hash", f.inv_hash);
  get("rank_min", f.rank_min);
  get("rank_max", f.rank_max);
  get("conjugacy_reduction", f.conjugacy_reduction);
  get("allow_degenerate", f.allow_degenerate);
  get("started", f.started);
  get("complete", f.complete);
  get("prefix", f.prefix);
  get("cursor", f.cursor);
  if (!j.contains("raw") || !j["raw"].is_array()) throw BadFormat("checkpoint lacks field raw");
  for (const auto& e : j["raw"]) {
    RawHit h;
    if (!e.is_object() || !e.contains("idx") || !e.contains("run_orders"))
      throw BadFormat("checkpoint raw entries need idx and run_orders");
    try {
      e["idx"].get_to(h.idx);
      e["run_orders"].get_to(h.run_orders);
    } catch (const nlohmann::json::exception&) {
      throw BadFormat("checkpoint raw entry has the wrong type");
    }
    f.raw.push_back(std::move(h));
  }
  return f;
}

}  // namespace polystring
