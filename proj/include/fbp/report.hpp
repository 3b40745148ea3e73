// Machine-readable JSON reports: check results, counterexample models,
// reachability traces, extraction and metrics output.  The shape is pinned by
// docs/report_schema.json.
#pragma once

#include <json.hpp>

#include "fbp/check.hpp"
#include "fbp/printer.hpp"
#include "fbp/reach.hpp"

namespace fbp {

using json = nlohmann::json;

// One interpretation table as a list of {args, val} rows.  Relation values are
// booleans, function values are carrier element indices.
inline json table_to_json(const Vocabulary& voc, const FiniteModel& m, SymId s,
                          const std::vector<unsigned>& table) {
  const Symbol& sym = voc.symbol(s);
  json rows = json::array();
  std::vector<unsigned> idx(sym.args.size(), 0);
  size_t n = m.table_size(voc, s);
  for (size_t flat = 0; flat < n; ++flat) {
    json row;
    row["args"] = idx;
    if (sym.kind == SymKind::Relation)
      row["val"] = table[flat] != 0;
    else
      row["val"] = table[flat];
    rows.push_back(std::move(row));
    for (size_t i = idx.size(); i-- > 0;) {
      if (++idx[i] < m.card[sym.args[i]]) break;
      idx[i] = 0;
    }
  }
  return rows;
}

inline json model_to_json(const Vocabulary& voc, const FiniteModel& m) {
  json j;
  json sorts = json::object();
  for (SortId s = 0; s < static_cast<SortId>(voc.num_sorts()); ++s)
    sorts[voc.sort_name(s)] = m.card[s];
  j["sorts"] = std::move(sorts);
  json pre = json::object();
  for (SymId s = 0; s < static_cast<SymId>(voc.num_symbols()); ++s)
    pre[voc.symbol(s).name] = table_to_json(voc, m, s, m.pre[s]);
  j["pre"] = std::move(pre);
  if (m.two_state) {
    json post = json::object();
    for (SymId s = 0; s < static_cast<SymId>(voc.num_symbols()); ++s)
      if (voc.symbol(s).mut) post[voc.symbol(s).name] = table_to_json(voc, m, s, m.post[s]);
    j["post"] = std::move(post);
  }
  return j;
}

inline json verdict_to_json(const Vocabulary& voc, const Verdict& v) {
  json j;
  j["kind"] = to_string(v.kind);
  if (!v.detail.empty()) j["detail"] = v.detail;
  if (v.model) j["model"] = model_to_json(voc, *v.model);
  return j;
}

inline json check_report_to_json(const CheckReport& r) {
  json j;
  j["accepted"] = r.accepted;
  j["bounded"] = r.bounded;
  j["total_ms"] = r.total_ms;
  json obs = json::array();
  for (const ObligationResult& o : r.results) {
    json jo;
    jo["name"] = o.obligation.name;
    jo["rule"] = o.obligation.rule;
    jo["claim"] = to_string(o.obligation.voc, o.obligation.claim);
    jo["verdict"] = verdict_to_json(o.obligation.voc, o.verdict);
    jo["time_ms"] = o.time_ms;
    jo["trivial"] = o.trivial;
    obs.push_back(std::move(jo));
  }
  j["obligations"] = std::move(obs);
  return j;
}

// Reachability outcome; the trace is an array of states, each tagged with the
// transition that produced it (null for the initial state).
inline json reach_to_json(const Vocabulary& voc, const ReachResult& r) {
  json j;
  j["error_reachable"] = r.error_reachable;
  j["budget_exhausted"] = r.budget_exhausted;
  j["visited"] = r.visited;
  json trace = json::array();
  for (size_t i = 0; i < r.trace.size(); ++i) {
    json step;
    step["via"] = i == 0 ? json(nullptr) : json(r.trace_transitions[i - 1]);
    step["state"] = model_to_json(voc, r.trace[i]);
    trace.push_back(std::move(step));
  }
  j["trace"] = std::move(trace);
  return j;
}

// ---- human-readable counterparts ----------------------------------------------

inline std::string report_to_text(const CheckReport& r) {
  std::ostringstream os;
  for (const ObligationResult& o : r.results) {
    os << "  " << o.obligation.name << " [" << o.obligation.rule << "] ... "
       << to_string(o.verdict.kind);
    if (o.trivial) os << " (trivial)";
    if (!o.verdict.detail.empty()) os << " — " << o.verdict.detail;
    os << "\n";
    if (o.verdict.kind == VerdictKind::Counterexample && o.verdict.model) {
      os << "    claim: " << to_string(o.obligation.voc, o.obligation.claim) << "\n";
      std::istringstream ms(model_to_string(o.obligation.voc, *o.verdict.model));
      for (std::string line; std::getline(ms, line);) os << "    " << line << "\n";
    }
  }
  os << (r.accepted ? "ACCEPTED" : "REJECTED");
  if (r.accepted && r.bounded) os << " (up to the finite bounds)";
  os << " in " << static_cast<long>(r.total_ms) << " ms, " << r.results.size()
     << " obligations\n";
  return os.str();
}

inline std::string trace_to_text(const Vocabulary& voc, const ReachResult& r) {
  std::ostringstream os;
  if (!r.error_reachable) {
    os << (r.budget_exhausted ? "inconclusive: state budget exhausted" : "safe");
    os << ", " << r.visited << " states explored\n";
    return os.str();
  }
  os << "error trace of length " << (r.trace.empty() ? 0 : r.trace.size() - 1) << ":\n";
  for (size_t i = 0; i < r.trace.size(); ++i) {
    if (i == 0)
      os << "  initial state:\n";
    else
      os << "  after " << r.trace_transitions[i - 1] << ":\n";
    std::istringstream ms(model_to_string(voc, r.trace[i]));
    for (std::string line; std::getline(ms, line);) os << "    " << line << "\n";
  }
  return os.str();
}

} // namespace fbp
