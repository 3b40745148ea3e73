// Command-line frontend: check proofs, extract invariants, measure proof
// complexity, explore bounded reachability, reverse problems, and generate the
// scalable benchmark families.
//
// Exit codes: 0 accepted/safe, 1 rejected or inconclusive, 2 usage/parse error.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "fbp/check.hpp"
#include "fbp/extract.hpp"
#include "fbp/parser.hpp"
#include "fbp/powergen.hpp"
#include "fbp/report.hpp"

namespace {

struct CommonFlags {
  std::string backend = "smt";
  std::vector<std::string> bounds;
  std::string solver_cmd = "z3";
  int jobs = 4;
  double timeout_s = 30.0;
  bool json = false;
  std::string dump_smt;
};

void add_backend_flags(CLI::App* cmd, CommonFlags& fl) {
  cmd->add_option("--backend", fl.backend, "Verdict backend: smt or enum")
      ->check(CLI::IsMember({"smt", "enum"}));
  cmd->add_option("--bound", fl.bounds, "Carrier bound SORT=N for the finite backends");
  cmd->add_option("--solver-cmd", fl.solver_cmd, "SMT solver command (reads one .smt2 path)");
  cmd->add_option("--jobs", fl.jobs, "Obligations discharged concurrently");
  cmd->add_option("--timeout-s", fl.timeout_s, "Per-obligation solver timeout in seconds");
  cmd->add_flag("--json", fl.json, "Machine-readable JSON output");
  cmd->add_option("--dump-smt", fl.dump_smt, "Keep every emitted solver query in this directory");
}

fbp::Bounds resolve_bounds(const fbp::Vocabulary& voc, const std::vector<std::string>& specs) {
  fbp::Bounds b;
  for (const std::string& s : specs) {
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw fbp::Error("--bound expects SORT=N, got '" + s + "'");
    std::string name = s.substr(0, eq);
    auto sid = voc.find_sort(name);
    if (!sid) throw fbp::Error("--bound: unknown sort '" + name + "'");
    int n = 0;
    try {
      n = std::stoi(s.substr(eq + 1));
    } catch (...) {
      throw fbp::Error("--bound: bad count in '" + s + "'");
    }
    if (n < 1) throw fbp::Error("--bound: count must be >= 1 in '" + s + "'");
    b.size[*sid] = static_cast<unsigned>(n);
  }
  return b;
}

fbp::CheckOptions make_check_options(const fbp::Vocabulary& voc, const CommonFlags& fl) {
  fbp::CheckOptions opts;
  opts.backend = fl.backend == "enum" ? fbp::CheckOptions::Backend::Enum
                                      : fbp::CheckOptions::Backend::Smt;
  opts.bounds = resolve_bounds(voc, fl.bounds);
  opts.smt.solver_cmd = fl.solver_cmd;
  opts.smt.timeout_s = fl.timeout_s;
  opts.smt.dump_dir = fl.dump_smt;
  opts.jobs = fl.jobs;
  return opts;
}

const fbp::ProofScript& require_proof(const fbp::FbpFile& f, const std::string& path) {
  if (!f.proof) throw fbp::Error(path + ": no proof block");
  return *f.proof;
}

int run_check(const std::string& path, const CommonFlags& fl) {
  fbp::FbpFile f = fbp::parse_fbp_path(path);
  const fbp::ProofScript& script = require_proof(f, path);
  fbp::CheckReport r = fbp::check(f.problem, script, make_check_options(f.problem.voc, fl));
  if (fl.json) {
    fbp::json j = fbp::check_report_to_json(r);
    j["file"] = path;
    j["backend"] = fl.backend;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << fbp::report_to_text(r);
  }
  return r.accepted ? 0 : 1;
}

int run_extract(const std::string& path, const CommonFlags& fl) {
  fbp::FbpFile f = fbp::parse_fbp_path(path);
  const fbp::ProofScript& script = require_proof(f, path);
  fbp::CheckOptions opts = make_check_options(f.problem.voc, fl);
  fbp::CheckReport proof_report = fbp::check(f.problem, script, opts);
  if (!proof_report.accepted) {
    if (fl.json) {
      fbp::json j;
      j["accepted"] = false;
      j["proof"] = fbp::check_report_to_json(proof_report);
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "proof rejected; nothing to extract\n" << fbp::report_to_text(proof_report);
    }
    return 1;
  }
  fbp::Formula inv = fbp::simplify(fbp::extract_invariant(f.problem, script));
  fbp::CheckReport cert = fbp::certify(f.problem, inv, opts);
  if (fl.json) {
    fbp::json j;
    j["accepted"] = cert.accepted;
    j["invariant"] = fbp::to_string(f.problem.voc, inv);
    j["certification"] = fbp::check_report_to_json(cert);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "invariant: " << fbp::to_string(f.problem.voc, inv) << "\n"
              << fbp::report_to_text(cert);
  }
  return cert.accepted ? 0 : 1;
}

int run_metrics(const std::string& path, bool as_json) {
  fbp::FbpFile f = fbp::parse_fbp_path(path);
  struct Row {
    std::string label, dir;
    fbp::ComplexityMetrics m;
    int witnesses = 0;
  };
  std::vector<Row> rows;
  if (f.proof) {
    int stepno = 0;
    for (const fbp::ScriptStep& st : *f.proof) {
      if (st.kind == fbp::ScriptStep::Kind::Qed) continue;
      ++stepno;
      Row row;
      row.label = "step" + std::to_string(stepno);
      switch (st.kind) {
        case fbp::ScriptStep::Kind::Forward: row.dir = "F"; break;
        case fbp::ScriptStep::Kind::Backward: row.dir = "B"; break;
        case fbp::ScriptStep::Kind::ForwardProphecy: row.dir = "FP"; break;
        default: break;
      }
      row.witnesses = static_cast<int>(st.witnesses.size());
      // A step payload is read as a set of predicates: each top-level conjunct
      // is measured on its own and the step reports the per-measure maximum.
      std::vector<fbp::Formula> parts;
      if (st.payload.is(fbp::Formula::Kind::And))
        for (const fbp::Formula& k : st.payload.kids()) parts.push_back(k);
      else
        parts.push_back(st.payload);
      row.m.clausal = true;
      for (const fbp::Formula& part : parts) {
        fbp::ComplexityMetrics m = fbp::metrics(part);
        row.m.quantifiers = std::max(row.m.quantifiers, m.quantifiers);
        row.m.alternations = std::max(row.m.alternations, m.alternations);
        row.m.boolean = std::max(row.m.boolean, m.boolean);
        row.m.clausal = row.m.clausal && m.clausal;
      }
      rows.push_back(std::move(row));
    }
  }
  if (as_json) {
    fbp::json steps = fbp::json::array();
    for (const Row& r : rows) {
      fbp::json j;
      j["step"] = r.label;
      j["direction"] = r.dir;
      j["quantifiers"] = r.m.quantifiers;
      j["alternations"] = r.m.alternations;
      j["boolean"] = r.m.boolean;
      j["clausal"] = r.m.clausal;
      j["witnesses"] = r.witnesses;
      steps.push_back(std::move(j));
    }
    fbp::json out;
    out["file"] = path;
    out["steps"] = std::move(steps);
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::ostringstream compact;
  for (const Row& r : rows) {
    std::cout << r.label << "  " << r.dir << "  Q=" << r.m.quantifiers
              << " A=" << r.m.alternations << " B=" << r.m.boolean
              << " clausal=" << (r.m.clausal ? "yes" : "no");
    if (r.witnesses) std::cout << " p=" << r.witnesses;
    std::cout << "\n";
    if (compact.tellp() > 0) compact << " / ";
    compact << r.dir << ": Q=" << r.m.quantifiers << ",A=" << r.m.alternations
            << ",B=" << r.m.boolean;
  }
  if (!rows.empty()) std::cout << compact.str() << "\n";
  return 0;
}

int run_reach(const std::string& path, const std::vector<std::string>& bounds,
              unsigned long budget, bool as_json) {
  fbp::FbpFile f = fbp::parse_fbp_path(path);
  fbp::ReachOptions opts;
  opts.bounds = resolve_bounds(f.problem.voc, bounds);
  opts.budget = budget;
  fbp::ReachResult r = fbp::bounded_reach(f.problem, opts);
  if (as_json)
    std::cout << fbp::reach_to_json(f.problem.voc, r).dump(2) << "\n";
  else
    std::cout << fbp::trace_to_text(f.problem.voc, r);
  return r.error_reachable || r.budget_exhausted ? 1 : 0;
}

int run_reverse(const std::string& path) {
  fbp::FbpFile f = fbp::parse_fbp_path(path);
  std::cout << fbp::print_fbp(fbp::reverse(f.problem));
  return 0;
}

int run_powergen(int n, const std::string& family, const std::string& out_path) {
  fbp::FbpFile f = fbp::powergen(family, n);
  std::string text = fbp::print_fbp(f.problem, f.proof ? &*f.proof : nullptr);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream os(out_path);
    if (!os) throw fbp::Error("cannot write " + out_path);
    os << text;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"checker for incremental safety proofs of symbolic transition systems"};
  app.require_subcommand(1);

  std::string path;
  CommonFlags fl;

  CLI::App* c_check = app.add_subcommand("check", "Check the proof script of a spec file");
  c_check->add_option("file", path, "Input .fbp file")->required();
  add_backend_flags(c_check, fl);

  CLI::App* c_extract =
      app.add_subcommand("extract", "Extract and certify the proof's inductive invariant");
  c_extract->add_option("file", path, "Input .fbp file")->required();
  add_backend_flags(c_extract, fl);

  bool metrics_json = false;
  CLI::App* c_metrics = app.add_subcommand("metrics", "Complexity measures per proof step");
  c_metrics->add_option("file", path, "Input .fbp file")->required();
  c_metrics->add_flag("--json", metrics_json, "Machine-readable JSON output");

  std::vector<std::string> reach_bounds;
  unsigned long reach_budget = 1000000;
  bool reach_json = false;
  CLI::App* c_reach = app.add_subcommand("reach", "Explicit-state search for reachable bad states");
  c_reach->add_option("file", path, "Input .fbp file")->required();
  c_reach->add_option("--bound", reach_bounds, "Carrier bound SORT=N");
  c_reach->add_option("--budget", reach_budget, "Maximum states to visit");
  c_reach->add_flag("--json", reach_json, "Machine-readable JSON output");

  CLI::App* c_reverse = app.add_subcommand("reverse", "Print the time-reversed problem");
  c_reverse->add_option("file", path, "Input .fbp file")->required();

  int pg_n = 1;
  std::string pg_family = "fbpi";
  std::string pg_out;
  CLI::App* c_powergen =
      app.add_subcommand("powergen", "Generate a benchmark family instance with its proof");
  c_powergen->add_option("n", pg_n, "Family size parameter")->required();
  c_powergen->add_option("--family", pg_family, "fbi (boolean) or fbpi (witness chain)")
      ->check(CLI::IsMember({"fbi", "fbpi"}));
  c_powergen->add_option("-o,--output", pg_out, "Write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(c_check)) return run_check(path, fl);
    if (app.got_subcommand(c_extract)) return run_extract(path, fl);
    if (app.got_subcommand(c_metrics)) return run_metrics(path, metrics_json);
    if (app.got_subcommand(c_reach)) return run_reach(path, reach_bounds, reach_budget, reach_json);
    if (app.got_subcommand(c_reverse)) return run_reverse(path);
    if (app.got_subcommand(c_powergen)) return run_powergen(pg_n, pg_family, pg_out);
  } catch (const fbp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
