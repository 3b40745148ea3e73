// External-solver backend: query emission and dumping, answer-word handling,
// countermodel re-evaluation, degradation to "unknown" on unhelpful solvers,
// and agreement with the exhaustive backend.
#include <catch_amalgamated.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"

using namespace fbp;

namespace {

namespace fs = std::filesystem;

// One cached probe: can the configured solver answer a trivial query?
bool solver_available() {
  static int ok = -1;
  if (ok < 0) {
    fs::path p = fs::temp_directory_path() / "fbp_solver_probe.smt2";
    std::ofstream(p) << "(check-sat)\n";
    std::string out;
    int rc = th::run_command(th::solver_cmd() + " '" + p.string() + "'", out);
    ok = (rc == 0 && out.find("sat") != std::string::npos) ? 1 : 0;
  }
  return ok == 1;
}

// A solver stub that ignores the query file and prints a fixed reply.
std::string stub_solver(const std::string& shell_snippet) {
  return "sh -c '" + shell_snippet + "' --";
}

SmtOptions live_opts(double timeout_s = 60.0) {
  SmtOptions o;
  o.solver_cmd = th::solver_cmd();
  o.timeout_s = timeout_s;
  return o;
}

struct SmtFixture {
  Vocabulary voc;
  SortId s;
  SymId p, q, c;  // mutable unary p, immutable unary q, constant c
  SmtFixture() {
    s = voc.add_sort("s");
    p = voc.add_relation("p", {s}, true);
    q = voc.add_relation("q", {s}, false);
    c = voc.add_constant("c", s, false);
  }
  Term x() const { return Term::var("x", s); }
  Formula px(bool primed = false) const { return f_rel(p, {x()}, primed); }
  Formula pc(bool primed = false) const { return f_rel(p, {Term::constant(c)}, primed); }
};

}  // namespace

TEST_CASE("an unsat answer certifies validity beyond any bound") {
  if (!solver_available()) SKIP("no SMT solver configured");
  SmtFixture fx;

  Verdict v = smt_check_valid(
      fx.voc, {},
      f_implies(f_forall({{"x", fx.s}}, fx.px()), f_exists({{"x", fx.s}}, fx.px())),
      live_opts());
  REQUIRE(v.kind == VerdictKind::Valid);
  REQUIRE_FALSE(v.model.has_value());

  SECTION("axioms weaken the claim's burden") {
    Verdict bare = smt_check_valid(fx.voc, {}, fx.pc(), live_opts());
    REQUIRE(bare.kind == VerdictKind::Counterexample);
    Verdict under = smt_check_valid(fx.voc, {f_forall({{"x", fx.s}}, fx.px())},
                                    fx.pc(), live_opts());
    REQUIRE(under.kind == VerdictKind::Valid);
  }
}

TEST_CASE("sat answers come back as re-evaluated countermodels") {
  if (!solver_available()) SKIP("no SMT solver configured");
  SmtFixture fx;

  SECTION("one-state claim") {
    Formula claim = f_forall({{"x", fx.s}}, fx.px());
    Verdict v = smt_check_valid(fx.voc, {}, claim, live_opts());
    REQUIRE(v.kind == VerdictKind::Counterexample);
    REQUIRE(v.model.has_value());
    REQUIRE_FALSE(v.model->two_state);
    REQUIRE(v.model->card.size() == fx.voc.num_sorts());
    REQUIRE(v.model->card[fx.s] >= 1);
    REQUIRE_FALSE(eval(fx.voc, *v.model, claim));
  }
  SECTION("two-state claim under an axiom") {
    Verdict v = smt_check_valid(fx.voc, {fx.pc()}, fx.pc(true), live_opts());
    REQUIRE(v.kind == VerdictKind::Counterexample);
    REQUIRE(v.model->two_state);
    REQUIRE(eval(fx.voc, *v.model, fx.pc()));        // axiom holds
    REQUIRE_FALSE(eval(fx.voc, *v.model, fx.pc(true)));  // claim fails
  }
}

TEST_CASE("unhelpful solvers degrade to unknown with a reason") {
  Vocabulary voc;
  SymId pn = voc.add_relation("pn", {}, false);
  SymId qn = voc.add_relation("qn", {}, false);
  Formula claim = f_rel(pn, {});
  SmtOptions o;
  o.timeout_s = 20.0;

  auto run = [&](const std::string& snippet, const std::vector<Formula>& ax = {}) {
    o.solver_cmd = stub_solver(snippet);
    return smt_check_valid(voc, ax, claim, o);
  };

  Verdict v = run("echo unknown");
  REQUIRE(v.kind == VerdictKind::Unknown);
  REQUIRE(v.detail == "solver answered unknown");
  REQUIRE(run("echo timeout").detail == "solver answered unknown");

  v = run("echo utter-nonsense");
  REQUIRE(v.kind == VerdictKind::Unknown);
  REQUIRE(v.detail.starts_with("unrecognized solver output:"));

  // A missing binary surfaces through the same channel: the shell's error
  // message is not an answer word.
  o.solver_cmd = "definitely-not-a-solver-binary";
  v = smt_check_valid(voc, {}, claim, o);
  REQUIRE(v.kind == VerdictKind::Unknown);
  REQUIRE(v.detail.starts_with("unrecognized solver output:"));
  o.solver_cmd.clear();

  REQUIRE(run("echo leading chatter; echo unsat").kind == VerdictKind::Valid);

  v = run("echo sat");
  REQUIRE(v.kind == VerdictKind::Unknown);
  REQUIRE(v.detail.starts_with("sat, but model not parseable"));

  v = run(R"sh(echo sat; echo "(model (define-fun pn () Bool true))")sh");
  REQUIRE(v.kind == VerdictKind::Unknown);
  REQUIRE(v.detail == "sat, but model satisfies the claim");

  v = run(
      R"sh(echo sat; echo "(model (define-fun pn () Bool false) (define-fun qn () Bool false))")sh",
      {f_rel(qn, {})});
  REQUIRE(v.kind == VerdictKind::Unknown);
  REQUIRE(v.detail == "sat, but model fails an axiom");

  SECTION("a stuck solver is killed at the deadline") {
    o.solver_cmd = stub_solver("sleep 600");
    o.timeout_s = 0.2;
    Verdict t = smt_check_valid(voc, {}, claim, o);
    REQUIRE(t.kind == VerdictKind::Unknown);
    REQUIRE(t.detail == "solver timeout");
  }
}

TEST_CASE("queries are dumped for inspection when requested") {
  SmtFixture fx;
  fs::path dir = fs::temp_directory_path() / "fbp_dump_test";
  fs::remove_all(dir);
  fs::create_directories(dir);

  SmtOptions o;
  o.solver_cmd = stub_solver("echo unsat");  // emission is what's under test
  o.dump_dir = dir.string();
  Verdict v = smt_check_valid(fx.voc, {fx.pc()}, fx.pc(true), o,
                              "step1.consecution[deal]");
  REQUIRE(v.kind == VerdictKind::Valid);

  // Bracketed obligation names are flattened to filesystem-safe ones.
  fs::path file = dir / "step1.consecution_deal_.smt2";
  REQUIRE(fs::exists(file));
  std::stringstream buf;
  buf << std::ifstream(file).rdbuf();
  std::string text = buf.str();
  REQUIRE(text.find("(set-logic UF)") != std::string::npos);
  REQUIRE(text.find("(declare-sort s 0)") != std::string::npos);
  REQUIRE(text.find("(declare-fun p (s) Bool)") != std::string::npos);
  // The next-state copy exists exactly for mutable symbols.
  REQUIRE(text.find("(declare-fun p!p (s) Bool)") != std::string::npos);
  REQUIRE(text.find("q!p") == std::string::npos);
  REQUIRE(text.find("(assert (not ") != std::string::npos);
  REQUIRE(text.find("(check-sat)") != std::string::npos);
  REQUIRE(text.find("(get-model)") != std::string::npos);

  SECTION("the command line dumps one file per solver-checked obligation") {
    const char* cli = std::getenv("FBP_CLI");
    if (!cli) SKIP("FBP_CLI not set");
    fs::path cdir = fs::temp_directory_path() / "fbp_dump_cli";
    fs::remove_all(cdir);
    fs::create_directories(cdir);
    std::string out;
    int rc = th::run_command(std::string(cli) + " check " +
                                 th::corpus_file("dealer_fb.fbp") +
                                 " --backend smt --solver-cmd \"sh -c 'echo unsat' --\"" +
                                 " --dump-smt " + cdir.string() + " --json",
                             out);
    REQUIRE(rc == 0);
    auto j = nlohmann::json::parse(out);
    size_t solver_checked = 0;
    for (const auto& row : j["obligations"])
      if (!row["trivial"].get<bool>()) ++solver_checked;
    size_t files = 0;
    for (const auto& e : fs::directory_iterator(cdir)) {
      REQUIRE(e.path().extension() == ".smt2");
      ++files;
    }
    REQUIRE(files == solver_checked);
    REQUIRE(files > 0);
  }
}

TEST_CASE("the exhaustive and solver backends agree on propositional obligations") {
  if (!solver_available()) SKIP("no SMT solver configured");
  FbpFile f = parse_fbp_path(th::corpus_file("dealer_fb.fbp"));
  Bounds b;  // no sorts: exhaustive check is complete

  auto agree = [&](const ProofScript& script) {
    std::vector<Obligation> obs = vcgen(f.problem, elaborate(script));
    for (const Obligation& ob : obs) {
      if (trivially_valid(ob.claim)) continue;
      Verdict ve = enum_check_valid(ob.voc, ob.axioms, ob.claim, b);
      Verdict vs = smt_check_valid(ob.voc, ob.axioms, ob.claim, live_opts(), ob.name);
      INFO(ob.name);
      VerdictKind want =
          ve.kind == VerdictKind::Valid ? VerdictKind::Valid : VerdictKind::Counterexample;
      REQUIRE(vs.kind == want);
      if (vs.kind == VerdictKind::Counterexample) {
        REQUIRE_FALSE(eval(ob.voc, *vs.model, ob.claim));
        REQUIRE_FALSE(eval(ob.voc, *ve.model, ob.claim));
      }
    }
  };

  agree(*f.proof);
  SECTION("including refuted obligations of a bad script") {
    ProofScript bad;
    bad.push_back({ScriptStep::Kind::Forward, f_not(f.problem.bad), {}, false, {}, true});
    bad.push_back({ScriptStep::Kind::Qed, {}, {}, false, {}, true});
    agree(bad);
  }
}

TEST_CASE("corpus proofs are accepted unbounded through the solver") {
  if (!solver_available()) SKIP("no SMT solver configured");

  SECTION("propositional dealing") {
    FbpFile f = parse_fbp_path(th::corpus_file("dealer_fb.fbp"));
    CheckReport r = check(f.problem, *f.proof, th::smt_options());
    REQUIRE(r.accepted);
    REQUIRE_FALSE(r.bounded);
    for (const ObligationResult& o : r.results)
      REQUIRE(o.verdict.kind == VerdictKind::Valid);
  }
  SECTION("quantified teams") {
    FbpFile f = parse_fbp_path(th::corpus_file("teams_fb.fbp"));
    CheckReport r = check(f.problem, *f.proof, th::smt_options());
    REQUIRE(r.accepted);
    REQUIRE_FALSE(r.bounded);  // no finite bound involved, unlike the exhaustive backend
  }
  SECTION("prophecy pursuit") {
    FbpFile f = parse_fbp_path(th::corpus_file("pursuit_prophecy.fbp"));
    CheckReport r = check(f.problem, *f.proof, th::smt_options());
    REQUIRE(r.accepted);
    REQUIRE_FALSE(r.bounded);
  }
}
