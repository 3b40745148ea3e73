// Validity checking through an external SMT-LIB2 solver process.
//
// Each obligation runs in a fresh solver process:  axioms and the negated
// claim are asserted over uninterpreted sorts/functions, next-state
// occurrences of a mutable symbol f as a second symbol f!p, and the claim is
// valid when the solver reports unsat.  A sat answer comes back with a model,
// which is parsed into a FiniteModel and re-evaluated; only a model that
// really satisfies the axioms and falsifies the claim is reported as a
// counterexample.
#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "fbp/verdict.hpp"

namespace fbp {

struct SmtOptions {
  std::string solver_cmd = "z3";  // invoked as: <solver_cmd> <file.smt2>
  double timeout_s = 30.0;
  std::string dump_dir;           // when nonempty, keep the query as <name>.smt2 there
};

namespace smt {

// ---- emission -------------------------------------------------------------------

inline bool simple_symbol(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '!' && c != '.' && c != '-')
      return false;
  static const std::set<std::string> reserved = {
      "and", "or", "not", "xor", "ite", "true", "false", "forall", "exists", "let",
      "assert", "check-sat", "declare-fun", "declare-sort", "define-fun", "distinct",
      "select", "store", "as", "par", "match", "exit", "model"};
  return !reserved.count(s);
}

inline std::string quote(const std::string& s) {
  if (simple_symbol(s)) return s;
  return "|" + s + "|";
}

inline std::string sym_name(const Vocabulary& voc, SymId s, bool primed) {
  std::string n = voc.symbol(s).name;
  if (primed) n += "!p";
  return quote(n);
}

inline void emit_term(std::ostream& os, const Vocabulary& voc, const Term& t) {
  if (t.is_var()) {
    os << quote(t.var_name());
    return;
  }
  if (t.args().empty()) {
    os << sym_name(voc, t.sym(), t.primed());
    return;
  }
  os << "(" << sym_name(voc, t.sym(), t.primed());
  for (const Term& a : t.args()) {
    os << " ";
    emit_term(os, voc, a);
  }
  os << ")";
}

inline void emit_formula(std::ostream& os, const Vocabulary& voc, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True:
      os << "true";
      return;
    case Formula::Kind::False:
      os << "false";
      return;
    case Formula::Kind::Eq:
      os << "(= ";
      emit_term(os, voc, f.lhs());
      os << " ";
      emit_term(os, voc, f.rhs());
      os << ")";
      return;
    case Formula::Kind::Rel:
      if (f.args().empty()) {
        os << sym_name(voc, f.sym(), f.primed());
        return;
      }
      os << "(" << sym_name(voc, f.sym(), f.primed());
      for (const Term& a : f.args()) {
        os << " ";
        emit_term(os, voc, a);
      }
      os << ")";
      return;
    case Formula::Kind::Not:
      os << "(not ";
      emit_formula(os, voc, f.kid(0));
      os << ")";
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      os << (f.is(Formula::Kind::And) ? "(and" : "(or");
      for (const Formula& k : f.kids()) {
        os << " ";
        emit_formula(os, voc, k);
      }
      os << ")";
      return;
    }
    case Formula::Kind::Implies:
      os << "(=> ";
      emit_formula(os, voc, f.kid(0));
      os << " ";
      emit_formula(os, voc, f.kid(1));
      os << ")";
      return;
    case Formula::Kind::Iff:
      os << "(= ";
      emit_formula(os, voc, f.kid(0));
      os << " ";
      emit_formula(os, voc, f.kid(1));
      os << ")";
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      os << (f.is(Formula::Kind::Forall) ? "(forall (" : "(exists (");
      for (size_t i = 0; i < f.vars().size(); ++i) {
        if (i) os << " ";
        os << "(" << quote(f.vars()[i].name) << " " << quote(voc.sort_name(f.vars()[i].sort)) << ")";
      }
      os << ") ";
      emit_formula(os, voc, f.kid(0));
      os << ")";
      return;
    }
  }
}

// The full query text: declarations, axioms, negated claim.
inline std::string emit_query(const Vocabulary& voc, const std::vector<Formula>& axioms,
                              const Formula& claim, double timeout_s) {
  std::ostringstream os;
  os << "(set-option :produce-models true)\n";
  if (timeout_s > 0)
    os << "(set-option :timeout " << static_cast<long>(timeout_s * 1000) << ")\n";
  os << "(set-logic UF)\n";
  for (SortId s = 0; s < voc.num_sorts(); ++s)
    os << "(declare-sort " << quote(voc.sort_name(s)) << " 0)\n";
  auto declare = [&](SymId s, bool primed) {
    const Symbol& sym = voc.symbol(s);
    os << "(declare-fun " << sym_name(voc, s, primed) << " (";
    for (size_t i = 0; i < sym.args.size(); ++i)
      os << (i ? " " : "") << quote(voc.sort_name(sym.args[i]));
    os << ") " << (sym.kind == SymKind::Relation ? "Bool" : quote(voc.sort_name(sym.result)))
       << ")\n";
  };
  for (SymId s = 0; s < voc.num_symbols(); ++s) {
    declare(s, false);
    if (voc.symbol(s).mut) declare(s, true);
  }
  for (const Formula& ax : axioms) {
    os << "(assert ";
    emit_formula(os, voc, ax);
    os << ")\n";
  }
  os << "(assert (not ";
  emit_formula(os, voc, claim);
  os << "))\n(check-sat)\n(get-model)\n";
  return os.str();
}

// ---- process driver ----------------------------------------------------------------

// Run `cmd file` through the shell with a deadline; returns false on spawn
// failure.  On timeout the whole process group is killed and timed_out set.
inline bool run_with_timeout(const std::string& cmd, double timeout_s, std::string& output,
                             bool& timed_out, std::string& err) {
  timed_out = false;
  int fds[2];
  if (pipe(fds) != 0) {
    err = "pipe failed";
    return false;
  }
  pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    err = "fork failed";
    return false;
  }
  if (pid == 0) {
    setpgid(0, 0);  // own process group, so the timeout can kill solver children too
    dup2(fds[1], STDOUT_FILENO);
    dup2(fds[1], STDERR_FILENO);
    close(fds[0]);
    close(fds[1]);
    execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(fds[1]);
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::milliseconds(static_cast<long>(timeout_s * 1000));
  char buf[4096];
  while (true) {
    auto now = std::chrono::steady_clock::now();
    long remain_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    if (timeout_s > 0 && remain_ms <= 0) {
      kill(-pid, SIGKILL);
      timed_out = true;
      break;
    }
    struct pollfd pfd{fds[0], POLLIN, 0};
    int pr = poll(&pfd, 1, timeout_s > 0 ? static_cast<int>(remain_ms) : -1);
    if (pr < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (pr == 0) continue;  // re-check deadline
    ssize_t n = read(fds[0], buf, sizeof buf);
    if (n <= 0) break;
    output.append(buf, static_cast<size_t>(n));
  }
  close(fds[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  return true;
}

// ---- model parsing -------------------------------------------------------------------

struct Sexp {
  bool atom = true;
  std::string text;
  std::vector<Sexp> kids;
};

inline void skip_ws(const std::string& s, size_t& i) {
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
    } else if (s[i] == ';') {
      while (i < s.size() && s[i] != '\n') ++i;
    } else {
      break;
    }
  }
}

inline bool parse_sexp(const std::string& s, size_t& i, Sexp& out) {
  skip_ws(s, i);
  if (i >= s.size()) return false;
  if (s[i] == '(') {
    ++i;
    out.atom = false;
    out.kids.clear();
    while (true) {
      skip_ws(s, i);
      if (i >= s.size()) return false;
      if (s[i] == ')') {
        ++i;
        return true;
      }
      Sexp kid;
      if (!parse_sexp(s, i, kid)) return false;
      out.kids.push_back(std::move(kid));
    }
  }
  if (s[i] == '|') {
    size_t j = s.find('|', i + 1);
    if (j == std::string::npos) return false;
    out.atom = true;
    out.text = s.substr(i + 1, j - i - 1);
    i = j + 1;
    return true;
  }
  if (s[i] == '"') {
    size_t j = i + 1;
    while (j < s.size() && s[j] != '"') ++j;
    out.atom = true;
    out.text = s.substr(i + 1, j - i - 1);
    i = j + 1 <= s.size() ? j + 1 : s.size();
    return true;
  }
  size_t j = i;
  while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '(' &&
         s[j] != ')')
    ++j;
  out.atom = true;
  out.text = s.substr(i, j - i);
  i = j;
  return true;
}

// Interprets the solver's model output over our vocabulary.  Returns false
// with a reason when anything is not understood.
inline bool model_from_sexps(const Vocabulary& voc, bool two_state,
                             const std::vector<Sexp>& forms, FiniteModel& out, std::string& why) {
  // Universe elements: (declare-fun NAME () SORT) with NAME not in the vocabulary.
  std::map<std::string, std::pair<SortId, unsigned>> elems;
  std::map<SortId, unsigned> cards;
  struct Def {
    std::vector<std::string> params;
    const Sexp* body = nullptr;
  };
  std::map<std::string, Def> defs;

  for (const Sexp& f : forms) {
    if (f.atom || f.kids.empty() || !f.kids[0].atom) continue;
    const std::string& head = f.kids[0].text;
    if (head == "declare-fun" && f.kids.size() >= 4 && f.kids[1].atom && f.kids[3].atom) {
      if (!f.kids[2].atom && f.kids[2].kids.empty()) {
        auto sid = voc.find_sort(f.kids[3].text);
        if (sid && !voc.find_symbol(f.kids[1].text)) {
          unsigned idx = cards[*sid]++;
          elems[f.kids[1].text] = {*sid, idx};
        }
      }
    } else if (head == "define-fun" && f.kids.size() >= 5 && f.kids[1].atom) {
      Def d;
      if (f.kids[2].atom) {
        why = "unexpected define-fun parameter list";
        return false;
      }
      for (const Sexp& p : f.kids[2].kids) {
        if (p.atom || p.kids.size() < 1 || !p.kids[0].atom) {
          why = "unexpected define-fun parameter";
          return false;
        }
        d.params.push_back(p.kids[0].text);
      }
      d.body = &f.kids[4];
      defs[f.kids[1].text] = d;
    }
  }

  out = FiniteModel{};
  out.two_state = two_state;
  out.card.resize(voc.num_sorts());
  for (SortId s = 0; s < voc.num_sorts(); ++s) {
    auto it = cards.find(s);
    out.card[s] = it == cards.end() ? 1 : it->second;
  }
  out.pre.resize(voc.num_symbols());
  out.post.resize(voc.num_symbols());

  // Evaluate a model term under a parameter environment.  Values are element
  // indices; booleans are 0/1.
  std::function<bool(const Sexp&, std::map<std::string, unsigned>&, unsigned&, int)> ev =
      [&](const Sexp& e, std::map<std::string, unsigned>& env, unsigned& val, int depth) -> bool {
    if (depth > 64) {
      why = "model evaluation too deep";
      return false;
    }
    if (e.atom) {
      if (e.text == "true") {
        val = 1;
        return true;
      }
      if (e.text == "false") {
        val = 0;
        return true;
      }
      auto vit = env.find(e.text);
      if (vit != env.end()) {
        val = vit->second;
        return true;
      }
      auto eit = elems.find(e.text);
      if (eit != elems.end()) {
        val = eit->second.second;
        return true;
      }
      auto dit = defs.find(e.text);
      if (dit != defs.end() && dit->second.params.empty()) {
        std::map<std::string, unsigned> none;
        return ev(*dit->second.body, none, val, depth + 1);
      }
      why = "unknown model atom '" + e.text + "'";
      return false;
    }
    if (e.kids.empty() || !e.kids[0].atom) {
      why = "unexpected model expression";
      return false;
    }
    const std::string& op = e.kids[0].text;
    auto sub = [&](size_t i, unsigned& v) { return ev(e.kids[i], env, v, depth + 1); };
    if (op == "ite" && e.kids.size() == 4) {
      unsigned c;
      if (!sub(1, c)) return false;
      return c ? sub(2, val) : sub(3, val);
    }
    if (op == "=" && e.kids.size() >= 3) {
      unsigned a, b;
      if (!sub(1, a)) return false;
      for (size_t i = 2; i < e.kids.size(); ++i) {
        if (!sub(i, b)) return false;
        if (a != b) {
          val = 0;
          return true;
        }
      }
      val = 1;
      return true;
    }
    if (op == "distinct" && e.kids.size() >= 3) {
      std::vector<unsigned> vs;
      for (size_t i = 1; i < e.kids.size(); ++i) {
        unsigned v;
        if (!sub(i, v)) return false;
        vs.push_back(v);
      }
      val = 1;
      for (size_t a = 0; a < vs.size(); ++a)
        for (size_t b = a + 1; b < vs.size(); ++b)
          if (vs[a] == vs[b]) val = 0;
      return true;
    }
    if (op == "and" || op == "or") {
      bool want = op == "or";
      val = want ? 0 : 1;
      for (size_t i = 1; i < e.kids.size(); ++i) {
        unsigned v;
        if (!sub(i, v)) return false;
        if ((v != 0) == want) {
          val = want ? 1 : 0;
          return true;
        }
      }
      return true;
    }
    if (op == "not" && e.kids.size() == 2) {
      unsigned v;
      if (!sub(1, v)) return false;
      val = v ? 0 : 1;
      return true;
    }
    auto dit = defs.find(op);
    if (dit != defs.end()) {
      if (dit->second.params.size() != e.kids.size() - 1) {
        why = "arity mismatch in model for '" + op + "'";
        return false;
      }
      std::map<std::string, unsigned> inner;
      for (size_t i = 0; i < dit->second.params.size(); ++i) {
        unsigned v;
        if (!sub(i + 1, v)) return false;
        inner[dit->second.params[i]] = v;
      }
      return ev(*dit->second.body, inner, val, depth + 1);
    }
    why = "unknown model operator '" + op + "'";
    return false;
  };

  auto fill = [&](SymId s, bool primed, std::vector<unsigned>& tbl) -> bool {
    const Symbol& sym = voc.symbol(s);
    tbl.assign(out.table_size(voc, s), 0);
    std::string name = sym.name + (primed ? "!p" : "");
    auto dit = defs.find(name);
    if (dit == defs.end()) return true;  // unconstrained: keep zeros
    const Def& d = dit->second;
    if (d.params.size() != sym.args.size()) {
      why = "arity mismatch in model for '" + name + "'";
      return false;
    }
    std::vector<unsigned> tuple(sym.args.size(), 0);
    for (unsigned idx = 0; idx < tbl.size(); ++idx) {
      std::map<std::string, unsigned> env;
      for (size_t i = 0; i < tuple.size(); ++i) env[d.params[i]] = tuple[i];
      unsigned v = 0;
      if (!ev(*d.body, env, v, 0)) return false;
      unsigned limit = sym.kind == SymKind::Relation ? 2 : out.card[sym.result];
      if (v >= limit) {
        why = "model value out of range for '" + name + "'";
        return false;
      }
      tbl[idx] = v;
      for (size_t i = tuple.size(); i-- > 0;) {
        if (++tuple[i] < out.card[sym.args[i]]) break;
        tuple[i] = 0;
      }
    }
    return true;
  };

  for (SymId s = 0; s < voc.num_symbols(); ++s) {
    if (!fill(s, false, out.pre[s])) return false;
    if (two_state && voc.symbol(s).mut) {
      if (!fill(s, true, out.post[s])) return false;
    }
  }
  return true;
}

inline bool parse_model_text(const Vocabulary& voc, bool two_state, const std::string& text,
                             FiniteModel& out, std::string& why) {
  size_t i = 0;
  Sexp top;
  if (!parse_sexp(text, i, top)) {
    why = "no model s-expression";
    return false;
  }
  if (top.atom) {
    why = "unexpected model shape";
    return false;
  }
  std::vector<Sexp> forms = std::move(top.kids);
  if (!forms.empty() && forms[0].atom && forms[0].text == "model") forms.erase(forms.begin());
  return model_from_sexps(voc, two_state, forms, out, why);
}

} // namespace smt

// Check  axioms |= claim  by asking the solver whether axioms /\ !claim is
// unsatisfiable.  `name` is used for dump files only.
inline Verdict smt_check_valid(const Vocabulary& voc, const std::vector<Formula>& axioms,
                               const Formula& claim, const SmtOptions& opts,
                               const std::string& name = "query") {
  std::string query = smt::emit_query(voc, axioms, claim, opts.timeout_s);

  std::string path;
  if (!opts.dump_dir.empty()) {
    std::string base = name;
    for (char& c : base)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.')
        c = '_';
    path = opts.dump_dir + "/" + base + ".smt2";
  } else {
    char tmpl[] = "/tmp/fbp-XXXXXX";
    int fd = mkstemp(tmpl);
    if (fd < 0) return {VerdictKind::Unknown, std::nullopt, "cannot create temp file"};
    close(fd);
    path = tmpl;
  }
  {
    std::ofstream f(path);
    if (!f) return {VerdictKind::Unknown, std::nullopt, "cannot write " + path};
    f << query;
  }

  std::string cmd = opts.solver_cmd + " '" + path + "'";
  std::string output, err;
  bool timed_out = false;
  bool spawned = smt::run_with_timeout(cmd, opts.timeout_s * 1.5 + 1.0, output, timed_out, err);
  if (opts.dump_dir.empty()) unlink(path.c_str());
  if (!spawned) return {VerdictKind::Unknown, std::nullopt, "solver spawn failed: " + err};
  if (timed_out) return {VerdictKind::Unknown, std::nullopt, "solver timeout"};

  // First meaningful token decides.
  std::istringstream is(output);
  std::string word;
  while (is >> word) {
    if (word == "unsat") return {VerdictKind::Valid, std::nullopt, ""};
    if (word == "unknown" || word == "timeout")
      return {VerdictKind::Unknown, std::nullopt, "solver answered unknown"};
    if (word == "sat") break;
    // skip solver chatter before the answer
  }
  if (word != "sat") {
    std::string snippet = output.substr(0, 200);
    return {VerdictKind::Unknown, std::nullopt, "unrecognized solver output: " + snippet};
  }

  bool two_state = has_primed_occurrence(claim);
  auto pos = is.tellg();
  std::string rest = pos < 0 ? std::string() : output.substr(static_cast<size_t>(pos));
  FiniteModel m;
  std::string why;
  if (!smt::parse_model_text(voc, two_state, rest, m, why))
    return {VerdictKind::Unknown, std::nullopt, "sat, but model not parseable: " + why};

  // Re-evaluate: the model must satisfy the axioms and falsify the claim.
  try {
    for (const Formula& ax : axioms)
      if (!eval(voc, m, ax))
        return {VerdictKind::Unknown, std::nullopt, "sat, but model fails an axiom"};
    if (eval(voc, m, claim))
      return {VerdictKind::Unknown, std::nullopt, "sat, but model satisfies the claim"};
  } catch (const Error& e) {
    return {VerdictKind::Unknown, std::nullopt, std::string("sat, but model incomplete: ") + e.what()};
  }
  return {VerdictKind::Counterexample, std::move(m), ""};
}

} // namespace fbp
