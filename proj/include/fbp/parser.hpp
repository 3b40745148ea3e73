// Parser for the .fbp problem/proof file format.
//
// The format declares sorts and symbols, gives axioms, initial states, named
// transitions (optionally with modifies-style frame sugar), the safety
// property (or bad states directly), and optionally a proof script.  All
// errors carry line:col positions.
#pragma once

#include <cctype>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>

#include "fbp/proof.hpp"
#include "fbp/system.hpp"

namespace fbp {

struct FbpFile {
  SafetyProblem problem;
  std::optional<ProofScript> proof;
};

namespace detail {

struct Token {
  enum class Kind {
    Ident, LParen, RParen, LBrace, RBrace, LBracket, RBracket,
    Comma, Colon, Semicolon, Dot, Amp, Pipe, Bang, Arrow, Iff, Eq, Neq, End
  };
  Kind kind = Kind::End;
  std::string text;   // Ident only
  bool primed = false; // Ident immediately followed by '
  int line = 1, col = 1;
};

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] static void fail(const Token& at, const std::string& msg) {
    throw Error(std::to_string(at.line) + ":" + std::to_string(at.col) + ": " + msg);
  }

private:
  void advance() {
    skip();
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::Kind::End;
      return;
    }
    char c = src_[pos_];
    auto one = [&](Token::Kind k) {
      tok_.kind = k;
      bump();
    };
    // Unicode spellings of the connectives (UTF-8).
    if (static_cast<unsigned char>(c) >= 0x80) {
      static const struct { const char* utf8; Token::Kind kind; const char* ident; } table[] = {
          {"∀", Token::Kind::Ident, "forall"},  // ∀
          {"∃", Token::Kind::Ident, "exists"},  // ∃
          {"∧", Token::Kind::Amp, nullptr},     // ∧
          {"∨", Token::Kind::Pipe, nullptr},    // ∨
          {"→", Token::Kind::Arrow, nullptr},   // →
          {"↔", Token::Kind::Iff, nullptr},     // ↔
          {"¬", Token::Kind::Bang, nullptr},    // ¬
          {"≠", Token::Kind::Neq, nullptr},     // ≠
      };
      for (const auto& e : table) {
        size_t n = std::strlen(e.utf8);
        if (src_.compare(pos_, n, e.utf8) == 0) {
          tok_.kind = e.kind;
          if (e.ident) tok_.text = e.ident;
          for (size_t i = 0; i < n; ++i) bump();
          return;
        }
      }
      fail(tok_, "unexpected character");
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        bump();
      tok_.kind = Token::Kind::Ident;
      tok_.text = src_.substr(start, pos_ - start);
      if (pos_ < src_.size() && src_[pos_] == '\'') {
        tok_.primed = true;
        bump();
      }
      return;
    }
    switch (c) {
      case '(': one(Token::Kind::LParen); return;
      case ')': one(Token::Kind::RParen); return;
      case '{': one(Token::Kind::LBrace); return;
      case '}': one(Token::Kind::RBrace); return;
      case '[': one(Token::Kind::LBracket); return;
      case ']': one(Token::Kind::RBracket); return;
      case ',': one(Token::Kind::Comma); return;
      case ':': one(Token::Kind::Colon); return;
      case ';': one(Token::Kind::Semicolon); return;
      case '.': one(Token::Kind::Dot); return;
      case '&': one(Token::Kind::Amp); return;
      case '|': one(Token::Kind::Pipe); return;
      case '=':
        bump();
        if (pos_ < src_.size() && src_[pos_] == '>') fail(tok_, "use -> for implication");
        tok_.kind = Token::Kind::Eq;
        return;
      case '!':
        bump();
        if (pos_ < src_.size() && src_[pos_] == '=') {
          bump();
          tok_.kind = Token::Kind::Neq;
          return;
        }
        tok_.kind = Token::Kind::Bang;
        return;
      case '-':
        bump();
        if (pos_ < src_.size() && src_[pos_] == '>') {
          bump();
          tok_.kind = Token::Kind::Arrow;
          return;
        }
        fail(tok_, "stray '-'");
      case '<':
        bump();
        if (pos_ + 1 < src_.size() && src_[pos_] == '-' && src_[pos_ + 1] == '>') {
          bump();
          bump();
          tok_.kind = Token::Kind::Iff;
          return;
        }
        fail(tok_, "stray '<'");
      default:
        fail(tok_, std::string("unexpected character '") + c + "'");
    }
  }

  void skip() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#' || (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/')) {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

// ---- formula parsing ---------------------------------------------------------

class FormulaParser {
public:
  FormulaParser(Lexer& lx, const Vocabulary& voc) : lx_(lx), voc_(voc) {}

  // Parse with an initial scope of free variables (used for witness formulas).
  Formula parse(const std::vector<VarDecl>& free_scope = {}) {
    scope_ = free_scope;
    return parse_iff();
  }

  void set_scope(const std::vector<VarDecl>& scope) { scope_ = scope; }

  // Exposed pieces reused by the declaration parser.
  std::vector<VarDecl> parse_binders() {
    std::vector<VarDecl> out;
    while (true) {
      std::vector<Token> names;
      names.push_back(expect_ident("variable name"));
      while (lx_.peek().kind == Token::Kind::Comma) {
        // Lookahead: a comma continues the name list only until the colon.
        lx_.next();
        names.push_back(expect_ident("variable name"));
      }
      expect(Token::Kind::Colon, "':' before sort");
      Token sort = expect_ident("sort name");
      auto sid = voc_.find_sort(sort.text);
      if (!sid) Lexer::fail(sort, "unknown sort '" + sort.text + "'");
      for (const Token& n : names) {
        if (n.primed) Lexer::fail(n, "variable name cannot be primed");
        check_fresh_binder(n);
        for (const VarDecl& prev : out)
          if (prev.name == n.text) Lexer::fail(n, "duplicate binder '" + n.text + "'");
        out.push_back({n.text, *sid});
      }
      if (lx_.peek().kind == Token::Kind::Comma) {
        lx_.next();
        continue;
      }
      break;
    }
    return out;
  }

  Term parse_term() {
    Token id = expect_ident("term");
    return finish_term(id);
  }

private:
  Formula parse_iff() {
    Formula l = parse_implies();
    if (lx_.peek().kind == Token::Kind::Iff) {
      lx_.next();
      return f_iff(std::move(l), parse_iff());
    }
    return l;
  }

  Formula parse_implies() {
    Formula l = parse_or();
    if (lx_.peek().kind == Token::Kind::Arrow) {
      lx_.next();
      return f_implies(std::move(l), parse_implies());
    }
    return l;
  }

  Formula parse_or() {
    std::vector<Formula> kids{parse_and()};
    while (lx_.peek().kind == Token::Kind::Pipe) {
      lx_.next();
      kids.push_back(parse_and());
    }
    return kids.size() == 1 ? kids[0] : f_or(std::move(kids));
  }

  Formula parse_and() {
    std::vector<Formula> kids{parse_unary()};
    while (lx_.peek().kind == Token::Kind::Amp) {
      lx_.next();
      kids.push_back(parse_unary());
    }
    return kids.size() == 1 ? kids[0] : f_and(std::move(kids));
  }

  Formula parse_unary() {
    const Token& t = lx_.peek();
    if (t.kind == Token::Kind::Bang) {
      lx_.next();
      return f_not(parse_unary());
    }
    if (t.kind == Token::Kind::Ident && (t.text == "forall" || t.text == "exists")) {
      Token q = lx_.next();
      size_t mark = scope_.size();
      std::vector<VarDecl> vars = parse_binders();
      for (const VarDecl& v : vars) scope_.push_back(v);
      expect(Token::Kind::Dot, "'.' after binders");
      Formula body = parse_iff();
      scope_.resize(mark);
      return f_quant(q.text == "forall" ? Formula::Kind::Forall : Formula::Kind::Exists,
                     std::move(vars), std::move(body));
    }
    return parse_atom();
  }

  Formula parse_atom() {
    const Token& t = lx_.peek();
    if (t.kind == Token::Kind::LParen) {
      lx_.next();
      Formula f = parse_iff();
      expect(Token::Kind::RParen, "')'");
      return f;
    }
    if (t.kind != Token::Kind::Ident) Lexer::fail(t, "expected a formula");
    if (t.text == "true") {
      lx_.next();
      return f_true();
    }
    if (t.text == "false") {
      lx_.next();
      return f_false();
    }

    Token id = lx_.next();
    // Relation atom?
    if (!lookup_var(id.text)) {
      auto sid = voc_.find_symbol(id.text);
      if (sid && voc_.symbol(*sid).kind == SymKind::Relation) {
        const Symbol& sym = voc_.symbol(*sid);
        if (id.primed && !sym.mut)
          Lexer::fail(id, "primed occurrence of immutable symbol '" + id.text + "'");
        std::vector<Term> args = parse_args(id, sym.args.size());
        check_arg_sorts(id, sym, args);
        return f_rel(*sid, std::move(args), id.primed);
      }
    }
    // Otherwise it must be a term compared with = or !=.
    Term lhs = finish_term(id);
    const Token& op = lx_.peek();
    if (op.kind != Token::Kind::Eq && op.kind != Token::Kind::Neq)
      Lexer::fail(op, "expected '=' or '!=' after a term");
    bool neq = lx_.next().kind == Token::Kind::Neq;
    Token rt = lx_.peek();
    Term rhs = parse_term();
    if (term_sort(lhs) != term_sort(rhs)) Lexer::fail(rt, "equality between different sorts");
    Formula eq = f_eq(std::move(lhs), std::move(rhs));
    return neq ? f_not(std::move(eq)) : eq;
  }

  Term finish_term(const Token& id) {
    if (auto v = lookup_var(id.text)) {
      if (id.primed) Lexer::fail(id, "variable '" + id.text + "' cannot be primed");
      if (lx_.peek().kind == Token::Kind::LParen)
        Lexer::fail(id, "variable '" + id.text + "' is not a function");
      return Term::var(id.text, v->sort);
    }
    auto sid = voc_.find_symbol(id.text);
    if (!sid) Lexer::fail(id, "unknown symbol '" + id.text + "'");
    const Symbol& sym = voc_.symbol(*sid);
    if (sym.kind != SymKind::Function)
      Lexer::fail(id, "relation '" + id.text + "' used as a term");
    if (id.primed && !sym.mut)
      Lexer::fail(id, "primed occurrence of immutable symbol '" + id.text + "'");
    std::vector<Term> args = parse_args(id, sym.args.size());
    check_arg_sorts(id, sym, args);
    return Term::app(*sid, std::move(args), id.primed);
  }

  std::vector<Term> parse_args(const Token& id, size_t arity) {
    std::vector<Term> args;
    if (lx_.peek().kind == Token::Kind::LParen) {
      lx_.next();
      while (true) {
        args.push_back(parse_term());
        if (lx_.peek().kind == Token::Kind::Comma) {
          lx_.next();
          continue;
        }
        break;
      }
      expect(Token::Kind::RParen, "')'");
    }
    if (args.size() != arity)
      Lexer::fail(id, "symbol '" + id.text + "' expects " + std::to_string(arity) +
                          " arguments, got " + std::to_string(args.size()));
    return args;
  }

  void check_arg_sorts(const Token& id, const Symbol& sym, const std::vector<Term>& args) {
    for (size_t i = 0; i < args.size(); ++i)
      if (term_sort(args[i]) != sym.args[i])
        Lexer::fail(id, "argument " + std::to_string(i + 1) + " of '" + sym.name +
                            "' has wrong sort");
  }

  SortId term_sort(const Term& t) const {
    if (t.is_var()) return t.var_sort();
    return voc_.symbol(t.sym()).result;
  }

  const VarDecl* lookup_var(const std::string& n) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->name == n) return &*it;
    return nullptr;
  }

  void check_fresh_binder(const Token& n) {
    if (voc_.find_symbol(n.text) || voc_.find_sort(n.text))
      Lexer::fail(n, "binder '" + n.text + "' shadows a declared name");
    if (n.text == "true" || n.text == "false" || n.text == "forall" || n.text == "exists")
      Lexer::fail(n, "'" + n.text + "' cannot be a variable name");
  }

  Token expect_ident(const std::string& what) {
    const Token& t = lx_.peek();
    if (t.kind != Token::Kind::Ident) Lexer::fail(t, "expected " + what);
    return lx_.next();
  }

  void expect(Token::Kind k, const std::string& what) {
    const Token& t = lx_.peek();
    if (t.kind != k) Lexer::fail(t, "expected " + what);
    lx_.next();
  }

  Lexer& lx_;
  const Vocabulary& voc_;
  std::vector<VarDecl> scope_;
};

} // namespace detail

// ---- file parsing -------------------------------------------------------------

inline FbpFile parse_fbp(const std::string& text) {
  using detail::Lexer;
  using detail::Token;
  Lexer lx(text);
  FbpFile out;
  SafetyProblem& p = out.problem;

  std::vector<Formula> inits;
  bool have_property = false;

  auto expect_ident = [&](const std::string& what) {
    const Token& t = lx.peek();
    if (t.kind != Token::Kind::Ident) Lexer::fail(t, "expected " + what);
    return lx.next();
  };
  auto expect = [&](Token::Kind k, const std::string& what) {
    const Token& t = lx.peek();
    if (t.kind != k) Lexer::fail(t, "expected " + what);
    return lx.next();
  };
  auto check_new_name = [&](const Token& t) {
    if (p.voc.find_sort(t.text) || p.voc.find_symbol(t.text))
      Lexer::fail(t, "'" + t.text + "' is already declared");
  };
  auto parse_sort_ref = [&]() {
    Token t = expect_ident("sort name");
    auto sid = p.voc.find_sort(t.text);
    if (!sid) Lexer::fail(t, "unknown sort '" + t.text + "'");
    return *sid;
  };

  while (lx.peek().kind != Token::Kind::End) {
    Token head = expect_ident("declaration");
    const std::string& kw = head.text;

    if (kw == "sort") {
      Token name = expect_ident("sort name");
      check_new_name(name);
      p.voc.add_sort(name.text);
    } else if (kw == "immutable" || kw == "mutable") {
      bool mut = kw == "mutable";
      Token what = expect_ident("'constant', 'function' or 'relation'");
      std::vector<Token> names;
      names.push_back(expect_ident("symbol name"));
      while (lx.peek().kind == Token::Kind::Comma) {
        lx.next();
        names.push_back(expect_ident("symbol name"));
      }
      if (what.text == "constant") {
        expect(Token::Kind::Colon, "':' before sort");
        SortId sort = parse_sort_ref();
        for (const Token& n : names) {
          check_new_name(n);
          p.voc.add_constant(n.text, sort, mut);
        }
      } else if (what.text == "function") {
        expect(Token::Kind::Colon, "':' before signature");
        std::vector<SortId> args{parse_sort_ref()};
        while (lx.peek().kind == Token::Kind::Comma) {
          lx.next();
          args.push_back(parse_sort_ref());
        }
        expect(Token::Kind::Arrow, "'->' before result sort");
        SortId result = parse_sort_ref();
        for (const Token& n : names) {
          check_new_name(n);
          p.voc.add_function(n.text, args, result, mut);
        }
      } else if (what.text == "relation") {
        std::vector<SortId> args;
        if (lx.peek().kind == Token::Kind::Colon) {
          lx.next();
          args.push_back(parse_sort_ref());
          while (lx.peek().kind == Token::Kind::Comma) {
            lx.next();
            args.push_back(parse_sort_ref());
          }
        }
        for (const Token& n : names) {
          check_new_name(n);
          p.voc.add_relation(n.text, args, mut);
        }
      } else {
        Lexer::fail(what, "expected 'constant', 'function' or 'relation'");
      }
    } else if (kw == "axiom" || kw == "init" || kw == "safety" || kw == "bad") {
      Token at = lx.peek();
      detail::FormulaParser fp(lx, p.voc);
      Formula f = fp.parse();
      auto attach = [&](std::vector<Diag> ds) {
        if (!ds.empty()) Lexer::fail(at, ds.front().message);
      };
      if (kw == "axiom") {
        attach(well_sorted(p.voc, f));
        if (has_primed_occurrence(f)) Lexer::fail(at, "axiom mentions the next state");
        for (SymId s : symbols_of(f))
          if (p.voc.symbol(s).mut)
            Lexer::fail(at, "axiom mentions mutable symbol '" + p.voc.symbol(s).name + "'");
        p.axioms.push_back(std::move(f));
      } else if (kw == "init") {
        attach(well_sorted(p.voc, f));
        if (has_primed_occurrence(f)) Lexer::fail(at, "init mentions the next state");
        inits.push_back(std::move(f));
      } else {
        if (have_property) Lexer::fail(head, "duplicate safety/bad declaration");
        attach(well_sorted(p.voc, f));
        if (has_primed_occurrence(f)) Lexer::fail(at, "property mentions the next state");
        have_property = true;
        p.bad = kw == "bad" ? std::move(f) : f_not(std::move(f));
      }
    } else if (kw == "transition") {
      Token name = expect_ident("transition name");
      for (const Transition& t : p.transitions)
        if (t.name == name.text) Lexer::fail(name, "duplicate transition '" + name.text + "'");
      expect(Token::Kind::LBrace, "'{'");
      Token at = lx.peek();
      detail::FormulaParser fp(lx, p.voc);

      std::vector<VarDecl> binders;
      bool sugar = false;
      Formula body;
      if (lx.peek().kind == Token::Kind::Ident && lx.peek().text == "exists") {
        // Either frame sugar with binders or a plain formula starting with
        // 'exists': decided by whether '[' follows the binder list.
        lx.next();
        binders = fp.parse_binders();
        expect(Token::Kind::Dot, "'.' after binders");
        if (lx.peek().kind == Token::Kind::LBracket) {
          sugar = true;
        } else {
          body = f_exists(binders, fp.parse(binders));
          binders.clear();
        }
      } else if (lx.peek().kind == Token::Kind::LBracket) {
        sugar = true;
      } else {
        body = fp.parse();
      }

      if (sugar) {
        expect(Token::Kind::LBracket, "'['");
        Formula inner = fp.parse(binders);
        expect(Token::Kind::RBracket, "']'");
        Token mk = expect_ident("'modifies'");
        if (mk.text != "modifies") Lexer::fail(mk, "expected 'modifies'");
        expect(Token::Kind::LBrace, "'{'");
        std::vector<ModApp> mods;
        if (lx.peek().kind != Token::Kind::RBrace) {
          while (true) {
            Token app = expect_ident("modified symbol");
            auto sid = p.voc.find_symbol(app.text);
            if (!sid) Lexer::fail(app, "unknown symbol '" + app.text + "'");
            if (app.primed) Lexer::fail(app, "modifies lists current-state applications");
            ModApp ma;
            ma.sym = *sid;
            if (lx.peek().kind == Token::Kind::LParen) {
              lx.next();
              fp.set_scope(binders);
              while (true) {
                ma.args.push_back(fp.parse_term());
                if (lx.peek().kind == Token::Kind::Comma) {
                  lx.next();
                  continue;
                }
                break;
              }
              expect(Token::Kind::RParen, "')'");
            }
            mods.push_back(std::move(ma));
            if (lx.peek().kind == Token::Kind::Comma) {
              lx.next();
              continue;
            }
            break;
          }
        }
        expect(Token::Kind::RBrace, "'}'");
        try {
          body = desugar_frame(p.voc, binders, inner, mods);
        } catch (const Error& e) {
          Lexer::fail(at, e.what());
        }
      }

      auto ds = well_sorted(p.voc, body);
      if (!ds.empty()) Lexer::fail(at, ds.front().message);
      if (!free_vars(body).empty()) Lexer::fail(at, "transition formula is not closed");
      expect(Token::Kind::RBrace, "'}'");
      p.transitions.push_back({name.text, std::move(body)});
    } else if (kw == "proof") {
      if (out.proof) Lexer::fail(head, "duplicate proof block");
      expect(Token::Kind::LBrace, "'{'");
      ProofScript script;
      Vocabulary script_voc = p.voc;  // grows as FP steps add witnesses
      while (lx.peek().kind != Token::Kind::RBrace) {
        Token st = expect_ident("proof step");
        ScriptStep step;
        if (st.text == "F" || st.text == "B") {
          step.kind = st.text == "F" ? ScriptStep::Kind::Forward : ScriptStep::Kind::Backward;
          expect(Token::Kind::LParen, "'('");
          detail::FormulaParser fp(lx, script_voc);
          step.payload = fp.parse();
          expect(Token::Kind::RParen, "')'");
        } else if (st.text == "FP") {
          step.kind = ScriptStep::Kind::ForwardProphecy;
          expect(Token::Kind::LParen, "'('");
          detail::FormulaParser fp(lx, script_voc);
          step.witnesses = fp.parse_binders();
          expect(Token::Kind::Semicolon, "';' after witnesses");
          detail::FormulaParser fp2(lx, script_voc);
          step.payload = fp2.parse(step.witnesses);
          expect(Token::Kind::Semicolon, "';' after prophecy formula");
          Token mode = expect_ident("'fwd' or 'select'");
          if (mode.text == "fwd") {
            step.select = false;
          } else if (mode.text == "select") {
            step.select = true;
            expect(Token::Kind::LParen, "'('");
            detail::FormulaParser fp3(lx, script_voc);
            step.selector = fp3.parse();
            expect(Token::Kind::RParen, "')'");
          } else {
            Lexer::fail(mode, "expected 'fwd' or 'select'");
          }
          expect(Token::Kind::RParen, "')'");
          for (const VarDecl& w : step.witnesses) {
            if (script_voc.find_symbol(w.name) || script_voc.find_sort(w.name))
              Lexer::fail(st, "witness '" + w.name + "' is already declared");
            script_voc.add_constant(w.name, w.sort, /*mut=*/false);
          }
        } else if (st.text == "QED") {
          step.kind = ScriptStep::Kind::Qed;
          expect(Token::Kind::LParen, "'('");
          Token dir = expect_ident("'fwd' or 'bwd'");
          if (dir.text == "fwd") step.qed_forward = true;
          else if (dir.text == "bwd") step.qed_forward = false;
          else Lexer::fail(dir, "expected 'fwd' or 'bwd'");
          expect(Token::Kind::RParen, "')'");
        } else {
          Lexer::fail(st, "expected F, B, FP or QED");
        }
        expect(Token::Kind::Semicolon, "';' after proof step");
        script.push_back(std::move(step));
      }
      expect(Token::Kind::RBrace, "'}'");
      out.proof = std::move(script);
    } else {
      Lexer::fail(head, "unknown declaration '" + kw + "'");
    }
  }

  if (inits.empty()) Lexer::fail(lx.peek(), "missing init declaration");
  if (!have_property) Lexer::fail(lx.peek(), "missing safety/bad declaration");
  p.init = f_and(std::move(inits));
  auto diags = validate(p);
  if (!diags.empty()) throw Error("invalid problem: " + diags.front().message);
  return out;
}

inline FbpFile parse_fbp_path(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  try {
    return parse_fbp(os.str());
  } catch (const Error& e) {
    throw Error(path + ":" + e.what());
  }
}

// Parse a single formula over a given vocabulary (testing/tooling helper).
inline Formula parse_formula(const Vocabulary& voc, const std::string& text,
                             const std::vector<VarDecl>& free_scope = {}) {
  detail::Lexer lx(text);
  detail::FormulaParser fp(lx, voc);
  Formula f = fp.parse(free_scope);
  if (lx.peek().kind != detail::Token::Kind::End)
    detail::Lexer::fail(lx.peek(), "trailing input after formula");
  return f;
}

} // namespace fbp
