// Rendering of terms, formulas, and problems in the concrete syntax the
// parser accepts, so printed output round-trips.
#pragma once

#include <sstream>
#include <string>

#include "fbp/system.hpp"

namespace fbp {

inline std::string to_string(const Vocabulary& voc, const Term& t) {
  if (t.empty()) return "<empty>";
  if (t.is_var()) return t.var_name();
  std::string out = voc.symbol(t.sym()).name;
  if (t.primed()) out += "'";
  if (!t.args().empty()) {
    out += "(";
    for (size_t i = 0; i < t.args().size(); ++i) {
      if (i) out += ", ";
      out += to_string(voc, t.args()[i]);
    }
    out += ")";
  }
  return out;
}

namespace detail {
// Precedence levels: iff 1, implies 2, or 3, and 4, unary 5; quantifiers 0.
inline void print_formula(std::ostream& os, const Vocabulary& voc, const Formula& f, int ctx) {
  auto paren = [&](int prec, auto&& body) {
    bool need = prec < ctx;
    if (need) os << "(";
    body();
    if (need) os << ")";
  };
  switch (f.kind()) {
    case Formula::Kind::True:
      os << "true";
      return;
    case Formula::Kind::False:
      os << "false";
      return;
    case Formula::Kind::Eq:
      os << to_string(voc, f.lhs()) << " = " << to_string(voc, f.rhs());
      return;
    case Formula::Kind::Rel: {
      os << voc.symbol(f.sym()).name;
      if (f.primed()) os << "'";
      if (!f.args().empty()) {
        os << "(";
        for (size_t i = 0; i < f.args().size(); ++i) {
          if (i) os << ", ";
          os << to_string(voc, f.args()[i]);
        }
        os << ")";
      }
      return;
    }
    case Formula::Kind::Not:
      if (f.kid(0).is(Formula::Kind::Eq)) {
        os << to_string(voc, f.kid(0).lhs()) << " != " << to_string(voc, f.kid(0).rhs());
        return;
      }
      paren(5, [&] {
        os << "!";
        print_formula(os, voc, f.kid(0), 5);
      });
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      int prec = f.kind() == Formula::Kind::And ? 4 : 3;
      const char* op = f.kind() == Formula::Kind::And ? " & " : " | ";
      paren(prec, [&] {
        for (size_t i = 0; i < f.kids().size(); ++i) {
          if (i) os << op;
          print_formula(os, voc, f.kids()[i], prec + 1);
        }
      });
      return;
    }
    case Formula::Kind::Implies:
      paren(2, [&] {
        print_formula(os, voc, f.kid(0), 3);
        os << " -> ";
        print_formula(os, voc, f.kid(1), 2);
      });
      return;
    case Formula::Kind::Iff:
      paren(1, [&] {
        print_formula(os, voc, f.kid(0), 2);
        os << " <-> ";
        print_formula(os, voc, f.kid(1), 1);
      });
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      paren(0, [&] {
        os << (f.kind() == Formula::Kind::Forall ? "forall " : "exists ");
        // Compress runs of equal sorts: x, y: team, r: round
        const auto& vs = f.vars();
        for (size_t i = 0; i < vs.size(); ++i) {
          if (i) os << ", ";
          os << vs[i].name;
          if (i + 1 == vs.size() || vs[i + 1].sort != vs[i].sort)
            os << ": " << voc.sort_name(vs[i].sort);
        }
        os << ". ";
        print_formula(os, voc, f.kid(0), 0);
      });
      return;
  }
}
} // namespace detail

inline std::string to_string(const Vocabulary& voc, const Formula& f) {
  if (f.empty()) return "<empty>";
  std::ostringstream os;
  detail::print_formula(os, voc, f, 0);
  return os.str();
}

// Print the declarations and system of a problem in parseable form.
inline void print_problem(std::ostream& os, const SafetyProblem& p) {
  for (int s = 0; s < p.voc.num_sorts(); ++s) os << "sort " << p.voc.sort_name(s) << "\n";
  for (SymId i = 0; i < p.voc.num_symbols(); ++i) {
    const Symbol& s = p.voc.symbol(i);
    os << (s.mut ? "mutable " : "immutable ");
    if (s.kind == SymKind::Relation) {
      os << "relation " << s.name;
      if (!s.args.empty()) {
        os << " : ";
        for (size_t a = 0; a < s.args.size(); ++a)
          os << (a ? ", " : "") << p.voc.sort_name(s.args[a]);
      }
    } else if (s.args.empty()) {
      os << "constant " << s.name << " : " << p.voc.sort_name(s.result);
    } else {
      os << "function " << s.name << " : ";
      for (size_t a = 0; a < s.args.size(); ++a)
        os << (a ? ", " : "") << p.voc.sort_name(s.args[a]);
      os << " -> " << p.voc.sort_name(s.result);
    }
    os << "\n";
  }
  for (const Formula& ax : p.axioms) os << "axiom " << to_string(p.voc, ax) << "\n";
  os << "init " << to_string(p.voc, p.init) << "\n";
  for (const Transition& t : p.transitions)
    os << "transition " << t.name << " { " << to_string(p.voc, t.formula) << " }\n";
  if (p.bad.is(Formula::Kind::Not))
    os << "safety " << to_string(p.voc, p.bad.kid(0)) << "\n";
  else
    os << "bad " << to_string(p.voc, p.bad) << "\n";
}

inline std::string print_problem(const SafetyProblem& p) {
  std::ostringstream os;
  print_problem(os, p);
  return os.str();
}

} // namespace fbp
