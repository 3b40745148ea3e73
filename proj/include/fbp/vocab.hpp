// Many-sorted vocabularies: sorts plus function/relation symbols.
//
// Constants are 0-ary functions.  Every symbol is either immutable (rigid
// across a transition) or mutable (has a distinct next-state interpretation).
// Primed occurrences are a flag on *occurrences* in terms/formulas; the
// vocabulary stores each symbol once.
#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fbp/diag.hpp"

namespace fbp {

using SortId = int;
using SymId = int;

enum class SymKind { Function, Relation };

struct Symbol {
  std::string name;
  SymKind kind = SymKind::Relation;
  bool mut = false;                // mutable = part of the state
  std::vector<SortId> args;        // argument sorts (empty for constants)
  SortId result = -1;              // result sort; -1 for relations

  bool is_constant() const { return kind == SymKind::Function && args.empty(); }
};

class Vocabulary {
public:
  SortId add_sort(const std::string& name) {
    if (sort_index_.count(name)) throw Error("duplicate sort: " + name);
    sorts_.push_back(name);
    SortId id = static_cast<SortId>(sorts_.size()) - 1;
    sort_index_[name] = id;
    return id;
  }

  SymId add_symbol(Symbol s) {
    if (sym_index_.count(s.name)) throw Error("duplicate symbol: " + s.name);
    if (s.kind == SymKind::Relation && s.result != -1)
      throw Error("relation with result sort: " + s.name);
    for (SortId a : s.args) check_sort(a);
    if (s.kind == SymKind::Function) check_sort(s.result);
    syms_.push_back(std::move(s));
    SymId id = static_cast<SymId>(syms_.size()) - 1;
    sym_index_[syms_.back().name] = id;
    return id;
  }

  // Convenience builders.
  SymId add_constant(const std::string& name, SortId sort, bool mut) {
    return add_symbol(Symbol{name, SymKind::Function, mut, {}, sort});
  }
  SymId add_function(const std::string& name, std::vector<SortId> args, SortId result, bool mut) {
    return add_symbol(Symbol{name, SymKind::Function, mut, std::move(args), result});
  }
  SymId add_relation(const std::string& name, std::vector<SortId> args, bool mut) {
    return add_symbol(Symbol{name, SymKind::Relation, mut, std::move(args), -1});
  }

  std::optional<SortId> find_sort(const std::string& name) const {
    auto it = sort_index_.find(name);
    if (it == sort_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<SymId> find_symbol(const std::string& name) const {
    auto it = sym_index_.find(name);
    if (it == sym_index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& sort_name(SortId s) const { check_sort(s); return sorts_[s]; }
  const Symbol& symbol(SymId s) const {
    if (s < 0 || s >= static_cast<SymId>(syms_.size()))
      throw Error("unknown symbol id " + std::to_string(s));
    return syms_[s];
  }

  int num_sorts() const { return static_cast<int>(sorts_.size()); }
  int num_symbols() const { return static_cast<int>(syms_.size()); }

  // A name not yet used by any sort or symbol: `base`, else `base1`, `base2`, ...
  // Deterministic so generated vocabularies are reproducible.
  std::string fresh_name(const std::string& base) const {
    if (!taken(base)) return base;
    for (int i = 1;; ++i) {
      std::string cand = base + std::to_string(i);
      if (!taken(cand)) return cand;
    }
  }

  bool operator==(const Vocabulary& o) const {
    if (sorts_ != o.sorts_ || syms_.size() != o.syms_.size()) return false;
    for (size_t i = 0; i < syms_.size(); ++i) {
      const Symbol &a = syms_[i], &b = o.syms_[i];
      if (a.name != b.name || a.kind != b.kind || a.mut != b.mut ||
          a.args != b.args || a.result != b.result)
        return false;
    }
    return true;
  }
  bool operator!=(const Vocabulary& o) const { return !(*this == o); }

private:
  void check_sort(SortId s) const {
    if (s < 0 || s >= static_cast<SortId>(sorts_.size()))
      throw Error("unknown sort id " + std::to_string(s));
  }
  bool taken(const std::string& n) const {
    return sort_index_.count(n) || sym_index_.count(n);
  }

  std::vector<std::string> sorts_;
  std::vector<Symbol> syms_;
  std::unordered_map<std::string, SortId> sort_index_;
  std::unordered_map<std::string, SymId> sym_index_;
};

} // namespace fbp
