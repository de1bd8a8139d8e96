#pragma once

#include "rational.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace goedel {

struct Symbol {
  std::string name;
  int arity = 0;
  auto operator<=>(const Symbol&) const = default;
  std::string key() const { return name + "/" + std::to_string(arity); }
};

struct ArityError : Error {
  using Error::Error;
};

// A variable (is_var) or a function application; constants have no arguments.
struct Term {
  std::string name;
  std::vector<Term> args;
  bool is_var = false;

  static Term var(std::string n) { return Term{std::move(n), {}, true}; }
  static Term app(std::string n, std::vector<Term> a = {}) { return Term{std::move(n), std::move(a), false}; }

  bool operator==(const Term&) const = default;
  bool operator<(const Term& o) const {
    if (is_var != o.is_var) return is_var;
    if (name != o.name) return name < o.name;
    return args < o.args;
  }
  std::size_t size() const {
    std::size_t s = 1;
    for (const auto& a : args) s += a.size();
    return s;
  }
};

enum class Kind { Bot, Atom, And, Or, Imp, Forall, Exists };

class Formula {
 public:
  struct Node {
    Kind kind;
    std::string name;  // predicate name or bound variable
    std::vector<Term> args;
    std::shared_ptr<const Node> lhs, rhs;  // quantifier body lives in lhs
  };

  Formula() : node_(bot_node()) {}

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  const std::string& var() const { return node_->name; }
  const std::vector<Term>& args() const { return node_->args; }
  Formula left() const { return Formula(node_->lhs); }
  Formula right() const { return Formula(node_->rhs); }
  Formula body() const { return Formula(node_->lhs); }

  bool is_binary() const { return kind() == Kind::And || kind() == Kind::Or || kind() == Kind::Imp; }
  bool is_quantifier() const { return kind() == Kind::Forall || kind() == Kind::Exists; }
  bool is_neg() const { return kind() == Kind::Imp && right().kind() == Kind::Bot; }
  bool is_top() const { return kind() == Kind::Imp && left().kind() == Kind::Bot && right().kind() == Kind::Bot; }
  Symbol symbol() const { return {name(), static_cast<int>(args().size())}; }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.name() != b.name() || a.args() != b.args()) return false;
    switch (a.kind()) {
      case Kind::Bot:
      case Kind::Atom: return true;
      case Kind::Forall:
      case Kind::Exists: return a.body() == b.body();
      default: return a.left() == b.left() && a.right() == b.right();
    }
  }

  static Formula make(Kind k, std::string name, std::vector<Term> args, Formula l, Formula r) {
    return Formula(std::make_shared<const Node>(Node{k, std::move(name), std::move(args), l.node_, r.node_}));
  }
  static Formula make(Kind k, std::string name, std::vector<Term> args) {
    return Formula(std::make_shared<const Node>(Node{k, std::move(name), std::move(args), nullptr, nullptr}));
  }

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static std::shared_ptr<const Node> bot_node() {
    static const auto b = std::make_shared<const Node>(Node{Kind::Bot, {}, {}, nullptr, nullptr});
    return b;
  }
  std::shared_ptr<const Node> node_;
};

inline Formula bot() { return Formula(); }
inline Formula atom(std::string pred, std::vector<Term> args = {}) {
  return Formula::make(Kind::Atom, std::move(pred), std::move(args));
}
inline Formula conj(Formula a, Formula b) { return Formula::make(Kind::And, {}, {}, std::move(a), std::move(b)); }
inline Formula disj(Formula a, Formula b) { return Formula::make(Kind::Or, {}, {}, std::move(a), std::move(b)); }
inline Formula imp(Formula a, Formula b) { return Formula::make(Kind::Imp, {}, {}, std::move(a), std::move(b)); }
inline Formula neg(Formula a) { return imp(std::move(a), bot()); }
inline Formula top() { return imp(bot(), bot()); }
inline Formula forall(std::string v, Formula b) { return Formula::make(Kind::Forall, std::move(v), {}, std::move(b), Formula()); }
inline Formula exists(std::string v, Formula b) { return Formula::make(Kind::Exists, std::move(v), {}, std::move(b), Formula()); }
inline Formula quant(Kind k, std::string v, Formula b) { return Formula::make(k, std::move(v), {}, std::move(b), Formula()); }
inline Formula binary(Kind k, Formula a, Formula b) { return Formula::make(k, {}, {}, std::move(a), std::move(b)); }

// Left-nested conjunction/disjunction; an empty list gives the unit.
inline Formula conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula r = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) r = conj(r, fs[i]);
  return r;
}
inline Formula disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return bot();
  Formula r = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) r = disj(r, fs[i]);
  return r;
}

// ---- variables ---------------------------------------------------------

inline void term_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_var) out.insert(t.name);
  for (const auto& a : t.args) term_vars(a, out);
}

inline bool term_has_var(const Term& t, const std::string& v) {
  if (t.is_var) return t.name == v;
  return std::any_of(t.args.begin(), t.args.end(), [&](const Term& a) { return term_has_var(a, v); });
}

namespace detail {
inline void free_vars(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind()) {
    case Kind::Bot: return;
    case Kind::Atom: {
      std::set<std::string> vs;
      for (const auto& t : f.args()) term_vars(t, vs);
      for (const auto& v : vs)
        if (!bound.count(v)) out.insert(v);
      return;
    }
    case Kind::Forall:
    case Kind::Exists: {
      bool fresh = bound.insert(f.var()).second;
      free_vars(f.body(), bound, out);
      if (fresh) bound.erase(f.var());
      return;
    }
    default:
      free_vars(f.left(), bound, out);
      free_vars(f.right(), bound, out);
  }
}

inline void all_vars(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Kind::Bot: return;
    case Kind::Atom:
      for (const auto& t : f.args()) term_vars(t, out);
      return;
    case Kind::Forall:
    case Kind::Exists:
      out.insert(f.var());
      all_vars(f.body(), out);
      return;
    default:
      all_vars(f.left(), out);
      all_vars(f.right(), out);
  }
}
}  // namespace detail

inline std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  detail::free_vars(f, bound, out);
  return out;
}

inline bool is_free_in(const std::string& v, const Formula& f) { return free_vars(f).count(v) > 0; }
inline bool is_closed(const Formula& f) { return free_vars(f).empty(); }

inline std::set<std::string> all_vars(const Formula& f) {
  std::set<std::string> out;
  detail::all_vars(f, out);
  return out;
}

inline std::string fresh_name(std::string base, const std::set<std::string>& avoid) {
  while (avoid.count(base)) base += "'";
  return base;
}

// ---- substitution ------------------------------------------------------

inline Term substitute(const Term& t, const std::string& v, const Term& by) {
  if (t.is_var) return t.name == v ? by : t;
  Term r = t;
  for (auto& a : r.args) a = substitute(a, v, by);
  return r;
}

// Capture-avoiding: bound variables that would capture a variable of `by`
// are renamed by priming.
inline Formula substitute(const Formula& f, const std::string& v, const Term& by) {
  switch (f.kind()) {
    case Kind::Bot: return f;
    case Kind::Atom: {
      std::vector<Term> args = f.args();
      for (auto& a : args) a = substitute(a, v, by);
      return atom(f.name(), std::move(args));
    }
    case Kind::Forall:
    case Kind::Exists: {
      if (f.var() == v || !is_free_in(v, f)) return f;
      std::set<std::string> tv;
      term_vars(by, tv);
      if (!tv.count(f.var())) return quant(f.kind(), f.var(), substitute(f.body(), v, by));
      std::set<std::string> avoid = tv;
      for (const auto& x : all_vars(f.body())) avoid.insert(x);
      avoid.insert(v);
      std::string y = fresh_name(f.var(), avoid);
      Formula b = substitute(f.body(), f.var(), Term::var(y));
      return quant(f.kind(), y, substitute(b, v, by));
    }
    default: return binary(f.kind(), substitute(f.left(), v, by), substitute(f.right(), v, by));
  }
}

// Replaces every occurrence of the (ground) term `from`; no binder handling
// is needed because `from` carries no variables.
inline Term replace_term(const Term& t, const Term& from, const Term& to) {
  if (t == from) return to;
  Term r = t;
  for (auto& a : r.args) a = replace_term(a, from, to);
  return r;
}

inline Formula replace_term(const Formula& f, const Term& from, const Term& to) {
  switch (f.kind()) {
    case Kind::Bot: return f;
    case Kind::Atom: {
      std::vector<Term> args = f.args();
      for (auto& a : args) a = replace_term(a, from, to);
      return atom(f.name(), std::move(args));
    }
    case Kind::Forall:
    case Kind::Exists: return quant(f.kind(), f.var(), replace_term(f.body(), from, to));
    default: return binary(f.kind(), replace_term(f.left(), from, to), replace_term(f.right(), from, to));
  }
}

inline bool term_occurs(const Term& t, const Term& sub) {
  if (t == sub) return true;
  return std::any_of(t.args.begin(), t.args.end(), [&](const Term& a) { return term_occurs(a, sub); });
}

inline bool term_occurs(const Formula& f, const Term& sub) {
  switch (f.kind()) {
    case Kind::Bot: return false;
    case Kind::Atom:
      return std::any_of(f.args().begin(), f.args().end(), [&](const Term& a) { return term_occurs(a, sub); });
    case Kind::Forall:
    case Kind::Exists: return term_occurs(f.body(), sub);
    default: return term_occurs(f.left(), sub) || term_occurs(f.right(), sub);
  }
}

// ---- alpha-equivalence and canonical naming ------------------------------

namespace detail {
using Scope = std::vector<std::string>;

inline long bound_index(const Scope& s, const std::string& v) {
  for (std::size_t i = s.size(); i-- > 0;)
    if (s[i] == v) return static_cast<long>(s.size() - 1 - i);
  return -1;
}

inline bool alpha_term(const Term& a, const Term& b, const Scope& sa, const Scope& sb) {
  if (a.is_var != b.is_var) return false;
  if (a.is_var) {
    long ia = bound_index(sa, a.name), ib = bound_index(sb, b.name);
    if (ia != ib) return false;
    return ia >= 0 || a.name == b.name;
  }
  if (a.name != b.name || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!alpha_term(a.args[i], b.args[i], sa, sb)) return false;
  return true;
}

inline bool alpha(const Formula& a, const Formula& b, Scope& sa, Scope& sb) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Kind::Bot: return true;
    case Kind::Atom:
      if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!alpha_term(a.args()[i], b.args()[i], sa, sb)) return false;
      return true;
    case Kind::Forall:
    case Kind::Exists: {
      sa.push_back(a.var());
      sb.push_back(b.var());
      bool r = alpha(a.body(), b.body(), sa, sb);
      sa.pop_back();
      sb.pop_back();
      return r;
    }
    default: return alpha(a.left(), b.left(), sa, sb) && alpha(a.right(), b.right(), sa, sb);
  }
}
}  // namespace detail

inline bool alpha_equal(const Formula& a, const Formula& b) {
  detail::Scope sa, sb;
  return detail::alpha(a, b, sa, sb);
}

// Binders at nesting depth d become v<d> (with a prefix chosen to avoid free
// variables), so alpha-equivalent formulas normalize to identical trees.
inline Formula normalize(const Formula& f) {
  auto fv = free_vars(f);
  std::string prefix = "v";
  auto clashes = [&](const std::string& p) {
    for (const auto& v : fv) {
      if (v.size() > p.size() && v.compare(0, p.size(), p) == 0 &&
          std::all_of(v.begin() + static_cast<long>(p.size()), v.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return true;
    }
    return false;
  };
  while (clashes(prefix)) prefix += "_";
  auto go = [&](auto&& self, const Formula& g, int depth) -> Formula {
    switch (g.kind()) {
      case Kind::Bot:
      case Kind::Atom: return g;
      case Kind::Forall:
      case Kind::Exists: {
        std::string nv = prefix + std::to_string(depth);
        Formula b = substitute(g.body(), g.var(), Term::var(nv));
        return quant(g.kind(), nv, self(self, b, depth + 1));
      }
      default: return binary(g.kind(), self(self, g.left(), depth), self(self, g.right(), depth));
    }
  };
  return go(go, f, 0);
}

// Renames bound variables so that every binder is distinct from every other
// binder, from the free variables and from `avoid`. Names are kept when
// possible and primed otherwise.
inline Formula rename_apart(const Formula& f, std::set<std::string> avoid = {}) {
  for (const auto& v : free_vars(f)) avoid.insert(v);
  auto go = [&](auto&& self, const Formula& g) -> Formula {
    switch (g.kind()) {
      case Kind::Bot:
      case Kind::Atom: return g;
      case Kind::Forall:
      case Kind::Exists: {
        std::string nv = fresh_name(g.var(), avoid);
        avoid.insert(nv);
        Formula b = nv == g.var() ? g.body() : substitute(g.body(), g.var(), Term::var(nv));
        return quant(g.kind(), nv, self(self, b));
      }
      default: {
        Formula l = self(self, g.left());
        Formula r = self(self, g.right());
        return binary(g.kind(), l, r);
      }
    }
  };
  return go(go, f);
}

// ---- signatures and syntactic predicates ---------------------------------

struct Signature {
  std::map<std::string, int> predicates;
  std::map<std::string, int> functions;

  void add_function(const std::string& n, int arity) {
    auto [it, ok] = functions.emplace(n, arity);
    if (!ok && it->second != arity)
      throw ArityError("function '" + n + "' used with arities " + std::to_string(it->second) + " and " + std::to_string(arity));
  }
  void add_predicate(const std::string& n, int arity) {
    auto [it, ok] = predicates.emplace(n, arity);
    if (!ok && it->second != arity)
      throw ArityError("predicate '" + n + "' used with arities " + std::to_string(it->second) + " and " + std::to_string(arity));
  }
  void add(const Term& t) {
    if (t.is_var) return;
    add_function(t.name, static_cast<int>(t.args.size()));
    for (const auto& a : t.args) add(a);
  }
  void add(const Formula& f) {
    switch (f.kind()) {
      case Kind::Bot: return;
      case Kind::Atom:
        add_predicate(f.name(), static_cast<int>(f.args().size()));
        for (const auto& t : f.args()) add(t);
        return;
      case Kind::Forall:
      case Kind::Exists: add(f.body()); return;
      default: add(f.left()); add(f.right());
    }
  }
  void merge(const Signature& o) {
    for (const auto& [n, a] : o.predicates) add_predicate(n, a);
    for (const auto& [n, a] : o.functions) add_function(n, a);
  }
  bool uses(const std::string& n) const { return predicates.count(n) || functions.count(n); }
};

inline Signature signature_of(const std::vector<Formula>& fs) {
  Signature s;
  for (const auto& f : fs) s.add(f);
  return s;
}
inline Signature signature_of(const Formula& f) { return signature_of(std::vector<Formula>{f}); }

// True iff every atomic occurrence sits directly under a negation.
inline bool is_crisp(const Formula& f) {
  switch (f.kind()) {
    case Kind::Bot: return true;
    case Kind::Atom: return false;
    case Kind::Forall:
    case Kind::Exists: return is_crisp(f.body());
    case Kind::Imp:
      if (f.right().kind() == Kind::Bot && f.left().kind() == Kind::Atom) return true;
      [[fallthrough]];
    default: return is_crisp(f.left()) && is_crisp(f.right());
  }
}

inline bool is_quantifier_free(const Formula& f) {
  switch (f.kind()) {
    case Kind::Bot:
    case Kind::Atom: return true;
    case Kind::Forall:
    case Kind::Exists: return false;
    default: return is_quantifier_free(f.left()) && is_quantifier_free(f.right());
  }
}

inline Formula matrix_of(Formula f) {
  while (f.is_quantifier()) f = f.body();
  return f;
}

inline bool is_prenex(const Formula& f) { return is_quantifier_free(matrix_of(f)); }

inline bool contains_bot(const Formula& f) {
  switch (f.kind()) {
    case Kind::Bot: return true;
    case Kind::Atom: return false;
    case Kind::Forall:
    case Kind::Exists: return contains_bot(f.body());
    default: return contains_bot(f.left()) || contains_bot(f.right());
  }
}

inline bool contains_kind(const Formula& f, Kind k) {
  if (f.kind() == k) return true;
  switch (f.kind()) {
    case Kind::Bot:
    case Kind::Atom: return false;
    case Kind::Forall:
    case Kind::Exists: return contains_kind(f.body(), k);
    default: return contains_kind(f.left(), k) || contains_kind(f.right(), k);
  }
}

// Distinct atomic subformulas in order of first occurrence (left to right).
inline std::vector<Formula> atoms_of(const Formula& f) {
  std::vector<Formula> out;
  auto go = [&](auto&& self, const Formula& g) -> void {
    switch (g.kind()) {
      case Kind::Bot: return;
      case Kind::Atom:
        if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
        return;
      case Kind::Forall:
      case Kind::Exists: self(self, g.body()); return;
      default: self(self, g.left()); self(self, g.right());
    }
  };
  go(go, f);
  return out;
}

inline std::size_t formula_size(const Formula& f) {
  switch (f.kind()) {
    case Kind::Bot:
    case Kind::Atom: return 1;
    case Kind::Forall:
    case Kind::Exists: return 1 + formula_size(f.body());
    default: return 1 + formula_size(f.left()) + formula_size(f.right());
  }
}

inline std::size_t formula_depth(const Formula& f) {
  switch (f.kind()) {
    case Kind::Bot:
    case Kind::Atom: return 1;
    case Kind::Forall:
    case Kind::Exists: return 1 + formula_depth(f.body());
    default: return 1 + std::max(formula_depth(f.left()), formula_depth(f.right()));
  }
}

inline Formula universal_closure(const Formula& f) {
  auto fv = free_vars(f);
  Formula r = f;
  for (auto it = fv.rbegin(); it != fv.rend(); ++it) r = forall(*it, r);
  return r;
}

}  // namespace goedel
