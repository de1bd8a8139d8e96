#pragma once

// Interpretations with a finite prefix and an infinite tail t_K, t_{K+1}, ...
// on which monadic atoms follow closed-form sequences. Enough to realise
// infima and suprema that are not attained.

#include "semantics.hpp"

namespace goedel {

struct RestrictionViolated : Error {
  using Error::Error;
};

// q + sign/(k+offset); sign 0 is the constant q.
struct TailDescriptor {
  Rational limit;
  int sign = 0;
  Integer offset = 0;

  static TailDescriptor constant(Rational q) { return {std::move(q), 0, 0}; }
  static TailDescriptor harmonic(Rational q, int sign, Integer offset = 0) { return {std::move(q), sign, std::move(offset)}; }

  Rational at(const Integer& k) const {
    if (sign == 0) return limit;
    Rational step(Integer(1), k + offset);
    return sign > 0 ? limit + step : limit - step;
  }
  TailDescriptor shifted(int s) const { return sign == 0 ? *this : TailDescriptor{limit, sign, offset + s}; }
  bool operator==(const TailDescriptor&) const = default;
};

// Atom pattern with exactly one tail argument at `position`; the other
// arguments are prefix elements, listed in order.
struct TailPattern {
  Symbol predicate;
  int position = 0;
  std::vector<std::size_t> others;
  auto operator<=>(const TailPattern&) const = default;
};

struct TailFunction {
  enum class Kind { Successor, ToPrefix };
  Kind kind = Kind::Successor;
  std::size_t target = 0;  // ToPrefix
};

struct OmegaInterpretation {
  std::vector<std::string> prefix;  // may be empty
  Integer tail_start = 1;
  GoedelSet truth_set = unit_interval();
  std::map<Symbol, std::vector<Rational>> predicates;   // over prefix^k
  std::map<TailPattern, TailDescriptor> tail;
  std::map<Symbol, std::vector<std::size_t>> functions;  // over prefix^k
  std::map<Symbol, TailFunction> tail_functions;
  std::map<std::string, std::size_t> assignment;  // prefix elements

  std::size_t table_size(int arity) const {
    std::size_t n = 1;
    for (int i = 0; i < arity; ++i) n *= prefix.size();
    return n;
  }

  void validate() const {
    if (tail_start < 1) throw EvalError("tail must start at an index >= 1");
    for (const auto& [sym, tab] : predicates) {
      if (tab.size() != table_size(sym.arity)) throw EvalError("prefix table of " + sym.key() + " is not total");
      for (const auto& q : tab)
        if (!member(truth_set, q)) throw EvalError("value " + to_string(q) + " is not in the truth set");
    }
    for (const auto& [pat, d] : tail) validate(pat, d);
  }

 private:
  void validate(const TailPattern& pat, const TailDescriptor& d) const {
    const std::string where = "tail descriptor of " + pat.predicate.key();
    if (d.offset < 0) throw EvalError(where + " has a negative offset");
    if (d.sign == 0) {
      if (!member(truth_set, d.limit)) throw EvalError(where + " is not in the truth set");
      return;
    }
    Rational first = d.at(tail_start);
    Rational lo = std::min(first, d.limit), hi = std::max(first, d.limit);
    if (lo < 0 || hi > 1) throw EvalError(where + " leaves [0,1]");
    // every value q + sign/(k+c), k >= K, must fit inside a single atom
    for (const auto& a : truth_set.atoms) {
      switch (a.kind) {
        case SetAtom::Kind::Interval:
          if (a.a <= lo && hi <= a.b) return;
          break;
        case SetAtom::Kind::SeqDown:
        case SetAtom::Kind::SeqUp:
          if (a.a == d.limit && (a.kind == SetAtom::Kind::SeqDown) == (d.sign > 0) && denominator(a.b) == 1) return;
          break;
        default: break;
      }
    }
    throw EvalError(where + " is not contained in the truth set");
  }
};

namespace detail {

// A value depending on the index k of the (single) active tail element:
// explicit values for k = K .. K+n-1, then `rest`.
struct TailSeq {
  std::vector<Rational> head;
  TailDescriptor rest;

  static TailSeq constant(Rational q) { return {{}, TailDescriptor::constant(std::move(q))}; }
  bool is_constant() const { return head.empty() && rest.sign == 0; }
};

// Index from which sign(d1(k) - d2(k)) never changes.
inline Integer crossover(const TailDescriptor& a, const TailDescriptor& b) {
  if (a.limit == b.limit) return 1;
  Rational gap = a.limit > b.limit ? a.limit - b.limit : b.limit - a.limit;
  Rational bound = Rational(2) / gap;
  return numerator(bound) / denominator(bound) + 1;
}

struct OmegaElem {
  bool tail = false;
  std::size_t prefix = 0;
  int shift = 0;  // t_{k+shift}
};

using OmegaEnv = std::vector<std::pair<std::string, OmegaElem>>;

class OmegaEvaluator {
 public:
  explicit OmegaEvaluator(const OmegaInterpretation& I) : I_(I) {}

  TailSeq eval(const Formula& f, OmegaEnv& env) {
    switch (f.kind()) {
      case Kind::Bot: return TailSeq::constant(0);
      case Kind::Atom: return atom(f, env);
      case Kind::And:
      case Kind::Or:
      case Kind::Imp: {
        TailSeq a = eval(f.left(), env);
        TailSeq b = eval(f.right(), env);
        return combine(a, b, f.kind());
      }
      case Kind::Forall:
      case Kind::Exists: return quantifier(f, env);
    }
    return TailSeq::constant(0);
  }

  Rational at(const TailSeq& s, const Integer& k) const {
    Integer i = k - I_.tail_start;
    if (i < static_cast<long>(s.head.size())) return s.head[static_cast<std::size_t>(i)];
    return s.rest.at(k);
  }

 private:
  const OmegaInterpretation& I_;

  static Rational apply(Kind k, const Rational& a, const Rational& b) {
    return k == Kind::And ? g_and(a, b) : k == Kind::Or ? g_or(a, b) : g_imp(a, b);
  }

  TailSeq expand(const TailSeq& s, std::size_t n) const {
    TailSeq r = s;
    for (std::size_t i = r.head.size(); i < n; ++i) r.head.push_back(s.rest.at(I_.tail_start + static_cast<long>(i)));
    return r;
  }

  TailSeq combine(const TailSeq& a, const TailSeq& b, Kind k) const {
    if (a.is_constant() && b.is_constant()) return TailSeq::constant(apply(k, a.rest.limit, b.rest.limit));
    Integer cross = crossover(a.rest, b.rest);
    std::size_t n = std::max(a.head.size(), b.head.size());
    if (cross > I_.tail_start) n = std::max(n, static_cast<std::size_t>(cross - I_.tail_start));
    TailSeq x = expand(a, n), y = expand(b, n);
    TailSeq r;
    for (std::size_t i = 0; i < n; ++i) r.head.push_back(apply(k, x.head[i], y.head[i]));
    Integer probe = I_.tail_start + static_cast<long>(n);
    Rational va = a.rest.at(probe), vb = b.rest.at(probe);
    bool a_le_b = va < vb || (va == vb && a.rest == b.rest);
    if (va == vb && !(a.rest == b.rest)) {
      // equal at the probe but different sequences: compare one step later
      Rational na = a.rest.at(probe + 1), nb = b.rest.at(probe + 1);
      a_le_b = na <= nb;
    }
    switch (k) {
      case Kind::And: r.rest = a_le_b ? a.rest : b.rest; break;
      case Kind::Or: r.rest = a_le_b ? b.rest : a.rest; break;
      default: r.rest = a_le_b ? TailDescriptor::constant(1) : b.rest; break;
    }
    return r;
  }

  // inf (all) or sup over k >= K.
  Rational extremum(const TailSeq& s, bool all) const {
    Rational v = all ? Rational(1) : Rational(0);
    for (const auto& q : s.head) v = all ? g_and(v, q) : g_or(v, q);
    const auto& d = s.rest;
    Rational limit_side = d.limit;
    Rational first = d.at(I_.tail_start + static_cast<long>(s.head.size()));
    // decreasing (+) sequences: inf is the limit, sup the first value
    Rational tail_value = d.sign == 0 ? d.limit : ((d.sign > 0) == all ? limit_side : first);
    return all ? g_and(v, tail_value) : g_or(v, tail_value);
  }

  OmegaElem term(const Term& t, const OmegaEnv& env) const {
    if (t.is_var) {
      for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->first == t.name) return it->second;
      auto a = I_.assignment.find(t.name);
      if (a == I_.assignment.end()) throw EvalError("unassigned variable '" + t.name + "'");
      return {false, a->second, 0};
    }
    Symbol sym{t.name, static_cast<int>(t.args.size())};
    std::vector<OmegaElem> args;
    bool any_tail = false;
    for (const auto& a : t.args) {
      args.push_back(term(a, env));
      any_tail = any_tail || args.back().tail;
    }
    if (!any_tail) {
      auto f = I_.functions.find(sym);
      if (f == I_.functions.end()) throw EvalError("unassigned function symbol '" + sym.key() + "'");
      std::size_t idx = 0;
      for (const auto& a : args) idx = idx * I_.prefix.size() + a.prefix;
      return {false, f->second.at(idx), 0};
    }
    auto tf = I_.tail_functions.find(sym);
    if (tf == I_.tail_functions.end()) throw EvalError("function '" + sym.key() + "' has no tail behaviour");
    if (tf->second.kind == TailFunction::Kind::ToPrefix) return {false, tf->second.target, 0};
    if (args.size() != 1) throw RestrictionViolated("successor-style function '" + sym.key() + "' must be unary");
    return {true, 0, args[0].shift + 1};
  }

  TailSeq atom(const Formula& f, const OmegaEnv& env) const {
    std::vector<OmegaElem> args;
    int tail_pos = -1;
    for (std::size_t i = 0; i < f.args().size(); ++i) {
      args.push_back(term(f.args()[i], env));
      if (args.back().tail) {
        if (tail_pos >= 0) throw RestrictionViolated("atom '" + print(f) + "' couples two tail elements");
        tail_pos = static_cast<int>(i);
      }
    }
    if (tail_pos < 0) {
      auto p = I_.predicates.find(f.symbol());
      if (p == I_.predicates.end()) throw EvalError("unassigned predicate symbol '" + f.symbol().key() + "'");
      std::size_t idx = 0;
      for (const auto& a : args) idx = idx * I_.prefix.size() + a.prefix;
      return TailSeq::constant(p->second.at(idx));
    }
    TailPattern pat{f.symbol(), tail_pos, {}};
    for (std::size_t i = 0; i < args.size(); ++i)
      if (static_cast<int>(i) != tail_pos) pat.others.push_back(args[i].prefix);
    auto d = I_.tail.find(pat);
    if (d == I_.tail.end()) throw EvalError("no tail descriptor for '" + f.symbol().key() + "' at this pattern");
    return {{}, d->second.shifted(args[static_cast<std::size_t>(tail_pos)].shift)};
  }

  TailSeq quantifier(const Formula& f, OmegaEnv& env) {
    if (!is_free_in(f.var(), f.body())) return eval(f.body(), env);
    bool all = f.kind() == Kind::Forall;
    auto fv = free_vars(f);
    bool tail_active = false;
    for (const auto& [name, e] : env)
      if (e.tail && fv.count(name)) tail_active = true;
    if (tail_active) throw RestrictionViolated("quantifier over '" + f.var() + "' nested under an active tail element");
    // Only constants arise here: no free variable is bound to the tail.
    OmegaEnv local;
    for (const auto& b : env)
      if (!b.second.tail) local.push_back(b);
    Rational v = all ? Rational(1) : Rational(0);
    for (std::size_t e = 0; e < I_.prefix.size(); ++e) {
      local.emplace_back(f.var(), OmegaElem{false, e, 0});
      TailSeq s = eval(f.body(), local);
      local.pop_back();
      Rational x = s.rest.limit;
      v = all ? g_and(v, x) : g_or(v, x);
    }
    local.emplace_back(f.var(), OmegaElem{true, 0, 0});
    TailSeq s = eval(f.body(), local);
    local.pop_back();
    Rational x = extremum(s, all);
    v = all ? g_and(v, x) : g_or(v, x);
    return TailSeq::constant(v);
  }
};

}  // namespace detail

inline Rational eval_omega(const Formula& f, const OmegaInterpretation& I) {
  I.validate();
  detail::OmegaEvaluator ev(I);
  detail::OmegaEnv env;
  detail::TailSeq s = ev.eval(f, env);
  if (!s.is_constant()) throw Error("formula has a free variable bound to the tail");
  return s.rest.limit;
}

}  // namespace goedel
