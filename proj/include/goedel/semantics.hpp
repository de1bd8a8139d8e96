#pragma once

#include "formula.hpp"
#include "goedel_set.hpp"
#include "syntax.hpp"

#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace goedel {

struct EvalError : Error {
  using Error::Error;
};
struct BudgetExceeded : Error {
  using Error::Error;
};

// Goedel truth functions.
inline Rational g_and(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational g_or(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational g_imp(const Rational& a, const Rational& b) { return a <= b ? Rational(1) : b; }

// Default enumeration budget, overridable through GOEDEL_BUDGET.
inline std::size_t default_budget() {
  if (const char* env = std::getenv("GOEDEL_BUDGET")) {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (...) {
    }
  }
  return 10'000'000;
}

struct FiniteInterpretation {
  std::vector<std::string> universe{"u0"};
  GoedelSet truth_set = unit_interval();
  std::map<Symbol, std::vector<Rational>> predicates;  // row-major over universe^k
  std::map<Symbol, std::vector<std::size_t>> functions;
  std::map<std::string, std::size_t> assignment;

  std::size_t size() const { return universe.size(); }

  std::size_t table_size(int arity) const {
    std::size_t n = 1;
    for (int i = 0; i < arity; ++i) n *= universe.size();
    return n;
  }

  std::size_t index(const std::vector<std::size_t>& tuple) const {
    std::size_t idx = 0;
    for (auto e : tuple) idx = idx * universe.size() + e;
    return idx;
  }

  std::vector<std::size_t> tuple(std::size_t idx, int arity) const {
    std::vector<std::size_t> t(static_cast<std::size_t>(arity));
    for (int i = arity - 1; i >= 0; --i) {
      t[static_cast<std::size_t>(i)] = idx % universe.size();
      idx /= universe.size();
    }
    return t;
  }

  std::size_t element(const std::string& name) const {
    for (std::size_t i = 0; i < universe.size(); ++i)
      if (universe[i] == name) return i;
    throw EvalError("unknown universe element '" + name + "'");
  }

  void set_predicate(const std::string& name, const std::vector<std::size_t>& args, Rational v) {
    auto& tab = predicates[{name, static_cast<int>(args.size())}];
    tab.resize(table_size(static_cast<int>(args.size())), Rational(0));
    tab[index(args)] = std::move(v);
  }

  void validate() const {
    if (universe.empty()) throw EvalError("universe must be non-empty");
    for (const auto& [sym, tab] : predicates) {
      if (tab.size() != table_size(sym.arity)) throw EvalError("table of " + sym.key() + " is not total");
      for (const auto& q : tab)
        if (!member(truth_set, q)) throw EvalError("value " + to_string(q) + " of " + sym.key() + " is not in the truth set");
    }
    for (const auto& [sym, tab] : functions) {
      if (tab.size() != table_size(sym.arity)) throw EvalError("table of " + sym.key() + " is not total");
      for (auto e : tab)
        if (e >= universe.size()) throw EvalError("function " + sym.key() + " leaves the universe");
    }
  }
};

namespace detail {

using Env = std::vector<std::pair<std::string, std::size_t>>;

inline std::size_t eval_term(const Term& t, const FiniteInterpretation& I, const Env& env) {
  if (t.is_var) {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->first == t.name) return it->second;
    auto a = I.assignment.find(t.name);
    if (a == I.assignment.end()) throw EvalError("unassigned variable '" + t.name + "'");
    return a->second;
  }
  auto f = I.functions.find({t.name, static_cast<int>(t.args.size())});
  if (f == I.functions.end()) throw EvalError("unassigned function symbol '" + t.name + "/" + std::to_string(t.args.size()) + "'");
  std::size_t idx = 0;
  for (const auto& a : t.args) idx = idx * I.size() + eval_term(a, I, env);
  return f->second.at(idx);
}

// Evaluates f; when `sink` is set, records the value of every subformula
// instance met along the way.
inline Rational eval(const Formula& f, const FiniteInterpretation& I, Env& env, std::set<Rational>* sink) {
  Rational v;
  switch (f.kind()) {
    case Kind::Bot: v = 0; break;
    case Kind::Atom: {
      auto p = I.predicates.find(f.symbol());
      if (p == I.predicates.end()) throw EvalError("unassigned predicate symbol '" + f.symbol().key() + "'");
      std::size_t idx = 0;
      for (const auto& a : f.args()) idx = idx * I.size() + eval_term(a, I, env);
      v = p->second.at(idx);
      break;
    }
    case Kind::And: {
      Rational a = eval(f.left(), I, env, sink);
      v = g_and(a, eval(f.right(), I, env, sink));
      break;
    }
    case Kind::Or: {
      Rational a = eval(f.left(), I, env, sink);
      v = g_or(a, eval(f.right(), I, env, sink));
      break;
    }
    case Kind::Imp: {
      Rational a = eval(f.left(), I, env, sink);
      v = g_imp(a, eval(f.right(), I, env, sink));
      break;
    }
    case Kind::Forall:
    case Kind::Exists: {
      bool all = f.kind() == Kind::Forall;
      v = all ? 1 : 0;
      for (std::size_t e = 0; e < I.size(); ++e) {
        env.emplace_back(f.var(), e);
        Rational x = eval(f.body(), I, env, sink);
        env.pop_back();
        v = all ? g_and(v, x) : g_or(v, x);
      }
      break;
    }
  }
  if (sink) sink->insert(v);
  return v;
}

}  // namespace detail

inline Rational eval(const Formula& f, const FiniteInterpretation& I) {
  detail::Env env;
  return detail::eval(f, I, env, nullptr);
}

// Val(I, fs): values of all subformula instances, together with 0 and 1.
inline std::set<Rational> value_set(const std::vector<Formula>& fs, const FiniteInterpretation& I) {
  std::set<Rational> out{0, 1};
  for (const auto& f : fs) {
    detail::Env env;
    detail::eval(f, I, env, &out);
  }
  return out;
}

// Atoms below w keep their value, all others become 1.
inline FiniteInterpretation lift_w(const FiniteInterpretation& I, const Rational& w) {
  if (!(w > 0 && w <= 1)) throw Error("lift threshold must lie in (0,1]");
  FiniteInterpretation J = I;
  for (auto& [sym, tab] : J.predicates)
    for (auto& q : tab)
      if (!(q < w)) q = 1;
  return J;
}

struct DomainGap : Error {
  using Error::Error;
};

// Applies a strictly monotone value map with h(0) = 0 and h(1) = 1 to every
// atom. With `targets`, only Val(I, targets) must lie in the domain and
// atoms outside it are sent to 1; without, every table value must.
inline FiniteInterpretation map_h(const FiniteInterpretation& I, std::map<Rational, Rational> h,
                                  std::optional<GoedelSet> codomain = std::nullopt,
                                  const std::vector<Formula>& targets = {}) {
  if (auto it = h.find(0); it != h.end() && it->second != 0) throw Error("value map must send 0 to 0");
  if (auto it = h.find(1); it != h.end() && it->second != 1) throw Error("value map must send 1 to 1");
  h.emplace(0, 0);
  h.emplace(1, 1);
  const Rational* prev = nullptr;
  for (const auto& [x, y] : h) {
    if (prev && !(*prev < y)) throw Error("value map is not strictly monotone at " + to_string(x));
    prev = &y;
  }
  if (!targets.empty()) {
    for (const auto& q : value_set(targets, I))
      if (!h.count(q)) throw DomainGap("value " + to_string(q) + " has no image");
  }
  FiniteInterpretation J = I;
  J.truth_set = codomain ? *codomain : unit_interval();
  for (auto& [sym, tab] : J.predicates)
    for (auto& q : tab) {
      auto it = h.find(q);
      if (it != h.end()) q = it->second;
      else if (!targets.empty()) q = 1;
      else throw DomainGap("atom value " + to_string(q) + " of " + sym.key() + " has no image");
    }
  J.validate();
  return J;
}

// Moves an interpretation over (a finite subset of) V ∪ [inf P, 1] into V,
// where P is the perfect kernel of V: values below inf P are kept, values
// from inf P upwards are embedded into the kernel component starting at
// inf P. The map is strictly monotone and fixes 0 and 1, so the order
// pattern of all atoms is preserved.
inline FiniteInterpretation transfer_to_kernel(const FiniteInterpretation& I, const GoedelSet& V) {
  auto kernel = cb_kernel(V);
  if (kernel.empty()) throw Error("transfer needs a non-empty perfect kernel");
  const SetAtom* target = nullptr;
  for (const auto& a : kernel.atoms)
    if (!target || a.a < target->a) target = &a;
  const Rational p = target->a;

  std::set<Rational> above;
  std::map<Rational, Rational> h;
  for (const auto& [sym, tab] : I.predicates)
    for (const auto& q : tab) {
      if (q < p) {
        if (!member(V, q)) throw DomainGap("value " + to_string(q) + " below the kernel is not in the target set");
        h[q] = q;
      } else if (q < 1 || target->b == 1) {
        above.insert(q);
      }
    }
  if (target->b == 1) above.insert(1);
  if (p == 0) above.insert(0);
  std::vector<Rational> pts(above.begin(), above.end());
  if (pts.size() == 1) {
    h[pts.front()] = pts.front() == 1 ? Rational(1) : p;
  } else if (!pts.empty()) {
    auto img = embed_into_perfect(pts, *target);
    for (std::size_t i = 0; i < pts.size(); ++i) h[pts[i]] = img[i];
  }
  return map_h(I, h, V);
}

// ---- bounded entailment ------------------------------------------------

struct EntailmentResult {
  bool holds = true;
  std::optional<FiniteInterpretation> countermodel;
  std::size_t interpretations_checked = 0;
};

namespace detail {

inline Rational inf_of(const std::vector<Formula>& gamma, const FiniteInterpretation& I) {
  Rational v = 1;
  for (const auto& g : gamma) v = g_and(v, eval(g, I));
  return v;
}

// Number of interpretations at universe size n, saturating at `cap`.
inline std::size_t count_interpretations(const Signature& sig, std::size_t n, std::size_t values, std::size_t cap) {
  long double total = 1;
  auto pow = [](long double b, long double e) {
    long double r = 1;
    for (long double i = 0; i < e; ++i) r *= b;
    return r;
  };
  for (const auto& [name, k] : sig.predicates) total *= pow(static_cast<long double>(values), pow(static_cast<long double>(n), k));
  for (const auto& [name, k] : sig.functions) total *= pow(static_cast<long double>(n), pow(static_cast<long double>(n), k));
  return total > static_cast<long double>(cap) ? cap + 1 : static_cast<std::size_t>(total);
}

// Enumerates every interpretation of `sig` over `values` with universe sizes
// 1..max_universe in a fixed order; stops when `visit` returns false.
inline void for_each_interpretation(const Signature& sig, const GoedelSet& V, const std::vector<Rational>& values,
                                    std::size_t max_universe, std::size_t budget,
                                    const std::function<bool(const FiniteInterpretation&)>& visit) {
  std::size_t total = 0;
  for (std::size_t n = 1; n <= max_universe; ++n) {
    total += count_interpretations(sig, n, values.size(), budget);
    if (total > budget)
      throw BudgetExceeded("search space exceeds the budget of " + std::to_string(budget) + " interpretations");
  }
  for (std::size_t n = 1; n <= max_universe; ++n) {
    FiniteInterpretation I;
    I.truth_set = V;
    I.universe.clear();
    for (std::size_t i = 0; i < n; ++i) I.universe.push_back("u" + std::to_string(i));
    struct Cell {
      std::vector<Rational>* pred = nullptr;
      std::vector<std::size_t>* func = nullptr;
      std::size_t slot = 0;
    };
    std::vector<Cell> cells;
    for (const auto& [name, k] : sig.predicates) {
      auto& tab = I.predicates[{name, k}];
      tab.assign(I.table_size(k), values.front());
    }
    for (const auto& [name, k] : sig.functions) {
      auto& tab = I.functions[{name, k}];
      tab.assign(I.table_size(k), 0);
    }
    for (auto& [sym, tab] : I.predicates)
      for (std::size_t i = 0; i < tab.size(); ++i) cells.push_back({&tab, nullptr, i});
    for (auto& [sym, tab] : I.functions)
      for (std::size_t i = 0; i < tab.size(); ++i) cells.push_back({nullptr, &tab, i});
    std::vector<std::size_t> digit(cells.size(), 0);
    while (true) {
      if (!visit(I)) return;
      std::size_t i = cells.size();
      while (i > 0) {
        --i;
        std::size_t radix = cells[i].pred ? values.size() : n;
        if (++digit[i] < radix) {
          if (cells[i].pred) (*cells[i].pred)[cells[i].slot] = values[digit[i]];
          else (*cells[i].func)[cells[i].slot] = digit[i];
          break;
        }
        digit[i] = 0;
        if (cells[i].pred) (*cells[i].pred)[cells[i].slot] = values[0];
        else (*cells[i].func)[cells[i].slot] = 0;
        if (i == 0) goto next_size;
      }
      if (cells.empty()) break;
    }
  next_size:;
  }
}

inline EntailmentResult entails_impl(const std::vector<Formula>& gamma, const Formula& goal, const GoedelSet& V,
                                     std::size_t max_universe, std::size_t budget, bool one) {
  for (const auto& g : gamma)
    if (!is_closed(g)) throw Error("premise '" + print(g) + "' is not closed");
  if (!is_closed(goal)) throw Error("goal '" + print(goal) + "' is not closed");
  if (!is_finite(V)) throw Error("brute-force entailment needs a finite truth set");
  auto values = points_of(V);
  std::vector<Formula> all = gamma;
  all.push_back(goal);
  Signature sig = signature_of(all);
  EntailmentResult r;
  for_each_interpretation(sig, V, values, max_universe, budget, [&](const FiniteInterpretation& I) {
    ++r.interpretations_checked;
    Rational g = inf_of(gamma, I);
    bool bad = one ? (g == 1 && eval(goal, I) != 1) : !(g <= eval(goal, I));
    if (bad) {
      r.holds = false;
      r.countermodel = I;
      return false;
    }
    return true;
  });
  return r;
}

}  // namespace detail

// Gamma |= A over every interpretation into V with at most max_universe
// elements. `holds` is a bounded verdict, not a validity proof.
inline EntailmentResult entails_bruteforce(const std::vector<Formula>& gamma, const Formula& goal, const GoedelSet& V,
                                           std::size_t max_universe, std::size_t budget = default_budget()) {
  return detail::entails_impl(gamma, goal, V, max_universe, budget, false);
}

inline EntailmentResult one_entails_bruteforce(const std::vector<Formula>& gamma, const Formula& goal, const GoedelSet& V,
                                               std::size_t max_universe, std::size_t budget = default_budget()) {
  return detail::entails_impl(gamma, goal, V, max_universe, budget, true);
}

}  // namespace goedel
