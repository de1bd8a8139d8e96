#pragma once

#include "goedel_set.hpp"
#include "semantics.hpp"
#include "syntax.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace goedel {

// Values of the (opaque) atoms of a quantifier-free formula.
struct PropValuation {
  std::vector<std::pair<Formula, Rational>> values;

  std::optional<Rational> lookup(const Formula& a) const {
    for (const auto& [f, q] : values)
      if (f == a) return q;
    return std::nullopt;
  }
};

struct DecisionResult {
  bool valid = true;
  std::optional<PropValuation> countermodel;
  Rational countermodel_value = 1;
  std::size_t valuations_checked = 0;
};

// Value of a quantifier-free formula with atoms taken from `v`.
inline Rational eval_prop(const Formula& f, const PropValuation& v) {
  switch (f.kind()) {
    case Kind::Bot: return 0;
    case Kind::Atom: {
      auto q = v.lookup(f);
      if (!q) throw EvalError("atom '" + print(f) + "' has no value");
      return *q;
    }
    case Kind::And: return g_and(eval_prop(f.left(), v), eval_prop(f.right(), v));
    case Kind::Or: return g_or(eval_prop(f.left(), v), eval_prop(f.right(), v));
    case Kind::Imp: return g_imp(eval_prop(f.left(), v), eval_prop(f.right(), v));
    default: throw Error("formula is not quantifier-free");
  }
}

namespace detail {

// Postfix program over value ranks; Goedel connectives only compare values,
// so evaluating on indices into a sorted chain is exact.
struct PropProgram {
  enum Op : std::uint8_t { Bot, Atom, And, Or, Imp };
  std::vector<std::pair<Op, std::uint32_t>> code;

  static PropProgram compile(const Formula& f, const std::vector<Formula>& atoms) {
    PropProgram p;
    auto go = [&](auto&& self, const Formula& g) -> void {
      switch (g.kind()) {
        case Kind::Bot: p.code.push_back({Bot, 0}); return;
        case Kind::Atom: {
          auto it = std::find(atoms.begin(), atoms.end(), g);
          p.code.push_back({Atom, static_cast<std::uint32_t>(it - atoms.begin())});
          return;
        }
        case Kind::And:
        case Kind::Or:
        case Kind::Imp:
          self(self, g.left());
          self(self, g.right());
          p.code.push_back({g.kind() == Kind::And ? And : g.kind() == Kind::Or ? Or : Imp, 0});
          return;
        default: throw Error("formula is not quantifier-free");
      }
    };
    go(go, f);
    return p;
  }

  std::uint8_t run(const std::vector<std::uint8_t>& val, std::uint8_t top, std::vector<std::uint8_t>& stack) const {
    stack.clear();
    for (auto [op, arg] : code) {
      switch (op) {
        case Bot: stack.push_back(0); break;
        case Atom: stack.push_back(val[arg]); break;
        default: {
          std::uint8_t b = stack.back();
          stack.pop_back();
          std::uint8_t a = stack.back();
          stack.back() = op == And ? std::min(a, b) : op == Or ? std::max(a, b) : (a <= b ? top : b);
        }
      }
    }
    return stack.back();
  }
};

}  // namespace detail

// Exhaustive check over V_m; the first countermodel in lexicographic order
// (first atom most significant) is returned.
inline DecisionResult decide_over(const Formula& f, const std::vector<Rational>& chain, std::size_t budget = default_budget()) {
  if (!is_quantifier_free(f)) throw Error("decision procedure needs a quantifier-free formula");
  if (chain.size() > 255) throw Error("truth-value chain too long");
  auto atoms = atoms_of(f);
  long double total = 1;
  for (std::size_t i = 0; i < atoms.size(); ++i) total *= static_cast<long double>(chain.size());
  if (total > static_cast<long double>(budget))
    throw BudgetExceeded(std::to_string(atoms.size()) + " atoms exceed the valuation budget of " + std::to_string(budget));
  auto prog = detail::PropProgram::compile(f, atoms);
  std::uint8_t top = static_cast<std::uint8_t>(chain.size() - 1);
  std::vector<std::uint8_t> val(atoms.size(), 0), stack;
  DecisionResult r;
  while (true) {
    ++r.valuations_checked;
    std::uint8_t v = prog.run(val, top, stack);
    if (v != top) {
      r.valid = false;
      PropValuation pv;
      for (std::size_t i = 0; i < atoms.size(); ++i) pv.values.push_back({atoms[i], chain[val[i]]});
      r.countermodel = pv;
      r.countermodel_value = chain[v];
      return r;
    }
    std::size_t i = atoms.size();
    while (i > 0 && val[i - 1] == top) val[--i] = 0;
    if (i == 0) return r;
    ++val[i - 1];
  }
}

inline DecisionResult decide_Gm(const Formula& f, int m, std::size_t budget = default_budget()) {
  return decide_over(f, points_of(finite_chain(m)), budget);
}

// n atoms together with 0 and 1 occupy at most n+2 order positions.
inline DecisionResult decide_LC(const Formula& f, std::size_t budget = default_budget()) {
  if (!is_quantifier_free(f)) throw Error("decision procedure needs a quantifier-free formula");
  return decide_Gm(f, static_cast<int>(atoms_of(f).size()) + 2, budget);
}

inline std::string print(const PropValuation& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.values.size(); ++i)
    s += (i ? ", " : "") + print(v.values[i].first) + "=" + to_string(v.values[i].second);
  return s + "}";
}

}  // namespace goedel
