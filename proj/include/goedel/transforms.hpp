#pragma once

#include "formula.hpp"
#include "syntax.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace goedel {

struct SignatureClash : Error {
  explicit SignatureClash(const std::string& sym)
      : Error("symbol '" + sym + "' of the reduction already occurs in the input"), symbol(sym) {}
  std::string symbol;
};

struct ShapeError : Error {
  using Error::Error;
};

struct InadmissibleShift : Error {
  InadmissibleShift(const Formula& at, std::string s)
      : Error("prenexing '" + print(at) + "' needs the shift " + s +
              (s == "S_2" ? " (B -> exists x A(x)) -> exists x (B -> A(x))" : " (forall x A(x) -> B) -> exists x (A(x) -> B)") +
              ", which is not valid in every Goedel logic"),
        subformula(at),
        shift(std::move(s)) {}
  Formula subformula;
  std::string shift;
};

struct ReductionOutput {
  Formula output;
  Formula antecedent;
  Formula consequent;
  Formula relativized;  // A'
  std::vector<Formula> s_axioms;
  std::vector<Formula> conjuncts;  // antecedent conjuncts after S, in order
  Signature inventory;
  std::string provenance;
};

// Every atom becomes its double negation; quantifiers are relativized to
// `rel`, which receives the bound variable.
inline Formula relativize_dneg(const Formula& f, const std::function<Formula(const Term&)>& rel) {
  switch (f.kind()) {
    case Kind::Bot: return f;
    case Kind::Atom: return neg(neg(f));
    case Kind::Forall: return forall(f.var(), imp(rel(Term::var(f.var())), relativize_dneg(f.body(), rel)));
    case Kind::Exists: return exists(f.var(), conj(rel(Term::var(f.var())), relativize_dneg(f.body(), rel)));
    default: return binary(f.kind(), relativize_dneg(f.left(), rel), relativize_dneg(f.right(), rel));
  }
}

// Relativization to a unary predicate, itself double-negated.
inline Formula relativize_dneg(const Formula& f, const std::string& predicate) {
  return relativize_dneg(f, [&](const Term& v) { return neg(neg(atom(predicate, {v}))); });
}

namespace detail {

inline Formula dn(Formula a) { return neg(neg(std::move(a))); }

inline Term var(const char* n) { return Term::var(n); }
inline Term zero() { return Term::app("zero"); }
inline Term succ(Term t) { return Term::app("s", {std::move(t)}); }

inline Formula le(Term a, Term b) { return dn(atom("Le", {std::move(a), std::move(b)})); }

inline Formula forall_all(const std::vector<std::string>& vs, Formula body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = forall(*it, body);
  return body;
}
inline Formula exists_all(const std::vector<std::string>& vs, Formula body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = exists(*it, body);
  return body;
}

// The fixed list standing in for "the standard axioms for 0, successor and
// <=", atoms double-negated except where a crisp negation is the point.
inline std::vector<Formula> s_axioms() {
  Term i = var("i"), j = var("j"), k = var("k");
  return {
      forall("i", le(zero(), i)),
      forall("i", le(i, succ(i))),
      forall("i", le(i, i)),
      forall_all({"i", "j", "k"}, imp(conj(le(i, j), le(j, k)), le(i, k))),
      forall("i", neg(atom("Le", {succ(i), i}))),
      forall_all({"i", "j"}, imp(le(i, j), neg(atom("Le", {succ(j), i})))),
  };
}

inline void check_fresh(const Formula& a, const std::vector<std::string>& names) {
  if (!is_closed(a)) throw Error("reduction needs a closed formula; free: " + *free_vars(a).begin());
  auto sig = signature_of(a);
  for (const auto& n : names)
    if (sig.uses(n)) throw SignatureClash(n);
}

inline Signature number_inventory() {
  Signature s;
  s.add_predicate("Le", 2);
  s.add_function("zero", 0);
  s.add_function("s", 1);
  return s;
}

}  // namespace detail

// Formula (7): A^g = S & c1 in 0 & c2 in 0 & c2 < c1 & forall i[...] -> A' | exists u P(u),
// with x in y := ~~L(x,y) and x < y := (P(y) -> P(x)) -> P(y).
inline ReductionOutput to_Ag(const Formula& a) {
  using namespace detail;
  check_fresh(a, {"P", "L", "Le", "zero", "s", "c1", "c2"});
  auto in = [](Term x, Term y) { return dn(atom("L", {std::move(x), std::move(y)})); };
  auto prec = [](Term x, Term y) {
    Formula py = atom("P", {y});
    return imp(imp(py, atom("P", {std::move(x)})), py);
  };
  Term c1 = Term::app("c1"), c2 = Term::app("c2");
  Term i = var("i"), j = var("j"), k = var("k"), x = var("x"), y = var("y"), z = var("z");

  Formula d = imp(conj_all({le(j, i), in(x, j), le(k, i), in(y, k), prec(x, y)}),
                  conj_all({in(z, succ(i)), prec(x, z), prec(z, y)}));
  Formula levels = forall("i", disj(forall_all({"x", "y", "j", "k"}, exists("z", d)), forall("x", neg(in(x, succ(i))))));

  ReductionOutput r;
  r.s_axioms = s_axioms();
  r.conjuncts = {in(c1, zero()), in(c2, zero()), prec(c2, c1), levels};
  std::vector<Formula> all = r.s_axioms;
  all.insert(all.end(), r.conjuncts.begin(), r.conjuncts.end());
  r.antecedent = conj_all(all);

  r.relativized = relativize_dneg(a, [&](const Term& v) {
    std::string w = fresh_name("r", {v.name});
    return exists(w, in(Term::var(w), v));
  });
  r.consequent = disj(r.relativized, exists("u", atom("P", {var("u")})));
  r.output = imp(r.antecedent, r.consequent);

  r.inventory = number_inventory();
  r.inventory.add_function("c1", 0);
  r.inventory.add_function("c2", 0);
  r.inventory.add_predicate("P", 1);
  r.inventory.add_predicate("L", 2);
  r.provenance = "A^g: countably infinite truth-value sets; quantifiers of A relativized to R(i) = exists r (r in i)";
  return r;
}

// Formula (8): the level construction indexed by l, with a strictly
// decreasing sequence Q(l) below every P(x,l).
inline ReductionOutput to_Ah(const Formula& a) {
  using namespace detail;
  check_fresh(a, {"P", "L", "Q", "Le", "zero", "s"});
  auto in = [](Term x, Term y, Term l) { return dn(atom("L", {std::move(x), std::move(y), std::move(l)})); };
  auto prec = [](Term x, Term y, Term l) {
    Formula py = atom("P", {y, l});
    return imp(imp(py, atom("P", {std::move(x), l})), py);
  };
  Term i = var("i"), j = var("j"), k = var("k"), x = var("x"), y = var("y"), z = var("z"), l = var("l");
  auto q = [](Term t) { return atom("Q", {std::move(t)}); };

  Formula e = imp(conj_all({le(j, i), in(x, j, l), le(k, i), in(y, k, l), prec(x, y, l)}),
                  conj_all({in(z, succ(i), l), prec(x, z, l), prec(z, y, l)}));

  ReductionOutput r;
  r.s_axioms = s_axioms();
  r.conjuncts = {
      forall("l", imp(imp(q(succ(l)), q(l)), q(succ(l)))),
      neg(forall("l", q(l))),
      exists("l", neg(q(l))),
      forall_all({"l", "x"}, imp(imp(q(l), atom("P", {x, l})), q(l))),
      forall("l", exists_all({"x", "y"}, conj_all({in(x, zero(), l), in(y, zero(), l), prec(x, y, l)}))),
      forall_all({"l", "i"},
                 disj(forall_all({"x", "y", "j", "k"}, exists("z", e)), forall("x", neg(in(x, succ(i), l))))),
  };
  std::vector<Formula> all = r.s_axioms;
  all.insert(all.end(), r.conjuncts.begin(), r.conjuncts.end());
  r.antecedent = conj_all(all);

  r.relativized = relativize_dneg(a, [&](const Term& v) {
    std::set<std::string> avoid{v.name};
    std::string iv = fresh_name("i", avoid);
    avoid.insert(iv);
    std::string xv = fresh_name("x", avoid);
    return forall(iv, exists(xv, in(Term::var(xv), Term::var(iv), v)));
  });
  r.consequent = disj_all({r.relativized, exists_all({"l", "u"}, atom("P", {var("u"), l})), exists("l", q(l))});
  r.output = imp(r.antecedent, r.consequent);

  r.inventory = number_inventory();
  r.inventory.add_predicate("P", 2);
  r.inventory.add_predicate("L", 3);
  r.inventory.add_predicate("Q", 1);
  r.provenance = "A^h: 0 not in the perfect kernel; quantifiers of A relativized to R(l) = forall i exists x (x in_l i)";
  return r;
}

// Name of the 0-ary atom that replaces bot in to_bot_free(a).
inline std::string bot_free_atom(const Formula& a) {
  std::set<std::string> used;
  for (const auto& [n, k] : signature_of(a).predicates) used.insert(n);
  return fresh_name("B", used);
}

inline Formula replace_bot(const Formula& f, const Formula& by) {
  switch (f.kind()) {
    case Kind::Bot: return by;
    case Kind::Atom: return f;
    case Kind::Forall:
    case Kind::Exists: return quant(f.kind(), f.var(), replace_bot(f.body(), by));
    default: return binary(f.kind(), replace_bot(f.left(), by), replace_bot(f.right(), by));
  }
}

// A* = (/\ forall xs (b -> P(xs))) -> A^b over the predicates of A.
inline Formula to_bot_free(const Formula& a) {
  Formula b = atom(bot_free_atom(a));
  std::vector<Formula> guards;
  for (const auto& [name, k] : signature_of(a).predicates) {
    std::vector<std::string> vs;
    std::vector<Term> args;
    for (int i = 0; i < k; ++i) {
      vs.push_back(k == 1 ? std::string("x") : "x" + std::to_string(i + 1));
      args.push_back(Term::var(vs.back()));
    }
    guards.push_back(detail::forall_all(vs, imp(b, atom(name, args))));
  }
  Formula guard = guards.empty() ? imp(b, b) : conj_all(guards);
  return imp(guard, replace_bot(a, b));
}

// forall xs A(xs) -> B  becomes  exists xs (A(xs) -> B), for forall-free A and B.
inline Formula forall_free_shift(const Formula& f) {
  if (f.kind() != Kind::Imp || f.left().kind() != Kind::Forall)
    throw ShapeError("expected a formula of the form forall x A(x) -> B");
  Formula body = f.left();
  std::vector<std::string> vs;
  Formula b = f.right();
  std::set<std::string> avoid = all_vars(b);
  for (const auto& v : all_vars(f.left())) avoid.insert(v);
  while (body.kind() == Kind::Forall) {
    std::string v = body.var();
    Formula inner = body.body();
    if (is_free_in(v, b) || std::find(vs.begin(), vs.end(), v) != vs.end()) {
      std::string nv = fresh_name(v, avoid);
      avoid.insert(nv);
      inner = substitute(inner, v, Term::var(nv));
      v = nv;
    }
    vs.push_back(v);
    body = inner;
  }
  if (contains_kind(body, Kind::Forall) || contains_kind(b, Kind::Forall))
    throw ShapeError("antecedent body and consequent must be forall-free");
  return detail::exists_all(vs, imp(body, b));
}

// ---- prenex forms ----------------------------------------------------------

struct ShiftRecord {
  std::string rule;
  Formula at;
};

struct PrenexResult {
  Formula formula;
  std::vector<ShiftRecord> shifts;
  // False when a one-directional shift was used; the result then implies
  // the input but need not be equivalent to it.
  bool equivalent = true;
};

namespace detail {

struct Prenexer {
  std::vector<ShiftRecord> shifts;
  bool equivalent = true;

  using Prefix = std::vector<std::pair<Kind, std::string>>;

  std::pair<Prefix, Formula> run(const Formula& g, bool positive) {
    switch (g.kind()) {
      case Kind::Bot:
      case Kind::Atom: return {{}, g};
      case Kind::Forall:
      case Kind::Exists: {
        auto [p, m] = run(g.body(), positive);
        p.insert(p.begin(), {g.kind(), g.var()});
        return {p, m};
      }
      case Kind::And:
      case Kind::Or: {
        auto [pa, ma] = run(g.left(), positive);
        auto [pb, mb] = run(g.right(), positive);
        const char* op = g.kind() == Kind::And ? "and" : "or";
        for (const auto& [k, v] : pa) shifts.push_back({std::string(k == Kind::Forall ? "forall-" : "exists-") + op, g});
        for (const auto& [k, v] : pb) shifts.push_back({std::string(k == Kind::Forall ? "forall-" : "exists-") + op, g});
        pa.insert(pa.end(), pb.begin(), pb.end());
        return {pa, binary(g.kind(), ma, mb)};
      }
      default: {
        auto [pa, ma] = run(g.left(), !positive);
        auto [pb, mb] = run(g.right(), positive);
        Prefix out;
        bool crisp = is_crisp(g);
        auto one_way = [&](const std::string& rule, const char* s) {
          if (crisp) {
            shifts.push_back({std::string("crisp-") + s, g});
          } else if (positive) {
            shifts.push_back({rule, g});
            equivalent = false;
          } else {
            throw InadmissibleShift(g, s);
          }
        };
        for (const auto& [k, v] : pa) {
          if (k == Kind::Exists) {
            shifts.push_back({"exists-antecedent", g});
            out.push_back({Kind::Forall, v});
          } else {
            one_way("forall-antecedent", "S_3");
            out.push_back({Kind::Exists, v});
          }
        }
        for (const auto& [k, v] : pb) {
          if (k == Kind::Forall) {
            shifts.push_back({"forall-consequent", g});
          } else {
            one_way("exists-consequent", "S_2");
          }
          out.push_back({k, v});
        }
        return {out, imp(ma, mb)};
      }
    }
  }
};

}  // namespace detail

// Pulls all quantifiers to the front. Shifts that are equivalences in every
// Goedel logic are always used; the one-directional ones only where the
// result still implies the input (positive position), and the two crisp
// shifts wherever the implication is crisp. Anything else is rejected.
inline PrenexResult prenex_crisp_traced(const Formula& a) {
  Formula f = rename_apart(a);
  detail::Prenexer p;
  auto [prefix, m] = p.run(f, true);
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) m = quant(it->first, it->second, m);
  return {m, std::move(p.shifts), p.equivalent};
}

inline Formula prenex_crisp(const Formula& a) { return prenex_crisp_traced(a).formula; }

}  // namespace goedel
