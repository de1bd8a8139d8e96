#pragma once

// Hilbert-style derivations in IL, H = IL + QS + LIN, H_n = H + FIN(n) and
// H_0 = H + ISO_0. Axiom steps carry explicit metavariable bindings; rule
// steps are decomposed structurally and any bindings given are cross-checked.

#include "semantics.hpp"
#include "syntax.hpp"

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace goedel {

struct SystemTag {
  enum class Kind { IL, H, Hn, H0 };
  Kind kind = Kind::H;
  int n = 0;  // Hn only

  bool operator==(const SystemTag&) const = default;
};

inline std::string print(const SystemTag& s) {
  switch (s.kind) {
    case SystemTag::Kind::IL: return "IL";
    case SystemTag::Kind::H: return "H";
    case SystemTag::Kind::Hn: return "H_" + std::to_string(s.n);
    case SystemTag::Kind::H0: return "H_0";
  }
  return {};
}

inline SystemTag parse_system(std::string s) {
  std::erase(s, ' ');
  if (s == "IL") return {SystemTag::Kind::IL, 0};
  if (s == "H") return {SystemTag::Kind::H, 0};
  if (s == "H_0" || s == "H0") return {SystemTag::Kind::H0, 0};
  std::string digits = s.rfind("H_", 0) == 0 ? s.substr(2) : s.rfind("H", 0) == 0 ? s.substr(1) : "";
  if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    int n = std::stoi(digits);
    if (n >= 2) return {SystemTag::Kind::Hn, n};
  }
  throw Error("unknown system '" + s + "' (expected IL, H, H_n with n >= 2, or H_0)");
}

using Binding = std::variant<Formula, Term>;
using Bindings = std::map<std::string, Binding>;

struct Justification {
  enum class Kind { Premise, Axiom, Rule };
  Kind kind = Kind::Premise;
  std::string name;
  std::vector<std::size_t> refs;
  Bindings bindings;
};

struct Step {
  std::size_t number = 0;
  Formula formula;
  Justification why;
};

struct Derivation {
  SystemTag system;
  std::vector<Step> steps;

  std::vector<Formula> premises() const {
    std::vector<Formula> out;
    for (const auto& s : steps)
      if (s.why.kind == Justification::Kind::Premise) out.push_back(s.formula);
    return out;
  }
  const Formula& conclusion() const {
    if (steps.empty()) throw Error("empty derivation");
    return steps.back().formula;
  }
};

struct BindingIncomplete : Error {
  using Error::Error;
};
struct SideConditionViolated : Error {
  std::string variable;
  SideConditionViolated(const std::string& msg, std::string v) : Error(msg), variable(std::move(v)) {}
};

namespace detail {

inline const Formula& need_formula(const Bindings& b, const std::string& k) {
  auto it = b.find(k);
  if (it == b.end()) throw BindingIncomplete("missing binding for " + k);
  if (auto f = std::get_if<Formula>(&it->second)) return *f;
  throw BindingIncomplete("binding for " + k + " must be a formula");
}

inline const Term& need_term(const Bindings& b, const std::string& k) {
  auto it = b.find(k);
  if (it == b.end()) throw BindingIncomplete("missing binding for " + k);
  if (auto t = std::get_if<Term>(&it->second)) return *t;
  // a bare uppercase-free name may have been read as a 0-ary atom; reject
  throw BindingIncomplete("binding for " + k + " must be a term");
}

inline std::string need_var(const Bindings& b, const std::string& k) {
  const Term& t = need_term(b, k);
  if (!t.is_var) throw BindingIncomplete("binding for " + k + " must be a variable");
  return t.name;
}

}  // namespace detail

inline bool axiom_allowed(const std::string& name, const SystemTag& sys) {
  static const std::set<std::string> il{"I3a", "I3b", "I4a", "I4b", "I5a", "I5b", "I9", "I11", "I12"};
  if (il.count(name)) return true;
  if (sys.kind == SystemTag::Kind::IL) return false;
  if (name == "QS" || name == "LIN") return true;
  if (name == "ISO_0") return sys.kind == SystemTag::Kind::H0;
  if (name == "FIN") return sys.kind == SystemTag::Kind::Hn;
  return false;
}

// The schema instance named by `name` under `b`. FIN uses `fin_n` disjuncts.
inline Formula instantiate_axiom(const std::string& name, const Bindings& b, int fin_n = 0) {
  using detail::need_formula;
  auto A = [&] { return need_formula(b, "A"); };
  auto B = [&] { return need_formula(b, "B"); };
  if (name == "I3a") return imp(disj(A(), A()), A());
  if (name == "I3b") return imp(A(), conj(A(), A()));
  if (name == "I4a") return imp(A(), disj(A(), B()));
  if (name == "I4b") return imp(conj(A(), B()), A());
  if (name == "I5a") return imp(disj(A(), B()), disj(B(), A()));
  if (name == "I5b") return imp(conj(A(), B()), conj(B(), A()));
  if (name == "I9") return imp(bot(), A());
  if (name == "I11" || name == "I12") {
    std::string x = detail::need_var(b, "x");
    const Term& t = detail::need_term(b, "t");
    Formula inst = substitute(A(), x, t);
    return name == "I11" ? imp(forall(x, A()), inst) : imp(inst, exists(x, A()));
  }
  if (name == "QS") {
    std::string x = detail::need_var(b, "x");
    const Formula& C = need_formula(b, "C");
    if (is_free_in(x, C)) throw SideConditionViolated("QS: " + x + " is free in C", x);
    return imp(forall(x, disj(C, A())), disj(C, forall(x, A())));
  }
  if (name == "LIN") return disj(imp(A(), B()), imp(B(), A()));
  if (name == "ISO_0") {
    std::string x = detail::need_var(b, "x");
    return imp(forall(x, neg(neg(A()))), neg(neg(forall(x, A()))));
  }
  if (name == "FIN") {
    if (fin_n < 2) throw Error("FIN needs n >= 2");
    std::vector<Formula> as;
    for (int i = 1; i < fin_n; ++i) as.push_back(need_formula(b, "A" + std::to_string(i)));
    std::vector<Formula> ds{imp(top(), as.front())};
    for (std::size_t i = 1; i < as.size(); ++i) ds.push_back(imp(as[i - 1], as[i]));
    ds.push_back(imp(as.back(), bot()));
    return disj_all(ds);
  }
  throw Error("unknown axiom schema '" + name + "'");
}

inline bool match_axiom(const std::string& name, const Formula& candidate, const Bindings& b, int fin_n = 0) {
  return alpha_equal(instantiate_axiom(name, b, fin_n), candidate);
}

struct CheckOptions {
  bool eigenvariable_conditions = true;  // switched off only by the mutation harness
  bool closed_premises = true;
};

struct CheckResult {
  bool accepted = true;
  std::size_t step = 0;
  std::string reason;
};

namespace detail {

struct RuleFailure : Error {
  using Error::Error;
};

inline void require(bool ok, const std::string& why) {
  if (!ok) throw RuleFailure(why);
}

inline bool alpha_eq(const Formula& a, const Formula& b) { return alpha_equal(a, b); }

// Checks one rule application; returns the bindings it determines.
inline Bindings check_rule(const std::string& name, const std::vector<Formula>& prem, const Formula& concl,
                           const Bindings& given, const CheckOptions& opt) {
  auto arity = [&](std::size_t n) { require(prem.size() == n, name + " cites " + std::to_string(n) + " step(s)"); };
  auto is_imp = [](const Formula& f) { return f.kind() == Kind::Imp; };
  Bindings found;
  if (name == "I1") {
    arity(2);
    require(is_imp(prem[1]), "second cited step is not an implication");
    require(alpha_eq(prem[1].left(), prem[0]), "antecedent of the second cited step differs from the first");
    require(alpha_eq(prem[1].right(), concl), "conclusion is not the consequent");
    found = {{"A", prem[0]}, {"B", concl}};
  } else if (name == "I2") {
    arity(2);
    require(is_imp(prem[0]) && is_imp(prem[1]) && is_imp(concl), "I2 needs implications");
    require(alpha_eq(prem[0].right(), prem[1].left()), "middle formulas differ");
    require(alpha_eq(concl.left(), prem[0].left()) && alpha_eq(concl.right(), prem[1].right()), "conclusion does not chain the premises");
    found = {{"A", prem[0].left()}, {"B", prem[0].right()}, {"C", prem[1].right()}};
  } else if (name == "I6") {
    arity(1);
    require(is_imp(prem[0]) && is_imp(concl), "I6 needs implications");
    require(concl.left().kind() == Kind::Or && concl.right().kind() == Kind::Or, "I6 conclusion must be C | A -> C | B");
    require(alpha_eq(concl.left().left(), concl.right().left()), "context disjuncts differ");
    require(alpha_eq(concl.left().right(), prem[0].left()) && alpha_eq(concl.right().right(), prem[0].right()),
            "conclusion does not extend the premise");
    found = {{"A", prem[0].left()}, {"B", prem[0].right()}, {"C", concl.left().left()}};
  } else if (name == "I7" || name == "I8") {
    arity(1);
    Formula curried = name == "I7" ? concl : prem[0];
    Formula uncurried = name == "I7" ? prem[0] : concl;
    require(is_imp(uncurried) && uncurried.left().kind() == Kind::And, "expected A & B -> C");
    require(is_imp(curried) && is_imp(curried.right()), "expected A -> (B -> C)");
    require(alpha_eq(uncurried.left().left(), curried.left()) && alpha_eq(uncurried.left().right(), curried.right().left()) &&
                alpha_eq(uncurried.right(), curried.right().right()),
            "curried and uncurried forms do not match");
    found = {{"A", curried.left()}, {"B", curried.right().left()}, {"C", curried.right().right()}};
  } else if (name == "I10" || name == "I13") {
    arity(1);
    bool intro = name == "I10";
    require(is_imp(prem[0]) && is_imp(concl), name + " needs implications");
    Formula q = intro ? concl.right() : concl.left();
    Formula side = intro ? concl.left() : concl.right();
    Formula pside = intro ? prem[0].left() : prem[0].right();
    Formula pbody = intro ? prem[0].right() : prem[0].left();
    require(q.kind() == (intro ? Kind::Forall : Kind::Exists), intro ? "conclusion must be B -> forall x. A" : "conclusion must be exists x. A -> B");
    std::string x = q.var();
    if (auto it = given.find("x"); it != given.end()) {
      auto t = std::get_if<Term>(&it->second);
      require(t && t->is_var, "binding for x must be a variable");
      x = t->name;
    }
    require(alpha_eq(side, pside), "side formula differs between premise and conclusion");
    require(alpha_eq(substitute(q.body(), q.var(), Term::var(x)), pbody), "premise is not the instance of the quantified formula at " + x);
    if (opt.eigenvariable_conditions) {
      if (is_free_in(x, side)) throw SideConditionViolated(name + ": " + x + " is free in B", x);
      if (x != q.var() && is_free_in(x, q)) throw SideConditionViolated(name + ": " + x + " is free in the quantified formula", x);
    }
    found = {{"A", pbody}, {"B", side}, {"x", Term::var(x)}};
  } else {
    throw RuleFailure("unknown rule '" + name + "'");
  }
  for (const auto& [k, v] : given) {
    auto it = found.find(k);
    require(it != found.end(), name + " has no metavariable " + k);
    if (k == "x") continue;
    const auto* gf = std::get_if<Formula>(&v);
    require(gf != nullptr, "binding " + k + " must be a formula");
    require(alpha_eq(*gf, std::get<Formula>(it->second)), "binding " + k + " disagrees with the cited steps");
  }
  return found;
}

}  // namespace detail

inline CheckResult check(const Derivation& d, const CheckOptions& opt = {}) {
  if (d.steps.empty()) return {false, 0, "empty derivation"};
  std::map<std::size_t, const Step*> seen;
  for (const auto& s : d.steps) {
    auto reject = [&](const std::string& why) { return CheckResult{false, s.number, why}; };
    if (seen.count(s.number)) return reject("duplicate step number");
    try {
      switch (s.why.kind) {
        case Justification::Kind::Premise:
          if (opt.closed_premises && !is_closed(s.formula)) return reject("premise is not closed");
          break;
        case Justification::Kind::Axiom: {
          std::string name = s.why.name;
          int n = d.system.n;
          if (name.rfind("FIN(", 0) == 0 && name.back() == ')') {
            n = std::stoi(name.substr(4, name.size() - 5));
            if (d.system.kind != SystemTag::Kind::Hn || n != d.system.n) return reject(name + " is not an axiom of " + print(d.system));
            name = "FIN";
          }
          if (!axiom_allowed(name, d.system)) return reject(name + " is not an axiom of " + print(d.system));
          if (!match_axiom(name, s.formula, s.why.bindings, n)) return reject("formula is not the " + name + " instance for the given bindings");
          break;
        }
        case Justification::Kind::Rule: {
          std::vector<Formula> prem;
          for (auto r : s.why.refs) {
            if (r >= s.number) return reject("cites step " + std::to_string(r) + " which does not precede it");
            auto it = seen.find(r);
            if (it == seen.end()) return reject("cites missing step " + std::to_string(r));
            prem.push_back(it->second->formula);
          }
          detail::check_rule(s.why.name, prem, s.formula, s.why.bindings, opt);
          break;
        }
      }
    } catch (const SideConditionViolated& e) {
      return reject(std::string("side condition violated: ") + e.what());
    } catch (const BindingIncomplete& e) {
      return reject(std::string("incomplete bindings: ") + e.what());
    } catch (const detail::RuleFailure& e) {
      return reject(e.what());
    } catch (const Error& e) {
      return reject(e.what());
    }
    seen[s.number] = &s;
  }
  return {true, 0, {}};
}

// Bounded semantic check of Gamma |= conclusion (universally closed).
inline EntailmentResult soundness_sample(const Derivation& d, const GoedelSet& V, std::size_t max_universe,
                                         std::size_t budget = default_budget()) {
  return entails_bruteforce(d.premises(), universal_closure(d.conclusion()), V, max_universe, budget);
}

// ---- text format -----------------------------------------------------------
//   system H_0
//   1. A ; premise
//   2. (A -> B) | (B -> A) ; axiom LIN [A:=A, B:=B]
//   3. B ; rule I1 1,2

inline std::string print(const Binding& b) {
  if (auto f = std::get_if<Formula>(&b)) return print(*f);
  return print(std::get<Term>(b));
}

inline std::string print(const Justification& j) {
  std::string s;
  switch (j.kind) {
    case Justification::Kind::Premise: return "premise";
    case Justification::Kind::Axiom: s = "axiom " + j.name; break;
    case Justification::Kind::Rule: {
      s = "rule " + j.name + " ";
      for (std::size_t i = 0; i < j.refs.size(); ++i) s += (i ? "," : "") + std::to_string(j.refs[i]);
      break;
    }
  }
  if (!j.bindings.empty()) {
    s += " [";
    bool first = true;
    for (const auto& [k, v] : j.bindings) {
      s += (first ? "" : ", ") + k + ":=" + print(v);
      first = false;
    }
    s += "]";
  }
  return s;
}

inline std::string print(const Derivation& d) {
  std::string out = "system " + print(d.system) + "\n";
  for (const auto& s : d.steps) out += std::to_string(s.number) + ". " + print(s.formula) + " ; " + print(s.why) + "\n";
  return out;
}

namespace detail {

inline std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

// Metavariables A, B, C, A1.. take formulas; x and t take terms.
inline Bindings parse_bindings(const std::string& body, std::size_t line) {
  Bindings out;
  std::vector<std::pair<std::string, std::string>> entries;
  int depth = 0;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    std::string e = trim(body.substr(start, end - start));
    if (e.empty()) return;
    auto eq = e.find(":=");
    if (eq == std::string::npos) throw ParseError("binding '" + e + "' lacks ':='", line, 1);
    entries.push_back({trim(e.substr(0, eq)), trim(e.substr(eq + 2))});
  };
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      // a comma separates entries only when the next entry starts NAME :=
      std::size_t j = i + 1;
      while (j < body.size() && std::isspace(static_cast<unsigned char>(body[j]))) ++j;
      std::size_t k = j;
      while (k < body.size() && (std::isalnum(static_cast<unsigned char>(body[k])) || body[k] == '_')) ++k;
      std::size_t m = k;
      while (m < body.size() && std::isspace(static_cast<unsigned char>(body[m]))) ++m;
      if (k > j && body.compare(m, 2, ":=") == 0) {
        flush(i);
        start = i + 1;
      }
    }
  }
  flush(body.size());
  for (const auto& [k, v] : entries) {
    try {
      if (!k.empty() && std::islower(static_cast<unsigned char>(k[0]))) out[k] = parse_term(v);
      else out[k] = parse_formula(v);
    } catch (const ParseError& e) {
      throw ParseError("in binding " + k + ": " + e.what(), line, 1);
    }
  }
  return out;
}

}  // namespace detail

inline Derivation parse_derivation(const std::string& text) {
  Derivation d;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = detail::trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (s.rfind("system", 0) == 0) {
      std::string rest = detail::trim(s.substr(6));
      if (!rest.empty() && rest[0] == ':') rest = detail::trim(rest.substr(1));
      d.system = parse_system(rest);
      continue;
    }
    auto dot = s.find('.');
    if (dot == std::string::npos || dot == 0 || !std::all_of(s.begin(), s.begin() + static_cast<long>(dot), ::isdigit))
      throw ParseError("expected '<n>. <formula> ; <justification>'", line, 1);
    Step st;
    st.number = std::stoul(s.substr(0, dot));
    auto semi = s.find(';', dot);
    if (semi == std::string::npos) throw ParseError("missing ';' before the justification", line, s.size());
    try {
      st.formula = parse_formula(s.substr(dot + 1, semi - dot - 1));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line, dot + 1 + e.column);
    }
    std::string j = detail::trim(s.substr(semi + 1));
    std::string bindings;
    if (auto lb = j.find('['); lb != std::string::npos) {
      auto rb = j.rfind(']');
      if (rb == std::string::npos || rb < lb) throw ParseError("unterminated binding list", line, semi + 1 + lb);
      bindings = j.substr(lb + 1, rb - lb - 1);
      j = detail::trim(j.substr(0, lb));
    }
    std::istringstream js(j);
    std::string kind;
    js >> kind;
    if (kind == "premise") {
      st.why.kind = Justification::Kind::Premise;
    } else if (kind == "axiom" || kind == "rule") {
      st.why.kind = kind == "axiom" ? Justification::Kind::Axiom : Justification::Kind::Rule;
      js >> st.why.name;
      if (st.why.name.empty()) throw ParseError("missing " + kind + " name", line, semi + 1);
      std::string refs, rest;
      while (js >> rest) refs += rest;
      if (kind == "rule") {
        std::stringstream rs(refs);
        std::string r;
        while (std::getline(rs, r, ','))
          if (!r.empty()) {
            if (!std::all_of(r.begin(), r.end(), ::isdigit)) throw ParseError("bad step reference '" + r + "'", line, semi + 1);
            st.why.refs.push_back(std::stoul(r));
          }
      } else if (!refs.empty()) {
        throw ParseError("unexpected text after axiom name", line, semi + 1);
      }
    } else {
      throw ParseError("justification must be premise, axiom or rule", line, semi + 1);
    }
    st.why.bindings = detail::parse_bindings(bindings, line);
    d.steps.push_back(std::move(st));
  }
  return d;
}

}  // namespace goedel
