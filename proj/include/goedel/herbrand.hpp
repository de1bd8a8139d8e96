#pragma once

// Herbrand forms of prenex formulas, Herbrand-base enumeration, the
// semantic-tree prover over order constraints, certificates, and
// reassembly of a Herbrand disjunction into the original prenex formula.

#include "decide.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace goedel {

struct NotPrenex : Error {
  using Error::Error;
};
struct ReassemblyError : Error {
  using Error::Error;
};

struct HerbrandMode {
  enum class Kind { Uncountable, Finite };
  Kind kind = Kind::Uncountable;
  int n = 0;  // number of truth values in finite mode

  static HerbrandMode uncountable() { return {}; }
  static HerbrandMode finite(int n) {
    if (n < 2) throw Error("finite mode needs at least two truth values");
    return {Kind::Finite, n};
  }
  bool operator==(const HerbrandMode&) const = default;
};

inline std::string print(const HerbrandMode& m) {
  return m.kind == HerbrandMode::Kind::Uncountable ? "uncountable" : "finite:" + std::to_string(m.n);
}

inline HerbrandMode parse_mode(const std::string& s) {
  if (s == "uncountable") return HerbrandMode::uncountable();
  for (const char* prefix : {"finite:", "finite("}) {
    std::string p = prefix;
    if (s.rfind(p, 0) == 0) {
      std::string digits = s.substr(p.size());
      if (!digits.empty() && digits.back() == ')') digits.pop_back();
      if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit)) return HerbrandMode::finite(std::stoi(digits));
    }
  }
  throw Error("unknown mode '" + s + "' (expected uncountable or finite:n)");
}

struct HerbrandProblem {
  Formula original;
  Formula renamed;  // original with shadowed prefix binders renamed apart
  std::vector<std::pair<Kind, std::string>> prefix;
  Formula matrix;                     // over the prefix variables of `renamed`
  Formula matrix_f;                   // B^F, free in the existential variables
  std::vector<std::string> existentials;
  std::vector<Term> prefix_terms;     // t_1..t_n of the Herbrand form
  std::set<std::string> skolem;       // symbols standing for universal variables
  std::vector<std::string> padding;   // symbols added to keep HU infinite
  std::map<std::string, int> functions;   // HU signature
  std::map<std::string, int> predicates;

  Formula herbrand_form() const {
    Formula f = matrix_f;
    for (auto it = existentials.rbegin(); it != existentials.rend(); ++it) f = exists(*it, f);
    return f;
  }
};

// Validity transfers from A to its Herbrand form in every Goedel logic, and
// back again through a Herbrand disjunction (see reassemble).
inline HerbrandProblem herbrand_form(const Formula& a) {
  if (!is_closed(a)) throw Error("Herbrand form needs a closed formula");
  if (!is_prenex(a)) throw NotPrenex("formula is not prenex: " + print(a));
  HerbrandProblem p;
  p.original = a;
  Formula m = a;
  while (m.kind() == Kind::Forall || m.kind() == Kind::Exists) {
    p.prefix.push_back({m.kind(), m.var()});
    m = m.body();
  }
  p.matrix = m;

  std::set<std::string> avoid = all_vars(a);
  for (std::size_t i = 0; i < p.prefix.size(); ++i)
    for (std::size_t j = i + 1; j < p.prefix.size(); ++j)
      if (p.prefix[j].second == p.prefix[i].second) {
        p.prefix[i].second = fresh_name(p.prefix[i].second, avoid);
        avoid.insert(p.prefix[i].second);
        break;
      }
  p.renamed = p.matrix;
  for (auto it = p.prefix.rbegin(); it != p.prefix.rend(); ++it) p.renamed = quant(it->first, it->second, p.renamed);

  Signature sig = signature_of(a);
  std::set<std::string> used;
  for (const auto& [n, k] : sig.functions) used.insert(n);
  std::vector<Term> seen;
  int universals = 0;
  p.matrix_f = p.matrix;
  for (const auto& [q, x] : p.prefix) {
    if (q == Kind::Exists) {
      p.existentials.push_back(x);
      seen.push_back(Term::var(x));
      p.prefix_terms.push_back(Term::var(x));
      continue;
    }
    std::string name = fresh_name((seen.empty() ? "c" : "f") + std::to_string(++universals), used);
    used.insert(name);
    p.skolem.insert(name);
    Term t = Term::app(name, seen);
    p.prefix_terms.push_back(t);
    p.matrix_f = substitute(p.matrix_f, x, t);
  }

  Signature fsig = signature_of(p.matrix_f);
  p.functions = fsig.functions;
  p.predicates = fsig.predicates;
  bool has_const = false, has_fun = false;
  for (const auto& [n, k] : p.functions) (k == 0 ? has_const : has_fun) = true;
  if (!has_const) {
    std::string c = fresh_name("c0", used);
    used.insert(c);
    p.functions[c] = 0;
    p.padding.push_back(c);
  }
  if (!has_fun) {
    std::string f = fresh_name("f0", used);
    used.insert(f);
    p.functions[f] = 1;
    p.padding.push_back(f);
  }
  return p;
}

// Herbrand universe and base, enumerated by size and then lexicographically.
class HerbrandBase {
 public:
  explicit HerbrandBase(const HerbrandProblem& p) : functions_(p.functions), predicates_(p.predicates) {}

  // Makes C_1..C_count available; false if the base is smaller.
  bool ensure(std::size_t count) {
    while (atoms_.size() < count) {
      if (predicates_.empty()) return false;
      if (!has_positive_arity() && next_size_ > 0) return false;
      add_atoms_of_size(next_size_++);
    }
    return true;
  }

  const std::vector<Formula>& atoms() const { return atoms_; }
  const Formula& atom(std::size_t i) {
    if (!ensure(i + 1)) throw Error("Herbrand base has fewer than " + std::to_string(i + 1) + " atoms");
    return atoms_[i];
  }

  // Index of a ground atom within the enumeration produced so far.
  std::optional<std::size_t> index_of(const Formula& a) const {
    auto it = index_.find(print(a));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<Term>& terms_of_size(std::size_t s) {
    while (terms_.size() <= s) {
      std::size_t k = terms_.size();
      std::vector<Term> bucket;
      if (k >= 1)
        for (const auto& [f, arity] : functions_) {
          if (arity == 0) {
            if (k == 1) bucket.push_back(Term::app(f, {}));
            continue;
          }
          for (const auto& args : tuples_of_total(static_cast<std::size_t>(arity), k - 1))
            bucket.push_back(Term::app(f, args));
        }
      std::sort(bucket.begin(), bucket.end());
      terms_.push_back(std::move(bucket));
    }
    return terms_[s];
  }

 private:
  std::map<std::string, int> functions_;
  std::map<std::string, int> predicates_;
  std::vector<std::vector<Term>> terms_;
  std::vector<Formula> atoms_;
  std::map<std::string, std::size_t> index_;
  std::size_t next_size_ = 0;

  bool has_positive_arity() const {
    for (const auto& [n, k] : predicates_)
      if (k > 0) return true;
    return false;
  }

  // All argument tuples of `arity` terms whose sizes sum to `total`.
  std::vector<std::vector<Term>> tuples_of_total(std::size_t arity, std::size_t total) {
    std::vector<std::vector<Term>> out;
    if (arity == 0) {
      if (total == 0) out.push_back({});
      return out;
    }
    if (total < arity) return out;
    for (std::size_t first = 1; first + (arity - 1) <= total; ++first) {
      const auto heads = terms_of_size(first);
      for (auto& rest : tuples_of_total(arity - 1, total - first))
        for (const auto& h : heads) {
          std::vector<Term> t{h};
          t.insert(t.end(), rest.begin(), rest.end());
          out.push_back(std::move(t));
        }
    }
    return out;
  }

  void add_atoms_of_size(std::size_t s) {
    std::vector<std::pair<std::string, std::vector<Term>>> bucket;
    for (const auto& [p, arity] : predicates_)
      for (auto& args : tuples_of_total(static_cast<std::size_t>(arity), s)) bucket.push_back({p, std::move(args)});
    std::sort(bucket.begin(), bucket.end());
    for (auto& [p, args] : bucket) {
      Formula a = goedel::atom(p, args);
      index_[print(a)] = atoms_.size();
      atoms_.push_back(a);
    }
  }
};

// A ground instance of B^F whose atoms all lie in X_l.
struct Instance {
  std::vector<Term> tuple;  // one term per existential variable
  Formula formula;
  detail::PropProgram program;  // over the atom indices of the base
};

namespace detail {

inline void ground_subterms(const Term& t, std::set<Term>& out) {
  out.insert(t);
  for (const auto& a : t.args) ground_subterms(a, out);
}

inline Term filler_constant(const HerbrandProblem& p) {
  for (const auto& [n, k] : p.functions)
    if (k == 0) return Term::app(n, {});
  throw Error("Herbrand universe has no constant");
}

}  // namespace detail

// The l-instances of B^F in a fixed order: tuples over the terms of X_l,
// sorted by size then lexicographically, first variable most significant.
inline std::vector<Instance> ell_instances(const HerbrandProblem& p, HerbrandBase& base, std::size_t level) {
  base.ensure(level);
  std::size_t l = std::min(level, base.atoms().size());
  std::vector<Formula> xs(base.atoms().begin(), base.atoms().begin() + static_cast<long>(l));
  std::set<Term> subterms;
  for (const auto& a : xs)
    for (const auto& t : a.args()) detail::ground_subterms(t, subterms);
  std::vector<Term> terms(subterms.begin(), subterms.end());
  std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.size() < b.size(); });

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < p.existentials.size(); ++i)
    if (is_free_in(p.existentials[i], p.matrix_f)) active.push_back(i);

  std::vector<Instance> out;
  if (!active.empty() && terms.empty()) return out;
  Term filler = detail::filler_constant(p);
  std::vector<std::size_t> pick(active.size(), 0);
  while (true) {
    std::vector<Term> tuple(p.existentials.size(), filler);
    for (std::size_t k = 0; k < active.size(); ++k) tuple[active[k]] = terms[pick[k]];
    Formula f = p.matrix_f;
    for (std::size_t i = 0; i < p.existentials.size(); ++i) f = substitute(f, p.existentials[i], tuple[i]);
    bool inside = true;
    for (const auto& a : atoms_of(f)) {
      auto idx = base.index_of(a);
      if (!idx || *idx >= l) {
        inside = false;
        break;
      }
    }
    if (inside) out.push_back({tuple, f, detail::PropProgram::compile(f, xs)});
    std::size_t k = active.size();
    while (k > 0 && pick[k - 1] + 1 == terms.size()) pick[--k] = 0;
    if (k == 0) break;
    ++pick[k - 1];
  }
  return out;
}

// A weak order of {bot, C_1..C_l, top}: rank[i] is the class of C_{i+1};
// class 0 holds bot and class `classes - 1` holds top.
struct Constraint {
  std::vector<std::uint8_t> rank;
  std::uint8_t classes = 2;

  std::size_t level() const { return rank.size(); }
  bool operator==(const Constraint&) const = default;
};

// Every way to place C_{l+1}: in one of the k classes or strictly between
// two neighbours. With `max_classes`, children with more classes are pruned.
inline std::vector<Constraint> extend(const Constraint& c, std::optional<int> max_classes = std::nullopt) {
  std::vector<Constraint> out;
  int k = c.classes;
  for (int pos = 0; pos < 2 * k - 1; ++pos) {
    Constraint d = c;
    if (pos % 2 == 0) {
      d.rank.push_back(static_cast<std::uint8_t>(pos / 2));
    } else {
      int after = pos / 2;
      if (max_classes && k + 1 > *max_classes) continue;
      if (k + 1 > 255) throw Error("too many order classes");
      for (auto& r : d.rank)
        if (r > after) ++r;
      d.rank.push_back(static_cast<std::uint8_t>(after + 1));
      ++d.classes;
    }
    out.push_back(std::move(d));
  }
  return out;
}

// The uniform-grid valuation fulfilling c: class i of k gets i/(k-1).
inline PropValuation representative(const Constraint& c, const std::vector<Formula>& atoms) {
  PropValuation v;
  for (std::size_t i = 0; i < c.rank.size(); ++i) v.values.push_back({atoms.at(i), rational(c.rank[i], c.classes - 1)});
  return v;
}

// Index of the first instance with value 1 under the representative.
inline std::optional<std::size_t> closes(const Constraint& c, const std::vector<Instance>& instances) {
  std::vector<std::uint8_t> stack;
  std::uint8_t top = static_cast<std::uint8_t>(c.classes - 1);
  for (std::size_t i = 0; i < instances.size(); ++i)
    if (instances[i].program.run(c.rank, top, stack) == top) return i;
  return std::nullopt;
}

inline std::vector<std::vector<std::string>> describe(const Constraint& c, const std::vector<Formula>& atoms) {
  std::vector<std::vector<std::string>> out(c.classes);
  for (std::size_t i = 0; i < c.rank.size(); ++i) out[c.rank[i]].push_back(print(atoms.at(i)));
  out.front().insert(out.front().begin(), "bot");
  out.back().push_back("top");
  return out;
}

struct CertificateLeaf {
  std::size_t level = 0;
  std::vector<std::vector<std::string>> order;
  std::size_t disjunct = 0;
};

struct Certificate {
  Formula formula;
  HerbrandMode mode;
  std::vector<Formula> disjuncts;
  std::vector<CertificateLeaf> leaves;

  Formula disjunction() const { return disj_all(disjuncts); }
};

struct ProveResult {
  bool valid = false;
  std::optional<Certificate> certificate;
  std::size_t level_reached = 0;
  std::size_t nodes = 0;
  std::size_t open_nodes = 0;
};

// Breadth-first semantic tree. Valid when every branch closes; Unknown when
// open branches remain at max_level. Never reports invalidity.
inline ProveResult prove_prenex(const Formula& a, HerbrandMode mode, std::size_t max_level,
                                std::size_t budget = default_budget()) {
  HerbrandProblem p = herbrand_form(a);
  HerbrandBase base(p);
  std::optional<int> cap;
  if (mode.kind == HerbrandMode::Kind::Finite) cap = mode.n;

  Certificate cert;
  cert.formula = a;
  cert.mode = mode;
  std::map<std::string, std::size_t> disjunct_index;
  ProveResult r;
  std::vector<Constraint> frontier{Constraint{}};
  r.nodes = 1;
  for (std::size_t l = 0;; ++l) {
    auto inst = ell_instances(p, base, l);
    std::vector<Constraint> open;
    for (const auto& c : frontier) {
      auto k = closes(c, inst);
      if (!k) {
        open.push_back(c);
        continue;
      }
      std::string key = print(inst[*k].formula);
      auto [it, fresh] = disjunct_index.emplace(key, cert.disjuncts.size());
      if (fresh) cert.disjuncts.push_back(inst[*k].formula);
      cert.leaves.push_back({l, describe(c, base.atoms()), it->second});
    }
    r.level_reached = l;
    if (open.empty()) {
      r.valid = true;
      r.certificate = std::move(cert);
      return r;
    }
    if (l >= max_level || !base.ensure(l + 1)) {
      r.open_nodes = open.size();
      return r;
    }
    std::vector<Constraint> next;
    for (const auto& c : open)
      for (auto& child : extend(c, cap)) {
        if (++r.nodes > budget) throw BudgetExceeded("semantic tree exceeds " + std::to_string(budget) + " nodes");
        next.push_back(std::move(child));
      }
    frontier = std::move(next);
  }
}

// ---- certificate checking ---------------------------------------------------

namespace detail {

inline bool match_term(const Term& pat, const Term& g, const std::set<std::string>& vars, std::map<std::string, Term>& sigma) {
  if (pat.is_var && vars.count(pat.name)) {
    auto [it, fresh] = sigma.emplace(pat.name, g);
    return fresh || it->second == g;
  }
  if (pat.is_var != g.is_var || pat.name != g.name || pat.args.size() != g.args.size()) return false;
  for (std::size_t i = 0; i < pat.args.size(); ++i)
    if (!match_term(pat.args[i], g.args[i], vars, sigma)) return false;
  return true;
}

inline bool match_formula(const Formula& pat, const Formula& g, const std::set<std::string>& vars, std::map<std::string, Term>& sigma) {
  if (pat.kind() != g.kind()) return false;
  switch (pat.kind()) {
    case Kind::Bot: return true;
    case Kind::Atom:
      if (pat.name() != g.name() || pat.args().size() != g.args().size()) return false;
      for (std::size_t i = 0; i < pat.args().size(); ++i)
        if (!match_term(pat.args()[i], g.args()[i], vars, sigma)) return false;
      return true;
    case Kind::And:
    case Kind::Or:
    case Kind::Imp: return match_formula(pat.left(), g.left(), vars, sigma) && match_formula(pat.right(), g.right(), vars, sigma);
    default: return false;
  }
}

}  // namespace detail

// The substitution for the existential variables making `ground` an instance of B^F.
inline std::optional<std::map<std::string, Term>> match_instance(const HerbrandProblem& p, const Formula& ground) {
  std::map<std::string, Term> sigma;
  std::set<std::string> vars(p.existentials.begin(), p.existentials.end());
  if (!detail::match_formula(p.matrix_f, ground, vars, sigma)) return std::nullopt;
  return sigma;
}

struct CertificateCheck {
  bool ok = false;
  std::string reason;
};

// Independent of the tree: each disjunct must instantiate the Herbrand form and
// the disjunction must be a propositional tautology of the claimed class.
inline CertificateCheck check_certificate(const Certificate& cert, std::size_t budget = default_budget()) {
  HerbrandProblem p;
  try {
    p = herbrand_form(cert.formula);
  } catch (const Error& e) {
    return {false, e.what()};
  }
  if (cert.disjuncts.empty()) return {false, "empty disjunction"};
  for (const auto& d : cert.disjuncts) {
    if (!is_closed(d)) return {false, "disjunct is not ground: " + print(d)};
    if (!match_instance(p, d)) return {false, "not an instance of the Herbrand form: " + print(d)};
  }
  DecisionResult r = cert.mode.kind == HerbrandMode::Kind::Uncountable ? decide_LC(cert.disjunction(), budget)
                                                                        : decide_Gm(cert.disjunction(), cert.mode.n, budget);
  if (!r.valid) return {false, "disjunction refuted by " + print(*r.countermodel)};
  return {true, {}};
}

inline bool verify_certificate(const Certificate& cert) { return check_certificate(cert).ok; }

// ---- reassembly ---------------------------------------------------------------
// Rules, all read at top level unless noted:
//   (1) A | B / B | A          (2) (A | B) | C / A | (B | C)
//   (3) A | (B | B) / A | B, also B | B / B
//   (4) A(y) / forall x. A(x)  (5) A(t) / exists x. A(x)
//   (6) forall x. (A(x) | B) / (forall x. A(x)) | B   (7) the same for exists
// (1)-(3) only permute and contract disjuncts, so they may rewrite any node of
// the top-level disjunctive spine. Rule 0 abstracts the terms built from the
// symbols standing for universal variables into fresh variables.

struct TraceStep {
  int rule = 0;
  std::size_t position = 0;        // spine position for (1)-(3)
  Formula result;
  std::optional<Term> term;        // y for (4), t for (5)
  std::vector<std::pair<std::string, Term>> abstraction;  // rule 0
};

struct Trace {
  Formula start;
  std::vector<TraceStep> steps;

  const Formula& result() const { return steps.empty() ? start : steps.back().result; }
};

inline std::string rule_name(int rule) { return rule == 0 ? "abstract" : "(" + std::to_string(rule) + ")"; }

namespace detail {

inline Formula spine_get(Formula f, std::size_t pos) {
  while (pos--) {
    if (f.kind() != Kind::Or) throw Error("spine position out of range");
    f = f.right();
  }
  return f;
}

inline Formula spine_put(const Formula& f, std::size_t pos, const Formula& g) {
  if (pos == 0) return g;
  if (f.kind() != Kind::Or) throw Error("spine position out of range");
  return disj(f.left(), spine_put(f.right(), pos - 1, g));
}

inline Formula right_nested(const std::vector<Formula>& ds) {
  Formula f = ds.back();
  for (std::size_t i = ds.size() - 1; i-- > 0;) f = disj(ds[i], f);
  return f;
}

inline std::vector<Formula> spine_rewrites(int rule, const Formula& s) {
  std::vector<Formula> out;
  if (s.kind() != Kind::Or) return out;
  if (rule == 1) out.push_back(disj(s.right(), s.left()));
  if (rule == 2 && s.left().kind() == Kind::Or) out.push_back(disj(s.left().left(), disj(s.left().right(), s.right())));
  if (rule == 3) {
    if (s.right().kind() == Kind::Or && alpha_equal(s.right().left(), s.right().right())) out.push_back(disj(s.left(), s.right().left()));
    if (alpha_equal(s.left(), s.right())) out.push_back(s.left());
  }
  return out;
}

}  // namespace detail

struct TraceCheck {
  bool ok = true;
  std::size_t step = 0;  // 1-based index of the offending step
  std::string reason;
};

inline TraceCheck verify_trace(const Trace& t) {
  Formula cur = t.start;
  for (std::size_t k = 0; k < t.steps.size(); ++k) {
    const TraceStep& s = t.steps[k];
    auto fail = [&](const std::string& why) { return TraceCheck{false, k + 1, rule_name(s.rule) + ": " + why}; };
    const Formula& res = s.result;
    try {
      switch (s.rule) {
        case 0: {
          if (s.abstraction.empty()) return fail("nothing abstracted");
          Formula back = res;
          std::set<std::string> names;
          for (const auto& [v, term] : s.abstraction) {
            if (!names.insert(v).second) return fail("variable abstracted twice");
            if (is_free_in(v, cur)) return fail(v + " already occurs");
            if (!is_closed(atom("T", {term}))) return fail("abstracted term is not ground");
            back = substitute(back, v, term);
          }
          if (!alpha_equal(back, cur)) return fail("result does not abstract the previous formula");
          break;
        }
        case 1:
        case 2:
        case 3: {
          Formula sub = detail::spine_get(cur, s.position);
          bool ok = false;
          for (const auto& c : detail::spine_rewrites(s.rule, sub))
            if (alpha_equal(detail::spine_put(cur, s.position, c), res)) ok = true;
          if (!ok) return fail("not a rewrite of the disjunct at position " + std::to_string(s.position));
          break;
        }
        case 4:
        case 5: {
          Kind q = s.rule == 4 ? Kind::Forall : Kind::Exists;
          if (res.kind() != q) return fail("result has the wrong quantifier");
          if (!s.term) return fail("missing term");
          if (s.rule == 4 && (!s.term->is_var || is_free_in(s.term->name, res))) return fail("eigenvariable condition violated");
          if (!alpha_equal(substitute(res.body(), res.var(), *s.term), cur)) return fail("premise is not the instance of the result");
          break;
        }
        case 6:
        case 7: {
          Kind q = s.rule == 6 ? Kind::Forall : Kind::Exists;
          if (cur.kind() != q || cur.body().kind() != Kind::Or) return fail("premise is not a quantified disjunction");
          const std::string& x = cur.var();
          Formula b = cur.body().right();
          if (is_free_in(x, b)) return fail(x + " is free in the side disjunct");
          if (!alpha_equal(res, disj(quant(q, x, cur.body().left()), b))) return fail("result does not shift the quantifier");
          break;
        }
        default: return fail("unknown rule");
      }
    } catch (const Error& e) {
      return fail(e.what());
    }
    cur = res;
  }
  return {};
}

namespace detail {

class Reassembler {
 public:
  Reassembler(const Certificate& cert) : p_(herbrand_form(cert.formula)) {
    if (cert.disjuncts.empty()) throw ReassemblyError("empty disjunction");
    std::size_t n = p_.prefix.size();
    std::set<std::string> avoid = all_vars(p_.renamed);
    Term filler = filler_constant(p_);
    std::vector<std::pair<std::string, Term>> abstraction;
    for (const auto& d : cert.disjuncts) {
      auto sigma = match_instance(p_, d);
      if (!sigma) throw ReassemblyError("not an instance of the Herbrand form: " + print(d));
      std::vector<Term> ts;
      for (std::size_t i = 0; i < n; ++i) {
        Term t = p_.prefix_terms[i];
        for (const auto& x : p_.existentials) t = substitute(t, x, sigma->count(x) ? sigma->at(x) : filler);
        ts.push_back(abstract(t, avoid, abstraction));
      }
      terms_.push_back(std::move(ts));
    }
    trace_.start = right_nested(cert.disjuncts);
    cur_ = trace_.start;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      ids_.push_back(i);
      state_.push_back(n);
      ds_.push_back(partial(i, n));
    }
    if (!abstraction.empty()) {
      TraceStep s;
      s.rule = 0;
      s.result = right_nested(ds_);
      s.abstraction = abstraction;
      emit(std::move(s));
    }
    target_ = cert.formula;
  }

  Trace run() {
    contract_duplicates();
    while (!(ds_.size() == 1 && state_[0] == 0)) {
      bool progressed = false;
      for (std::size_t i = 0; i < ds_.size() && !progressed; ++i)
        if (state_[i] > 0 && feasible(i)) {
          quantify(i);
          contract_duplicates();
          progressed = true;
        }
      if (!progressed) throw ReassemblyError("no quantifier can be reintroduced without breaking an eigenvariable condition");
    }
    if (!alpha_equal(cur_, target_)) throw ReassemblyError("reassembled formula differs from the original");
    return trace_;
  }

 private:
  HerbrandProblem p_;
  std::vector<std::vector<Term>> terms_;  // abstracted t_1..t_n per disjunct
  std::vector<std::size_t> ids_;
  std::vector<std::size_t> state_;        // prefix positions still instantiated
  std::vector<Formula> ds_;
  Formula cur_;
  Formula target_;
  Trace trace_;
  std::map<Term, std::string> names_;

  Term abstract(const Term& t, std::set<std::string>& avoid, std::vector<std::pair<std::string, Term>>& log) {
    if (!t.is_var && p_.skolem.count(t.name)) {
      auto it = names_.find(t);
      if (it != names_.end()) return Term::var(it->second);
      std::string v = fresh_name("y" + std::to_string(names_.size() + 1), avoid);
      avoid.insert(v);
      names_[t] = v;
      log.push_back({v, t});
      return Term::var(v);
    }
    Term r = t;
    for (auto& a : r.args) a = abstract(a, avoid, log);
    return r;
  }

  // Disjunct `id` with prefix positions j.. requantified.
  Formula partial(std::size_t id, std::size_t j) const {
    Formula f = p_.matrix;
    for (std::size_t k = 0; k < j; ++k) f = substitute(f, p_.prefix[k].second, terms_[id][k]);
    for (std::size_t k = p_.prefix.size(); k-- > j;) f = quant(p_.prefix[k].first, p_.prefix[k].second, f);
    return f;
  }

  // The body G(x_j) for the next quantifier of disjunct i.
  Formula open_body(std::size_t i) const {
    std::size_t j = state_[i] - 1;
    Formula f = p_.matrix;
    for (std::size_t k = 0; k < j; ++k) f = substitute(f, p_.prefix[k].second, terms_[ids_[i]][k]);
    for (std::size_t k = p_.prefix.size(); k-- > j + 1;) f = quant(p_.prefix[k].first, p_.prefix[k].second, f);
    return f;
  }

  bool feasible(std::size_t i) const {
    std::size_t j = state_[i] - 1;
    if (p_.prefix[j].first == Kind::Exists) return true;
    const Term& y = terms_[ids_[i]][j];
    if (!y.is_var || is_free_in(y.name, open_body(i))) return false;
    for (std::size_t k = 0; k < ds_.size(); ++k)
      if (k != i && is_free_in(y.name, ds_[k])) return false;
    return true;
  }

  void emit(TraceStep s) {
    cur_ = s.result;
    trace_.steps.push_back(std::move(s));
  }

  void emit(int rule, std::size_t pos, Formula res, std::optional<Term> term = std::nullopt) {
    TraceStep s;
    s.rule = rule;
    s.position = pos;
    s.result = std::move(res);
    s.term = std::move(term);
    emit(std::move(s));
  }

  // Exchanges disjuncts k and k+1 on the spine.
  void swap_adjacent(std::size_t k) {
    std::size_t m = ds_.size();
    if (k + 2 == m) {
      emit(1, k, spine_put(cur_, k, disj(ds_[k + 1], ds_[k])));
    } else {
      Formula rest = spine_get(cur_, k + 2);
      emit(1, k, spine_put(cur_, k, disj(disj(ds_[k + 1], rest), ds_[k])));
      emit(2, k, spine_put(cur_, k, disj(ds_[k + 1], disj(rest, ds_[k]))));
      emit(1, k + 1, spine_put(cur_, k + 1, disj(ds_[k], rest)));
    }
    std::swap(ds_[k], ds_[k + 1]);
    std::swap(ids_[k], ids_[k + 1]);
    std::swap(state_[k], state_[k + 1]);
  }

  void quantify(std::size_t i) {
    for (std::size_t k = i; k-- > 0;) swap_adjacent(k);
    std::size_t j = state_[0] - 1;
    auto [q, x] = p_.prefix[j];
    Formula g = open_body(0);
    Term t = terms_[ids_[0]][j];
    Formula next = quant(q, x, g);
    int intro = q == Kind::Forall ? 4 : 5;
    if (ds_.size() == 1) {
      emit(intro, 0, next, t);
    } else {
      Formula rest = spine_get(cur_, 1);
      emit(intro, 0, quant(q, x, disj(g, rest)), t);
      emit(q == Kind::Forall ? 6 : 7, 0, disj(next, rest));
    }
    ds_[0] = next;
    state_[0] = j;
  }

  void contract(std::size_t i, std::size_t j) {
    for (std::size_t q = j; q + 1 < ds_.size(); ++q) swap_adjacent(q);
    for (std::size_t q = i; q + 2 < ds_.size(); ++q) swap_adjacent(q);
    std::size_t m = ds_.size();
    if (m == 2) emit(3, 0, ds_[0]);
    else emit(3, m - 3, spine_put(cur_, m - 3, disj(ds_[m - 3], ds_[m - 2])));
    ds_.pop_back();
    ids_.pop_back();
    state_.pop_back();
  }

  void contract_duplicates() {
    for (bool again = true; again;) {
      again = false;
      for (std::size_t i = 0; i < ds_.size() && !again; ++i)
        for (std::size_t j = i + 1; j < ds_.size() && !again; ++j)
          if (state_[i] == state_[j] && alpha_equal(ds_[i], ds_[j])) {
            contract(i, j);
            again = true;
          }
    }
  }
};

}  // namespace detail

// Rebuilds the certificate's prenex formula from its Herbrand disjunction.
inline Trace reassemble(const Certificate& cert) { return detail::Reassembler(cert).run(); }

}  // namespace goedel
