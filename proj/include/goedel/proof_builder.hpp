#pragma once

// Incremental construction of derivations. Primitive steps compute their own
// formula; the derived rules below expand into primitive steps only, so the
// result is always replayed through check() without trusting the builder.

#include "proofkit.hpp"

namespace goedel {

class ProofBuilder {
 public:
  using Ref = std::size_t;

  explicit ProofBuilder(SystemTag sys = {}) { d_.system = sys; }

  const Formula& formula(Ref r) const { return d_.steps.at(r - 1).formula; }
  const Derivation& derivation() const { return d_; }
  Derivation build() const { return d_; }

  Ref premise(Formula f) { return push(std::move(f), {Justification::Kind::Premise, {}, {}, {}}); }

  Ref axiom(const std::string& name, Bindings b) {
    int n = d_.system.n;
    std::string schema = name.rfind("FIN", 0) == 0 ? "FIN" : name;
    Formula f = instantiate_axiom(schema, b, n);
    return push(std::move(f), {Justification::Kind::Axiom, name, {}, std::move(b)});
  }

  // I1: from A and A -> B infer B.
  Ref mp(Ref a, Ref ab) { return rule("I1", {a, ab}, implication(ab).right()); }

  // I2: from A -> B and B -> C infer A -> C.
  Ref chain(Ref ab, Ref bc) { return rule("I2", {ab, bc}, imp(implication(ab).left(), implication(bc).right())); }

  // I6: from A -> B infer C | A -> C | B.
  Ref extend(Ref ab, Formula c) {
    const Formula& f = implication(ab);
    return rule("I6", {ab}, imp(disj(c, f.left()), disj(c, f.right())));
  }

  // I7: from A & B -> C infer A -> (B -> C).
  Ref curry(Ref r) {
    const Formula& f = implication(r);
    if (f.left().kind() != Kind::And) throw Error("curry needs A & B -> C");
    return rule("I7", {r}, imp(f.left().left(), imp(f.left().right(), f.right())));
  }

  // I8: from A -> (B -> C) infer A & B -> C.
  Ref uncurry(Ref r) {
    const Formula& f = implication(r);
    if (f.right().kind() != Kind::Imp) throw Error("uncurry needs A -> (B -> C)");
    return rule("I8", {r}, imp(conj(f.left(), f.right().left()), f.right().right()));
  }

  // I10: from B -> A(x) infer B -> forall x. A(x).
  Ref forall_intro(Ref r, const std::string& x) {
    const Formula& f = implication(r);
    return rule("I10", {r}, imp(f.left(), forall(x, f.right())));
  }

  // I13: from A(x) -> B infer (exists x. A(x)) -> B.
  Ref exists_elim(Ref r, const std::string& x) {
    const Formula& f = implication(r);
    return rule("I13", {r}, imp(exists(x, f.left()), f.right()));
  }

  // ---- derived rules ----

  // A -> A via A -> A & A and A & A -> A.
  Ref identity(const Formula& a) { return chain(axiom("I3b", {{"A", a}}), axiom("I4b", {{"A", a}, {"B", a}})); }

  // top, i.e. bot -> bot.
  Ref truth() { return axiom("I9", {{"A", bot()}}); }

  // From B infer A -> B.
  Ref weaken(Ref b, const Formula& a) { return mp(b, curry(axiom("I4b", {{"A", formula(b)}, {"B", a}}))); }

  // From F infer forall x. F.
  Ref generalize(Ref r, const std::string& x) {
    Ref t = truth();
    return mp(t, forall_intro(weaken(r, formula(t)), x));
  }

  // X & Y -> Y.
  Ref and_right(const Formula& x, const Formula& y) {
    return chain(axiom("I5b", {{"A", x}, {"B", y}}), axiom("I4b", {{"A", y}, {"B", x}}));
  }

  // From X -> Y infer Z & X -> Z & Y.
  Ref and_mono_right(Ref xy, const Formula& z) {
    const Formula& f = implication(xy);
    Formula x = f.left(), y = f.right();
    Ref pair = curry(axiom("I5b", {{"A", y}, {"B", z}}));  // Y -> (Z -> Z & Y)
    Ref u = uncurry(chain(xy, pair));                        // X & Z -> Z & Y
    return chain(axiom("I5b", {{"A", z}, {"B", x}}), u);
  }

  // From U -> V and U -> W infer U -> V & W.
  Ref and_intro(Ref uv, Ref uw) {
    Formula u = implication(uv).left(), v = implication(uv).right(), w = implication(uw).right();
    Ref uuw = chain(axiom("I3b", {{"A", u}}), and_mono_right(uw, u));  // U -> U & W
    Ref swap1 = axiom("I5b", {{"A", u}, {"B", w}});
    Ref mid = and_mono_right(uv, w);                                    // W & U -> W & V
    Ref swap2 = axiom("I5b", {{"A", w}, {"B", v}});
    return chain(chain(chain(uuw, swap1), mid), swap2);
  }

  // From U -> (X -> Y) and U -> X infer U -> Y.
  Ref mp_under(Ref uxy, Ref ux) {
    Formula xy = implication(uxy).right();
    Ref both = and_intro(uxy, ux);                      // U -> (X -> Y) & X
    Ref apply = uncurry(identity(xy));                  // (X -> Y) & X -> Y
    return chain(both, apply);
  }

  // From X -> Z infer X | Y -> Z | Y.
  Ref or_mono_left(Ref xz, const Formula& y) {
    Formula x = implication(xz).left(), z = implication(xz).right();
    Ref s1 = axiom("I5a", {{"A", x}, {"B", y}});
    Ref m = extend(xz, y);
    Ref s2 = axiom("I5a", {{"A", y}, {"B", z}});
    return chain(chain(s1, m), s2);
  }

  // From X -> Z and Y -> W infer X | Y -> Z | W.
  Ref or_map(Ref xz, Ref yw) {
    Formula z = implication(xz).right();
    return chain(or_mono_left(xz, implication(yw).left()), extend(yw, z));
  }

  // From X -> R and Y -> R infer X | Y -> R.
  Ref or_elim(Ref xr, Ref yr) {
    Formula r = implication(xr).right();
    return chain(or_map(xr, yr), axiom("I3a", {{"A", r}}));
  }

  // (A -> ~A) -> ~A
  Ref absorb_neg(const Formula& a) {
    Formula p = imp(a, neg(a));
    Formula u = conj(p, a);
    Ref ua = and_right(p, a);
    Ref up = axiom("I4b", {{"A", p}, {"B", a}});
    Ref un = mp_under(up, ua);        // U -> ~A
    Ref ubot = mp_under(un, ua);      // U -> bot
    return curry(ubot);
  }

  // (~A -> A) -> ~~A
  Ref absorb_dneg(const Formula& a) {
    Formula q = imp(neg(a), a);
    Ref un = and_right(q, neg(a));                     // Q & ~A -> ~A
    Ref uq = axiom("I4b", {{"A", q}, {"B", neg(a)}});  // Q & ~A -> Q
    Ref ua = mp_under(uq, un);                         // Q & ~A -> A
    Ref ubot = mp_under(un, ua);                       // Q & ~A -> bot
    return curry(ubot);
  }

  // ~A | ~~A in H, from LIN(A, ~A).
  Ref weak_excluded_middle(const Formula& a) {
    Ref lin = axiom("LIN", {{"A", a}, {"B", neg(a)}});
    return mp(lin, or_map(absorb_neg(a), absorb_dneg(a)));
  }

 private:
  Derivation d_;

  const Formula& implication(Ref r) const {
    const Formula& f = formula(r);
    if (f.kind() != Kind::Imp) throw Error("step " + std::to_string(r) + " is not an implication");
    return f;
  }

  Ref rule(const std::string& name, std::vector<Ref> refs, Formula f) {
    return push(std::move(f), {Justification::Kind::Rule, name, std::move(refs), {}});
  }

  Ref push(Formula f, Justification j) {
    Step s;
    s.number = d_.steps.size() + 1;
    s.formula = std::move(f);
    s.why = std::move(j);
    d_.steps.push_back(std::move(s));
    return d_.steps.size();
  }
};

// forall ys. (~forall x. A -> exists x. ~A) in H_0, for an atom A over x and ys.
inline Derivation lemma_forall_neg_shift(const Formula& a, const std::string& x, const std::vector<std::string>& ys) {
  using Ref = ProofBuilder::Ref;
  ProofBuilder p({SystemTag::Kind::H0, 0});
  Formula na = neg(a);
  Formula e = exists(x, na);
  Formula z = forall(x, a);
  Ref wem = p.weak_excluded_middle(a);                                       // ~A | ~~A
  Ref intro = p.axiom("I12", {{"A", na}, {"x", Term::var(x)}, {"t", Term::var(x)}});
  Ref step = p.mp(wem, p.or_mono_left(intro, neg(na)));                      // E | ~~A
  Ref gen = p.generalize(step, x);                                           // forall x. (E | ~~A)
  Ref qs = p.axiom("QS", {{"A", neg(na)}, {"C", e}, {"x", Term::var(x)}});
  Ref shifted = p.mp(gen, qs);                                               // E | forall x. ~~A
  Ref iso = p.axiom("ISO_0", {{"A", a}, {"x", Term::var(x)}});
  Ref dn = p.mp(shifted, p.extend(iso, e));                                  // E | ~~Z
  Ref left = p.curry(p.axiom("I4b", {{"A", e}, {"B", neg(z)}}));            // E -> (~Z -> E)
  Ref contra = p.uncurry(p.identity(neg(neg(z))));                          // ~~Z & ~Z -> bot
  Ref right = p.curry(p.chain(contra, p.axiom("I9", {{"A", e}})));           // ~~Z -> (~Z -> E)
  Ref last = p.mp(dn, p.or_elim(left, right));
  for (auto it = ys.rbegin(); it != ys.rend(); ++it) last = p.generalize(last, *it);
  return p.build();
}

}  // namespace goedel
