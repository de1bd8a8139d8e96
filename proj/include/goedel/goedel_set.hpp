#pragma once

#include "rational.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace goedel {

struct SetAtom {
  enum class Kind { Point, Interval, Cantor, SeqDown, SeqUp };
  Kind kind = Kind::Point;
  Rational a, b;  // Point: a. Interval/Cantor: [a,b]. Seq: limit a, scale b.

  static SetAtom point(Rational q) { return {Kind::Point, q, q}; }
  static SetAtom interval(Rational lo, Rational hi) { return {Kind::Interval, lo, hi}; }
  static SetAtom cantor(Rational lo, Rational hi) { return {Kind::Cantor, lo, hi}; }
  static SetAtom seq_down(Rational limit, Rational scale) { return {Kind::SeqDown, limit, scale}; }
  static SetAtom seq_up(Rational limit, Rational scale) { return {Kind::SeqUp, limit, scale}; }

  bool perfect() const { return kind == Kind::Interval || kind == Kind::Cantor; }
  bool operator==(const SetAtom&) const = default;
  bool operator<(const SetAtom& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (a != o.a) return a < o.a;
    return b < o.b;
  }
};

namespace detail {
// Membership of y in [0,1] in the middle-thirds set: follow the ternary
// expansion; the remainders of a rational are eventually periodic.
inline bool in_standard_cantor(Rational y) {
  if (y < 0 || y > 1) return false;
  std::set<Rational> seen;
  while (true) {
    if (y == 0 || y == 1) return true;
    if (!seen.insert(y).second) return true;
    Rational t = y * 3;
    Integer d = numerator(t) / denominator(t);
    Rational r = t - Rational(d);
    if (d == 1) return r == 0;
    y = r;
  }
}

inline bool positive_integer(const Rational& q) { return q > 0 && denominator(q) == 1; }
}  // namespace detail

inline bool member(const SetAtom& at, const Rational& q) {
  if (q < 0 || q > 1) return false;
  switch (at.kind) {
    case SetAtom::Kind::Point: return q == at.a;
    case SetAtom::Kind::Interval: return at.a <= q && q <= at.b;
    case SetAtom::Kind::Cantor:
      if (q < at.a || q > at.b) return false;
      return detail::in_standard_cantor((q - at.a) / (at.b - at.a));
    case SetAtom::Kind::SeqDown: return q == at.a || (q > at.a && detail::positive_integer(at.b / (q - at.a)));
    case SetAtom::Kind::SeqUp: return q == at.a || (q < at.a && detail::positive_integer(at.b / (at.a - q)));
  }
  return false;
}

// A finite union of atoms. Kernels and samples use this directly; GoedelSet
// adds the requirement that 0 and 1 belong to it.
struct SetUnion {
  std::vector<SetAtom> atoms;

  bool empty() const { return atoms.empty(); }
  bool operator==(const SetUnion&) const = default;
};

inline bool member(const SetUnion& s, const Rational& q) {
  return std::any_of(s.atoms.begin(), s.atoms.end(), [&](const SetAtom& a) { return member(a, q); });
}

namespace detail {
inline void validate(const SetAtom& at) {
  auto in01 = [](const Rational& q) { return q >= 0 && q <= 1; };
  switch (at.kind) {
    case SetAtom::Kind::Point:
      if (!in01(at.a)) throw Error("point " + to_string(at.a) + " outside [0,1]");
      return;
    case SetAtom::Kind::Interval:
    case SetAtom::Kind::Cantor:
      if (!(in01(at.a) && in01(at.b) && at.a < at.b)) throw Error("need 0 <= a < b <= 1, got " + to_string(at.a) + ", " + to_string(at.b));
      return;
    default:
      if (!in01(at.a) || at.b <= 0) throw Error("sequence needs a limit in [0,1] and a positive scale");
  }
}

// Elements of a sequence atom lie within this hull.
inline std::pair<Rational, Rational> seq_hull(const SetAtom& at) {
  if (at.kind == SetAtom::Kind::SeqDown) return {at.a, std::min<Rational>(Rational(1), at.a + at.b)};
  return {std::max<Rational>(Rational(0), at.a - at.b), at.a};
}
}  // namespace detail

// Canonical form: degenerate sequences become points, intervals merge,
// atoms inside intervals are absorbed, points covered elsewhere vanish.
inline SetUnion simplify(const SetUnion& in) {
  std::vector<SetAtom> atoms;
  for (auto at : in.atoms) {
    detail::validate(at);
    if (at.kind == SetAtom::Kind::SeqDown && at.a == 1) at = SetAtom::point(1);
    if (at.kind == SetAtom::Kind::SeqUp && at.a == 0) at = SetAtom::point(0);
    atoms.push_back(at);
  }
  std::vector<SetAtom> intervals, rest;
  for (const auto& at : atoms) (at.kind == SetAtom::Kind::Interval ? intervals : rest).push_back(at);
  std::sort(intervals.begin(), intervals.end());
  std::vector<SetAtom> merged;
  for (const auto& iv : intervals) {
    if (!merged.empty() && iv.a <= merged.back().b) merged.back().b = std::max(merged.back().b, iv.b);
    else merged.push_back(iv);
  }
  auto inside_interval = [&](const Rational& lo, const Rational& hi) {
    return std::any_of(merged.begin(), merged.end(), [&](const SetAtom& iv) { return iv.a <= lo && hi <= iv.b; });
  };
  std::vector<SetAtom> others;
  for (const auto& at : rest) {
    if (at.kind == SetAtom::Kind::Point) continue;
    bool absorbed = at.kind == SetAtom::Kind::Cantor ? inside_interval(at.a, at.b) : [&] {
      auto [lo, hi] = detail::seq_hull(at);
      return inside_interval(lo, hi);
    }();
    if (!absorbed && std::find(others.begin(), others.end(), at) == others.end()) others.push_back(at);
  }
  std::vector<SetAtom> out = merged;
  out.insert(out.end(), others.begin(), others.end());
  std::set<Rational> points;
  for (const auto& at : rest)
    if (at.kind == SetAtom::Kind::Point && !member(SetUnion{out}, at.a)) points.insert(at.a);
  for (const auto& p : points) out.push_back(SetAtom::point(p));
  std::sort(out.begin(), out.end());
  return SetUnion{out};
}

class GoedelSet : public SetUnion {
 public:
  GoedelSet() : SetUnion{{SetAtom::point(0), SetAtom::point(1)}} {}
  explicit GoedelSet(const SetUnion& s) : SetUnion(simplify(s)) {
    if (!member(*this, 0) || !member(*this, 1)) throw Error("a Goedel set must contain 0 and 1");
  }
  explicit GoedelSet(std::vector<SetAtom> atoms) : GoedelSet(SetUnion{std::move(atoms)}) {}
};

// ---- named sets ------------------------------------------------------------

inline GoedelSet unit_interval() { return GoedelSet({SetAtom::interval(0, 1)}); }

inline GoedelSet finite_set(const std::vector<Rational>& pts) {
  std::vector<SetAtom> atoms;
  for (const auto& p : pts) atoms.push_back(SetAtom::point(p));
  return GoedelSet(atoms);
}

// V_m = {1 - 1/k : 1 <= k <= m-1} u {1}, an m-element set.
inline GoedelSet finite_chain(int m) {
  if (m < 2) throw Error("V_m needs m >= 2");
  std::vector<Rational> pts{Rational(1)};
  for (int k = 1; k <= m - 1; ++k) pts.push_back(1 - rational(1, k));
  return finite_set(pts);
}

inline GoedelSet v_down() { return GoedelSet({SetAtom::seq_down(0, 1)}); }
inline GoedelSet v_up() { return GoedelSet({SetAtom::seq_up(1, 1)}); }

// ---- structure ---------------------------------------------------------------

inline bool is_finite(const SetUnion& s) {
  auto t = simplify(s);
  return std::all_of(t.atoms.begin(), t.atoms.end(), [](const SetAtom& a) { return a.kind == SetAtom::Kind::Point; });
}

// Sorted elements of a finite set.
inline std::vector<Rational> points_of(const SetUnion& s) {
  auto t = simplify(s);
  std::vector<Rational> out;
  for (const auto& a : t.atoms) {
    if (a.kind != SetAtom::Kind::Point) throw Error("set is not finite");
    out.push_back(a.a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// The perfect kernel is exactly the union of the Interval and Cantor atoms:
// the remaining atoms are countable and closed away from that union.
inline SetUnion cb_kernel(const SetUnion& s) {
  SetUnion k;
  for (const auto& a : simplify(s).atoms)
    if (a.perfect()) k.atoms.push_back(a);
  return k;
}

// inf of V \ {0}; nullopt when V = {0}.
inline std::optional<Rational> inf_positive(const SetUnion& s) {
  std::optional<Rational> best;
  auto offer = [&](const Rational& q) {
    if (!best || q < *best) best = q;
  };
  for (const auto& a : simplify(s).atoms) {
    switch (a.kind) {
      case SetAtom::Kind::Point:
        if (a.a > 0) offer(a.a);
        break;
      case SetAtom::Kind::Interval:
      case SetAtom::Kind::Cantor: offer(a.a); break;
      case SetAtom::Kind::SeqDown: offer(a.a); break;
      case SetAtom::Kind::SeqUp: {
        // smallest k with q - s/k > 0
        Rational ratio = a.b / a.a;
        Integer k = numerator(ratio) / denominator(ratio) + 1;
        offer(a.a - a.b / Rational(k));
        break;
      }
    }
  }
  return best;
}

struct Classification {
  enum class Cardinality { Finite, CountablyInfinite, Uncountable };
  enum class Verdict { AxiomatizableH, AxiomatizableH0, AxiomatizableHn, NotRE };
  Cardinality cardinality;
  std::size_t size = 0;  // element count when finite
  bool zero_isolated = false;
  bool zero_in_kernel = false;
  Verdict verdict;
};

inline std::string to_string(Classification::Verdict v, std::size_t n = 0) {
  switch (v) {
    case Classification::Verdict::AxiomatizableH: return "H";
    case Classification::Verdict::AxiomatizableH0: return "H_0";
    case Classification::Verdict::AxiomatizableHn: return "H_" + std::to_string(n);
    case Classification::Verdict::NotRE: return "not r.e.";
  }
  return {};
}

inline std::string to_string(Classification::Cardinality c, std::size_t n = 0) {
  switch (c) {
    case Classification::Cardinality::Finite: return "finite(" + std::to_string(n) + ")";
    case Classification::Cardinality::CountablyInfinite: return "countably infinite";
    case Classification::Cardinality::Uncountable: return "uncountable";
  }
  return {};
}

inline Classification classify(const GoedelSet& v) {
  Classification c{};
  auto kernel = cb_kernel(v);
  auto ip = inf_positive(v);
  c.zero_isolated = ip && *ip > 0;
  c.zero_in_kernel = member(kernel, 0);
  if (is_finite(v)) {
    c.cardinality = Classification::Cardinality::Finite;
    c.size = points_of(v).size();
    c.verdict = Classification::Verdict::AxiomatizableHn;
  } else if (!kernel.empty()) {
    c.cardinality = Classification::Cardinality::Uncountable;
    c.verdict = c.zero_in_kernel ? Classification::Verdict::AxiomatizableH
                : c.zero_isolated ? Classification::Verdict::AxiomatizableH0
                                  : Classification::Verdict::NotRE;
  } else {
    c.cardinality = Classification::Cardinality::CountablyInfinite;
    c.verdict = Classification::Verdict::NotRE;
  }
  return c;
}

inline GoedelSet saturate_above_kernel_inf(const GoedelSet& v) {
  auto kernel = cb_kernel(v);
  if (kernel.empty()) throw Error("saturation needs a non-empty perfect kernel");
  Rational inf = kernel.atoms.front().a;
  for (const auto& a : kernel.atoms) inf = std::min(inf, a.a);
  SetUnion w = v;
  w.atoms.push_back(SetAtom::interval(inf, 1));
  return GoedelSet(w);
}

// ---- embedding into a perfect set -------------------------------------------

namespace detail {
// Reads the binary expansion of y in [0,1] (terminating for dyadics, all
// ones for 1) as a ternary expansion with every digit doubled.
inline Rational binary_to_doubled_ternary(Rational y) {
  if (y == 1) return 1;
  std::vector<int> digits;
  std::vector<Rational> states;
  std::size_t cycle_start = 0;
  bool periodic = false;
  while (y != 0) {
    auto it = std::find(states.begin(), states.end(), y);
    if (it != states.end()) {
      cycle_start = static_cast<std::size_t>(it - states.begin());
      periodic = true;
      break;
    }
    states.push_back(y);
    y *= 2;
    int d = y >= 1 ? 1 : 0;
    digits.push_back(d);
    y -= d;
  }
  std::size_t prefix = periodic ? cycle_start : digits.size();
  Rational value = 0, scale = rational(1, 3);
  for (std::size_t i = 0; i < prefix; ++i, scale /= 3) value += scale * (2 * digits[i]);
  if (periodic) {
    Rational block = 0, s = rational(1, 3), third_pow = 1;
    for (std::size_t i = prefix; i < digits.size(); ++i, s /= 3) {
      block += s * (2 * digits[i]);
      third_pow /= 3;
    }
    // scale now equals 3^-(prefix+1); the cycle starts at 3^-prefix
    value += scale * 3 * block / (1 - third_pow);
  }
  return value;
}
}  // namespace detail

inline std::vector<Rational> embed_into_perfect(const std::vector<Rational>& points, const SetAtom& target) {
  if (!target.perfect()) throw Error("embedding target must be an interval or a Cantor set");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i - 1] < points[i])) throw Error("points must be strictly increasing");
  std::vector<Rational> out;
  if (points.empty()) return out;
  Rational lo = points.front(), hi = points.back();
  for (const auto& x : points) {
    Rational y = hi == lo ? Rational(0) : (x - lo) / (hi - lo);
    if (target.kind == SetAtom::Kind::Cantor) y = detail::binary_to_doubled_ternary(y);
    out.push_back(target.a + (target.b - target.a) * y);
  }
  return out;
}

// ---- finite samples ------------------------------------------------------

namespace detail {
inline std::vector<Rational> candidates(const SetAtom& a, int level) {
  std::vector<Rational> out;
  switch (a.kind) {
    case SetAtom::Kind::Point:
      if (level == 0) out.push_back(a.a);
      break;
    case SetAtom::Kind::Interval:
      if (level == 0) {
        out = {a.a, a.b};
      } else {
        Integer den = Integer(1) << level;
        for (Integer j = 1; j < den; j += 2) out.push_back(a.a + (a.b - a.a) * Rational(j, den));
      }
      break;
    case SetAtom::Kind::Cantor: {
      if (level == 0) {
        out = {a.a, a.b};
        break;
      }
      // endpoints of the construction's level-k intervals that are new at level k
      std::vector<std::pair<Rational, Rational>> ivs{{0, 1}};
      for (int k = 0; k < level; ++k) {
        std::vector<std::pair<Rational, Rational>> next;
        for (auto [l, r] : ivs) {
          Rational t = (r - l) / 3;
          next.push_back({l, l + t});
          next.push_back({r - t, r});
        }
        ivs = std::move(next);
      }
      for (std::size_t i = 0; i < ivs.size(); i += 2) {
        out.push_back(a.a + (a.b - a.a) * ivs[i].second);
        out.push_back(a.a + (a.b - a.a) * ivs[i + 1].first);
      }
      break;
    }
    case SetAtom::Kind::SeqDown:
    case SetAtom::Kind::SeqUp:
      if (level == 0) {
        out.push_back(a.a);
      } else {
        Rational q = a.kind == SetAtom::Kind::SeqDown ? a.a + a.b / level : a.a - a.b / level;
        if (q >= 0 && q <= 1) out.push_back(q);
      }
      break;
  }
  std::sort(out.begin(), out.end());
  return out;
}
}  // namespace detail

// Deterministic: 0, 1, the least positive element when 0 is isolated, then
// atom points level by level (endpoints, dyadic midpoints, sequence terms).
inline GoedelSet sample_finite(const GoedelSet& v, std::size_t n) {
  if (n < 2) throw Error("a sample needs at least two points");
  std::set<Rational> chosen{0, 1};
  if (classify(v).zero_isolated) {
    auto ip = inf_positive(v);
    if (ip && chosen.size() < n) chosen.insert(*ip);
  }
  bool infinite = !is_finite(v);
  for (int level = 0; chosen.size() < n && (level == 0 || infinite) && level < 64; ++level)
    for (const auto& a : v.atoms)
      for (const auto& q : detail::candidates(a, level))
        if (chosen.size() < n && member(v, q)) chosen.insert(q);
  return finite_set({chosen.begin(), chosen.end()});
}

// ---- text syntax -----------------------------------------------------------

inline std::string print(const SetAtom& a) {
  switch (a.kind) {
    case SetAtom::Kind::Point: return "{" + to_string(a.a) + "}";
    case SetAtom::Kind::Interval: return "[" + to_string(a.a) + "," + to_string(a.b) + "]";
    case SetAtom::Kind::Cantor: return "cantor(" + to_string(a.a) + "," + to_string(a.b) + ")";
    case SetAtom::Kind::SeqDown: return "seqdown(" + to_string(a.a) + ";" + to_string(a.b) + ")";
    case SetAtom::Kind::SeqUp: return "sequp(" + to_string(a.a) + ";" + to_string(a.b) + ")";
  }
  return {};
}

// Points are grouped into one brace list: "{0,1} + [1/4,1/2]".
inline std::string print(const SetUnion& s) {
  std::vector<std::string> parts;
  std::string pts;
  for (const auto& a : s.atoms) {
    if (a.kind == SetAtom::Kind::Point) pts += (pts.empty() ? "" : ",") + to_string(a.a);
    else parts.push_back(print(a));
  }
  if (!pts.empty()) parts.insert(parts.begin(), "{" + pts + "}");
  if (parts.empty()) return "{}";
  std::string out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out += " + " + parts[i];
  return out;
}

inline SetUnion parse_set_union(std::string_view text) {
  std::string src(text);
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : src) {
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (c == '+' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  auto trim = [](std::string t) {
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
    return t;
  };
  auto split = [&](const std::string& body, const std::string& seps) {
    std::vector<std::string> out;
    std::string c;
    for (char ch : body) {
      if (seps.find(ch) != std::string::npos) {
        out.push_back(trim(c));
        c.clear();
      } else {
        c += ch;
      }
    }
    out.push_back(trim(c));
    return out;
  };
  SetUnion u;
  for (auto part : parts) {
    part = trim(part);
    if (part.empty()) throw Error("empty set component in '" + src + "'");
    std::string lower;
    for (char c : part) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (part.front() == '{' && part.back() == '}') {
      for (const auto& x : split(part.substr(1, part.size() - 2), ","))
        if (!x.empty()) u.atoms.push_back(SetAtom::point(parse_rational(x)));
      continue;
    }
    if (part.front() == '[' && part.back() == ']') {
      auto xs = split(part.substr(1, part.size() - 2), ",;");
      if (xs.size() != 2) throw Error("interval needs two endpoints: '" + part + "'");
      Rational a = parse_rational(xs[0]), b = parse_rational(xs[1]);
      u.atoms.push_back(a == b ? SetAtom::point(a) : SetAtom::interval(a, b));
      continue;
    }
    auto open = lower.find('(');
    if (open == std::string::npos || lower.back() != ')') throw Error("unrecognised set component '" + part + "'");
    std::string name = trim(lower.substr(0, open));
    auto xs = split(part.substr(open + 1, part.size() - open - 2), ",;");
    if (xs.size() != 2) throw Error("'" + name + "' needs two arguments");
    Rational x = parse_rational(xs[0]), y = parse_rational(xs[1]);
    if (name == "cantor") u.atoms.push_back(SetAtom::cantor(x, y));
    else if (name == "seqdown") u.atoms.push_back(SetAtom::seq_down(x, y));
    else if (name == "sequp") u.atoms.push_back(SetAtom::seq_up(x, y));
    else throw Error("unknown set constructor '" + name + "'");
  }
  for (const auto& a : u.atoms) detail::validate(a);
  return u;
}

inline GoedelSet parse_goedel_set(std::string_view text) { return GoedelSet(parse_set_union(text)); }

}  // namespace goedel
