#pragma once

#include "decide.hpp"
#include "goedel_set.hpp"
#include "herbrand.hpp"
#include "omega.hpp"
#include "semantics.hpp"
#include "syntax.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace goedel {

using Json = nlohmann::json;

inline constexpr int json_schema_version = 1;

struct JsonFormatError : Error {
  using Error::Error;
};

namespace detail {

inline Rational json_rational(const Json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
  } catch (const Error& e) {
    throw JsonFormatError(where + ": " + e.what());
  }
  throw JsonFormatError(where + ": expected a rational as \"p/q\"");
}

inline Symbol json_symbol(const std::string& key) {
  auto slash = key.rfind('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == key.size())
    throw JsonFormatError("symbol key '" + key + "' is not of the form name/arity");
  std::string digits = key.substr(slash + 1);
  if (!std::all_of(digits.begin(), digits.end(), ::isdigit)) throw JsonFormatError("bad arity in '" + key + "'");
  return {key.substr(0, slash), std::stoi(digits)};
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto c = s.find(',', start);
    out.push_back(s.substr(start, c == std::string::npos ? std::string::npos : c - start));
    if (c == std::string::npos) return out;
    start = c + 1;
  }
}

inline std::string join_commas(const std::vector<std::string>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + xs[i];
  return s;
}

inline std::size_t json_element(const std::vector<std::string>& universe, const std::string& name) {
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (universe[i] == name) return i;
  throw JsonFormatError("unknown universe element '" + name + "'");
}

inline std::size_t table_index(const std::vector<std::string>& universe, const std::string& tuple, int arity) {
  auto parts = split_commas(tuple);
  if (static_cast<int>(parts.size()) != arity)
    throw JsonFormatError("tuple '" + tuple + "' does not have " + std::to_string(arity) + " elements");
  std::size_t idx = 0;
  for (const auto& p : parts) idx = idx * universe.size() + json_element(universe, p);
  return idx;
}

inline std::string tuple_key(const std::vector<std::string>& universe, std::size_t idx, int arity) {
  std::vector<std::string> parts(static_cast<std::size_t>(arity));
  for (int i = arity - 1; i >= 0; --i) {
    parts[static_cast<std::size_t>(i)] = universe[idx % universe.size()];
    idx /= universe.size();
  }
  return join_commas(parts);
}

inline std::size_t power(std::size_t n, int k) {
  std::size_t r = 1;
  for (int i = 0; i < k; ++i) r *= n;
  return r;
}

// Tables keyed by comma-joined tuples; a 0-ary entry may also be a bare value.
template <class Value, class Read>
std::map<Symbol, std::vector<Value>> read_tables(const Json& j, const std::vector<std::string>& universe, Read read) {
  std::map<Symbol, std::vector<Value>> out;
  if (j.is_null()) return out;
  if (!j.is_object()) throw JsonFormatError("symbol tables must be objects");
  for (const auto& [key, rows] : j.items()) {
    Symbol s = json_symbol(key);
    std::size_t n = power(universe.size(), s.arity);
    std::vector<std::optional<Value>> tab(n);
    if (s.arity == 0 && !rows.is_object()) {
      tab[0] = read(rows, key);
    } else {
      if (!rows.is_object()) throw JsonFormatError("table of " + key + " must be an object");
      for (const auto& [tuple, v] : rows.items()) tab[table_index(universe, tuple, s.arity)] = read(v, key);
    }
    std::vector<Value> full;
    for (std::size_t i = 0; i < n; ++i) {
      if (!tab[i]) throw JsonFormatError("table of " + key + " has no entry for (" + tuple_key(universe, i, s.arity) + ")");
      full.push_back(*tab[i]);
    }
    out[s] = std::move(full);
  }
  return out;
}

template <class Value, class Write>
Json write_tables(const std::map<Symbol, std::vector<Value>>& tabs, const std::vector<std::string>& universe, Write write) {
  Json out = Json::object();
  for (const auto& [sym, tab] : tabs) {
    Json rows = Json::object();
    for (std::size_t i = 0; i < tab.size(); ++i) rows[tuple_key(universe, i, sym.arity)] = write(tab[i]);
    out[sym.key()] = rows;
  }
  return out;
}

inline std::vector<std::string> json_universe(const Json& j) {
  if (!j.contains("universe") || !j["universe"].is_array()) throw JsonFormatError("missing \"universe\" array");
  std::vector<std::string> u;
  for (const auto& e : j["universe"]) u.push_back(e.get<std::string>());
  return u;
}

inline GoedelSet json_truth_set(const Json& j) {
  if (!j.contains("truth_set")) return unit_interval();
  try {
    return parse_goedel_set(j["truth_set"].get<std::string>());
  } catch (const Error& e) {
    throw JsonFormatError(std::string("truth_set: ") + e.what());
  }
}

inline Integer json_integer(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Integer(j.get<long long>());
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (!s.empty() && std::all_of(s.begin(), s.end(), ::isdigit)) return Integer(s);
  }
  throw JsonFormatError(where + ": expected a non-negative integer");
}

inline Json integer_json(const Integer& i) {
  if (i < Integer(1) << 53) return Json(static_cast<long long>(i));
  return Json(i.str());
}

}  // namespace detail

// ---- interpretations -------------------------------------------------------

inline Json to_json(const FiniteInterpretation& I) {
  Json j;
  j["universe"] = I.universe;
  j["truth_set"] = print(I.truth_set);
  j["predicates"] = detail::write_tables(I.predicates, I.universe, [](const Rational& q) { return to_string(q); });
  j["functions"] = detail::write_tables(I.functions, I.universe, [&](std::size_t e) { return I.universe[e]; });
  if (!I.assignment.empty()) {
    Json a = Json::object();
    for (const auto& [v, e] : I.assignment) a[v] = I.universe[e];
    j["assignment"] = a;
  }
  return j;
}

inline FiniteInterpretation finite_interpretation_from_json(const Json& j) {
  FiniteInterpretation I;
  I.universe = detail::json_universe(j);
  if (I.universe.empty()) throw JsonFormatError("universe must be non-empty");
  I.truth_set = detail::json_truth_set(j);
  I.predicates = detail::read_tables<Rational>(j.value("predicates", Json()), I.universe,
                                               [](const Json& v, const std::string& k) { return detail::json_rational(v, k); });
  I.functions = detail::read_tables<std::size_t>(j.value("functions", Json()), I.universe, [&](const Json& v, const std::string&) {
    return detail::json_element(I.universe, v.get<std::string>());
  });
  if (j.contains("assignment"))
    for (const auto& [v, e] : j["assignment"].items()) I.assignment[v] = detail::json_element(I.universe, e.get<std::string>());
  I.validate();
  return I;
}

// An interpretation file describes an omega-interpretation when it has a tail.
inline bool is_omega_json(const Json& j) { return j.contains("tail") || j.contains("tail_functions") || j.contains("tail_start"); }

inline Json to_json(const TailDescriptor& d) {
  if (d.sign == 0) return Json{{"kind", "const"}, {"value", to_string(d.limit)}};
  return Json{{"kind", "harmonic"}, {"limit", to_string(d.limit)}, {"sign", d.sign > 0 ? "+" : "-"}, {"offset", detail::integer_json(d.offset)}};
}

inline TailDescriptor tail_descriptor_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw JsonFormatError(where + ": descriptor must be an object");
  std::string kind = j.value("kind", "");
  if (kind == "const") return TailDescriptor::constant(detail::json_rational(j.value("value", Json()), where));
  if (kind == "harmonic") {
    std::string sign = j.value("sign", "+");
    if (sign != "+" && sign != "-") throw JsonFormatError(where + ": sign must be \"+\" or \"-\"");
    Integer off = j.contains("offset") ? detail::json_integer(j["offset"], where) : Integer(0);
    return TailDescriptor::harmonic(detail::json_rational(j.value("limit", Json()), where), sign == "+" ? 1 : -1, off);
  }
  throw JsonFormatError(where + ": unknown descriptor kind '" + kind + "'");
}

namespace detail {
// "P/1" is the monadic pattern; "R/2@1:u0" puts the tail element at
// argument 1 with prefix element u0 in the remaining slot.
inline std::string pattern_key(const TailPattern& p, const std::vector<std::string>& prefix) {
  std::string k = p.predicate.key();
  if (p.predicate.arity == 1 && p.position == 0) return k;
  std::vector<std::string> others;
  for (auto e : p.others) others.push_back(prefix[e]);
  return k + "@" + std::to_string(p.position) + ":" + join_commas(others);
}

inline TailPattern parse_pattern_key(const std::string& key, const std::vector<std::string>& prefix) {
  auto at = key.find('@');
  TailPattern p;
  p.predicate = json_symbol(key.substr(0, at));
  if (at == std::string::npos) {
    if (p.predicate.arity != 1) throw JsonFormatError("tail pattern '" + key + "' needs @position:others for arity != 1");
    return p;
  }
  auto colon = key.find(':', at);
  std::string pos = key.substr(at + 1, colon == std::string::npos ? std::string::npos : colon - at - 1);
  if (pos.empty() || !std::all_of(pos.begin(), pos.end(), ::isdigit)) throw JsonFormatError("bad position in '" + key + "'");
  p.position = std::stoi(pos);
  if (colon != std::string::npos)
    for (const auto& o : split_commas(key.substr(colon + 1))) p.others.push_back(json_element(prefix, o));
  if (p.position >= p.predicate.arity || static_cast<int>(p.others.size()) != p.predicate.arity - 1)
    throw JsonFormatError("tail pattern '" + key + "' does not fit the arity");
  return p;
}
}  // namespace detail

inline Json to_json(const OmegaInterpretation& I) {
  Json j;
  j["universe"] = I.prefix;
  j["truth_set"] = print(I.truth_set);
  j["tail_start"] = detail::integer_json(I.tail_start);
  j["predicates"] = detail::write_tables(I.predicates, I.prefix, [](const Rational& q) { return to_string(q); });
  j["functions"] = detail::write_tables(I.functions, I.prefix, [&](std::size_t e) { return I.prefix[e]; });
  Json tail = Json::object();
  for (const auto& [p, d] : I.tail) tail[detail::pattern_key(p, I.prefix)] = to_json(d);
  j["tail"] = tail;
  Json tf = Json::object();
  for (const auto& [sym, f] : I.tail_functions)
    tf[sym.key()] = f.kind == TailFunction::Kind::Successor ? Json("successor") : Json{{"to", I.prefix[f.target]}};
  j["tail_functions"] = tf;
  if (!I.assignment.empty()) {
    Json a = Json::object();
    for (const auto& [v, e] : I.assignment) a[v] = I.prefix[e];
    j["assignment"] = a;
  }
  return j;
}

inline OmegaInterpretation omega_interpretation_from_json(const Json& j) {
  OmegaInterpretation I;
  I.prefix = detail::json_universe(j);
  I.truth_set = detail::json_truth_set(j);
  if (j.contains("tail_start")) I.tail_start = detail::json_integer(j["tail_start"], "tail_start");
  I.predicates = detail::read_tables<Rational>(j.value("predicates", Json()), I.prefix,
                                               [](const Json& v, const std::string& k) { return detail::json_rational(v, k); });
  I.functions = detail::read_tables<std::size_t>(j.value("functions", Json()), I.prefix, [&](const Json& v, const std::string&) {
    return detail::json_element(I.prefix, v.get<std::string>());
  });
  if (j.contains("tail"))
    for (const auto& [k, d] : j["tail"].items()) I.tail[detail::parse_pattern_key(k, I.prefix)] = tail_descriptor_from_json(d, k);
  if (j.contains("tail_functions"))
    for (const auto& [k, f] : j["tail_functions"].items()) {
      TailFunction tf;
      if (f == "successor") {
        tf.kind = TailFunction::Kind::Successor;
      } else if (f.is_object() && f.contains("to")) {
        tf.kind = TailFunction::Kind::ToPrefix;
        tf.target = detail::json_element(I.prefix, f["to"].get<std::string>());
      } else {
        throw JsonFormatError("tail function " + k + " must be \"successor\" or {\"to\": element}");
      }
      I.tail_functions[detail::json_symbol(k)] = tf;
    }
  if (j.contains("assignment"))
    for (const auto& [v, e] : j["assignment"].items()) I.assignment[v] = detail::json_element(I.prefix, e.get<std::string>());
  I.validate();
  return I;
}

// ---- results -------------------------------------------------------------

inline Json to_json(const PropValuation& v) {
  Json j = Json::object();
  for (const auto& [a, q] : v.values) j[print(a)] = to_string(q);
  return j;
}

inline Json to_json(const Classification& c) {
  return Json{{"cardinality", to_string(c.cardinality, c.size)},
              {"zero_isolated", c.zero_isolated},
              {"zero_in_kernel", c.zero_in_kernel},
              {"verdict", to_string(c.verdict, c.size)}};
}

inline Json to_json(const Certificate& c) {
  Json leaves = Json::array();
  for (const auto& l : c.leaves) leaves.push_back(Json{{"level", l.level}, {"order", l.order}, {"disjunct", l.disjunct}});
  std::vector<std::string> ds;
  for (const auto& d : c.disjuncts) ds.push_back(print(d));
  return Json{{"formula", print(c.formula)}, {"mode", print(c.mode)}, {"disjuncts", ds}, {"leaves", leaves}};
}

inline Certificate certificate_from_json(const Json& j) {
  Certificate c;
  try {
    c.formula = parse_formula(j.at("formula").get<std::string>());
    c.mode = parse_mode(j.at("mode").get<std::string>());
    for (const auto& d : j.at("disjuncts")) c.disjuncts.push_back(parse_formula(d.get<std::string>()));
    if (j.contains("leaves"))
      for (const auto& l : j["leaves"]) {
        CertificateLeaf leaf;
        leaf.level = l.at("level").get<std::size_t>();
        leaf.order = l.at("order").get<std::vector<std::vector<std::string>>>();
        leaf.disjunct = l.value("disjunct", std::size_t{0});
        c.leaves.push_back(std::move(leaf));
      }
  } catch (const Json::exception& e) {
    throw JsonFormatError(std::string("certificate: ") + e.what());
  }
  return c;
}

inline Json to_json(const Trace& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json js{{"rule", rule_name(s.rule)}, {"result", print(s.result)}};
    if (s.rule >= 1 && s.rule <= 3) js["position"] = s.position;
    if (s.term) js["term"] = print(*s.term);
    if (!s.abstraction.empty()) {
      Json ab = Json::object();
      for (const auto& [v, term] : s.abstraction) ab[v] = print(term);
      js["abstraction"] = ab;
    }
    steps.push_back(js);
  }
  return Json{{"start", print(t.start)}, {"steps", steps}};
}

}  // namespace goedel
