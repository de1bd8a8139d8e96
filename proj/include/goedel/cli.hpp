#pragma once

#include "decide.hpp"
#include "goedel_set.hpp"
#include "herbrand.hpp"
#include "json_io.hpp"
#include "omega.hpp"
#include "proofkit.hpp"
#include "semantics.hpp"
#include "syntax.hpp"
#include "transforms.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace goedel::cli {

// Exit codes, a function of the result status only.
enum class Status { Ok, Invalid, Unknown, Error };

inline int exit_code(Status s) {
  switch (s) {
    case Status::Ok: return 0;
    case Status::Invalid: return 1;
    case Status::Unknown: return 2;
    case Status::Error: return 3;
  }
  return 3;
}

inline const char* status_name(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::Invalid: return "invalid";
    case Status::Unknown: return "unknown";
    case Status::Error: return "error";
  }
  return "error";
}

struct Outcome {
  Status status = Status::Ok;
  std::string text;  // human-readable rendering
  Json data = Json::object();
};

struct UsageError : goedel::Error {
  using goedel::Error::Error;
};

struct Options {
  bool json = false;
  std::size_t budget = default_budget();
  std::string input;
  std::vector<std::string> premises;
  std::string truth_set;
  std::string logic;
  std::string mode = "uncountable";
  std::size_t max_level = 6;
  std::size_t max_universe = 2;
  std::size_t sample = 4;
  bool one = false;
  bool trace = false;
  std::string interp;
  std::string certificate_out;
  std::string kind;
  std::string target;
};

// An argument names a file when one exists at that path, "-" is stdin, and
// anything else is taken literally. Lines starting with '#' are comments.
inline std::string read_input(const std::string& arg, std::istream& in = std::cin) {
  std::string text;
  if (arg == "-") {
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else if (std::error_code ec; std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream f(arg);
    std::stringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  } else {
    return arg;
  }
  return text;
}

inline std::string strip_comments(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '#') continue;
    out += line + "\n";
  }
  return out;
}

inline Formula read_formula(const std::string& arg) { return parse_formula(strip_comments(read_input(arg))); }

inline Json read_json(const std::string& arg) {
  try {
    return Json::parse(read_input(arg));
  } catch (const Json::exception& e) {
    throw JsonFormatError(std::string("malformed JSON: ") + e.what());
  }
}

// --logic G<m> or --truth-set; infinite sets are replaced by a finite sample.
inline GoedelSet finite_truth_set(const Options& o, std::string& note) {
  if (!o.logic.empty()) {
    if (o.logic.size() > 1 && o.logic[0] == 'G' && std::all_of(o.logic.begin() + 1, o.logic.end(), ::isdigit))
      return finite_chain(std::stoi(o.logic.substr(1)));
    throw UsageError("brute-force search needs --logic G<m>, got '" + o.logic + "'");
  }
  GoedelSet V = o.truth_set.empty() ? finite_chain(3) : parse_goedel_set(o.truth_set);
  if (!is_finite(V)) {
    V = sample_finite(V, o.sample);
    note = "sampled " + print(V);
  }
  return V;
}

inline std::string yes(bool b) { return b ? "yes" : "no"; }

// ---- commands ----------------------------------------------------------------

inline Outcome cmd_parse(const Options& o) {
  Formula f = read_formula(o.input);
  Signature sig = signature_of(f);
  Outcome r;
  auto fv = free_vars(f);
  r.data = Json{{"formula", print(f)},
                {"normalized", print(normalize(f))},
                {"closed", fv.empty()},
                {"prenex", is_prenex(f)},
                {"crisp", is_crisp(f)},
                {"quantifier_free", is_quantifier_free(f)},
                {"free_variables", std::vector<std::string>(fv.begin(), fv.end())},
                {"predicates", sig.predicates},
                {"functions", sig.functions}};
  r.text = print(f) + "\nclosed: " + yes(fv.empty()) + ", prenex: " + yes(is_prenex(f)) + ", crisp: " + yes(is_crisp(f)) +
           ", quantifier-free: " + yes(is_quantifier_free(f)) + "\n";
  return r;
}

inline Outcome cmd_eval(const Options& o) {
  if (o.interp.empty()) throw UsageError("eval needs --interp <file>");
  Formula f = read_formula(o.input);
  Json j = read_json(o.interp);
  Rational v;
  std::string kind;
  if (is_omega_json(j)) {
    v = eval_omega(f, omega_interpretation_from_json(j));
    kind = "omega";
  } else {
    v = eval(f, finite_interpretation_from_json(j));
    kind = "finite";
  }
  Outcome r;
  r.status = v == 1 ? Status::Ok : Status::Invalid;
  r.data = Json{{"value", to_string(v)}, {"interpretation", kind}};
  r.text = "value " + to_string(v) + "\n";
  return r;
}

inline Outcome cmd_entail(const Options& o) {
  std::vector<Formula> gamma;
  for (const auto& p : o.premises) gamma.push_back(read_formula(p));
  Formula goal = read_formula(o.input);
  std::string note;
  GoedelSet V = finite_truth_set(o, note);
  auto res = o.one ? one_entails_bruteforce(gamma, goal, V, o.max_universe, o.budget)
                   : entails_bruteforce(gamma, goal, V, o.max_universe, o.budget);
  Outcome r;
  r.data = Json{{"holds", res.holds},
                {"relation", o.one ? "1-entailment" : "entailment"},
                {"truth_set", print(V)},
                {"max_universe", o.max_universe},
                {"interpretations_checked", res.interpretations_checked}};
  if (!note.empty()) r.data["note"] = note;
  std::string head = (note.empty() ? "" : note + "\n");
  if (res.holds) {
    r.text = head + "holds over " + print(V) + " for universes up to " + std::to_string(o.max_universe) + " (" +
             std::to_string(res.interpretations_checked) + " interpretations)\n";
  } else {
    r.status = Status::Invalid;
    r.data["countermodel"] = to_json(*res.countermodel);
    r.text = head + "countermodel:\n" + to_json(*res.countermodel).dump(2) + "\n";
  }
  return r;
}

inline std::string describe(const Classification& c) {
  std::string s = to_string(c.cardinality, c.size);
  if (c.cardinality != Classification::Cardinality::Finite)
    s += c.zero_in_kernel ? ", 0 in kernel" : c.zero_isolated ? ", 0 isolated" : ", 0 neither isolated nor in kernel";
  s += " → ";
  s += c.verdict == Classification::Verdict::NotRE ? "not r.e." : "axiomatizable (" + to_string(c.verdict, c.size) + ")";
  return s;
}

inline Outcome cmd_classify(const Options& o) {
  GoedelSet V = parse_goedel_set(strip_comments(read_input(o.input)));
  Classification c = classify(V);
  Outcome r;
  r.data = to_json(c);
  r.data["set"] = print(V);
  r.text = describe(c) + "\n";
  return r;
}

inline Outcome cmd_decide(const Options& o) {
  Formula f = read_formula(o.input);
  if (!is_quantifier_free(f)) throw UsageError("decide needs a quantifier-free formula");
  std::string logic = o.logic.empty() ? "LC" : o.logic;
  DecisionResult res;
  if (logic == "LC") {
    res = decide_LC(f, o.budget);
  } else if (logic.size() > 1 && logic[0] == 'G' && std::all_of(logic.begin() + 1, logic.end(), ::isdigit)) {
    int m = std::stoi(logic.substr(1));
    if (m < 2) throw UsageError("G<m> needs m >= 2");
    res = decide_Gm(f, m, o.budget);
  } else {
    throw UsageError("unknown logic '" + logic + "' (expected LC or G<m>)");
  }
  Outcome r;
  r.data = Json{{"logic", logic}, {"valid", res.valid}, {"valuations_checked", res.valuations_checked}};
  if (res.valid) {
    r.text = "valid in " + logic + "\n";
  } else {
    r.status = Status::Invalid;
    r.data["countermodel"] = to_json(*res.countermodel);
    r.data["value"] = to_string(res.countermodel_value);
    r.text = "not valid in " + logic + ": " + print(*res.countermodel) + " gives " + to_string(res.countermodel_value) + "\n";
  }
  return r;
}

inline Outcome cmd_prove(const Options& o) {
  Formula f = read_formula(o.input);
  if (!is_closed(f)) throw UsageError("prove needs a closed formula");
  Outcome r;
  std::string head;
  if (!is_prenex(f)) {
    PrenexResult p = prenex_crisp_traced(f);
    head = "prenex form: " + print(p.formula) + (p.equivalent ? "" : " (implies the input)") + "\n";
    r.data["prenex"] = print(p.formula);
    f = p.formula;
  }
  HerbrandMode mode = parse_mode(o.mode);
  ProveResult res = prove_prenex(f, mode, o.max_level, o.budget);
  r.data["mode"] = print(mode);
  r.data["level_reached"] = res.level_reached;
  r.data["nodes"] = res.nodes;
  if (!res.valid) {
    r.status = Status::Unknown;
    r.data["open_nodes"] = res.open_nodes;
    r.text = head + "unknown: " + std::to_string(res.open_nodes) + " open branches at level " + std::to_string(res.level_reached) + "\n";
    return r;
  }
  const Certificate& cert = *res.certificate;
  CertificateCheck chk = check_certificate(cert, o.budget);
  r.data["certificate"] = to_json(cert);
  r.data["verified"] = chk.ok;
  r.text = head + "valid (" + print(mode) + ", level " + std::to_string(res.level_reached) + ")\n";
  for (const auto& d : cert.disjuncts) r.text += "  " + print(d) + "\n";
  r.text += std::string("certificate ") + (chk.ok ? "verified" : "REJECTED: " + chk.reason) + "\n";
  if (!chk.ok) r.status = Status::Invalid;
  if (o.trace) {
    Trace t = reassemble(cert);
    TraceCheck tc = verify_trace(t);
    r.data["trace"] = to_json(t);
    r.data["trace_verified"] = tc.ok;
    r.text += "reassembly (" + std::to_string(t.steps.size()) + " steps" + (tc.ok ? ", verified" : ", REJECTED: " + tc.reason) + ")\n";
    for (const auto& s : t.steps) r.text += "  " + rule_name(s.rule) + "  " + print(s.result) + "\n";
    if (!tc.ok) r.status = Status::Invalid;
  }
  if (!o.certificate_out.empty()) {
    std::ofstream out(o.certificate_out);
    if (!out) throw goedel::Error("cannot write " + o.certificate_out);
    out << to_json(cert).dump(2) << "\n";
  }
  return r;
}

inline Outcome cmd_verify_certificate(const Options& o) {
  Certificate cert = certificate_from_json(read_json(o.input));
  CertificateCheck chk = check_certificate(cert, o.budget);
  Outcome r;
  r.data = Json{{"verified", chk.ok}};
  if (!chk.ok) {
    r.status = Status::Invalid;
    r.data["reason"] = chk.reason;
    r.text = "rejected: " + chk.reason + "\n";
    return r;
  }
  r.text = "verified: " + print(cert.formula) + " (" + print(cert.mode) + ")\n";
  if (o.trace) {
    Trace t = reassemble(cert);
    TraceCheck tc = verify_trace(t);
    r.data["trace"] = to_json(t);
    r.data["trace_verified"] = tc.ok;
    r.text += std::string("reassembly ") + (tc.ok ? "verified" : "rejected: " + tc.reason) + "\n";
    if (!tc.ok) r.status = Status::Invalid;
  }
  return r;
}

inline Outcome cmd_check_proof(const Options& o) {
  Derivation d = parse_derivation(read_input(o.input));
  CheckResult res = check(d);
  Outcome r;
  r.data = Json{{"system", print(d.system)}, {"steps", d.steps.size()}, {"accepted", res.accepted}};
  if (!res.accepted) {
    r.status = Status::Invalid;
    r.data["step"] = res.step;
    r.data["reason"] = res.reason;
    r.text = "rejected at step " + std::to_string(res.step) + ": " + res.reason + "\n";
    return r;
  }
  r.data["conclusion"] = print(d.conclusion());
  r.text = "accepted (" + print(d.system) + ", " + std::to_string(d.steps.size()) + " steps): " + print(d.conclusion()) + "\n";
  if (!o.truth_set.empty() || !o.logic.empty()) {
    std::string note;
    GoedelSet V = finite_truth_set(o, note);
    EntailmentResult s = soundness_sample(d, V, o.max_universe, o.budget);
    r.data["sample"] = Json{{"truth_set", print(V)}, {"max_universe", o.max_universe}, {"consistent", s.holds}};
    if (s.holds) {
      r.text += "sound on " + print(V) + " for universes up to " + std::to_string(o.max_universe) + "\n";
    } else {
      r.status = Status::Invalid;
      r.data["sample"]["violation"] = to_json(*s.countermodel);
      r.text += "soundness violation on " + print(V) + ":\n" + to_json(*s.countermodel).dump(2) + "\n";
    }
  }
  return r;
}

inline Outcome cmd_transform(const Options& o) {
  Formula f = read_formula(o.input);
  Outcome r;
  std::string note;
  Formula out;
  if (o.kind == "ag" || o.kind == "ah") {
    ReductionOutput red = o.kind == "ag" ? to_Ag(f) : to_Ah(f);
    out = red.output;
    note = red.provenance;
    Json inv = Json::object();
    inv["predicates"] = red.inventory.predicates;
    inv["functions"] = red.inventory.functions;
    r.data["inventory"] = inv;
  } else if (o.kind == "botfree") {
    out = to_bot_free(f);
    note = "bot replaced by the fresh 0-ary atom " + bot_free_atom(f) + "()";
  } else if (o.kind == "forallfree") {
    out = forall_free_shift(f);
    note = "forall xs A -> B shifted to exists xs (A -> B); validity-equivalent";
  } else if (o.kind == "prenex") {
    try {
      PrenexResult p = prenex_crisp_traced(f);
      out = p.formula;
      note = p.equivalent ? "prenex form, equivalent in every Goedel logic" : "prenex form, implies the input in every Goedel logic";
      Json shifts = Json::array();
      for (const auto& s : p.shifts) shifts.push_back(s.rule);
      r.data["shifts"] = shifts;
      r.data["equivalent"] = p.equivalent;
    } catch (const InadmissibleShift& e) {
      r.status = Status::Invalid;
      r.data["rejected"] = Json{{"subformula", print(e.subformula)}, {"shift", e.shift}};
      r.text = std::string("rejected: ") + e.what() + "\n";
      return r;
    }
  } else {
    throw UsageError("unknown transform kind '" + o.kind + "'");
  }
  r.data["kind"] = o.kind;
  r.data["output"] = print(out);
  r.data["provenance"] = note;
  r.text = "# " + note + "\n" + print(out) + "\n";
  return r;
}

inline Outcome cmd_embed(const Options& o) {
  SetUnion target = parse_set_union(o.target);
  if (target.atoms.size() != 1) throw UsageError("embedding target must be a single interval or Cantor set");
  std::vector<Rational> pts;
  for (const auto& p : detail::split_commas(strip_comments(read_input(o.input)))) {
    auto a = p.find_first_not_of(" \t\n"), b = p.find_last_not_of(" \t\n");
    if (a == std::string::npos) continue;
    pts.push_back(parse_rational(p.substr(a, b - a + 1)));
  }
  auto img = embed_into_perfect(pts, target.atoms.front());
  Outcome r;
  std::vector<std::string> in, out;
  for (const auto& q : pts) in.push_back(to_string(q));
  for (const auto& q : img) out.push_back(to_string(q));
  r.data = Json{{"target", print(target)}, {"points", in}, {"image", out}};
  for (std::size_t i = 0; i < pts.size(); ++i) r.text += in[i] + " -> " + out[i] + "\n";
  return r;
}

// ---- driver --------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Workbench for first-order Goedel logics", "goedel"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--json", o.json, "Machine-readable output");
  app.add_option("--budget", o.budget, "Enumeration budget (default from GOEDEL_BUDGET or 10^7)");

  auto input = [&](CLI::App* c, const char* what) { c->add_option("input", o.input, what)->required(); };
  auto finite_set_opts = [&](CLI::App* c) {
    c->add_option("--truth-set", o.truth_set, "Truth-value set, e.g. \"{0,1/2,1}\" or \"[0,1]\" (sampled)");
    c->add_option("--logic", o.logic, "G<m> for the m-valued chain");
    c->add_option("--max-universe", o.max_universe, "Largest universe size searched");
    c->add_option("--sample", o.sample, "Points kept when sampling an infinite truth set");
  };

  auto* parse = app.add_subcommand("parse", "Parse and print a formula");
  input(parse, "Formula text or file");
  auto* ev = app.add_subcommand("eval", "Evaluate a formula under an interpretation file");
  input(ev, "Formula text or file");
  ev->add_option("--interp,-i", o.interp, "Interpretation JSON")->required();
  auto* ent = app.add_subcommand("entail", "Bounded entailment check by brute force");
  input(ent, "Goal formula");
  ent->add_option("--premise,-p", o.premises, "Premise (repeatable)")->allow_extra_args(false);
  ent->add_flag("--one", o.one, "1-entailment instead of entailment");
  finite_set_opts(ent);
  auto* cls = app.add_subcommand("classify", "Classify a truth-value set");
  input(cls, "Set syntax, e.g. \"{0} + [1/2,1]\"");
  auto* dec = app.add_subcommand("decide", "Decide a quantifier-free formula in LC or G<m>");
  input(dec, "Formula text or file");
  dec->add_option("--logic", o.logic, "LC (default) or G<m>");
  auto* prv = app.add_subcommand("prove", "Semantic-tree prover for prenex formulas");
  input(prv, "Closed formula");
  prv->add_option("--mode", o.mode, "uncountable or finite:<n>");
  prv->add_option("--max-level", o.max_level, "Level bound of the tree");
  prv->add_option("--certificate-out", o.certificate_out, "Write the certificate JSON here");
  prv->add_flag("--trace", o.trace, "Reassemble and print a derivation trace");
  auto* vc = app.add_subcommand("verify-certificate", "Check a certificate JSON file");
  input(vc, "Certificate JSON");
  vc->add_flag("--trace", o.trace, "Also reassemble and verify a trace");
  auto* chk = app.add_subcommand("check-proof", "Check a Hilbert-style derivation file");
  input(chk, "Derivation file");
  finite_set_opts(chk);
  auto* tr = app.add_subcommand("transform", "Formula-to-formula reductions");
  input(tr, "Formula text or file");
  tr->add_option("--kind", o.kind, "ag, ah, botfree, forallfree or prenex")
      ->required()
      ->check(CLI::IsMember({"ag", "ah", "botfree", "forallfree", "prenex"}));
  auto* emb = app.add_subcommand("embed", "Embed a finite point list into a perfect set");
  input(emb, "Comma-separated increasing rationals");
  emb->add_option("--target", o.target, "Interval or Cantor set, e.g. \"cantor(0,1)\"")->required();

  std::vector<std::string> args(argv + 1, argv + argc);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : exit_code(Status::Error);
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  Outcome r;
  try {
    if (name == "parse") r = cmd_parse(o);
    else if (name == "eval") r = cmd_eval(o);
    else if (name == "entail") r = cmd_entail(o);
    else if (name == "classify") r = cmd_classify(o);
    else if (name == "decide") r = cmd_decide(o);
    else if (name == "prove") r = cmd_prove(o);
    else if (name == "verify-certificate") r = cmd_verify_certificate(o);
    else if (name == "check-proof") r = cmd_check_proof(o);
    else if (name == "transform") r = cmd_transform(o);
    else r = cmd_embed(o);
  } catch (const BudgetExceeded& e) {
    r = Outcome{Status::Unknown, std::string("unknown: ") + e.what() + "\n", Json{{"reason", e.what()}}};
  } catch (const std::exception& e) {
    r = Outcome{Status::Error, {}, Json{{"message", e.what()}}};
    err << "goedel " << name << ": " << e.what() << "\n";
  }
  if (o.json) {
    Json j = r.data;
    j["schema_version"] = json_schema_version;
    j["command"] = name;
    j["status"] = status_name(r.status);
    out << j.dump(2) << "\n";
  } else {
    out << r.text;
  }
  return exit_code(r.status);
}

}  // namespace goedel::cli
