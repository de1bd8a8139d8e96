#include <goedel/cli.hpp>
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace goedel;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "goedel");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("goedel_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                                         ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& text) const {
    auto p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

const std::string fin3 = "(top -> A1) | (A1 -> A2) | (A2 -> bot)";
const std::string cdown = "exists x. forall y. (A(y) -> A(x))";

}  // namespace

TEST(Cli, ClassifyExample) {
  auto r = run({"classify", "{0} + [1/2,1]"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "uncountable, 0 isolated → axiomatizable (H_0)\n");
  auto j = run({"--json", "classify", "seqdown(0;1)"}).json();
  EXPECT_EQ(j["verdict"], "not r.e.");
  EXPECT_EQ(j["cardinality"], "countably infinite");
  EXPECT_EQ(j["zero_isolated"], false);
  EXPECT_EQ(j["zero_in_kernel"], false);
}

TEST(Cli, DecideExamples) {
  EXPECT_EQ(run({"decide", "--logic", "G3", fin3}).code, 0);
  auto r = run({"--json", "decide", "--logic", "G4", fin3});
  EXPECT_EQ(r.code, 1);
  auto j = r.json();
  EXPECT_EQ(j["status"], "invalid");
  EXPECT_EQ(j["value"], "2/3");
  EXPECT_EQ(j["countermodel"]["A1"], "2/3");
  EXPECT_EQ(j["countermodel"]["A2"], "1/2");
  EXPECT_EQ(run({"decide", "(A -> B) | (B -> A)"}).code, 0);
  EXPECT_EQ(run({"decide", "--logic", "G1", "A"}).code, 3);
  EXPECT_EQ(run({"decide", "--logic", "XYZ", "A"}).code, 3);
}

TEST(Cli, ProveExamples) {
  EXPECT_EQ(run({"prove", "--mode", "uncountable", "--max-level", "6", cdown}).code, 2);
  auto r = run({"prove", "--mode", "finite:3", cdown});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("certificate verified"), std::string::npos);
  auto j = run({"--json", "prove", "exists x. exists y. (P(x) -> P(y))", "--trace"}).json();
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["verified"], true);
  EXPECT_EQ(j["trace_verified"], true);
  EXPECT_EQ(j["certificate"]["disjuncts"], Json::array({"P(c0()) -> P(c0())"}));
}

TEST(Cli, ProvePrenexesFirst) {
  auto j = run({"--json", "prove", "(forall x. P(x)) -> exists y. P(y)"}).json();
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["prenex"], "exists x. exists y. P(x) -> P(y)");
  EXPECT_EQ(run({"prove", "P(x)"}).code, 3);
}

TEST(Cli, CertificateRoundTrip) {
  TempDir dir;
  std::string cert = dir.file("cert.json");
  ASSERT_EQ(run({"prove", "--mode", "finite:3", cdown, "--certificate-out", cert}).code, 0);
  EXPECT_EQ(run({"verify-certificate", cert, "--trace"}).code, 0);
  Json j = Json::parse(std::ifstream(cert));
  EXPECT_EQ(j["mode"], "finite:3");
  ASSERT_FALSE(j["leaves"].empty());
  EXPECT_EQ(j["leaves"][0]["order"].front().front(), "bot");
  j["mode"] = "uncountable";
  EXPECT_EQ(run({"verify-certificate", dir.write("lc.json", j.dump())}).code, 1);
  j["mode"] = "finite:3";
  j["disjuncts"][0] = "A(c0()) -> A(c0()) | A(c0())";
  EXPECT_EQ(run({"verify-certificate", dir.write("bad.json", j.dump())}).code, 1);
  EXPECT_EQ(run({"verify-certificate", dir.write("junk.json", "{not json")}).code, 3);
}

TEST(Cli, EvalFiniteAndOmega) {
  TempDir dir;
  std::string finite = dir.write("i.json", R"J({"universe": ["u0", "u1"], "truth_set": "[0,1]",
    "predicates": {"P/1": {"u0": "1/2", "u1": "1"}, "A/0": "1/3"}, "functions": {"f/1": {"u0": "u1", "u1": "u1"}}})J");
  auto r = run({"eval", "forall x. P(x)", "-i", finite});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "value 1/2\n");
  EXPECT_EQ(run({"eval", "forall x. P(f(x))", "-i", finite}).code, 0);
  EXPECT_EQ(run({"--json", "eval", "A -> P(c())", "-i", finite}).code, 3);  // c is not interpreted

  std::string omega = dir.write("o.json", R"J({"universe": [], "truth_set": "seqdown(0;1)",
    "tail": {"A/1": {"kind": "harmonic", "limit": "0", "sign": "+", "offset": 0}}})J");
  auto j = run({"--json", "eval", "exists x. A(x) -> forall y. A(y)", "-i", omega}).json();
  EXPECT_EQ(j["value"], "0");
  EXPECT_EQ(j["interpretation"], "omega");
  std::string bad = dir.write("bad.json", R"J({"universe": ["u0"], "truth_set": "{0,1}", "predicates": {"P/1": {"u0": "1/2"}}})J");
  EXPECT_EQ(run({"eval", "P(c())", "-i", bad}).code, 3);
}

TEST(Cli, EntailCountermodelIsSerialized) {
  auto r = run({"--json", "entail", "--logic", "G4", fin3});
  EXPECT_EQ(r.code, 1);
  auto j = r.json();
  FiniteInterpretation I = finite_interpretation_from_json(j["countermodel"]);
  EXPECT_LT(eval(parse_formula(fin3), I), 1);
  EXPECT_EQ(run({"entail", "-p", "A", "-p", "A -> B", "B", "--logic", "G5"}).code, 0);
  auto s = run({"entail", "--truth-set", "[0,1]", "--sample", "3", "(A -> B) | (B -> A)"});
  EXPECT_EQ(s.code, 0);
  EXPECT_NE(s.out.find("sampled {0,1/2,1}"), std::string::npos) << s.out;
}

TEST(Cli, CheckProofCorpus) {
  for (const auto& e : fs::directory_iterator(GOEDEL_CORPUS_DIR)) {
    auto r = run({"check-proof", e.path().string()});
    EXPECT_EQ(r.code, 0) << e.path() << r.out << r.err;
  }
  TempDir dir;
  std::string bad = dir.write("bad.proof", "system IL\n1. A -> B ; premise\n2. A ; premise\n3. C ; rule I1 2,1\n");
  auto r = run({"--json", "check-proof", bad});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.json()["step"], 3);
  std::string fin = std::string(GOEDEL_CORPUS_DIR) + "/fin3.proof";
  EXPECT_EQ(run({"check-proof", fin, "--logic", "G3"}).code, 0);
  EXPECT_EQ(run({"check-proof", fin, "--logic", "G4"}).code, 1);
}

TEST(Cli, Transforms) {
  TempDir dir;
  auto r = run({"transform", "--kind", "ag", "forall v. Q1(v)"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("# A^g", 0), 0u);
  // the output, header included, is a valid formula file
  EXPECT_EQ(run({"parse", dir.write("ag.txt", r.out)}).code, 0);
  EXPECT_EQ(run({"transform", "--kind", "ah", "forall v. Q(v)"}).code, 3);
  EXPECT_EQ(run({"transform", "--kind", "botfree", "~P(c())"}).out,
            "# bot replaced by the fresh 0-ary atom B()\n(forall x. B -> P(x)) -> P(c()) -> B\n");
  EXPECT_EQ(run({"transform", "--kind", "forallfree", "(forall x. A(x)) -> B"}).code, 0);
  EXPECT_EQ(run({"transform", "--kind", "forallfree", "A -> B"}).code, 3);
  auto p = run({"--json", "transform", "--kind", "prenex", "~((forall x. P(x)) -> Q)"});
  EXPECT_EQ(p.code, 1);
  EXPECT_EQ(p.json()["rejected"]["shift"], "S_3");
  EXPECT_EQ(run({"transform", "--kind", "prenex", "(forall x. P(x)) -> exists y. P(y)"}).code, 0);
  EXPECT_EQ(run({"transform", "--kind", "other", "A"}).code, 3);
}

TEST(Cli, Embed) {
  auto r = run({"embed", "--target", "cantor(0,1)", "0, 1/2, 1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0 -> 0\n1/2 -> 2/3\n1 -> 1\n");
  EXPECT_EQ(run({"embed", "--target", "{0,1}", "0,1"}).code, 3);
  EXPECT_EQ(run({"embed", "--target", "[0,1]", "1,0"}).code, 3);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 3);
  EXPECT_EQ(run({"frobnicate"}).code, 3);
  EXPECT_EQ(run({"decide"}).code, 3);
  EXPECT_EQ(run({"parse", "forall x."}).code, 3);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, BudgetGivesUnknown) {
  auto r = run({"--budget", "10", "decide", "--logic", "G5", "(A -> B) | (B -> C) | (C -> A)"});
  EXPECT_EQ(r.code, 2);
}

// Every JSON rendering re-parses, carries the schema version and survives a
// dump/parse round trip unchanged.
TEST(Cli, JsonOutputsRoundTrip) {
  std::vector<std::vector<std::string>> cmds = {
      {"parse", "forall x. P(x) -> Q"},
      {"classify", "[0,1]"},
      {"decide", "--logic", "G4", fin3},
      {"prove", "--mode", "finite:3", cdown, "--trace"},
      {"prove", cdown},
      {"entail", "--logic", "G3", "A | ~A"},
      {"transform", "--kind", "ah", "exists v. R1(v)"},
      {"embed", "--target", "[1/2,1]", "0,1"},
      {"decide", "forall x. P(x)"},
  };
  for (auto c : cmds) {
    c.insert(c.begin(), "--json");
    auto r = run(c);
    Json j;
    ASSERT_NO_THROW(j = r.json()) << r.out;
    EXPECT_EQ(j["schema_version"], json_schema_version);
    EXPECT_EQ(j["command"], c[1]);
    EXPECT_EQ(cli::exit_code(j["status"] == "ok"        ? cli::Status::Ok
                             : j["status"] == "invalid" ? cli::Status::Invalid
                             : j["status"] == "unknown" ? cli::Status::Unknown
                                                        : cli::Status::Error),
              r.code);
    EXPECT_EQ(Json::parse(j.dump()), j);
  }
}

TEST(JsonIo, FiniteInterpretationRoundTrip) {
  FiniteInterpretation I;
  I.universe = {"a", "b"};
  I.truth_set = finite_chain(4);
  I.predicates[{"R", 2}] = {rational(1, 2), 1, 0, rational(2, 3)};
  I.predicates[{"A", 0}] = {rational(1, 2)};
  I.functions[{"f", 1}] = {1, 0};
  I.functions[{"c", 0}] = {1};
  I.assignment["x"] = 1;
  Json j = to_json(I);
  EXPECT_EQ(j["predicates"]["R/2"]["a,b"], "1");
  FiniteInterpretation J = finite_interpretation_from_json(Json::parse(j.dump()));
  EXPECT_EQ(J.universe, I.universe);
  EXPECT_EQ(J.predicates, I.predicates);
  EXPECT_EQ(J.functions, I.functions);
  EXPECT_EQ(J.assignment, I.assignment);
  EXPECT_EQ(print(J.truth_set), print(I.truth_set));
  EXPECT_EQ(to_json(J), j);

  j["predicates"]["R/2"].erase("b,b");
  EXPECT_THROW(finite_interpretation_from_json(j), JsonFormatError);
  j = to_json(I);
  j["predicates"]["R/2"]["a,a"] = "1/5";
  EXPECT_THROW(finite_interpretation_from_json(j), EvalError);
}

TEST(JsonIo, OmegaInterpretationRoundTrip) {
  OmegaInterpretation I;
  I.prefix = {"p"};
  I.truth_set = unit_interval();
  I.predicates[{"A", 1}] = {rational(1, 4)};
  I.predicates[{"R", 2}] = {rational(1, 2)};
  I.tail[{{"A", 1}, 0, {}}] = TailDescriptor::harmonic(0, +1, 2);
  I.tail[{{"R", 2}, 1, {0}}] = TailDescriptor::constant(rational(1, 3));
  I.tail_functions[{"s", 1}] = {TailFunction::Kind::Successor, 0};
  I.tail_functions[{"g", 1}] = {TailFunction::Kind::ToPrefix, 0};
  I.functions[{"s", 1}] = {0};
  I.functions[{"g", 1}] = {0};
  Json j = to_json(I);
  EXPECT_TRUE(is_omega_json(j));
  EXPECT_EQ(j["tail"]["A/1"]["sign"], "+");
  EXPECT_TRUE(j["tail"].contains("R/2@1:p"));
  OmegaInterpretation J = omega_interpretation_from_json(Json::parse(j.dump()));
  EXPECT_EQ(to_json(J), j);
  Formula f = parse_formula("forall x. (A(x) | R(p0, x)) -> exists y. A(s(y))");
  J.assignment["p0"] = 0;
  I.assignment["p0"] = 0;
  EXPECT_EQ(eval_omega(f, I), eval_omega(f, J));
}

TEST(JsonIo, CertificateRoundTrip) {
  auto res = prove_prenex(parse_formula(cdown), HerbrandMode::finite(3), 6);
  ASSERT_TRUE(res.valid);
  Json j = to_json(*res.certificate);
  Certificate c = certificate_from_json(Json::parse(j.dump()));
  EXPECT_EQ(to_json(c), j);
  EXPECT_TRUE(verify_certificate(c));
  EXPECT_THROW(certificate_from_json(Json{{"formula", "A"}}), JsonFormatError);
}
