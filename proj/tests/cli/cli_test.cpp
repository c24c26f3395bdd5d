#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "qtori/cli.hpp"

namespace {

using Json = nlohmann::json;

std::string fixture(const std::string& name) { return std::string(QTORI_FIXTURE_DIR) + "/" + name; }

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = qtori::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Json run_json(std::vector<std::string> args) {
  args.insert(args.begin(), {"--format", "json"});
  const Outcome o = run(args);
  EXPECT_EQ(o.code, 0) << o.err;
  return Json::parse(o.out);
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("qtori_cli_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST(Cli, TameExample) {
  const Json r = run_json({"check-tame", fixture("tame.json")});
  EXPECT_EQ(r["verdict"], "tame");
  EXPECT_EQ(r["reduced"]["holds"], true);
  EXPECT_EQ(r["tame"]["holds"], true);
}

TEST(Cli, SphereOfRadiusFive) {
  const Json r = run_json({"sphere", "--radius", "5", fixture("ex2.json")});
  EXPECT_EQ(r["count"], 16);
  ASSERT_EQ(r["points"].size(), 16u);
  for (const auto& p : r["points"]) {
    double n2 = 0.0;
    for (const auto& x : p["point"]) n2 += x.get<double>() * x.get<double>();
    EXPECT_NEAR(n2, 25.0, 1e-9);
  }
}

TEST(Cli, HurwitzGroup) {
  const Json r = run_json({"aut", fixture("hurwitz.json")});
  EXPECT_EQ(r["kind"], "2T");
  EXPECT_EQ(r["order"], 24);
  EXPECT_EQ(r["elements"].size(), 24u);
  EXPECT_EQ(r["elements"][0], Json::array({1.0, 0.0, 0.0, 0.0}));
}

TEST(Cli, NotReducedWitness) {
  const Json r = run_json({"check-reduced", fixture("not_reduced.json")});
  EXPECT_EQ(r["verdict"], "not_reduced");
  EXPECT_EQ(r["necessary_conditions"]["holds"], true);
  EXPECT_EQ(r["check"]["witness"], Json::array({1, -1, 1, 0}));
  EXPECT_LT(r["check"]["witness_value"].get<double>(), 1.0);
}

TEST(Cli, ReduceReportsUnimodularMatrix) {
  const Json r = run_json({"reduce", fixture("not_reduced.json")});
  EXPECT_EQ(std::abs(r["det_u"].get<int>()), 1);
  EXPECT_EQ(r["u"].size(), 4u);
  for (const auto& row : r["u"])
    for (const auto& x : row) EXPECT_TRUE(x.is_number_integer());
}

TEST(Cli, Equivalence) {
  const Json yes = run_json({"equivalent", fixture("lipschitz.json"), fixture("lipschitz_swapped.json")});
  EXPECT_EQ(yes["verdict"], "equivalent");
  EXPECT_EQ(yes["witness"]["a"], Json::array({1.0, 0.0, 0.0, 0.0}));
  const Json no = run_json({"equivalent", fixture("lipschitz.json"), fixture("hurwitz.json")});
  EXPECT_EQ(no["verdict"], "not_equivalent");
  EXPECT_TRUE(no["witness"].is_null());
}

TEST(Cli, ModulusWithOrientation) {
  const Json r = run_json({"modulus", "--normalize-orientation", fixture("ex3.json")});
  EXPECT_EQ(r["fundamental_set"]["member"], true);
  EXPECT_TRUE(r["invariant_violations"].empty());
  EXPECT_FALSE(r["orientation"].is_null());
  const Json plain = run_json({"modulus", fixture("ex3.json")});
  EXPECT_TRUE(plain["orientation"].is_null());
}

TEST(Cli, OtherCommands) {
  const Json p = run_json({"parse", fixture("hurwitz.json")});
  ASSERT_EQ(p["entries"].size(), 4u);
  EXPECT_EQ(p["entries"][1]["value"], Json::array({0.5, -0.5, -0.5, -0.5}));
  const Json g = run_json({"gram", fixture("lipschitz.json")});
  EXPECT_EQ(g["gram"][2], Json::array({0.0, 0.0, 1.0, 0.0}));
  EXPECT_EQ(g["necessary_conditions"]["holds"], true);
  EXPECT_EQ(run_json({"aut", "--normalize-orientation", fixture("ex1.json")})["kind"], "2C2");
}

TEST(Cli, ReportsEmbedSettings) {
  const Json d = run_json({"gram", fixture("lipschitz.json")});
  EXPECT_EQ(d["settings"]["tolerance"], 1e-9);
  EXPECT_EQ(d["settings"]["max_cells"], 100000000);

  const std::string doc = temp_file("tol.json", R"({"basis": ["1", "i", "j", "k"], "tolerance": 1e-6})");
  EXPECT_EQ(run_json({"gram", doc})["settings"]["tolerance"], 1e-6);
  const Json flag = run_json({"--tol", "1e-8", "--max-cells", "5000", "gram", doc});
  EXPECT_EQ(flag["settings"]["tolerance"], 1e-8);
  EXPECT_EQ(flag["settings"]["max_cells"], 5000);
}

TEST(Cli, NumbersHaveTwelveDigits) {
  const Outcome o = run({"--format", "json", "parse", fixture("ex3.json")});
  ASSERT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("0.866025403784"), std::string::npos);
  EXPECT_EQ(o.out.find("0.8660254037844"), std::string::npos);
  EXPECT_EQ(o.out.find("-0,"), std::string::npos);
  EXPECT_EQ(o.out.find("-0.0,"), std::string::npos);
}

TEST(Cli, Deterministic) {
  for (const std::string format : {"json", "text"}) {
    for (const std::string command : {"aut", "sphere", "modulus", "reduce"}) {
      const std::vector<std::string> args{"--format", format, command, fixture("hurwitz.json")};
      const Outcome a = run(args);
      const Outcome b = run(args);
      EXPECT_EQ(a.code, 0);
      EXPECT_EQ(a.out, b.out) << command << " " << format;
    }
  }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"parse", fixture("syntax_error.json")}).code, qtori::cli::kExitInput);
  EXPECT_EQ(run({"parse", fixture("missing.json")}).code, qtori::cli::kExitInput);
  EXPECT_EQ(run({"parse", temp_file("bad.json", "{\"basis\": [")}).code, qtori::cli::kExitInput);
  EXPECT_EQ(run({"parse", temp_file("three.json", R"({"basis": ["1", "i", "j"]})")}).code, qtori::cli::kExitInput);
  EXPECT_EQ(run({"parse", temp_file("div.json", R"({"basis": ["1", "i/0", "j", "k"]})")}).code,
            qtori::cli::kExitInput);
  EXPECT_EQ(run({"parse", temp_file("pow.json", R"({"basis": ["1", "2^i", "j", "k"]})")}).code,
            qtori::cli::kExitInput);
  EXPECT_EQ(run({"gram", fixture("dependent.json")}).code, qtori::cli::kExitInvalidBasis);
  EXPECT_EQ(run({"--max-cells", "10", "sphere", fixture("lipschitz.json")}).code, qtori::cli::kExitResourceCap);
  EXPECT_EQ(run({}).code, qtori::cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate", fixture("lipschitz.json")}).code, qtori::cli::kExitUsage);
  EXPECT_EQ(run({"--format", "xml", "gram", fixture("lipschitz.json")}).code, qtori::cli::kExitUsage);
  EXPECT_EQ(run({"sphere", "--normalize-orientation", fixture("lipschitz.json")}).code, qtori::cli::kExitUsage);
  EXPECT_EQ(run({"equivalent", fixture("lipschitz.json")}).code, qtori::cli::kExitUsage);
  EXPECT_EQ(run({"check-reduced", fixture("not_reduced.json")}).code, qtori::cli::kExitOk);
  EXPECT_EQ(run({"--help"}).code, qtori::cli::kExitOk);
}
