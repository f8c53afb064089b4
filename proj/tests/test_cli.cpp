#include "sl3mm/fusion32.hpp"
#include "sl3mm/topspace.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <sys/wait.h>

using json = nlohmann::json;

namespace {

struct CliRun {
  int code{-1};
  std::string out;
};

CliRun runCli(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + std::string(SL3MM_CLI_PATH) + " " + args + " 2>&1";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), p) != nullptr) r.out += buf.data();
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

json runJson(const std::string& args) {
  CliRun r = runCli("--format json " + args);
  EXPECT_EQ(r.code, 0) << r.out;
  return json::parse(r.out);
}

}  // namespace

TEST(Cli, ClassifyThreeTwoJson) {
  json j = runJson("classify --u 3 --v 2");
  EXPECT_EQ(j["schemaVersion"], 1);
  EXPECT_EQ(j["centralCharge"], "-8");
  ASSERT_EQ(j["highestWeights"].size(), 4u);
  std::set<std::string> labels, deltas;
  for (const auto& h : j["highestWeights"]) {
    labels.insert(h["label"].get<std::string>());
    deltas.insert(h["conformalWeight"].get<std::string>());
  }
  EXPECT_EQ(labels, (std::set<std::string>{"H(0,0)", "H(-3/2,0)", "H(0,-3/2)", "H(-1/2,-1/2)"}));
  EXPECT_EQ(deltas, (std::set<std::string>{"0", "-1/2"}));
  EXPECT_EQ(j["counts"]["adm"], 4);
  EXPECT_EQ(j["counts"]["fdimTop"], 1);
  EXPECT_EQ(j["counts"]["sigma1"], 1);
  EXPECT_EQ(j["counts"]["r2"], 1);
  EXPECT_EQ(j["semirelaxedFamilies"].size(), 1u);
  EXPECT_EQ(j["relaxedFamilies"].size(), 1u);
  std::size_t tabulated = 0;
  for (const auto& row : j["fractionalPartTable"]) tabulated += row["weights"].size();
  EXPECT_EQ(tabulated, 4u);
}

TEST(Cli, ClassifyText) {
  CliRun r = runCli("classify --u 3 --v 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("c = -8"), std::string::npos);
  EXPECT_NE(r.out.find("(4, 1, 1, 1)"), std::string::npos);
}

TEST(Cli, FuseExampleHasTheDimensionOfFourRelaxedModules) {
  // At these parameters one relaxed summand sits on the degenerate locus and is printed decomposed.
  json j = runJson("fuse \"S[1/3]\" \"R[1/4,0]\"");
  EXPECT_EQ(j["dimension"], 4 * 8);
  using namespace sl3mm;
  const Level& L = level32();
  GrClass expected = fuse(parseLabel("S[1/3]", L), parseLabel("R[1/4,0]", L));
  EXPECT_EQ(j["terms"].size(), expected.terms().size());
}

TEST(Cli, FuseGenericSemiRelaxedGivesFourFlowedRelaxedTerms) {
  json j = runJson("fuse \"S[1/5]\" \"R[1/7,2/3]\"");
  ASSERT_EQ(j["terms"].size(), 4u);
  std::set<std::string> flows;
  for (const auto& t : j["terms"]) {
    std::string l = t["label"];
    EXPECT_EQ(t["multiplicity"], 1);
    EXPECT_NE(l.find("R["), std::string::npos) << l;
    flows.insert(l.substr(0, l.find("R[")));
  }
  EXPECT_EQ(flows, (std::set<std::string>{"", "sf(0,1)*", "sf(1,0)*", "sf(-1,1)*"}));
}

TEST(Cli, FuseOutsideThreeTwoCitesLinearDependence) {
  CliRun r = runCli("--u 4 --v 3 fuse \"S[1/3]\" \"R[1/4,0]\"");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("linearly dependent"), std::string::npos) << r.out;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(runCli("").code, 1);
  EXPECT_EQ(runCli("classify --u x").code, 1);
  EXPECT_EQ(runCli("verify --suite nope").code, 1);
  EXPECT_EQ(runCli("--format yaml classify").code, 1);
  EXPECT_EQ(runCli("--u 4 --v 2 classify").code, 2);
  EXPECT_EQ(runCli("canon \"X[1]\"").code, 2);
  EXPECT_EQ(runCli("canon \"S[1/2]\"").code, 2);
  EXPECT_EQ(runCli("char \"H(0,0)\"").code, 2);
  EXPECT_EQ(runCli("plot-weights \"H(0,0)\" --out /nonexistent-dir/x.csv").code, 1);
  EXPECT_EQ(runCli("--help").code, 0);
}

TEST(Cli, LabelCommandsRoundTrip) {
  json c = runJson("canon \"sf(0,-1)*c w1 S[1/3]\"");
  std::string canonical = c["canonical"];
  json again = runJson("canon \"" + canonical + "\"");
  EXPECT_EQ(again["canonical"], canonical);

  json t = runJson("twist \"c w1\" \"S[1/3]\"");
  json f = runJson("flow 0 -1 \"" + t["canonical"].get<std::string>() + "\"");
  EXPECT_EQ(f["canonical"], canonical);

  json fl = runJson("flow 1 0 \"H(0,0)\"");
  EXPECT_EQ(fl["canonical"], "H(-3/2,0)");
}

TEST(Cli, DegenAndOrbit) {
  json d = runJson("degen \"R[9/10,9/5]\"");
  std::int64_t total = 0;
  for (const auto& t : d["terms"]) total += t["multiplicity"].get<std::int64_t>();
  EXPECT_GE(total, 2);
  EXPECT_GT(d["atypicality"], 0);

  json o = runJson("orbit \"H(0,0)\"");
  EXPECT_EQ(o["nodes"].size(), 7u);
  EXPECT_EQ(o["edges"].size(), 12u);
}

TEST(Cli, SMatrixAndCharacter) {
  json s = runJson("smatrix hw --hw 0 --order 3");
  EXPECT_EQ(s["numerator"].size(), 1u);
  EXPECT_EQ(s["denominator"].size(), 7u);
  EXPECT_TRUE(s.contains("expansion"));

  json ch = runJson("char \"R[1/4,1/3]\" --order 6");
  std::vector<std::string> mult;
  for (const auto& x : ch["weightMultiplicities"]) mult.push_back(x);
  EXPECT_EQ(mult, (std::vector<std::string>{"1", "4", "14", "40", "105", "252", "574"}));
  EXPECT_EQ(ch["topMultiplicity"], 1);

  CliRun env = runCli("--format json char \"R[1/4,1/3]\"", "SL3MM_TRUNCATION=3");
  ASSERT_EQ(env.code, 0);
  EXPECT_EQ(json::parse(env.out)["weightMultiplicities"].size(), 4u);

  EXPECT_EQ(runCli("--u 4 --v 3 smatrix hw").code, 2);
}

TEST(Cli, VerifyAllPasses) {
  CliRun r = runCli("verify --suite all");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
}

TEST(Cli, PlotWeightsWritesCsvAndJson) {
  auto dir = std::filesystem::temp_directory_path();
  auto csv = dir / "sl3mm_plot_test.csv";
  auto js = dir / "sl3mm_plot_test.json";
  ASSERT_EQ(runCli("plot-weights \"H(0,0)\" --out " + csv.string()).code, 0);
  std::ifstream f(csv);
  std::string header, line;
  std::getline(f, header);
  EXPECT_EQ(header, "d1,d2,x,y,multiplicity");
  int rows = 0;
  while (std::getline(f, line)) ++rows;
  EXPECT_EQ(rows, 1);  // the vacuum top space is one-dimensional

  ASSERT_EQ(runCli("plot-weights \"R[1/4,1/3]\" --radius 2 --out " + js.string()).code, 0);
  std::ifstream g(js);
  json doc = json::parse(g);
  EXPECT_EQ(doc["schemaVersion"], 1);
  EXPECT_EQ(doc["points"].size(), 25u);
  std::filesystem::remove(csv);
  std::filesystem::remove(js);
}

TEST(TopSpace, FiniteDimensionalMultiplicitiesSumToWeylDimension) {
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b) {
      sl3mm::HighestWeightMultiplicities h({a, b});
      std::int64_t total = 0;
      for (int p = 0; p <= 2 * (a + b); ++p)
        for (int q = 0; q <= 2 * (a + b); ++q) total += h.at(p, q);
      EXPECT_EQ(total, (a + 1) * (b + 1) * (a + b + 2) / 2) << a << "," << b;
    }
  sl3mm::HighestWeightMultiplicities adjoint({1, 1});
  EXPECT_EQ(adjoint.at(1, 1), 2);
}

TEST(TopSpace, GenericVermaMultiplicitiesArePartitionCounts) {
  // with no integral label the Verma module is irreducible: Kostant's count min(p, q) + 1
  sl3mm::HighestWeightMultiplicities h({sl3mm::Rational(1, 3), sl3mm::Rational(2, 7)});
  for (int p = 0; p <= 5; ++p)
    for (int q = 0; q <= 5; ++q) EXPECT_EQ(h.at(p, q), std::min(p, q) + 1) << p << "," << q;
}

TEST(TopSpace, SupportShapes) {
  using namespace sl3mm;
  const Level& L = level32();
  EXPECT_EQ(topSpaceSupport(makeHW(weights::zero, L), L, 3).size(), 1u);
  // lambda_2 = 0 is integral, so f2 kills the highest-weight vector: a wedge p >= q
  auto wedge = topSpaceSupport(makeHW({Rational(-3, 2), 0}, L), L, 3);
  EXPECT_EQ(wedge.size(), 10u);
  for (const auto& w : wedge) EXPECT_EQ(w.multiplicity, 1);
  auto rel = topSpaceSupport(makeRel(m32FamilyWeight(), {Rational(1, 4), Rational(1, 3)}, L), L, 2);
  EXPECT_EQ(rel.size(), 25u);
  EXPECT_THROW(topSpaceSupport(flowApply({2, 0}, makeHW(weights::zero, L)), L, 2), DomainError);
}
