#include "qhqr/runner.hpp"

#include <gtest/gtest.h>
#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>

using namespace qhqr;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
  auto p = fs::temp_directory_path() / ("qhqr_test_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig load(const std::string &text, const fs::path &dir) {
  auto cfg = parse_config_string(text);
  cfg.out_dir = dir.string();
  return cfg;
}

const char *kWitness = R"(seed: 5
domain: {p: [1, 1, 1]}
class_h: [1]
degree: 4
oracle: {samples: 20000}
invariance: {group_samples: 10, points: 500}
symbols:
  - {name: f, nu: [1, 0, 0], mu: [0, 1, 0]}
  - {name: h, nu: [1, 0, 0], mu: [0, 0, 1]}
  - {name: g, nu: [0, 1, 0], mu: [0, 0, 1]}
)";

} // namespace

TEST(Report, CsvLayout) {
  const auto b = TruncatedBasis::make(DomainSpec{1, 1}, 1);
  const QHQRSymbol sym(Partition{2}, QuasiRadialSymbol::constant(1.0 / 3.0));
  const auto csv = matrix_csv(toeplitz_matrix_closed(sym, b));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "row_index,col_index,re,im,std_err");
  std::getline(in, line);
  EXPECT_EQ(line, "0,0,0.33333333333333331,0,0");
  int rows = 1;
  while (std::getline(in, line))
    ++rows;
  EXPECT_EQ(rows, 9);
}

TEST(Report, SeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_double(2.0 / 3.0)), 2.0 / 3.0);
}

TEST(Report, AtomicWriteLeavesNoTemp) {
  const auto dir = scratch("atomic");
  write_file_atomic(dir / "sub" / "x.txt", "one");
  write_file_atomic(dir / "sub" / "x.txt", "two");
  std::ifstream in(dir / "sub" / "x.txt");
  std::string s;
  in >> s;
  EXPECT_EQ(s, "two");
  EXPECT_EQ(std::distance(fs::directory_iterator(dir / "sub"), fs::directory_iterator{}), 1);
  fs::remove_all(dir);
}

TEST(Report, NumericsIgnoreTiming) {
  EXPECT_EQ(report_numerics("a: 1\ntiming: {x: 2}\n"), report_numerics("a: 1\ntiming: {x: 3}\n"));
  EXPECT_NE(report_numerics("a: 1\n"), report_numerics("a: 2\n"));
}

TEST(Runner, CommandNames) {
  for (auto c : {Command::gamma, Command::matrix, Command::commutator, Command::check_akh,
                 Command::check_pair, Command::invariance, Command::validate_all})
    EXPECT_EQ(parse_command(to_string(c)), c);
  EXPECT_FALSE(parse_command("gama"));
}

TEST(Runner, GammaOfOneIsOne) {
  const auto dir = scratch("gamma");
  const auto cfg = load(
      "seed: 1\ndomain: {p: [1, 2, 3]}\npartition: [1, 2]\ndegree: 4\n"
      "symbols: [{name: one, radial: {constant: 1}}]\n",
      dir);
  const auto r = run(Command::gamma, cfg);
  EXPECT_TRUE(r.assertions.passed());
  const auto doc = YAML::Load(r.report);
  const auto rows = doc["results"]["gamma"][0]["rows"];
  EXPECT_EQ(rows.size(), 35u);
  for (const auto &row : rows)
    EXPECT_NEAR(row["closed_form"].as<double>(), 1.0, 1e-10);
  EXPECT_TRUE(fs::exists(dir / "report.yaml"));
  fs::remove_all(dir);
}

TEST(Runner, CommutatorDichotomy) {
  const auto dir = scratch("comm");
  const auto r = run(Command::commutator, load(kWitness, dir));
  EXPECT_TRUE(r.assertions.passed());
  const auto pairs = YAML::Load(r.report)["results"]["commutator"];
  ASSERT_EQ(pairs.size(), 3u);
  // f,h commute; f,g and h,g do not.
  EXPECT_EQ(pairs[0]["pair"].as<std::string>(), "f,h");
  EXPECT_TRUE(pairs[0]["predicted_commuting"].as<bool>());
  EXPECT_LE(pairs[0]["max_abs"].as<double>(), 1e-10);
  EXPECT_EQ(pairs[1]["pair"].as<std::string>(), "f,g");
  EXPECT_FALSE(pairs[1]["predicted_commuting"].as<bool>());
  EXPECT_NEAR(pairs[1]["max_abs"].as<double>(), 0.0625, 1e-12);
  fs::remove_all(dir);
}

TEST(Runner, CheckAkhNeedsClass) {
  auto cfg = load(kWitness, scratch("akh"));
  cfg.h.reset();
  EXPECT_THROW(run(Command::check_akh, cfg), ConfigError);
}

TEST(Runner, CheckAkhVerdicts) {
  const auto dir = scratch("akh2");
  const auto r = run(Command::check_akh, load(kWitness, dir));
  const auto doc = YAML::Load(r.report)["results"]["check-akh"]["symbols"];
  EXPECT_TRUE(doc[0]["in_class"].as<bool>());
  EXPECT_TRUE(doc[1]["in_class"].as<bool>());
  EXPECT_EQ(doc[2]["reason"].as<std::string>(), "nu_support");
  EXPECT_TRUE(r.assertions.passed());
  fs::remove_all(dir);
}

TEST(Runner, FailedExpectationIsReported) {
  const auto dir = scratch("akh3");
  auto cfg = load(kWitness, dir);
  cfg.symbols[2].expect_akh = true;
  const auto r = run(Command::check_akh, cfg);
  ASSERT_EQ(r.assertions.failed(), 1);
  EXPECT_EQ(r.assertions.failures()[0].check, "check_akh.expected");
  EXPECT_EQ(YAML::Load(r.report)["status"].as<std::string>(), "fail");
  fs::remove_all(dir);
}

TEST(Runner, MatrixWritesSidecarsAndAgrees) {
  const auto dir = scratch("matrix");
  const auto r = run(Command::matrix, load(kWitness, dir));
  EXPECT_TRUE(r.assertions.passed());
  EXPECT_EQ(r.sidecars.size(), 6u);
  for (const auto &p : r.sidecars)
    EXPECT_TRUE(fs::exists(p)) << p;
  fs::remove_all(dir);
}

TEST(Runner, InvarianceCounts) {
  const auto dir = scratch("inv");
  const auto r = run(Command::invariance, load(kWitness, dir));
  EXPECT_TRUE(r.assertions.passed());
  const auto res = YAML::Load(r.report)["results"]["invariance"];
  EXPECT_EQ(res["subgroup_members"].as<int>(), 10);
  EXPECT_EQ(res["generic_members"].as<int>(), 0);
  fs::remove_all(dir);
}

TEST(Runner, ReportIsReproducibleAndEchoRoundTrips) {
  const auto dir = scratch("repro");
  const auto cfg = load(kWitness, dir);
  const auto a = run(Command::validate_all, cfg);
  const auto b = run(Command::validate_all, cfg);
  EXPECT_EQ(report_numerics(a.report), report_numerics(b.report));
  YAML::Emitter echo;
  echo << YAML::Load(a.report)["config"];
  EXPECT_EQ(parse_config_string(echo.c_str()), cfg);
  fs::remove_all(dir);
}
