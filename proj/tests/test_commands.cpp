#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "pbl/commands.hpp"

namespace {

namespace fs = std::filesystem;

const fs::path kConfigs = PBL_CONFIG_DIR;

pbl::ModelConfig config(const std::string& name) { return pbl::load_config(kConfigs / name); }

struct Run {
  int code;
  std::string output;  // stdout and stderr interleaved
};

Run run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" + std::string(PBL_CLI_PATH) + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe) != nullptr) out += buf.data();
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pbl_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

TEST(Config, ParsesComplexAndRealForms) {
  const auto cfg = pbl::parse_config(pbl::json::parse(R"({"alpha": 0, "beta": [1, 0], "gamma": 1.0, "delta": [0, 0]})"));
  EXPECT_EQ(cfg.params().det(), pbl::cplx(1.0));
  EXPECT_EQ(cfg.fock_dim, 60);
}

TEST(Config, InvalidInputsRejected) {
  EXPECT_THROW(pbl::parse_config(pbl::json::parse(R"({"alpha": 0, "beta": 1, "gamma": 1})")), pbl::ConfigInvalid);
  EXPECT_THROW(pbl::parse_config(pbl::json::parse(R"({"alpha": "x", "beta": 1, "gamma": 1, "delta": 0})")),
               pbl::ConfigInvalid);
  EXPECT_THROW(pbl::parse_config(pbl::json::parse(R"({"alpha": 0, "beta": 1, "gamma": 1, "delta": 0, "m": -1})")),
               pbl::ConfigInvalid);
  EXPECT_THROW(pbl::parse_config(pbl::json::parse(
                   R"({"alpha": 0, "beta": 1, "gamma": 1, "delta": 0, "lambda_grid": {"count": 1}})")),
               pbl::ConfigInvalid);
  EXPECT_THROW(config("bad_determinant.json"), pbl::DeterminantViolation);
  EXPECT_THROW(pbl::load_config(kConfigs / "missing.json"), pbl::ConfigInvalid);
}

TEST(Formatting, SeventeenDigits) {
  EXPECT_EQ(pbl::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(pbl::format_double(1.0), "1");
  EXPECT_EQ(pbl::dump_json(pbl::json{{"x", 0.1}, {"y", std::nan("")}}), "{\n  \"x\": 0.10000000000000001,\n  \"y\": null\n}\n");
}

TEST(Check, IdentityIsHermitianWithEmptyWindow) {
  const auto r = pbl::cmd_check(config("identity.json"));
  EXPECT_EQ(r.exit_code, pbl::kExitOk);
  EXPECT_EQ(r.report["classification"], "Hermitian");
  EXPECT_TRUE(r.report["window"]["empty"].get<bool>());
  EXPECT_NE(r.out.find("lambda window: empty"), std::string::npos);
}

TEST(Check, ExampleWindow) {
  const auto r = pbl::cmd_check(config("example.json"));
  EXPECT_EQ(r.report["classification"], "NonHermitian");
  EXPECT_NEAR(r.report["window"]["excluded_lo"].get<double>(), -40.0 / 41.0, 1e-15);
  EXPECT_NEAR(r.report["window"]["excluded_hi"].get<double>(), -8.0 / 17.0, 1e-15);
  EXPECT_TRUE(r.report["ordering"]["satisfied"].get<bool>());
}

TEST(Check, ComplexQuadrupleHasNoWindow) {
  const auto r = pbl::cmd_check(config("complex.json"));
  EXPECT_EQ(r.exit_code, pbl::kExitOk);
  EXPECT_TRUE(r.report["window"].is_null());
}

TEST(CheckCli, DeterminantViolationExitsTwo) {
  const auto run = run_cli("check -c \"" + (kConfigs / "bad_determinant.json").string() + "\"");
  EXPECT_EQ(run.code, 2);
  EXPECT_NE(run.output.find("DeterminantViolation"), std::string::npos);
}

TEST(CheckCli, MissingConfigExitsTwo) {
  EXPECT_EQ(run_cli("check -c /nonexistent/config.json").code, 2);
  EXPECT_EQ(run_cli("check").code, 2);
}

TEST_F(TempDir, SweepRowsMatchClosedFormsAndWindow) {
  const auto cfg = config("example.json");
  const fs::path out = dir_ / "masses.csv";
  ASSERT_EQ(pbl::cmd_sweep(cfg, out, 2).exit_code, pbl::kExitOk);
  const auto rows = lines(slurp(out));
  ASSERT_EQ(rows.size(), 202u);
  EXPECT_EQ(rows[0], "lambda,epsilon,nu,varkappa,mass,defined");
  const auto sm = pbl::special_masses(cfg.params(), cfg.scales);
  const auto window = pbl::admissible_lambda_window(cfg.params());
  int checked = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = split(rows[i]);
    ASSERT_EQ(cells.size(), 6u) << rows[i];
    const double lambda = std::stod(cells[0]);
    EXPECT_EQ(cells[5] == "0", window.contains(lambda)) << lambda;
    if (cells[5] == "0") {
      for (int k = 1; k < 5; ++k) EXPECT_TRUE(cells[k].empty());
      continue;
    }
    const double mass = std::stod(cells[4]);
    const double expected = lambda == 0.0 ? sm.at_zero : lambda == 1.0 ? sm.at_plus_one : sm.at_minus_one;
    if (lambda == 0.0 || lambda == 1.0 || lambda == -1.0) {
      EXPECT_NEAR(mass, expected, 1e-12) << lambda;
      ++checked;
    }
  }
  EXPECT_EQ(checked, 3);
}

TEST_F(TempDir, SweepClosureHasConstantMass) {
  const fs::path out = dir_ / "closure.csv";
  ASSERT_EQ(pbl::cmd_sweep(config("closure.json"), out).exit_code, pbl::kExitOk);
  const auto rows = lines(slurp(out));
  ASSERT_EQ(rows.size(), 42u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = split(rows[i]);
    EXPECT_EQ(cells[5], "1");
    EXPECT_NEAR(std::stod(cells[4]), 1.0 / 3.0, 1e-15);
  }
}

TEST_F(TempDir, SweepCliIsDeterministicAcrossThreadCounts) {
  const std::string cfg = "\"" + (kConfigs / "example.json").string() + "\"";
  const fs::path a = dir_ / "a.csv", b = dir_ / "b.csv";
  ASSERT_EQ(run_cli("sweep -c " + cfg + " -o \"" + a.string() + "\"", "PBL_THREADS=1").code, 0);
  ASSERT_EQ(run_cli("sweep -c " + cfg + " -o \"" + b.string() + "\"", "PBL_THREADS=7").code, 0);
  const std::string text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_FALSE(fs::exists(a.string() + ".tmp"));
}

TEST_F(TempDir, SweepIoFailureExitsThreeWithoutPartialFile) {
  const fs::path out = dir_ / "no_such_dir" / "masses.csv";
  const auto r = pbl::cmd_sweep(config("example.json"), out);
  EXPECT_EQ(r.exit_code, pbl::kExitIo);
  EXPECT_NE(r.err.find("IoFailure"), std::string::npos);
  EXPECT_FALSE(fs::exists(out));
  const auto run = run_cli("sweep -c \"" + (kConfigs / "example.json").string() + "\" -o \"" + out.string() + "\"");
  EXPECT_EQ(run.code, 3);
}

TEST(Verify, IdentityPassesWithNegligibleResiduals) {
  const auto r = pbl::cmd_verify(config("identity.json"));
  EXPECT_EQ(r.exit_code, pbl::kExitOk) << r.out;
  for (const auto& c : r.report["checks"]) {
    if (c.contains("value")) EXPECT_LT(c["value"].get<double>(), 1e-10) << c["name"];
  }
}

TEST(Verify, ExamplePassesAtDefaults) {
  const auto r = pbl::cmd_verify(config("example.json"));
  EXPECT_EQ(r.exit_code, pbl::kExitOk) << r.out;
  EXPECT_NEAR(r.report["varkappa"].get<double>(), std::sqrt(0.3125), 1e-14);
}

TEST(Verify, ComplexQuadruplePasses) {
  const auto r = pbl::cmd_verify(config("complex.json"));
  EXPECT_EQ(r.exit_code, pbl::kExitOk) << r.out;
  EXPECT_EQ(r.report["basis_regime"], "quasi-basis");
}

TEST(Verify, MisSetEpsilonFailsConstraintCheck) {
  const auto r = pbl::cmd_verify(config("mis_set_epsilon.json"));
  EXPECT_EQ(r.exit_code, pbl::kExitCheckFailed);
  bool found = false;
  for (const auto& c : r.report["checks"]) {
    if (c["name"] == "constraint_residual") {
      found = true;
      EXPECT_FALSE(c["passed"].get<bool>());
    }
  }
  EXPECT_TRUE(found);
}

TEST(Verify, OptionOverridesValidated) {
  pbl::VerifyOptions opts;
  opts.fock_dim = 2;
  EXPECT_EQ(pbl::cmd_verify(config("identity.json"), opts).exit_code, pbl::kExitInvalid);
}

TEST_F(TempDir, VerifyCliJsonIsByteStable) {
  const std::string cfg = "\"" + (kConfigs / "example.json").string() + "\"";
  const fs::path a = dir_ / "a.json", b = dir_ / "b.json";
  EXPECT_EQ(run_cli("verify -c " + cfg + " --fock-dim 40 --nmax 8 --json \"" + a.string() + "\"").code, 0);
  EXPECT_EQ(run_cli("verify -c " + cfg + " --fock-dim 40 --nmax 8 --json \"" + b.string() + "\"").code, 0);
  const std::string text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  const auto j = pbl::json::parse(text);
  EXPECT_EQ(j["fock_dim"], 40);
  EXPECT_EQ(j["nmax"], 8);
}

TEST(VerifyCli, MisSetEpsilonExitsOne) {
  EXPECT_EQ(run_cli("verify -c \"" + (kConfigs / "mis_set_epsilon.json").string() + "\"").code, 1);
}

}  // namespace
