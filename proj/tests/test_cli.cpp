#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "qlab/cli/app.hpp"

using namespace qlab;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string last_line(const std::string& s) {
  const auto end = s.find_last_not_of('\n');
  const auto start = s.rfind('\n', end);
  return s.substr(start == std::string::npos ? 0 : start + 1, end - (start == std::string::npos ? 0 : start + 1) + 1);
}

std::filesystem::path scratch(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("qlab-cli-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(d);
  return d;
}

// Restores an environment variable on scope exit.
struct EnvGuard {
  std::string name;
  explicit EnvGuard(std::string n, const char* value) : name(std::move(n)) { ::setenv(name.c_str(), value, 1); }
  ~EnvGuard() { ::unsetenv(name.c_str()); }
};

}  // namespace

TEST(Cli, ClosureScalarsAtSeven) {
  const auto r = run({"check", "--id", "ClosureScalars", "--prime", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::ordered_json::parse(r.out);
  const auto& w = j.at("reports").at(0).at("witnesses");
  EXPECT_EQ(w.at("gamma_1"), "95");
  EXPECT_EQ(w.at("beta_1"), "283");
  EXPECT_EQ(j.at("aggregate"), "Pass");
}

TEST(Cli, SuiteTsvPasses) {
  const auto r = run({"suite", "--primes", "7,13", "--format", "tsv", "--jobs", "2"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("id\tp\tell\tmodulus\tstatus\twitnesses\tmax_index\tms\n", 0), 0u);
  EXPECT_EQ(last_line(r.out), "# aggregate\tPass");
}

TEST(Cli, ExcludedPrime) {
  const auto r = run({"check", "--prime", "3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("p=3 excluded"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({"check", "--prime", "15"}).code, 2);
  EXPECT_EQ(run({"check", "--prime", "7", "--precision", "7"}).code, 2);
  EXPECT_EQ(run({"suite", "--bogus"}).code, 2);
  EXPECT_EQ(run({"suite", "--primes", "7", "--ell", "4"}).code, 2);
  EXPECT_EQ(run({"check", "--prime", "7", "--id", "NoSuchCheck"}).code, 2);
  EXPECT_EQ(run({"check", "--prime", "7", "--backend", "float"}).code, 2);
  EXPECT_EQ(run({"check", "--prime", "1451"}).code, 2);
  EXPECT_EQ(run({"check"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST(Cli, FailingCheckExitsOne) {
  const auto r = run({"check", "--id", "MainSupercongruence", "--prime", "5"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(nlohmann::ordered_json::parse(r.out).at("aggregate"), "Fail");
}

TEST(Cli, MismatchedCheckIsSkippedNotFailed) {
  const auto r = run({"check", "--id", "InertAp72", "--prime", "7"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::ordered_json::parse(r.out).at("aggregate"), "Skipped");
}

TEST(Cli, HelpAndVersion) {
  EXPECT_EQ(run({"--help"}).code, 0);
  const auto v = run({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.out, std::string(kToolVersion) + "\n");
}

TEST(Cli, IdenticalConfigGivesIdenticalBytes) {
  const std::vector<std::string> args{"suite", "--primes", "5,7", "--jobs", "3"};
  const auto a = run(args), b = run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, CacheDoesNotChangeReport) {
  const auto dir = scratch("cache");
  const auto plain = run({"suite", "--primes", "7"});
  const auto cold = run({"suite", "--primes", "7", "--cache-dir", dir.string()});
  const auto warm = run({"suite", "--primes", "7", "--cache-dir", dir.string()});
  EXPECT_EQ(plain.out, cold.out);
  EXPECT_EQ(cold.out, warm.out);
  bool has_dictionary = false;
  for (const auto& e : std::filesystem::directory_iterator(dir)) has_dictionary |= e.path().filename().string().rfind("dictionary-p7-", 0) == 0;
  EXPECT_TRUE(has_dictionary);
  std::filesystem::remove_all(dir);
}

TEST(Cli, JsonReportRoundTrips) {
  const auto r = run({"suite", "--primes", "5,7"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(emit_report(suite_from_json(nlohmann::ordered_json::parse(r.out)), ReportFormat::Json), r.out);
}

TEST(Cli, TimesAreZeroWithoutTiming) {
  const auto j = nlohmann::ordered_json::parse(run({"check", "--prime", "7"}).out);
  EXPECT_EQ(j.at("total_ms"), 0);
  for (const auto& rep : j.at("reports")) EXPECT_EQ(rep.at("ms"), 0);
}

TEST(Cli, EnvironmentBelowFlags) {
  EnvGuard primes("QLAB_PRIMES", "5");
  EnvGuard format("QLAB_FORMAT", "tsv");
  const auto from_env = run({"suite"});
  EXPECT_EQ(from_env.code, 0);
  EXPECT_EQ(from_env.out.rfind("id\t", 0), 0u);
  EXPECT_NE(from_env.out.find("InertAp72\t5\t"), std::string::npos);
  EXPECT_EQ(from_env.out.find("ClosureScalars\t7"), std::string::npos);

  const auto flagged = run({"suite", "--primes", "7", "--format", "json"});
  const auto j = nlohmann::ordered_json::parse(flagged.out);
  EXPECT_EQ(j.at("config").at("primes"), nlohmann::ordered_json::array({7}));
}

TEST(Cli, OutFlagWritesFile) {
  const auto dir = scratch("out");
  std::filesystem::create_directories(dir);
  const auto path = dir / "report.tsv";
  const auto r = run({"check", "--prime", "7", "--id", "BridgeCancellation", "--format", "tsv", "--out", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_NE(text.find("BridgeCancellation\t7"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Cli, HumanSuitePrintsScalarTable) {
  const auto r = run({"check", "--prime", "13", "--id", "ClosureScalars", "--format", "human"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("closure scalars"), std::string::npos);
  EXPECT_NE(r.out.find("aggregate: Pass"), std::string::npos);
}

TEST(Cli, SequenceAndDictionaryCommands) {
  const auto s = run({"sequence", "--n", "6", "--format", "tsv"});
  EXPECT_EQ(s.code, 0);
  EXPECT_NE(s.out.find("6\t26749991016\t"), std::string::npos);

  const auto sj = run({"sequence", "--n", "10"});
  const auto c = sequence_cache_from_json(nlohmann::ordered_json::parse(sj.out));
  EXPECT_EQ(c.N, 10);

  const auto d = run({"dict", "--prime", "7", "--terms", "4", "--backend", "exact", "--precision", "40"});
  ASSERT_EQ(d.code, 0) << d.err;
  const auto j = nlohmann::ordered_json::parse(d.out);
  EXPECT_EQ(j.at("precision"), 40);
  bool saw_u = false;
  for (const auto& o : j.at("objects")) {
    if (o.at("name") == "u") {
      saw_u = true;
      EXPECT_EQ(o.at("coefficients"), nlohmann::ordered_json::array({"1", "12", "90", "508"}));
    }
  }
  EXPECT_TRUE(saw_u);
}

TEST(Cli, BenchRuns) {
  const auto r = run({"bench", "--primes", "7", "--format", "tsv"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("p\tbackend\tprecision\tdictionary_ms\tdefects_ms\n7\tresidue\t253\t", 0), 0u);
}
