#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsep/cli.hpp"

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  std::vector<nlohmann::json> lines;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fsep");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = fsep::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  std::istringstream in(r.out);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) r.lines.push_back(nlohmann::json::parse(line));
  }
  return r;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("fsep_cli_test_" + name);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("exact ring output") {
    const auto r = run({"exact", "ring", "--sites", "3", "--particles", "4", "--seed", "5"});
    REQUIRE(r.code == fsep::cli::kExitOk);
    REQUIRE(r.lines.size() == 5);
    const auto& manifest = r.lines[0].at("manifest");
    CHECK(manifest.at("seed") == 5);
    CHECK(manifest.at("spec").at("command") == "exact ring");
    CHECK(manifest.at("spec").at("sites") == 3);
    CHECK(manifest.contains("version"));
    for (int i = 1; i <= 3; ++i) CHECK(r.lines[i].at("pi").get<double>() == doctest::Approx(1.0 / 3.0));
    CHECK(r.lines[4].at("summary").at("pass") == true);
    CHECK(r.lines[4].at("summary").at("states") == 3);
  }

  TEST_CASE("exact transfer output") {
    const auto r = run({"exact", "transfer", "--zeta", "0.5"});
    REQUIRE(r.code == fsep::cli::kExitOk);
    CHECK(r.out.find("lambda1") != std::string::npos);
  }

  TEST_CASE("reruns are byte identical") {
    const std::vector<std::string> args{"simulate", "--init", "bernoulli:p=0.6", "--sites", "200", "--steps", "50",
                                        "--every", "10", "--observe", "cylinder:2", "--seed", "77"};
    const auto a = run(args);
    const auto b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != run({"simulate", "--init", "bernoulli:p=0.6", "--sites", "200", "--steps", "50", "--every", "10",
                        "--observe", "cylinder:2", "--seed", "78"})
                       .out);
    const auto g1 = run({"quench", "--rho", "0.25", "--sites", "500", "--runs", "3", "--seed", "2"});
    const auto g2 = run({"quench", "--rho", "0.25", "--sites", "500", "--runs", "3", "--seed", "2", "--threads", "3"});
    REQUIRE(g1.code == 0);
    CHECK(g1.lines.back() == g2.lines.back());
  }

  TEST_CASE("simulate reports the initial ring and observations") {
    const auto r = run({"simulate", "--init", "exclusion:11100010", "--steps", "2", "--observe", "regions"});
    REQUIRE(r.code == 0);
    CHECK(r.lines[1].at("initial") == "ring:8:11100010");
    CHECK(r.out.find("regions") != std::string::npos);
    CHECK(run({"simulate", "--init", "exclusion:1100", "--model", "ssm"}).code == fsep::cli::kExitUsage);
  }

  TEST_CASE("environment seed overrides the flag") {
    ::setenv("FSEP_SEED", "9", 1);
    const auto a = run({"gibbs", "--zeta", "0.5", "--sites", "16", "--samples", "3", "--seed", "1"});
    const auto b = run({"gibbs", "--zeta", "0.5", "--sites", "16", "--samples", "3", "--seed", "2"});
    ::unsetenv("FSEP_SEED");
    REQUIRE(a.code == 0);
    CHECK(a.lines[0].at("manifest").at("seed") == 9);
    CHECK(a.out == b.out);
    const auto c = run({"gibbs", "--zeta", "0.5", "--sites", "16", "--samples", "3", "--seed", "1"});
    CHECK(c.lines[0].at("manifest").at("seed") == 1);
  }

  TEST_CASE("exit codes") {
    CHECK(run({"bogus"}).code == fsep::cli::kExitUsage);
    CHECK(run({"exact", "ring", "--sites", "3", "--particles", "5"}).code == fsep::cli::kExitUsage);
    CHECK(run({"quench", "--rho", "0.7"}).code == fsep::cli::kExitUsage);
    CHECK(run({"gibbs", "--parity", "{not json"}).code == fsep::cli::kExitUsage);
    CHECK(run({"verify", "stationarity", "--samples", "20"}).code == fsep::cli::kExitUsage);
    // A check that runs and fails, and a run that hits its step cap.
    CHECK(run({"verify", "stationarity", "--state", "bernoulli:p=0.7", "--sites", "256", "--samples", "20000"}).code ==
          fsep::cli::kExitFailure);
    CHECK(run({"quench", "--rho", "0.2", "--sites", "100", "--max-steps", "0"}).code == fsep::cli::kExitFailure);
    CHECK(run({"exact", "ring", "--sites", "7", "--particles", "60", "--lu-limit", "10"}).code == fsep::cli::kExitFailure);
  }

  TEST_CASE("stationarity verification passes for a stationary law") {
    const auto r = run({"verify", "stationarity", "--state", "gibbs:zeta=0.5", "--sites", "256", "--samples", "50000"});
    REQUIRE(r.code == fsep::cli::kExitOk);
    CHECK(r.lines.back().at("pass") == true);
    CHECK(r.lines.back().at("test") == "stationarity");
  }

  TEST_CASE("spec files and output files") {
    const auto spec = temp_file("spec.json");
    const auto out = temp_file("out.jsonl");
    {
      std::ofstream f(spec);
      f << nlohmann::json::array({{{"command", "exact ring"}, {"sites", 3}, {"particles", 4}},
                                  {{"command", "gibbs"}, {"zeta", 0.5}, {"sites", 8}, {"samples", 2}, {"emit", true}}})
               .dump();
    }
    const auto r = run({"--spec", spec.string()});
    REQUIRE(r.code == 0);
    std::size_t manifests = 0;
    for (const auto& l : r.lines) manifests += l.contains("manifest");
    CHECK(manifests == 2);
    CHECK(r.out.find("\"expected_density\"") != std::string::npos);

    const auto direct = run({"exact", "ring", "--sites", "3", "--particles", "4"});
    CHECK(r.out.substr(0, direct.out.size()) == direct.out);

    const auto w = run({"exact", "ring", "--sites", "3", "--particles", "4", "--out", out.string()});
    REQUIRE(w.code == 0);
    CHECK(w.out.empty());
    std::ifstream f(out);
    const std::string written((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    CHECK(written == direct.out);

    CHECK(run({"--spec", temp_file("missing.json").string()}).code == fsep::cli::kExitUsage);
    CHECK(run({"--spec", spec.string(), "gibbs"}).code == fsep::cli::kExitUsage);
    std::filesystem::remove(spec);
    std::filesystem::remove(out);
  }

  TEST_CASE("named checks run from the command line") {
    const auto r = run({"verify", "transfer_identities"});
    CHECK(r.code == fsep::cli::kExitOk);
    CHECK(run({"verify", "no_such_check"}).code == fsep::cli::kExitUsage);
  }
}
