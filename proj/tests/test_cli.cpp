#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "doctest.h"

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(MPCMP_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("compare subcommand") {
  auto r = run_cli("compare --inputs 10,9 --bits 4 --seed 5");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "verdict=first>second"));
  CHECK(contains(r.output, "seed=5"));

  auto lt = run_cli("compare --inputs 9,10 --bits 4 --seed 5");
  CHECK(contains(lt.output, "verdict=not-greater"));
}

TEST_CASE("circuit subcommands") {
  CHECK(contains(run_cli("max --inputs 3,9,4,1 --bits 4 --seed 2").output, "max=9"));
  CHECK(contains(run_cli("min --inputs 3,9,4 --bits 4 --seed 2").output, "min=3"));
  auto auction = run_cli("auction --inputs 3,9,4,1 --bits 4 --seed 2");
  CHECK(contains(auction.output, "winner=2 bid=9"));
  CHECK(contains(run_cli("median --inputs 5,1,9 --bits 4 --seed 2").output, "median=5"));
  CHECK(contains(run_cli("rank --inputs 5,1,9 --rank-t 0 --bits 4 --seed 2").output, "value=9"));
  CHECK(contains(run_cli("minimax --groups '3,7;5,6' --bits 4 --n 4 --seed 2").output,
                 "value=5 group=2"));
  auto outliers = run_cli("outliers --inputs 1,5,9 --bits 4 --n 4 --seed 2");
  CHECK(contains(outliers.output, "distances=16,0,16"));
  CHECK(contains(run_cli("median --inputs 7,7,2 --bits 4 --tie-safe --seed 2").output,
                 "median=7"));
  CHECK(contains(run_cli("sci --inputs 5,2 --bits 4 --seed 2").output, "indicator=0"));
}

TEST_CASE("constraint violations get specific diagnostics") {
  auto range = run_cli("compare --inputs 17,3 --bits 4");
  CHECK(range.exit_code == 2);
  CHECK(contains(range.output, "out of range"));

  auto threshold = run_cli("compare --inputs 1,2 --bits 4 --n 4 --t 2");
  CHECK(threshold.exit_code == 2);
  CHECK(contains(threshold.output, "n >= 2t+1"));

  auto composite = run_cli("compare --inputs 1,2 --bits 4 --q 10");
  CHECK(composite.exit_code == 2);
  CHECK(contains(composite.output, "not prime"));

  auto capacity = run_cli("compare --inputs 1,2 --bits 4 --q 17");
  CHECK(capacity.exit_code == 2);
  CHECK(contains(capacity.output, "2^(L+2) < q"));
}

TEST_CASE("seed resolution order") {
  auto env = run_cli("MPCMP_SEED=31 " + std::string());  // placeholder, real env set below
  (void)env;
  CliResult from_env = [] {
    const std::string cmd = "MPCMP_SEED=31 " + std::string(MPCMP_CLI_PATH) +
                            " compare --inputs 10,9 --bits 4 2>&1";
    std::array<char, 4096> buf{};
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
    r.exit_code = WIFEXITED(pclose(pipe)) ? 0 : -1;
    return r;
  }();
  CHECK(contains(from_env.output, "seed=31"));

  CliResult override_env = [] {
    const std::string cmd = "MPCMP_SEED=31 " + std::string(MPCMP_CLI_PATH) +
                            " compare --inputs 10,9 --bits 4 --seed 77 2>&1";
    std::array<char, 4096> buf{};
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
    r.exit_code = WIFEXITED(pclose(pipe)) ? 0 : -1;
    return r;
  }();
  CHECK(contains(override_env.output, "seed=77"));
}

TEST_CASE("config file supplies defaults") {
  const std::string cfg_path = "/tmp/mpcmp_test_cli_config";
  {
    FILE* f = fopen(cfg_path.c_str(), "w");
    REQUIRE(f != nullptr);
    fputs("n=5 t=2 bits=4\nseed=12\n", f);
    fclose(f);
  }
  auto r = run_cli("compare --inputs 10,9 --config " + cfg_path);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "verdict=first>second"));
  CHECK(contains(r.output, "seed=12"));
  std::remove(cfg_path.c_str());
}

TEST_CASE("transcripts replay through the cli") {
  const std::string path = "/tmp/mpcmp_test_cli_transcript";
  auto run = run_cli("compare --inputs 12,3 --bits 4 --seed 9 --transcript " + path);
  CHECK(run.exit_code == 0);
  auto replay = run_cli("replay --transcript " + path);
  CHECK(replay.exit_code == 0);
  CHECK(contains(replay.output, "replay=identical"));
  std::remove(path.c_str());
}

TEST_CASE("tcp transport via the cli") {
  auto r = run_cli("compare --inputs 10,9 --bits 4 --seed 5 --transport tcp --port 22410");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "verdict=first>second"));
}

TEST_CASE("audit subcommands") {
  auto shares = run_cli("audit shares --q 11 --n 3 --t 1");
  CHECK(shares.exit_code == 0);
  CHECK(contains(shares.output, "PASS"));

  auto views = run_cli("audit views --samples 3000 --threshold 0.12 --seed 4");
  CHECK(views.exit_code == 0);

  auto complexity = run_cli("audit complexity --lmin 3 --lmax 4 --kmin 2 --kmax 3");
  CHECK(complexity.exit_code == 0);
  CHECK(contains(complexity.output, "PASS"));
}

TEST_CASE("unknown subcommand fails") {
  auto r = run_cli("frobnicate");
  CHECK(r.exit_code != 0);
}
