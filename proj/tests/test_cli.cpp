// Copyright 2026 The permrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// End-to-end checks of the command-line tool. The binary path arrives via the
// PERMRL_BIN environment variable (set by the test harness).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "permrl/io.hpp"
#include "testutil.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

const char* bin() {
  const char* b = std::getenv("PERMRL_BIN");
  REQUIRE_MESSAGE(b != nullptr, "PERMRL_BIN must point at the permrl binary");
  return b;
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("permrl_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file: ", p.string());
  std::ostringstream oss;
  oss << in.rdbuf();
  return oss.str();
}

RunResult run(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd =
      std::string(bin()) + " " + args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

}  // namespace

TEST_CASE("pipeline produces the documented artifacts and counts") {
  const fs::path dir = fresh_dir("pipeline");
  const fs::path outdir = dir / "run";
  const RunResult r = run("pipeline --scenario example1 --n 3 --gamma 0.9 --seed 7 --outdir " +
                              outdir.string(),
                          dir);
  CAPTURE(r.err);
  REQUIRE(r.exit_code == 0);
  for (const char* name : {"game.json", "spec.txt", "permissive.json", "ghat.json",
                           "statemap.json", "q.csv", "v.csv", "convergence.csv",
                           "greedy_ghat.json", "greedy.json", "summary.json"}) {
    CAPTURE(name);
    CHECK(fs::exists(outdir / name));
  }
  const json summary = json::parse(slurp(outdir / "summary.json"));
  CHECK(summary["sizes"]["restricted"]["states"] == 120);
  CHECK(summary["sizes"]["restricted"]["system_states"] == 72);
  CHECK(summary["learning"]["converged"] == true);
  CHECK(summary["seed"] == 7);
  // CSV headers.
  CHECK(slurp(outdir / "convergence.csv").rfind("iteration,max_delta_v\n", 0) == 0);
  CHECK(slurp(outdir / "q.csv").rfind("state,action,q\n", 0) == 0);
  CHECK(slurp(outdir / "v.csv").rfind("state,v\n", 0) == 0);
}

TEST_CASE("same seed gives byte-identical artifacts") {
  const fs::path dir = fresh_dir("determinism");
  const fs::path a = dir / "a";
  const fs::path b = dir / "b";
  REQUIRE(run("pipeline --scenario example1 --n 3 --seed 21 --outdir " + a.string(), dir)
              .exit_code == 0);
  REQUIRE(run("pipeline --scenario example1 --n 3 --seed 21 --outdir " + b.string(), dir)
              .exit_code == 0);
  for (const char* name : {"game.json", "spec.txt", "permissive.json", "ghat.json",
                           "statemap.json", "q.csv", "v.csv", "convergence.csv",
                           "greedy_ghat.json", "greedy.json"}) {
    CAPTURE(name);
    CHECK(slurp(a / name) == slurp(b / name));
  }
  // summary.json matches except for wall-clock timings.
  json sa = json::parse(slurp(a / "summary.json"));
  json sb = json::parse(slurp(b / "summary.json"));
  sa.erase("timing");
  sb.erase("timing");
  CHECK(sa == sb);
}

TEST_CASE("different seeds change the learning trajectory") {
  const fs::path dir = fresh_dir("seeds");
  const fs::path a = dir / "a";
  const fs::path b = dir / "b";
  REQUIRE(run("pipeline --scenario example1 --n 3 --seed 1 --outdir " + a.string(), dir)
              .exit_code == 0);
  REQUIRE(run("pipeline --scenario example1 --n 3 --seed 2 --outdir " + b.string(), dir)
              .exit_code == 0);
  CHECK(slurp(a / "convergence.csv") != slurp(b / "convergence.csv"));
  // The synthesized envelope is seed-independent.
  CHECK(slurp(a / "ghat.json") == slurp(b / "ghat.json"));
}

TEST_CASE("unrealizable objectives exit with code 2") {
  const fs::path dir = fresh_dir("unrealizable");
  const RunResult r = run("pipeline --scenario example3 --n 3 --counter-max 1 --outdir " +
                              (dir / "out").string(),
                          dir);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("unrealizable") != std::string::npos);
}

TEST_CASE("malformed inputs exit with code 3") {
  const fs::path dir = fresh_dir("malformed");
  SUBCASE("broken game json") {
    std::ofstream(dir / "bad.json") << "{\"states\": [";
    const RunResult r = run("synth --game " + (dir / "bad.json").string() + " --spec " +
                                (dir / "nospec.txt").string() + " --out " +
                                (dir / "mu.json").string(),
                            dir);
    CHECK(r.exit_code == 3);
  }
  SUBCASE("unknown scenario") {
    const RunResult r =
        run("build --scenario example9 --out " + (dir / "g.json").string(), dir);
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("example9") != std::string::npos);
  }
  SUBCASE("spec referencing unknown propositions") {
    REQUIRE(run("build --scenario example1 --n 3 --out " + (dir / "g.json").string(), dir)
                .exit_code == 0);
    std::ofstream(dir / "s.txt") << "phi0: nonexistent\nphi1: nonexistent\n";
    const RunResult r = run("synth --game " + (dir / "g.json").string() + " --spec " +
                                (dir / "s.txt").string() + " --out " + (dir / "mu.json").string(),
                            dir);
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("nonexistent") != std::string::npos);
  }
  SUBCASE("strategy not fitting the game") {
    REQUIRE(run("build --scenario example1 --n 3 --out " + (dir / "g.json").string(), dir)
                .exit_code == 0);
    std::ofstream(dir / "mu.json")
        << R"({"type":"memoryless","allowed":{"99999":[0]}})";
    const RunResult r = run("restrict --game " + (dir / "g.json").string() + " --strategy " +
                                (dir / "mu.json").string() + " --out " + (dir / "gh.json").string() +
                                " --map-out " + (dir / "map.json").string(),
                            dir);
    CHECK(r.exit_code == 3);
  }
}

TEST_CASE("stage-by-stage run matches the pipeline summary") {
  const fs::path dir = fresh_dir("stages");
  REQUIRE(run("build --scenario example1 --n 3 --out " + (dir / "g.json").string() +
                  " --spec-out " + (dir / "s.txt").string(),
              dir)
              .exit_code == 0);
  const RunResult synth = run("synth --game " + (dir / "g.json").string() + " --spec " +
                                  (dir / "s.txt").string() + " --out " + (dir / "mu.json").string(),
                              dir);
  REQUIRE(synth.exit_code == 0);
  CHECK(synth.out.find("winning region: 120") != std::string::npos);
  const RunResult restr = run("restrict --game " + (dir / "g.json").string() + " --strategy " +
                                  (dir / "mu.json").string() + " --out " + (dir / "gh.json").string() +
                                  " --map-out " + (dir / "map.json").string(),
                              dir);
  REQUIRE(restr.exit_code == 0);
  CHECK(restr.out.find("120 states (72 system)") != std::string::npos);
  const RunResult learn = run("learn --game " + (dir / "gh.json").string() + " --seed 7 --q-out " +
                                  (dir / "q.csv").string() + " --v-out " + (dir / "v.csv").string() +
                                  " --log-out " + (dir / "c.csv").string() + " --strategy-out " +
                                  (dir / "greedy.json").string(),
                              dir);
  REQUIRE(learn.exit_code == 0);
  CHECK(learn.out.find("converged") != std::string::npos);
  const RunResult eval = run("eval --game " + (dir / "gh.json").string() + " --strategy " +
                                 (dir / "greedy.json").string() + " --out " +
                                 (dir / "bounds.csv").string(),
                             dir);
  REQUIRE(eval.exit_code == 0);
  CHECK(slurp(dir / "bounds.csv").rfind("state,lower,upper\n", 0) == 0);
}

TEST_CASE("verify reports winning and maximality") {
  const fs::path dir = fresh_dir("verify");
  // A two-state game small enough for exhaustive strategy enumeration.
  permrl::save_game_file((dir / "g.json").string(), permrl::testutil::switch_game());
  std::ofstream(dir / "s.txt") << "phi0: true\nphi1: true\n";
  REQUIRE(run("synth --game " + (dir / "g.json").string() + " --spec " + (dir / "s.txt").string() +
                  " --out " + (dir / "mu.json").string(),
              dir)
              .exit_code == 0);
  const RunResult r = run("verify --game " + (dir / "g.json").string() + " --spec " +
                              (dir / "s.txt").string() + " --strategy " +
                              (dir / "mu.json").string() + " --maximal --limit 1000",
                          dir);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("winning: yes") != std::string::npos);
  CHECK(r.out.find("maximal: yes") != std::string::npos);
}

TEST_CASE("verify skips maximality when enumeration would blow up") {
  const fs::path dir = fresh_dir("verify_limit");
  REQUIRE(run("build --scenario example1 --n 2 --out " + (dir / "g.json").string() +
                  " --spec-out " + (dir / "s.txt").string(),
              dir)
              .exit_code == 0);
  REQUIRE(run("synth --game " + (dir / "g.json").string() + " --spec " + (dir / "s.txt").string() +
                  " --out " + (dir / "mu.json").string(),
              dir)
              .exit_code == 0);
  const RunResult r = run("verify --game " + (dir / "g.json").string() + " --spec " +
                              (dir / "s.txt").string() + " --strategy " +
                              (dir / "mu.json").string() + " --maximal --limit 1000",
                          dir);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("winning: yes") != std::string::npos);
  CHECK(r.out.find("maximal: skipped") != std::string::npos);
}

TEST_CASE("config file drives the pipeline and flags override it") {
  const fs::path dir = fresh_dir("config");
  std::ofstream(dir / "cfg.json") << R"({
    "scenario": "example1", "n": 3, "seed": 5,
    "outdir": ")" << (dir / "from_config").string()
                                  << R"(" })";
  REQUIRE(run("pipeline --config " + (dir / "cfg.json").string(), dir).exit_code == 0);
  const json s1 = json::parse(slurp(dir / "from_config" / "summary.json"));
  CHECK(s1["n"] == 3);
  CHECK(s1["seed"] == 5);

  REQUIRE(run("pipeline --config " + (dir / "cfg.json").string() + " --seed 9 --outdir " +
                  (dir / "override").string(),
              dir)
              .exit_code == 0);
  const json s2 = json::parse(slurp(dir / "override" / "summary.json"));
  CHECK(s2["n"] == 3);     // from the config file
  CHECK(s2["seed"] == 9);  // flag wins

  std::ofstream(dir / "bad.json") << R"({"scenario": "example1", "typo_key": 1})";
  CHECK(run("pipeline --config " + (dir / "bad.json").string(), dir).exit_code == 3);
}

TEST_CASE("example2 build emits the game and the LTL text") {
  const fs::path dir = fresh_dir("example2");
  const RunResult r = run("build --scenario example2 --n 3 --out " + (dir / "g.json").string() +
                              " --ltl-out " + (dir / "obj.txt").string(),
                          dir);
  REQUIRE(r.exit_code == 0);
  const std::string ltl = slurp(dir / "obj.txt");
  CHECK(ltl.find("G F") != std::string::npos);
  // The safety pipeline refuses example2 (its objective leaves the fragment).
  const RunResult p = run("pipeline --scenario example2 --n 3 --outdir " +
                              (dir / "out").string(),
                          dir);
  CHECK(p.exit_code == 3);
}

TEST_CASE("multi-seed pipeline writes per-seed directories") {
  const fs::path dir = fresh_dir("multiseed");
  const fs::path outdir = dir / "out";
  const RunResult r = run("pipeline --scenario example1 --n 3 --seeds 3,4 --jobs 2 --outdir " +
                              outdir.string(),
                          dir);
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(outdir / "seed_3" / "summary.json"));
  CHECK(fs::exists(outdir / "seed_4" / "summary.json"));
  const json top = json::parse(slurp(outdir / "summary.json"));
  CHECK(top["runs"].size() == 2);
  // Single-seed rerun of one member matches its artifacts byte for byte.
  const fs::path solo = dir / "solo";
  REQUIRE(run("pipeline --scenario example1 --n 3 --seed 3 --outdir " + solo.string(), dir)
              .exit_code == 0);
  CHECK(slurp(solo / "q.csv") == slurp(outdir / "seed_3" / "q.csv"));
  CHECK(slurp(solo / "convergence.csv") == slurp(outdir / "seed_3" / "convergence.csv"));
}
