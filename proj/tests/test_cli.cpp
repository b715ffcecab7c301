#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

#include "doctest.h"
#include "support.hpp"

using namespace lpm::test;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static std::atomic<int> counter{0};
    path = fs::temp_directory_path() / ("lpm_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string q(const std::string& s) { return "'" + s + "'"; }

struct Run {
  int status;
  std::string out;
};

Run lpm_cli(const std::string& args, const TempDir& dir) {
  const std::string out = dir / "stdout.txt";
  const std::string cmd = q(LPM_CLI_PATH) + " " + args + " > " + q(out) + " 2>&1";
  const int raw = std::system(cmd.c_str());
  const int status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return {status, read_file(out)};
}

std::string fig2_inputs(const std::string& spec) {
  return "-i " + q(data_path("fig2.csv")) + " --csv-mapping " + q(data_path("fig2_mapping.json")) + " -u " +
         q(data_path(spec));
}

nlohmann::json scores(const std::string& dir) { return nlohmann::json::parse(read_file(dir + "/scores.json")); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("evaluate scores the Fig. 2 model") {
    TempDir d;
    Run r = lpm_cli("evaluate " + fig2_inputs("fig2_cost_sum.json") + " -t 'seq(A,and(loop(B,tau),C))' --json", d);
    REQUIRE(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["score"].get<double>() == 2100);
    CHECK(j["fitting_events"].get<int>() == 9);

    Run pn = lpm_cli("evaluate " + fig2_inputs("fig2_cost_sum.json") + " -m " + q(data_path("fig2a.pnml")) + " --json", d);
    REQUIRE(pn.status == 0);
    CHECK(nlohmann::json::parse(pn.out)["score"].get<double>() == 2100);

    Run guarded = lpm_cli("evaluate " + fig2_inputs("fig2_per_event_min.json") + " -t 'seq(A,and(loop(B,tau),C))' --json", d);
    REQUIRE(guarded.status == 0);
    CHECK(nlohmann::json::parse(guarded.out)["score"].get<double>() == 0);
  }

  TEST_CASE("segment prints the Fig. 2 segmentation") {
    TempDir d;
    Run r = lpm_cli("segment -i " + q(data_path("fig2.csv")) + " --csv-mapping " + q(data_path("fig2_mapping.json")) +
                        " -t 'seq(A,and(loop(B,tau),C))'",
                    d);
    REQUIRE(r.status == 0);
    CHECK(r.out.rfind("trace ", 0) == 0);
  }

  TEST_CASE("discover writes a ranking") {
    TempDir d;
    const std::string out = d / "run";
    Run r = lpm_cli("discover -c " + q(data_path("fig2_run.json")) + " -o " + q(out), d);
    REQUIRE(r.status == 0);
    auto j = scores(out);
    REQUIRE(!j["ranking"].empty());
    // The top model scores at least as much as the Fig. 2(a) model.
    CHECK(j["ranking"][0]["score"].get<double>() >= 2100);
    CHECK(j["ranking"].size() <= 5);
    CHECK(fs::exists(out + "/report.txt"));
    CHECK(fs::exists(out + "/rank_01.dot"));
    CHECK(fs::exists(out + "/rank_01.pnml"));
    for (std::size_t i = 1; i < j["ranking"].size(); ++i)
      CHECK(j["ranking"][i - 1]["score"].get<double>() >= j["ranking"][i]["score"].get<double>());
  }

  TEST_CASE("per-event minimum excludes the Fig. 2 model") {
    TempDir d;
    const std::string out = d / "run";
    Run r = lpm_cli("discover " + fig2_inputs("fig2_per_event_min.json") + " --max-activities 3 --top-k 50 -j 1 -o " +
                        q(out),
                    d);
    REQUIRE(r.status == 0);
    const std::string fig2 = fig2_tree().canonical().to_string();
    for (const auto& e : scores(out)["ranking"]) {
      CHECK(e["tree"].get<std::string>() != fig2);
      CHECK(e["score"].get<double>() > 0);
    }
  }

  TEST_CASE("missing input fails without output") {
    TempDir d;
    const std::string out = d / "run";
    Run r = lpm_cli("discover -i " + q(d / "nope.xes") + " -u " + q(data_path("fig2_cost_sum.json")) + " -o " + q(out), d);
    CHECK(r.status != 0);
    CHECK(r.out.find("error:") != std::string::npos);
    CHECK_FALSE(fs::exists(out));

    Run bad_spec = lpm_cli("discover " + fig2_inputs("fig2_mapping.json") + " -o " + q(out), d);
    CHECK(bad_spec.status != 0);
    CHECK_FALSE(fs::exists(out));
  }

  TEST_CASE("reports are reproducible") {
    TempDir d;
    const std::string a = d / "a", b = d / "b";
    REQUIRE(lpm_cli("discover -c " + q(data_path("fig2_run.json")) + " -o " + q(a), d).status == 0);
    REQUIRE(lpm_cli("discover -c " + q(data_path("fig2_run.json")) + " -j 3 -o " + q(b), d).status == 0);
    CHECK(read_file(a + "/scores.json") == read_file(b + "/scores.json") );
    CHECK(read_file(a + "/report.txt") == read_file(b + "/report.txt"));
  }

  TEST_CASE("gen-synthetic is deterministic") {
    TempDir d;
    for (const char* ext : {".xes", ".csv"}) {
      const std::string a = d / (std::string("a") + ext), b = d / (std::string("b") + ext);
      const std::string args = " -p 'seq(A,and(B,C))' -n 20 -s 9 -o ";
      REQUIRE(lpm_cli("gen-synthetic" + args + q(a), d).status == 0);
      REQUIRE(lpm_cli("gen-synthetic" + args + q(b), d).status == 0);
      CHECK(read_file(a) == read_file(b));
    }
  }

  TEST_CASE("export converts models") {
    TempDir d;
    Run r = lpm_cli("export -t 'seq(A,B)' --dot " + q(d / "m.dot") + " --pnml " + q(d / "m.pnml"), d);
    REQUIRE(r.status == 0);
    CHECK(read_file(d / "m.dot").find("digraph") != std::string::npos);
    Run back = lpm_cli("evaluate " + fig2_inputs("fig2_cost_sum.json") + " -m " + q(d / "m.pnml") + " --json", d);
    REQUIRE(back.status == 0);
  }
}
