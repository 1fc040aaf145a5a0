#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <map>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = mspe::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return support::fixture_path(name); }

std::string temp_file(const std::string& name, const std::string& text) {
  const std::string path = (std::filesystem::temp_directory_path() / ("mspe-test-" + name)).string();
  std::ofstream(path) << text;
  return path;
}

oracle::Q as_q(const nlohmann::json& v) { return oracle::Q(v.get<std::string>()); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("info matches the expected outputs") {
    Result json = run({"info", fixture("diamond.mspe"), "--output", "json"});
    CHECK(json.code == 0);
    CHECK(json.out == support::read_fixture("expected/diamond.info.json"));
    Result text = run({"info", fixture("backbutton3.bb")});
    CHECK(text.code == 0);
    CHECK(text.out == support::read_fixture("expected/backbutton3.info.txt"));
  }

  TEST_CASE("convert matches the expected outputs") {
    Result bb = run({"convert", fixture("backbutton3.bb"), "mspe"});
    CHECK(bb.code == 0);
    CHECK(bb.out == support::read_fixture("expected/backbutton3.bb.mspe"));
    Result quad = run({"convert", fixture("cubic.mspe"), "quadratize"});
    CHECK(quad.code == 0);
    CHECK(quad.out == support::read_fixture("expected/cubic.quadratize.mspe"));
    Result clean = run({"convert", fixture("unclean.mspe"), "clean"});
    CHECK(clean.code == 0);
    CHECK(clean.out == support::read_fixture("expected/unclean.clean.mspe"));
  }

  TEST_CASE("certify text output") {
    Result r = run({"certify", fixture("backbutton3.mspe"), "--iterations", "14", "--prove-below-one", "--output",
                    "text"});
    CHECK(r.code == 0);
    CHECK(r.out == support::read_fixture("expected/backbutton3.certify.txt"));
  }

  TEST_CASE("certify json output") {
    Result r = run({"certify", fixture("backbutton3.mspe"), "--iterations", "14", "--method", "scc",
                    "--prove-below-one"});
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["bits"].get<int>() >= 8);
    CHECK(doc["below_one_verdict"] == "YES");
    CHECK(doc["threshold"]["method"] == "scc_general");
    CHECK(doc["threshold"]["cmin"] == "3/10");
  }

  TEST_CASE("exit codes") {
    const std::string bad = temp_file("negative.mspe", "X = -1;");
    CHECK(run({"info", bad}).code == mspe::cli::parse_error);
    const std::string undefined = temp_file("undefined.mspe", "X = Y;");
    CHECK(run({"solve", undefined}).code == mspe::cli::parse_error);
    CHECK(run({"certify", fixture("backbutton3.mspe"), "--iterations", "5", "--method", "scc"}).code ==
          mspe::cli::not_certifiable);
    CHECK(run({"certify", fixture("chain2.mspe")}).code == mspe::cli::not_certifiable);
    CHECK(run({"bogus"}).code == mspe::cli::usage);
    CHECK(run({}).code == mspe::cli::usage);
    CHECK(run({"solve", fixture("halfsquare.mspe"), "--scheme", "simplex"}).code == mspe::cli::usage);
    const std::string infeasible = temp_file("infeasible.mspe", "X = X*X + 1;");
    CHECK(run({"solve", infeasible}).code == mspe::cli::infeasible);
    CHECK(run({"solve", infeasible, "--mode", "float"}).code == mspe::cli::infeasible);
    CHECK(run({"info", fixture("missing.mspe")}).code != 0);
    for (const char* name : {"negative.mspe", "undefined.mspe", "infeasible.mspe"}) {
      std::filesystem::remove(std::filesystem::temp_directory_path() / (std::string("mspe-test-") + name));
    }
  }

  TEST_CASE("dnm reports per-SCC steps") {
    Result r = run({"solve", fixture("chain2.mspe"), "--scheme", "dnm", "-j", "2", "--output", "json"});
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["steps"] == 6);
    CHECK(doc["iterate"]["X2"] == "15/16");
    std::map<int, int> by_depth;
    for (const auto& s : doc["per_scc_steps"]) by_depth[s["depth"].get<int>()] = s["steps"].get<int>();
    CHECK(by_depth == std::map<int, int>{{0, 2}, {1, 4}});
  }

  TEST_CASE("newton dominates kleene on the command line") {
    for (int k = 1; k <= 8; ++k) {
      Result kl = run({"solve", fixture("backbutton3.mspe"), "--scheme", "kleene", "--max-iterations",
                       std::to_string(k), "--output", "json"});
      Result nw = run({"solve", fixture("backbutton3.mspe"), "--scheme", "newton", "--max-iterations",
                       std::to_string(k), "--output", "json"});
      REQUIRE(kl.code == 0);
      REQUIRE(nw.code == 0);
      auto a = nlohmann::json::parse(kl.out)["iterate"];
      auto b = nlohmann::json::parse(nw.out)["iterate"];
      for (const char* v : {"X1", "X2", "X3"}) CHECK(as_q(a[v]) <= as_q(b[v]));
    }
  }

  TEST_CASE("kleene output matches the oracle") {
    Result r = run({"solve", fixture("halfsquare.mspe"), "--scheme", "kleene", "--max-iterations", "3", "--output",
                    "json"});
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(as_q(doc["iterate"]["X"]) == oracle::kleene(support::load("halfsquare.mspe"), 3)[0]);
  }

  TEST_CASE("generate is deterministic") {
    Result a = run({"generate", "--states", "2", "--symbols", "2", "--seed", "3"});
    Result b = run({"generate", "--states", "2", "--symbols", "2", "--seed", "3"});
    Result c = run({"generate", "--states", "2", "--symbols", "2", "--seed", "4"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
    CHECK(a.out.rfind("#@origin", 0) == 0);
    Result p = run({"generate", "--seed", "3", "--format", "ppda"});
    CHECK(p.code == 0);
    CHECK(p.out.find("rule ") != std::string::npos);
  }
}
