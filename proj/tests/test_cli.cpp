#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "support.hpp"
#include "svcg/io.hpp"

using namespace svcg;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "svcg_cli_tests";
  fs::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string value_of(const std::string& text, const std::string& key) {
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);)
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  return {};
}

}  // namespace

TEST_CASE("bounds prints the closed forms") {
  const Run r = run({"bounds", "--d", "1", "--rho", "1"});
  CHECK(r.code == 0);
  CHECK(value_of(r.out, "poa_bound").rfind("5.828427", 0) == 0);
  CHECK(value_of(r.out, "stretch_bound").rfind("11.65685", 0) == 0);
  CHECK_FALSE(value_of(r.out, "lambda").empty());
  CHECK_FALSE(value_of(r.out, "mu_smooth").empty());
  CHECK_FALSE(value_of(r.out, "alpha").empty());
}

TEST_CASE("bounds rejects rho outside the admissible range") {
  const Run r = run({"bounds", "--d", "1", "--rho", "3"});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("error:", 0) == 0);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  const Run r = run({"verify", scratch("none.json")});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("error:", 0) == 0);
}

TEST_CASE("shapley on the square pair") {
  write_game(testing::square_pair(), scratch("pair.json"));
  write_profile(Profile{{0, 0}}, scratch("pair.profile.json"));
  const Run r = run({"shapley", scratch("pair.json"), scratch("pair.profile.json"), "--exact"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["shares"][0]["share"] == 10.0);
  CHECK(j["shares"][1]["share"] == 17.0);
  CHECK(j["balance"][0]["residual"] == 0.0);

  CHECK(run({"shapley", scratch("pair.json"), scratch("pair.profile.json"), "--sample"}).code == 1);
  const Run s = run({"shapley", scratch("pair.json"), scratch("pair.profile.json"), "--sample",
                     "--mu", "0.1", "--batches", "11", "--seed", "3"});
  REQUIRE(s.code == 0);
  const double est = nlohmann::json::parse(s.out)["shares"][0]["share"].get<double>();
  CHECK(est >= 9.0);
  CHECK(est <= 11.0);
}

TEST_CASE("invalid games are rejected") {
  Game g = testing::square_pair();
  g.players[0].weight = 0.0;
  write_game(g, scratch("bad.json"));
  write_profile(Profile{{0, 0}}, scratch("bad.profile.json"));
  const Run r = run({"verify", scratch("bad.json"), scratch("bad.profile.json"), "--rho", "1"});
  CHECK(r.code == 1);
  CHECK(r.err.find("weight must be positive") != std::string::npos);
}

TEST_CASE("bruteforce then verify") {
  write_game(testing::parallel_links(), scratch("links.json"));
  const Run b = run({"bruteforce", scratch("links.json"), "--objective", "potential", "--out",
                     scratch("links.min.json")});
  REQUIRE(b.code == 0);
  CHECK(value_of(b.out, "choice") == "[0,1]");
  CHECK(value_of(b.out, "value") == "2");
  CHECK(run({"verify", scratch("links.json"), scratch("links.min.json"), "--rho", "1"}).code == 0);

  write_profile(Profile{{0, 0}}, scratch("links.bad.json"));
  const Run v = run({"verify", scratch("links.json"), scratch("links.bad.json"), "--rho", "1"});
  CHECK(v.code == 3);
  CHECK(value_of(v.out, "worst_ratio") == "2");
  CHECK(value_of(v.out, "rho_pne") == "no");
}

TEST_CASE("enumeration cap refusals exit with 2") {
  write_game(testing::parallel_links(), scratch("links.json"));
  CHECK(run({"bruteforce", scratch("links.json"), "--cap", "3"}).code == 2);
  CHECK(run({"metrics", scratch("links.json"), "--rho", "1", "--cap", "3"}).code == 2);
}

TEST_CASE("metrics prints measured values against bounds") {
  write_game(testing::parallel_links(), scratch("links.json"));
  const Run r = run({"metrics", scratch("links.json"), "--rho", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("metric,d,n,measured,bound,margin") == 0);
  CHECK(r.out.find("poa,1,2,1,") != std::string::npos);
}

TEST_CASE("generate requires a seed and is deterministic") {
  CHECK(run({"generate", "--out", scratch("gen.json")}).code == 1);
  REQUIRE(run({"generate", "--out", scratch("gen1.json"), "--seed", "9", "--players", "4"}).code == 0);
  REQUIRE(run({"generate", "--out", scratch("gen2.json"), "--seed", "9", "--players", "4"}).code == 0);
  CHECK(slurp(scratch("gen1.json")) == slurp(scratch("gen2.json")));
  CHECK(read_game(scratch("gen1.json")).num_players() == 4);
  CHECK(run({"generate", "--out", scratch("gen3.json"), "--seed", "9", "--min-weight", "0"}).code == 1);
}

TEST_CASE("solve writes its outputs and verifies at alpha") {
  REQUIRE(run({"generate", "--out", scratch("s.json"), "--seed", "21", "--players", "4", "--degree",
               "2", "--strategies", "3", "--max-size", "2"})
              .code == 0);
  const Run r = run({"solve", scratch("s.json"), "--trace", scratch("s.trace.jsonl")});
  REQUIRE(r.code == 0);
  const std::string alpha = value_of(r.out, "alpha");
  CHECK_FALSE(value_of(r.out, "theta").empty());
  CHECK_FALSE(value_of(r.out, "m").empty());
  CHECK_FALSE(value_of(r.out, "steps").empty());
  CHECK(fs::exists(scratch("s.trace.profile.json")));
  CHECK(slurp(scratch("s.trace.summary.csv")).rfind("phase,steps,potential,social_cost\n", 0) == 0);
  CHECK(run({"verify", scratch("s.json"), scratch("s.trace.profile.json"), "--rho", alpha}).code == 0);
}

TEST_CASE("solve traces are byte-identical across runs") {
  REQUIRE(run({"generate", "--out", scratch("d.json"), "--seed", "4", "--players", "5"}).code == 0);
  for (const std::string method : {"shapley-exact", "shapley-sampled"}) {
    std::vector<std::string> base{"solve", scratch("d.json"), "--method", method, "--seed", "77",
                                  "--mu", "0.3", "--batches", "5"};
    auto a = base, b = base;
    a.insert(a.end(), {"--trace", scratch("d.a.jsonl")});
    b.insert(b.end(), {"--trace", scratch("d.b.jsonl")});
    REQUIRE(run(a).code == 0);
    REQUIRE(run(b).code == 0);
    CHECK(slurp(scratch("d.a.jsonl")) == slurp(scratch("d.b.jsonl")));
    CHECK(slurp(scratch("d.a.summary.csv")) == slurp(scratch("d.b.summary.csv")));
  }
}

TEST_CASE("solve rejects an oversized gamma") {
  write_game(testing::parallel_links(), scratch("links.json"));
  const Run r = run({"solve", scratch("links.json"), "--gamma", "0.5", "--trace", scratch("x.jsonl")});
  CHECK(r.code == 1);
  CHECK(r.err.find("gamma violates stretch constraint") != std::string::npos);
}
