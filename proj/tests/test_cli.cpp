// simplexpow
// Copyright 2026 simplexpow contributors
// Licensed under Apache 2.0

#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + SIMPLEXPOW_CLI_PATH + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string sample(const char* name) { return std::string(SIMPLEXPOW_SAMPLES_DIR) + "/" + name; }

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i; (i = s.find('\n', start)) != std::string::npos; start = i + 1) out.push_back(s.substr(start, i - start));
  return out;
}

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "simplexpow_test_cli";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("prob analytic rows", "[cli]") {
  const Run r = run("prob --analytic --n-list 2,8,64");
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 5);
  CHECK(l[0] == "# schema=1");
  CHECK(l[1] == "n,p_case3a,lower_bound");
  CHECK(l[2].rfind("2,0.3541", 0) == 0);
  CHECK(l[3].rfind("8,0.8242", 0) == 0);
  CHECK(l[4].rfind("64,0.9999", 0) == 0);
  const Run j = run("prob --analytic --n-list 4 --format json");
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc.at("schema") == 1);
  CHECK(doc.at("rows").at(0).at("n") == 4);
}

TEST_CASE("solve the example instance", "[cli]") {
  const Run r = run("solve --model P --instance " + sample("ex.json"));
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("status") == "optimal");
  CHECK(std::abs(doc.at("objective").get<double>() + 1.25) <= 1e-6);
  const Run non = run("solve --model NON --instance " + sample("ex.json"));
  REQUIRE(non.code == 0);
  CHECK(std::abs(nlohmann::json::parse(non.out).at("objective").get<double>() + 1.0) <= 1e-9);
  const Run o = run("oracle --instance " + sample("ex.json"));
  REQUIRE(o.code == 0);
  CHECK(nlohmann::json::parse(o.out).at("x").at(0) == 1.0);
}

TEST_CASE("verify passes", "[cli]") {
  const Run r = run("verify");
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("passed") == true);
  CHECK(doc.at("checks").size() >= 9);
}

TEST_CASE("usage errors exit 2", "[cli]") {
  CHECK(run("solve --model BOGUS --instance " + sample("ex.json")).code == 2);
  CHECK(run("solve --model PRS --instance " + sample("polytope.json")).code == 2);
  CHECK(run("solve --model P --instance /nonexistent.json").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("prob --analytic").code == 2);
  CHECK(run("prob --analytic --simulate --n-list 2").code == 2);
  CHECK(run("audit --conjecture 3").code == 2);
  CHECK(run("verify", "SIMPLEXPOW_JOBS=zero").code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("solve output round trips through membership", "[cli]") {
  for (const char* model : {"P", "PR", "PRs", "PRs3", "PRS", "PRV", "PRSV", "NON"}) {
    const Run r = run(std::string("solve --model ") + model + " --instance " + sample("simplex_n3.json"));
    REQUIRE(r.code == 0);
    const auto path = temp_file(std::string("solve_") + model + ".json");
    std::ofstream(path) << r.out;
    const Run m = run(std::string("membership --model ") + model + " --point " + path.string());
    INFO(model);
    CHECK(m.code == 0);
    CHECK(nlohmann::json::parse(m.out).at("member") == true);
  }
}

TEST_CASE("membership verdicts", "[cli]") {
  CHECK(run("membership --model P --point " + sample("point.json")).code == 0);
  const Run r = run("membership --model PR --point " + sample("point.json"));
  CHECK(r.code == 1);
  CHECK(nlohmann::json::parse(r.out).at("member") == false);
}

TEST_CASE("seeded output is reproducible", "[cli]") {
  const std::string args = "prob --simulate --dist normal --kappa 1.5,2 --n 3,5 --samples 5000 --seed 42";
  const Run a = run(args), b = run(args), c = run(args + " --jobs 3");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  const auto l = lines(a.out);
  REQUIRE(l.size() == 6);
  CHECK(l[1] == "kappa,n,estimate,stderr,samples");
  CHECK(run("prob --simulate --dist normal --kappa 1.5,2 --n 3,5 --samples 5000 --seed 43").out != a.out);

  const auto d1 = temp_file("exp1"), d2 = temp_file("exp2");
  const std::string cfg = "experiment --config " + sample("experiment_small.json");
  const Run e1 = run(cfg + " --output " + d1.string());
  const Run e2 = run(cfg + " --output " + d2.string(), "SIMPLEXPOW_JOBS=2");
  REQUIRE(e1.code == 0);
  CHECK(e1.out == e2.out);
  for (const char* f : {"instances.csv", "aggregate.csv", "summary.csv"}) {
    std::ifstream f1(d1 / f), f2(d2 / f);
    const std::string s1((std::istreambuf_iterator<char>(f1)), {}), s2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(!s1.empty());
    CHECK(s1 == s2);
  }
}

TEST_CASE("bounds and reductions", "[cli]") {
  const Run b = run("bounds --n 4 --kappa 2 --format json");
  REQUIRE(b.code == 0);
  const auto row = nlohmann::json::parse(b.out).at("rows").at(0);
  CHECK(row.at("distance_ub") == 0.75);
  CHECK(std::abs(row.at("witness_distance").get<double>() - 0.75) <= 1e-6);
  CHECK(row.at("objective_gap_factor") == 0.25);
  const Run r = run("reduce-subset-sum --a 3,5,7 --b 10");
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("subset_sum_feasible") == true);
  CHECK(doc.at("q_optimum_is_zero") == true);
  CHECK(doc.at("instance").at("ground").at("type") == "polytope");
  CHECK(nlohmann::json::parse(run("reduce-subset-sum --a 3,5,7 --b 4").out).at("subset_sum_feasible") == false);
  CHECK(run("reduce-subset-sum --a 3,-5 --b 4").code == 2);
}

TEST_CASE("audit subcommand", "[cli]") {
  const Run r = run("audit --conjecture 1 --n-list 2,3 --reps 5 --format csv");
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 4);
  CHECK(l[1] == "check,kappa,n,instances,max_violation,violations,failed");
  CHECK(l[2].rfind("conjecture1,2,2,10,", 0) == 0);
  CHECK(run("audit --conjecture 1 --kappa-list 3").code == 2);
}
