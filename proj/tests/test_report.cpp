#include "harmomorph/cli.hpp"
#include "harmomorph/report.hpp"

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

using namespace harmomorph;

namespace {

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("harmomorph_report_" + name);
}

void write(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "harmomorph");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<ConfigIssue> issues_of(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

const char* kDiagonalFiber = R"({
  "seed": 5,
  "jobs": [
    {"kind": "fiber", "space": "flat-complex", "n": 3, "count": 10, "alpha": [%ALPHA%, 0],
     "pair": {"n": 3, "d": 1,
              "A": [[1,0],[0,0],[0,0],[0,0],[2,0],[0,0],[0,0],[0,0],[3,0]],
              "B": [[1,0],[0,0],[0,0],[0,0],[1,0],[0,0],[0,0],[0,0],[1,0]]}}
  ]
})";

std::string diagonal_fiber(const std::string& alpha) {
  std::string s = kDiagonalFiber;
  s.replace(s.find("%ALPHA%"), 7, alpha);
  return s;
}

} // namespace

TEST_CASE("config parsing fills defaults and derives job seeds") {
  const RunConfig c = parse_config(R"({"seed": 3, "jobs": [
    {"kind": "eigenfamily", "space": "sphere-complex:n=2"},
    {"kind": "morphism", "space": "pseudosphere-quaternionic", "n": 4, "points": 7, "seed": 11}
  ]})");
  REQUIRE(c.jobs.size() == 2);
  CHECK(c.seed == 3);
  CHECK(c.jobs[0].n == 2);
  CHECK(c.jobs[0].space == "sphere-complex");
  CHECK(c.jobs[0].points == 100);
  CHECK(c.jobs[0].line == 2);
  CHECK(c.jobs[1].line == 3);
  CHECK(c.jobs[1].points == 7);
  CHECK(c.jobs[1].seed == 11);
  CHECK(c.jobs[0].seed != c.jobs[1].seed);
  CHECK(c.jobs[0].name.find("sphere-complex") != std::string::npos);
  CHECK(c.config_hash.size() == 16);
  CHECK(parse_config(R"({"jobs":[{"kind":"eigenfamily","space":"sphere-complex:n=2"}],"seed":3})").jobs[0].seed ==
        parse_config(R"({"seed":3,"jobs":[{"kind":"eigenfamily","space":"sphere-complex:n=2"}]})").jobs[0].seed);
}

TEST_CASE("config errors carry lines and are collected together") {
  const auto syntax = issues_of("{\n  \"seed\": 1,\n  \"jobs\": [\n    {\"kind\": }\n  ]\n}");
  REQUIRE(syntax.size() == 1);
  CHECK(syntax[0].line == 4);

  const auto missing_seed = issues_of(R"({"jobs": [{"kind": "eigenfamily", "space": "flat-complex", "n": 2}]})");
  REQUIRE(missing_seed.size() == 1);
  CHECK(missing_seed[0].reason.find("seed") != std::string::npos);

  const auto many = issues_of(R"({
  "seed": 1,
  "jobs": [
    {"kind": "eigenfamily", "space": "flat-complex", "n": 2},
    {"kind": "fiber", "space": "klein-bottle", "n": 2},
    {"kind": "holomorphy", "space": "flat-complex", "n": 2},
    {"kind": "morphism", "space": "sphere-complex", "n": 3, "bogus": 1},
    {"kind": "morphism", "space": "sphere-quaternionic", "n": 3}
  ]
})");
  REQUIRE(many.size() == 4);
  CHECK(many[0].line == 5);
  CHECK(many[1].line == 6);
  CHECK(many[2].line == 7);
  CHECK(many[2].reason.find("bogus") != std::string::npos);
  CHECK(many[3].line == 8);

  CHECK(issues_of(R"({"seed": -1, "jobs": [{"kind": "eigenfamily", "space": "flat-complex", "n": 2}]})").size() == 1);
  CHECK(issues_of(R"({"seed": 1, "jobs": []})").size() == 1);
  CHECK(issues_of(R"({"seed": 1, "extra": 0, "jobs": [{"kind": "eigenfamily", "space": "flat-complex", "n": 2}]})")
            .size() == 1);
}

TEST_CASE("pair validation at parse time") {
  const std::string singular = R"({"seed": 1, "jobs": [{"kind": "morphism", "space": "flat-complex", "n": 2,
    "pair": {"n": 2, "A": [[1,0],[0,0],[0,0],[1,0]], "B": [[1,0],[2,0],[2,0],[4,0]]}}]})";
  const auto s = issues_of(singular);
  REQUIRE(s.size() == 1);
  CHECK(s[0].reason.find("SingularB") != std::string::npos);
  const std::string wrong_size = R"({"seed": 1, "jobs": [{"kind": "morphism", "space": "flat-complex", "n": 3,
    "pair": {"n": 2, "A": [[1,0],[0,0],[0,0],[1,0]], "B": [[1,0],[0,0],[0,0],[2,0]]}}]})";
  CHECK(issues_of(wrong_size).size() == 1);
  const std::string short_list = R"({"seed": 1, "jobs": [{"kind": "morphism", "space": "flat-complex", "n": 2,
    "pair": {"n": 2, "A": [[1,0],[0,0],[0,0]], "B": [[1,0],[0,0],[0,0],[2,0]]}}]})";
  CHECK(issues_of(short_list).size() == 1);
}

TEST_CASE("coefficient pairs round trip through JSON") {
  Rng rng = make_rng(4);
  const CoefficientPair pair = random_pair(3, 2, rng);
  const nlohmann::json j = pair_to_json(pair);
  CHECK(j["n"] == 3);
  CHECK(j["d"] == 2);
  CHECK(j["A"].size() == 9);
  CHECK(j["A"][1][0].get<double>() == pair.A(0, 1).real());
  const CoefficientPair back = pair_from_json(j);
  CHECK(back.A == pair.A);
  CHECK(back.B == pair.B);
  CHECK(back.d == 2);
  CHECK(pair_from_json(nlohmann::json::parse(j.dump())).A == pair.A);
  CHECK_THROWS_AS((void)pair_from_json({{"n", 2}, {"A", j["A"]}, {"B", j["B"]}}), Error);
}

TEST_CASE("an eigenfamily job passes") {
  const Report r = run(parse_config(R"({"seed": 9, "jobs": [{"kind": "eigenfamily", "space": "sphere-complex", "n": 2}]})"));
  REQUIRE(r.jobs.size() == 1);
  CHECK(r.jobs[0].verdict == Verdict::Pass);
  CHECK(r.exit_code() == 0);
  for (const auto& [name, value] : r.jobs[0].residuals) {
    if (name == "tau" || name == "kappa") CHECK(value <= 1e-8);
  }
}

TEST_CASE("a fiber job at a root of the resolvent fails") {
  const Report r = run(parse_config(diagonal_fiber("2")));
  REQUIRE(r.jobs.size() == 1);
  CHECK(r.jobs[0].verdict == Verdict::Fail);
  CHECK(r.jobs[0].reason.rfind("InadmissibleAlpha", 0) == 0);
  CHECK(r.exit_code() == 1);
  const Report ok = run(parse_config(diagonal_fiber("4")));
  CHECK(ok.jobs[0].verdict == Verdict::Pass);
}

TEST_CASE("reports are deterministic apart from wall time") {
  const RunConfig c = parse_config(R"({"seed": 12, "jobs": [
    {"kind": "fiber", "space": "pseudosphere-complex", "n": 2, "d": 2, "count": 8},
    {"kind": "duality", "space": "sphere-quaternionic", "n": 4, "points": 10},
    {"kind": "invariance", "space": "sphere-complex", "n": 2, "count": 3},
    {"kind": "holomorphy", "space": "sphere-complex", "n": 2, "count": 5},
    {"kind": "morphism", "space": "flat-quaternionic-1", "n": 4, "points": 10}
  ]})");
  const std::string a = run(c).to_json(false).dump();
  const std::string b = run(c).to_json(false).dump();
  CHECK(a == b);
  const Report r = run(c);
  CHECK(r.all_pass());
  const auto j = r.to_json();
  CHECK(j["metadata"]["seed"] == 12);
  CHECK(j["metadata"]["version"] == library_version());
  CHECK(j["summary"]["passed"] == 5);
  CHECK(j["jobs"][0].contains("wall_time_s"));
  CHECK_FALSE(r.to_json(false)["jobs"][0].contains("wall_time_s"));
}

TEST_CASE("non-finite residuals serialize as strings") {
  Report r;
  JobResult job;
  job.name = "x";
  job.residuals = {{"a", std::numeric_limits<double>::infinity()}, {"b", std::nan("")}};
  r.jobs.push_back(job);
  const auto j = r.to_json();
  CHECK(j["jobs"][0]["residuals"]["a"] == "inf");
  CHECK(j["jobs"][0]["residuals"]["b"] == "nan");
  CHECK(r.exit_code() == 1);
}

TEST_CASE("the default suite covers every space") {
  const RunConfig c = default_suite(1);
  CHECK(c.jobs.size() == 95);
  std::set<std::string> spaces;
  for (const auto& j : c.jobs) spaces.insert(j.space);
  CHECK(spaces.size() == 9);
  CHECK(default_suite(1).config_hash == c.config_hash);
  CHECK(default_suite(2).config_hash != c.config_hash);
}

TEST_CASE("cli verify exit codes") {
  const auto good = scratch("good.json");
  write(good, R"({"seed": 2, "jobs": [{"kind": "eigenfamily", "space": "flat-complex-1", "n": 2, "points": 10}]})");
  const CliRun ok = cli({"verify", "--config", good.string()});
  CHECK(ok.code == 0);
  CHECK(nlohmann::json::parse(ok.out)["summary"]["passed"] == 1);
  CHECK(ok.err.find("pass") != std::string::npos);

  const auto report = scratch("report.json");
  CHECK(cli({"verify", "--config", good.string(), "--out", report.string()}).code == 0);
  CHECK(nlohmann::json::parse(slurp(report))["summary"]["jobs"] == 1);

  const auto failing = scratch("failing.json");
  write(failing, diagonal_fiber("3"));
  CHECK(cli({"verify", "--config", failing.string()}).code == 1);

  const auto broken = scratch("broken.json");
  write(broken, "{\"seed\": 1,\n \"jobs\": [{\"kind\": \"nope\", \"space\": \"flat-complex\", \"n\": 2}]}");
  const CliRun bad = cli({"verify", "--config", broken.string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("line 2") != std::string::npos);

  CHECK(cli({"verify", "--config", scratch("missing.json").string()}).code == 2);
  CHECK(cli({"verify"}).code == 2);
  CHECK(cli({"verify", "--default"}).code == 2);
  CHECK(cli({"verify", "--seed", "3"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({"--version"}).out == library_version() + "\n");
  for (const auto& p : {good, report, failing, broken}) std::filesystem::remove(p);
}

TEST_CASE("cli sample-fiber writes the point cloud") {
  const auto csv = scratch("fiber.csv");
  const CliRun r = cli({"sample-fiber", "--space", "sphere-complex", "--n", "2", "--count", "12", "--seed", "4",
                        "--out", csv.string()});
  CHECK(r.code == 0);
  const auto report = nlohmann::json::parse(r.out);
  CHECK(report["jobs"][0]["verdict"] == "pass");
  const std::string text = slurp(csv);
  CHECK(std::count(text.begin(), text.end(), '\n') == 13);
  CHECK(text.rfind("x1,y1,x2,y2,x3,y3,x4,y4,residual,H_norm,grad_margin\n", 0) == 0);

  const CliRun pinned = cli({"sample-fiber", "--space", "flat-complex:n=2", "--n", "2", "--A",
                             "[[1,0],[0,0],[0,0],[2,0]]", "--B", "[[1,0],[0,0],[0,0],[1,0]]", "--alpha", "[3,0.5]",
                             "--count", "5", "--seed", "1"});
  CHECK(pinned.code == 0);
  CHECK(nlohmann::json::parse(pinned.out)["jobs"][0]["residuals"]["alpha_im"] == 0.5);

  CHECK(cli({"sample-fiber", "--space", "flat-complex", "--n", "2", "--A", "[[1,0],[0,0],[0,0],[2,0]]",
             "--B", "[[1,0],[0,0],[0,0],[1,0]]", "--alpha", "2", "--count", "5", "--seed", "1"})
            .code == 1);
  CHECK(cli({"sample-fiber", "--space", "flat-complex", "--n", "2", "--A", "[[1,0]]", "--seed", "1"}).code == 2);
  CHECK(cli({"sample-fiber", "--space", "flat-complex", "--n", "2", "--A", "[[1,0],[0,0],[0,0]]", "--B",
             "[[1,0],[0,0],[0,0]]", "--seed", "1"})
            .code == 2);
  CHECK(cli({"sample-fiber", "--space", "flat-complex", "--n", "2"}).code == 2);
  CHECK(cli({"sample-fiber", "--space", "moebius", "--n", "2", "--seed", "1"}).code == 2);
  std::filesystem::remove(csv);
}

TEST_CASE("cli catalog lists every family") {
  const CliRun r = cli({"catalog", "--n", "3"});
  CHECK(r.code == 0);
  for (const auto& label : catalog_labels()) CHECK(r.out.find(label + ":n=3") != std::string::npos);
  CHECK(r.out.find("-24") != std::string::npos);
  CHECK(cli({"catalog", "--n", "0"}).code == 2);
}
