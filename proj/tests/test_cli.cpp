#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = commgraph::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(COMMGRAPH_TEST_DATA "/") + name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("qk prints the exact value") {
  const auto r = run({"qk", "--n", "4", "--k", "1", "--x", "2", "--q", "1.0"});
  CHECK(r.code == 0);
  CHECK(r.out == "0.5\n");
}

TEST_CASE("predict with no communities") {
  const auto r = run({"predict", "--n", "1000", "--m", "0", "--law", data("point23.json")});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["lambda"].get<double>() == doctest::Approx(6.9078).epsilon(1e-4));
  CHECK(doc["p_pred"].get<double>() < 1e-300);
  for (const char* key : {"kappa", "kappa_truncated", "alpha"}) CHECK(doc.contains(key));
}

TEST_CASE("mfor") {
  const auto r = run({"mfor", "--n", "1000", "--c", "0", "--law", data("x2q1.json")});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["m"] == 3454);
  CHECK(doc["lambda"].get<double>() == doctest::Approx(-0.000244721).epsilon(1e-6));
}

TEST_CASE("mfor with a law that cannot make edges") {
  const auto law = temp_file("commgraph_x1.json");
  std::ofstream(law) << R"({"mode":"iid","x":{"kind":"point","value":1},"q":{"kind":"point","value":1}})";
  const auto r = run({"mfor", "--n", "100", "--c", "0", "--law", law.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("kappa_zero") != std::string::npos);
}

TEST_CASE("malformed law files exit 2 with the field path") {
  const auto r = run({"predict", "--n", "10", "--m", "1", "--law", data("bad_pmf.json")});
  CHECK(r.code == 2);
  CHECK(r.err.find("x.entries") != std::string::npos);
  CHECK(r.err.find("probabilities sum to 1.2") != std::string::npos);
  CHECK(run({"predict", "--n", "10", "--m", "1", "--law", "/no/such/file.json"}).code == 2);
}

TEST_CASE("flag validation") {
  CHECK(run({"qk", "--n", "4", "--k", "1", "--x", "2", "--q", "1.0", "--bogus", "3"}).code == 2);
  CHECK(run({"qk", "--n", "4", "--k", "1", "--x", "2"}).code == 2);
  CHECK(run({"qk", "--n", "4", "--k", "1", "--x", "2", "--q", "1.5"}).code == 2);
  CHECK(run({"qk", "--n", "4", "--k", "5", "--x", "2", "--q", "0.5"}).code == 2);
  CHECK(run({"bounds", "--n", "4", "--x", "1", "--q", "0.5"}).code == 2);
  CHECK(run({"simulate", "--n", "10", "--m", "1", "--law", data("x2q1.json"), "--reps", "3"}).code ==
        2);  // --seed is mandatory
  CHECK(run({}).code == 2);
  CHECK(run({"predict", "qk"}).code == 2);
}

TEST_CASE("help lists every flag") {
  const auto r = run({"sweep", "--help"});
  CHECK(r.code == 0);
  for (const char* flag : {"--n", "--law", "--c", "--m-list", "--reps", "--seed", "--out", "--format"}) {
    CHECK_MESSAGE(r.out.find(flag) != std::string::npos, flag);
  }
  const auto top = run({"--help"});
  CHECK(top.code == 0);
  for (const char* sub : {"predict", "mfor", "simulate", "sweep", "qk", "bounds", "y0"}) {
    CHECK(top.out.find(sub) != std::string::npos);
  }
}

TEST_CASE("bounds table") {
  const auto r = run({"bounds", "--n", "8", "--x", "3", "--q", "0.5"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "k,exact,bound_a,bound_b,a_holds,b_holds");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line.substr(line.size() - 4) == ",1,1");
  }
  CHECK(rows == 4);
  CHECK(run({"bounds", "--n", "8", "--x", "3", "--q", "0.5", "--kmax", "2"}).out.find("\n3,") ==
        std::string::npos);
}

TEST_CASE("simulate is reproducible") {
  const std::vector<std::string> args{"simulate", "--n", "300", "--m", "700", "--law",
                                      data("x3q05.json"), "--reps", "40", "--seed", "11"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto doc = nlohmann::json::parse(a.out);
  CHECK(doc["replicates"] == 40);
  CHECK(doc["seed"] == 11);
}

TEST_CASE("simulate dumps edges of replicate 0") {
  const auto dump = temp_file("commgraph_edges.txt");
  const auto r = run({"simulate", "--n", "20", "--m", "2", "--law", data("x2q1.json"), "--reps", "1",
                      "--seed", "3", "--dump-edges", dump.string(), "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(slurp(dump).size() > 0);
  CHECK(r.out.rfind("c,n,m,", 0) == 0);
}

TEST_CASE("sweep writes csv and json") {
  const auto csv = temp_file("commgraph_sweep.csv");
  const auto json = temp_file("commgraph_sweep.json");
  auto r = run({"sweep", "--n", "500", "--law", data("x3q05.json"), "--c", "-1,0,1", "--reps", "30",
                "--seed", "8", "--out", csv.string()});
  REQUIRE(r.code == 0);
  const std::string text = slurp(csv);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);

  r = run({"sweep", "--n", "500", "--law", data("x3q05.json"), "--c=-1,0,1", "--reps", "30",
           "--seed", "8", "--out", json.string(), "--format", "json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(slurp(json));
  CHECK(doc["points"].size() == 3);

  r = run({"sweep", "--n", "500", "--law", data("x3q05.json"), "--m-list", "0,100", "--reps", "5",
           "--seed", "8", "--out", csv.string()});
  CHECK(r.code == 0);
  CHECK(run({"sweep", "--n", "500", "--law", data("x3q05.json"), "--reps", "5", "--seed", "8",
             "--out", csv.string()}).code == 2);
  CHECK(run({"sweep", "--n", "500", "--law", data("x3q05.json"), "--c", "0,abc", "--reps", "5",
             "--seed", "8", "--out", csv.string()}).code == 2);
}

TEST_CASE("y0 report") {
  const auto r = run({"y0", "--n", "400", "--m", "1500", "--law", data("x3q05.json"), "--reps",
                      "500", "--seed", "2"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["report"].contains("tv_distance"));
  CHECK(doc["report"]["moment_ratios"].size() == 4);
  CHECK(run({"y0", "--n", "400", "--m", "1500", "--law", data("x3q05.json"), "--reps", "20",
             "--seed", "2"}).code == 2);
}
