#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "covsys/cli.hpp"
#include "covsys/density.hpp"
#include "covsys/system_io.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace covsys;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Outcome run_cli(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::ostringstream out, err;
  std::istringstream in(stdin_text);
  int code = cli::run(args, out, err, in);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / ("covsys_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

const char* kOpeningJson = R"({"name": "opening", "classes": [[2,0],[3,0],[4,1],[6,1],[12,11]]})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("density of the opening system from a file") {
  auto path = temp_file("opening.json", kOpeningJson);
  auto r = run_cli({"density", "--input", path});
  REQUIRE(r.code == 0);
  auto j = r.report();
  CHECK(j["command"] == "density");
  CHECK(j["result"]["delta"] == "0/1");
  CHECK(j["result"]["period"] == 12);
  CHECK(j["result"]["covers"] == true);
  CHECK(j["inputs"]["input"] == path);
  std::filesystem::remove(path);
}

TEST_CASE("report keys appear in the documented order") {
  auto r = run_cli({"density", "--system", "0 mod 2; 1 mod 4"});
  REQUIRE(r.code == 0);
  auto c = r.out.find("\"command\""), i = r.out.find("\"inputs\""), res = r.out.find("\"result\""),
       d = r.out.find("\"diagnostics\"");
  CHECK(c < i);
  CHECK(i < res);
  CHECK(res < d);
  CHECK(r.report()["result"]["delta"] == "1/4");
}

TEST_CASE("text and stdin input") {
  auto r = run_cli({"density", "--input", "-", "--input-format", "text"}, "0 mod 2\n1 (mod 4)  # comment\n0 mod 3\n");
  REQUIRE(r.code == 0);
  CHECK(r.report()["result"]["delta"] == "1/6");
  auto j = run_cli({"density", "--input", "-"}, "[[2,0],[3,1]]");
  REQUIRE(j.code == 0);
  CHECK(j.report()["result"]["delta"] == "1/3");
  CHECK(run_cli({"density", "--input", "-"}, "0 mod 2; 1 mod 2").code == 1);
}

TEST_CASE("density methods agree") {
  for (std::string method : {"best", "auto", "scan", "decomposed"}) {
    auto r = run_cli({"density", "--method", method, "--system", "0 mod 2; 1 mod 3; 5 mod 6"});
    REQUIRE(r.code == 0);
    CHECK(r.report()["result"]["delta"] == "1/6");
  }
}

TEST_CASE("construct-exact J=2 and round trip") {
  auto r = run_cli({"construct-exact", "--J", "2"});
  REQUIRE(r.code == 0);
  auto j = r.report();
  CHECK(j["result"]["class_count"] == 10);
  CHECK(j["result"]["verified"]["exact_cover"] == true);
  CHECK(j["result"]["verified"]["moduli_exceed_N_J"] == true);
  CHECK(j["result"]["verified"]["multiplicity_at_most_X_J"] == true);
  for (const auto& cls : j["result"]["system"]["classes"]) CHECK(cls[0] == 10);

  for (std::string J : {"1", "2", "3"}) {
    auto rr = run_cli({"construct-exact", "--J", J});
    REQUIRE(rr.code == 0);
    auto doc_text = rr.report()["result"]["system"].dump();
    auto doc = parse_system_json(doc_text);
    CHECK(to_json(doc, -1) == json::parse(doc_text).dump());
    auto path = temp_file("c" + J + ".json", doc_text);
    auto v = run_cli({"verify-exact-cover", "--input", path});
    REQUIRE(v.code == 0);
    CHECK(v.report()["result"]["exact"] == true);
    std::filesystem::remove(path);
  }
}

TEST_CASE("stats enumerate and sample") {
  auto r = run_cli({"stats", "--moduli", "2,4", "--mode", "enumerate"});
  REQUIRE(r.code == 0);
  CHECK(r.report()["result"]["mean"] == "3/8");
  CHECK(r.report()["result"]["variance"] == "1/64");
  auto s = run_cli({"stats", "--moduli", "4,6,9", "--mode", "sample", "--trials", "300", "--seed", "11"});
  REQUIRE(s.code == 0);
  CHECK(s.report()["seed"] == 11);
  CHECK(s.report()["result"]["sample_count"] == 300);
  auto p = run_cli({"stats", "--moduli", "3,4", "--mode", "pair"});
  REQUIRE(p.code == 0);
  CHECK(p.report()["result"]["second_moment"] == "1/4");
}

TEST_CASE("randomized commands are byte-reproducible and echo the seed") {
  std::vector<std::string> g{"greedy", "--N", "3", "--K", "6", "--seed", "77"};
  auto a = run_cli(g), b = run_cli(g);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.report()["seed"] == 77);
  CHECK(a.report()["result"]["invariant_holds"] == true);
  auto e = run_cli({"greedy", "--N", "2", "--K", "3", "--exact", "--no-steps"});
  REQUIRE(e.code == 0);
  CHECK(e.report()["result"]["window"] == 60);
  CHECK(e.report()["result"]["exact_period"] == true);
  CHECK_FALSE(e.report()["result"].contains("steps"));
  std::vector<std::string> s{"stats", "--moduli", "5,6,10", "--mode", "sample", "--trials", "100", "--seed", "3"};
  CHECK(run_cli(s).out == run_cli(s).out);
}

TEST_CASE("bounds, certify and decompose") {
  auto b = run_cli({"bounds", "--system", "0 mod 2; 1 mod 4; 0 mod 3", "--refined"});
  REQUIRE(b.code == 0);
  CHECK(b.report()["result"]["lower_bound"] == "1/6");
  auto t = run_cli({"bounds", "--smooth-tail", "10:3"});
  REQUIRE(t.code == 0);
  CHECK(t.report()["result"]["tail"] == "37/72");
  auto th = run_cli({"bounds", "--threshold", "1000000:1"});
  REQUIRE(th.code == 0);
  CHECK(th.report()["result"]["approx_L"].get<double>() == doctest::Approx(160.6).epsilon(1e-3));

  auto c = run_cli({"certify", "--system", "0 mod 2; 1 mod 3; 5 mod 6", "--Q", "2", "--terms"});
  REQUIRE(c.code == 0);
  CHECK(c.report()["result"]["lower_bound"] == "1/6");
  auto d = run_cli({"decompose", "--system", "0 mod 2; 1 mod 3; 5 mod 6", "--Q", "2", "--check", "--alpha-floor",
                    "--beta"});
  REQUIRE(d.code == 0);
  auto j = d.report();
  CHECK(j["result"]["M"] == 2);
  CHECK(j["result"]["identity"]["equal"] == true);
  CHECK(j["result"]["alpha_floor"]["avg_alpha"] == "2/9");
  CHECK(j["result"]["avg_beta"]["value"] == "1/18");
  auto csv = run_cli({"--format", "csv", "decompose", "--system", "0 mod 2; 1 mod 3; 5 mod 6", "--Q", "2"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("h,count,classes\n", 0) == 0);
}

TEST_CASE("delta commands, witness, haight, xineq") {
  auto m = run_cli({"delta-minus", "--moduli", "4,6"});
  REQUIRE(m.code == 0);
  CHECK(m.report()["result"]["value"] == "7/12");
  auto p = run_cli({"delta-plus", "--moduli", "4,6"});
  REQUIRE(p.code == 0);
  CHECK(p.report()["result"]["value"] == "2/3");
  auto w = run_cli({"witness", "--system", "3 mod 7; 2 mod 5; 1 mod 6", "--B", "10", "--s", "1"});
  REQUIRE(w.code == 0);
  CHECK(w.report()["result"]["A"] == 0);
  auto u = run_cli({"witness", "--system", "0 mod 2; 1 mod 4; 0 mod 3"});
  REQUIRE(u.code == 0);
  CHECK(u.report()["result"]["A"] == 7);
  auto h = run_cli({"haight", "--N", "100"});
  REQUIRE(h.code == 0);
  CHECK(h.report()["result"]["prime_count"] == 13);
  auto x = run_cli({"xineq", "--from", "1", "--to", "5"});
  REQUIRE(x.code == 0);
  CHECK(x.report()["result"]["all_hold"] == true);
  CHECK(x.report()["result"]["rows"][1]["lhs"] == 15);
}

TEST_CASE("exit codes") {
  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"nonsense"}).code == 1);
  auto bad = run_cli({"density", "--system", "banana"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("input error") != std::string::npos);
  CHECK(run_cli({"density", "--input", "/nonexistent/file.json"}).code == 1);
  CHECK(run_cli({"density", "--input", "-"}, "{\"classes\": [[0, 1]]}").code == 1);
  auto guard = run_cli({"density", "--method", "scan", "--guard", "100", "--system", "0 mod 101; 0 mod 103"});
  CHECK(guard.code == 2);
  CHECK(guard.err.find("guard exceeded") != std::string::npos);
  CHECK(run_cli({"stats", "--moduli", "2,5", "--mode", "pair"}).code == 1);
  CHECK(run_cli({"haight", "--N", "10"}).code == 1);
  CHECK(run_cli({"construct-exact", "--J", "3", "--guard", "50"}).code == 2);
  CHECK(run_cli({"density", "--help"}).code == 0);
}

}  // TEST_SUITE
