#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "l2approx/cli.hpp"
#include "l2approx/parallel.hpp"
#include "l2approx/report.hpp"

using namespace l2approx;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  std::string path = "/tmp/l2approx_test_" + name;
  std::ofstream(path) << text;
  return path;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("cli tower json report") {
  Run r = run({"tower", "-p", "fixture:circle.pres", "-t", "fixture:circle-cyclic.tower"});
  REQUIRE(r.code == kExitOk);
  Json j = Json::parse(r.out);
  CHECK(j["tool"] == "l2approx");
  CHECK(j["version"] == kToolVersion);
  CHECK(j["command"] == "tower");
  CHECK(j["config_hash"].get<std::string>().size() == 16);
  const auto& levels = j["result"]["levels"];
  REQUIRE(levels.size() == 32);
  CHECK(levels[3]["normalized_betti"].get<double>() == doctest::Approx(0.25));
}

TEST_CASE("cli output is byte identical across runs and thread counts") {
  std::vector<std::string> args{"tower", "-p", "fixture:figure-eight.pres", "-t", "fixture:figure-eight-cyclic.tower"};
  Run a = run(args);
  args.insert(args.end(), {"--threads", "3"});
  Run b = run(args);
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(run({"example", "circle-moments"}).out == run({"example", "circle-moments"}).out);
}

TEST_CASE("cli csv headers") {
  Run t = run({"tower", "-p", "fixture:circle.pres", "-t", "fixture:circle-cyclic.tower", "--format", "csv"});
  CHECK(t.code == kExitOk);
  CHECK(first_line(t.out) == "level,label,mu,chain_dim,betti,normalized_betti");
  Run f = run({"fp-tower", "-p", "fixture:torus.pres", "-t", "fixture:torus-2.tower", "--prime", "2", "--format",
               "csv"});
  CHECK(f.code == kExitOk);
  CHECK(first_line(f.out) == "level,index,fp_betti,rational_betti,normalized");
}

TEST_CASE("cli side tables") {
  std::string spec = "/tmp/l2approx_test_spectrum.csv";
  std::string dens = "/tmp/l2approx_test_density.csv";
  Run r = run({"tower", "-p", "fixture:circle.pres", "-t", "fixture:circle-cyclic.tower", "--spectrum-csv", spec,
               "--density-csv", dens});
  REQUIRE(r.code == kExitOk);
  std::ifstream s(spec), d(dens);
  std::string line;
  std::getline(s, line);
  CHECK(line == "level,eigenvalue,multiplicity");
  std::getline(d, line);
  CHECK(line == "level,lambda,normalized_count");
}

TEST_CASE("cli exit codes") {
  SUBCASE("parse error reports position and exits 2") {
    std::string bad = write_temp("bad.pres", "generators = [x, y]\nrelators = [x z]\n");
    Run r = run({"tower", "-p", bad, "-t", "fixture:circle-cyclic.tower"});
    CHECK(r.code == kExitInput);
    CHECK(r.err.find("2:13") != std::string::npos);
  }
  SUBCASE("missing file") {
    CHECK(run({"tower", "-p", "/nonexistent/x.pres", "-t", "fixture:circle-cyclic.tower"}).code == kExitInput);
  }
  SUBCASE("missing required option") { CHECK(run({"tower", "-p", "fixture:circle.pres"}).code == kExitInput); }
  SUBCASE("unknown subcommand and example") {
    CHECK(run({"frobnicate"}).code == kExitInput);
    CHECK(run({"example", "nope"}).code == kExitInput);
  }
  SUBCASE("bad format") {
    CHECK(run({"example", "circle-tower", "--format", "xml"}).code == kExitInput);
  }
  SUBCASE("composite prime") {
    CHECK(run({"fp-tower", "-p", "fixture:torus.pres", "-t", "fixture:torus-2.tower", "--prime", "4"}).code ==
          kExitInput);
  }
  SUBCASE("resource cap exits 4") {
    Run r = run({"tower", "-p", "fixture:figure-eight.pres", "-t", "fixture:figure-eight-cyclic.tower",
                 "--max-index", "10"});
    CHECK(r.code == kExitResource);
    CHECK(r.err.find("ResourceCap") != std::string::npos);
  }
  SUBCASE("violated condition exits 3") {
    CHECK(run({"algnum", "--profile", "fixture:circle-unit.profile"}).code == kExitViolation);
  }
  SUBCASE("invalid thread variable exits 2") {
    setenv(kThreadsEnv, "abc", 1);
    Run r = run({"example", "circle-tower"});
    unsetenv(kThreadsEnv);
    CHECK(r.code == kExitInput);
  }
}

TEST_CASE("cli example list") {
  Run r = run({"example", "--list"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("figure-eight-tower") != std::string::npos);
  CHECK(r.out.find("quartic-10-1") != std::string::npos);
}

TEST_CASE("cli output file") {
  std::string path = "/tmp/l2approx_test_report.json";
  Run r = run({"example", "circle-tower", "-o", path});
  REQUIRE(r.code == kExitOk);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(Json::parse(ss.str())["command"] == "example");
}

TEST_CASE("round_sig and fnv1a") {
  CHECK(round_sig(1.0 / 3.0) == doctest::Approx(0.333333333333).epsilon(1e-15));
  CHECK(round_sig(0.0) == 0.0);
  CHECK(round_sig(-123456.7890123456, 6) == -123457.0);
  CHECK(std::isinf(round_sig(INFINITY)));
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("abc") != fnv1a_hex("acb"));
}

TEST_CASE("dump_json rounds and renders infinity") {
  Json j;
  j["x"] = 0.1 + 0.2;
  j["y"] = std::numeric_limits<double>::infinity();
  std::string s = dump_json(j);
  CHECK(s.find("0.3") != std::string::npos);
  CHECK(s.find("0.30000000000000004") == std::string::npos);
  CHECK(s.find("\"inf\"") != std::string::npos);
  CHECK(csv_number(0.1 + 0.2) == "0.3");
}
