#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>

#include "nw/cli.hpp"

using nlohmann::json;
using nw::cli::run;

namespace {

json run_json(const std::vector<std::string>& args, int expected = 0) {
  const auto res = run(args);
  REQUIRE(res.exit_code == expected);
  return json::parse(res.out);
}

}  // namespace

TEST_CASE("qexp example") {
  const json j = run_json({"qexp", "--weight", "4", "--terms", "3"});
  CHECK(j["coefficients"] == json({"1", "240", "2160", "6720"}));
  CHECK(j["manifest"]["subcommand"] == "qexp");
  CHECK(j["manifest"]["truncation"] == 3);
  const json d = run_json({"qexp", "--weight", "j", "--terms", "1"});
  CHECK(d["lowest_exponent"] == -1);
  CHECK(d["coefficients"] == json({"1", "744", "196884"}));
}

TEST_CASE("usage errors exit 2 and list flags") {
  CHECK(run({"bogus"}).exit_code == 2);
  CHECK(run({}).exit_code == 2);
  CHECK(run({"qexp", "--terms", "3"}).exit_code == 2);
  CHECK(run({"qexp", "--weight", "8"}).exit_code == 2);
  const auto res = run({"eval", "--weight", "4", "--z", "abc"});
  CHECK(res.exit_code == 2);
  CHECK(res.err.find("--bits") != std::string::npos);
  CHECK(run({"zeroscan", "--family", "nope"}).exit_code == 2);
  CHECK(run({"--help"}).exit_code == 0);
}

TEST_CASE("domain errors exit 1 with a structured error") {
  const json j = run_json({"eval", "--weight", "4", "--z", "2,0", "--bits", "64"}, 1);
  CHECK(j["error"]["code"] == "OutsideDisk");
  CHECK(j["manifest"]["bits"] == 64);
  CHECK(run_json({"periods", "--curve", "3,1", "--bits", "64"}, 1)["error"]["code"] == "Degenerate");
  CHECK(run_json({"siegel", "--matrix", "/nonexistent/matrix.txt"}, 1)["error"]["code"] == "IOError");
  CHECK(run_json({"liouville", "--minpoly", "1,0,-4", "--qmax", "10"}, 1)["error"]["code"] == "ReduciblePolynomial");
}

TEST_CASE("identical manifests give byte-identical reports") {
  const std::vector<std::vector<std::string>> cmds = {
      {"zeroscan", "--family", "random:12:3", "--seed", "5", "--truncation", "40"},
      {"auxpoly", "--degree", "1,2"},
      {"periods", "--curve", "1,2", "--bits", "128"},
      {"eval", "--weight", "2", "--tau", "1/3,3/4", "--bits", "100"},
      {"liouville", "--minpoly", "1,0,0,-2", "--qmax", "1000"},
  };
  for (const auto& c : cmds) {
    const auto a = run(c), b = run(c);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("worker count changes only the manifest") {
  auto body = [](std::vector<std::string> args) {
    json j = run_json(args);
    j.erase("manifest");
    return j.dump();
  };
  CHECK(body({"zeroscan", "--family", "random:20:3:9", "--truncation", "30"}) ==
        body({"zeroscan", "--family", "random:20:3:9", "--truncation", "30", "--jobs", "4"}));
  CHECK(body({"hyper5", "--all", "--bits", "80"}) == body({"hyper5", "--all", "--bits", "80", "--jobs", "3"}));
}

TEST_CASE("timing is opt-in") {
  CHECK(!run_json({"qexp", "--weight", "2", "--terms", "2"})["manifest"].contains("wall_time_s"));
  CHECK(run_json({"qexp", "--weight", "2", "--terms", "2", "--timing"})["manifest"].contains("wall_time_s"));
}

TEST_CASE("default precision from the environment") {
  setenv("NW_DEFAULT_BITS", "96", 1);
  CHECK(run_json({"eval", "--weight", "4", "--z", "1/10,0"})["manifest"]["bits"] == 96);
  setenv("NW_DEFAULT_BITS", "lots", 1);
  CHECK(run({"eval", "--weight", "4", "--z", "1/10,0"}).exit_code == 2);
  unsetenv("NW_DEFAULT_BITS");
  CHECK(run_json({"eval", "--weight", "4", "--z", "1/10,0", "--bits", "70"})["manifest"]["bits"] == 70);
}

TEST_CASE("tables in CSV") {
  const auto res = run({"zeroscan", "--family", "coords", "--report", "csv"});
  REQUIRE(res.exit_code == 0);
  CHECK(res.out.rfind("# manifest {", 0) == 0);
  CHECK(res.out.find("\nlabel,deg,ord,ratio,truncation,poly\nx0,1,1,1,") != std::string::npos);
  const auto ph = run({"philippon", "--tau", "0,1", "--dmax", "1", "--k", "0", "--report", "csv"});
  REQUIRE(ph.exit_code == 0);
  CHECK(ph.out.find("\nd,m,k,log_abs_mid") != std::string::npos);
}

TEST_CASE("derive, siegel and selftest") {
  const json w = run_json({"derive", "--field", "w", "--apply", "x2^3 - x3^2", "--iterate", "0", "--check-invariance"});
  CHECK(w["invariant"] == true);
  CHECK(w["cofactor"] == "x1");
  const json v = run_json({"derive", "--field", "v", "--apply", "x1"});
  CHECK(v["result"] == "1/12*x1^2 - 1/12*x2");

  const std::string path = "cli_matrix_test.txt";
  {
    std::ofstream out(path);
    out << "1 3\n1 1 1\n";
  }
  const json s = run_json({"siegel", "--matrix", path});
  std::remove(path.c_str());
  CHECK(s["in_kernel"] == true);
  CHECK(s["within_bound"] == true);
  CHECK(s["norm"] == "1");

  const json t = run_json({"selftest", "--terms", "60"});
  CHECK(t["passed"] == t["cases"]);
}

TEST_CASE("auxpoly writes the polynomials") {
  const std::string path = "cli_aux_test.txt";
  const json j = run_json({"auxpoly", "--degree", "2", "--emit-poly", path});
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  std::remove(path.c_str());
  CHECK(line == j["reports"][0]["poly"]);
  CHECK(j["reports"][0]["ord_certified"] == true);
}
