// Copyright 2026 The rpsbr Authors
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

// Drives the rpsbr executable end to end and inspects exit codes and output.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Run rpsbr(const std::string& args) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path();
  const fs::path out = dir / ("rpsbr_cli_out_" + std::to_string(counter) + ".txt");
  const fs::path err = dir / ("rpsbr_cli_err_" + std::to_string(counter++) + ".txt");
  const std::string cmd = std::string("\"") + RPSBR_CLI_PATH + "\" " + args + " >" +
                          out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  fs::remove(out);
  fs::remove(err);
  return r;
}

int count_lines(const std::string& s, bool skip_comments = true) {
  std::istringstream is(s);
  int n = 0;
  for (std::string line; std::getline(is, line);) {
    if (skip_comments && !line.empty() && line[0] == '#') continue;
    ++n;
  }
  return n;
}

TEST_SUITE("cli") {

TEST_CASE("orbit prints one row per step plus the start") {
  const Run r = rpsbr("orbit --alpha 1 --lambda 0.8 --x0 0.8,0.2,0 --steps 10");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("# a=1 b=1 alpha=1 lambda=0.80000000000000004", 0) == 0);
  CHECK(count_lines(r.out) == 12);  // header + 11 rows
  CHECK(r.out.find("1,0.64000000000000012,0.35999999999999999,0,R1") != std::string::npos);

  const Run zero = rpsbr("orbit --alpha 1 --lambda 0.8 --x0 0.8,0.2,0 --steps 0");
  CHECK(zero.code == 0);
  CHECK(count_lines(zero.out) == 2);
}

TEST_CASE("orbit JSON echoes parameters") {
  const Run r = rpsbr("orbit --a 2 --b 4 --epsilon 0.25 --x0 0.8,0.2,0 --steps 3 --format json");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["params"]["alpha"] == 0.5);
  CHECK(j["params"]["lambda"] == 0.75);
  CHECK(j["trajectory"].size() == 4);
}

TEST_CASE("starting on an indifference set exits with 3") {
  const Run r = rpsbr(
      "orbit --alpha 1 --lambda 0.8 --x0 0.3333333333333333,0.3333333333333333,0.3333333333333334");
  CHECK(r.code == 3);
  CHECK(r.err.find("Gamma_{1,2}") != std::string::npos);
}

TEST_CASE("bad input exits with 2") {
  CHECK(rpsbr("orbit --alpha 1 --lambda 1.5 --x0 0.8,0.2,0").code == 2);
  CHECK(rpsbr("orbit --alpha 1 --lambda 0.5 --epsilon 0.5 --x0 0.8,0.2,0").code == 2);
  CHECK(rpsbr("orbit --alpha 1 --a 1 --b 1 --lambda 0.5 --x0 0.8,0.2,0").code == 2);
  CHECK(rpsbr("orbit --a 1 --lambda 0.5 --x0 0.8,0.2,0").code == 2);
  CHECK(rpsbr("orbit --alpha 1 --lambda 0.5 --x0 0.8,0.3,0").code == 2);
  CHECK(rpsbr("orbit --alpha 1 --lambda 0.5 --x0 0.8,0.2").code == 2);
  CHECK(rpsbr("orbit --alpha 1 --lambda 0.5").code == 2);
  CHECK(rpsbr("frobnicate").code == 2);
  CHECK(rpsbr("bifurcation --alpha 1 --lambda-min 0.9 --lambda-max 0.5").code == 2);
  CHECK(rpsbr("bifurcation --alpha 1 --lambda-min 0 --lambda-max 0.5").code == 2);
}

TEST_CASE("flag aliases agree") {
  const Run a = rpsbr("attractor --alpha 0.5 --lambda 0.9");
  const Run b = rpsbr("attractor --a 1 --b 2 --epsilon 0.09999999999999998");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  json ja = json::parse(a.out), jb = json::parse(b.out);
  CHECK(ja["orbits"] == jb["orbits"]);
  CHECK(ja["count"] == jb["count"]);
}

TEST_CASE("attractor reports") {
  const Run r = rpsbr("attractor --alpha 1 --lambda 0.8");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["count"] == 3);
  CHECK(j["head"] == 1);
  CHECK(j["tail"] == 3);
  REQUIRE(j["orbits"].size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(j["orbits"][i]["period"] == 3 * (i + 1));
    CHECK(j["orbits"][i]["points"].size() == std::size_t(3 * (i + 1)));
  }
  CHECK(j["shapley_triangle"].is_null());

  const Run half = rpsbr("attractor --a 1 --b 2 --lambda 0.9090909090909091");
  REQUIRE(half.code == 0);
  CHECK(json::parse(half.out)["count"] == 2);
  CHECK(json::parse(half.out)["shapley_triangle"].size() == 3);

  const Run fav = rpsbr("attractor --alpha 2 --lambda 0.99999");
  REQUIRE(fav.code == 0);
  CHECK(json::parse(fav.out)["count"] == 5);
}

TEST_CASE("bifurcation boundaries exit with 4 and still report") {
  const Run r = rpsbr("attractor --alpha 0.5 --lambda 0.5");
  CHECK(r.code == 4);
  const json j = json::parse(r.out);
  CHECK(j["bifurcation_boundary"] == true);
}

TEST_CASE("bifurcation sweeps") {
  const Run r = rpsbr("bifurcation --alpha 1 --grid 0.8,0.8333333333333334,0.8928571428571429");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("1,0.80000000000000004,1,3,3,0") != std::string::npos);
  CHECK(r.out.find("1,0.8928571428571429,1,5,5,0") != std::string::npos);
  const Run one = rpsbr("bifurcation --alpha 1 --lambda-min 0.8 --points 1");
  CHECK(one.code == 0);
  CHECK(count_lines(one.out) == 2);
  const Run dense = rpsbr("bifurcation --alpha 0.5 --lambda-min 0.9 --lambda-max 0.999 --points 1000");
  CHECK(dense.code == 0);
  CHECK(count_lines(dense.out) == 1001);
}

TEST_CASE("basins writes both files and a summary") {
  const fs::path prefix = fs::temp_directory_path() / "rpsbr_cli_basins";
  const Run r = rpsbr("basins --alpha 1 --lambda 0.8 --resolution 40 --out " + prefix.string());
  REQUIRE(r.code == 0);
  CHECK(r.out.find("period3=") != std::string::npos);
  CHECK(r.out.find("period9=") != std::string::npos);
  const std::string ppm = slurp(prefix.string() + ".ppm");
  CHECK(ppm.rfind("P6\n40 35\n255\n", 0) == 0);
  CHECK(slurp(prefix.string() + ".csv").rfind("i,j,x1,x2,x3,label,period\n", 0) == 0);
  fs::remove(prefix.string() + ".ppm");
  fs::remove(prefix.string() + ".csv");

  const Run one = rpsbr("basins --alpha 1 --lambda 0.8 --resolution 1 --out " + prefix.string());
  CHECK(one.code == 0);
  CHECK(slurp(prefix.string() + ".ppm").size() == std::string("P6\n1 1\n255\n").size() + 3);
  fs::remove(prefix.string() + ".ppm");
  fs::remove(prefix.string() + ".csv");

  CHECK(rpsbr("basins --alpha 1 --lambda 0.8 --resolution 4 --out /nonexistent-dir/x").code ==
        5);
}

TEST_CASE("verify exit codes and determinism") {
  const Run a = rpsbr("verify --samples 40 --seed 3");
  const Run b = rpsbr("verify --samples 40 --seed 3");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(json::parse(a.out)["passed"] == true);

  const Run bad = rpsbr("verify --samples 40 --inject-threshold-offset 0.01");
  CHECK(bad.code == 1);
  CHECK(bad.err.find("return-partition") != std::string::npos);
}

}  // TEST_SUITE

}  // namespace
