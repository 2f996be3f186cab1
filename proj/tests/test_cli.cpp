#include "doctest.h"

#include "json.hpp"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(LPGM_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

long lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

}  // namespace

TEST_CASE("constants") {
  const Run r = run("--json constants --p 1");
  CHECK(r.status == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["c_p"].get<double>() == doctest::Approx(0.6065306597).epsilon(1e-9));
  CHECK(nlohmann::json::parse(run("constants --p 0 --json").out)["c_p"].get<double>() ==
        doctest::Approx(0.7357588823).epsilon(1e-9));
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("constants --p 1.5").status == 2);
  CHECK(run("constants").status == 2);
  CHECK(run("no-such-command").status == 2);
  CHECK(run("theta --p 0.5 --s 0.5 --c 0.1").status == 2);
  CHECK(run("solve --p 0.5 --f cos:1:1,const:0.05").status == 2);
  CHECK(run("solve --p 0.5 --f const:0.05 --n 100").status == 2);
  CHECK(run("solve --p 0.5 --f bogus").status == 2);
}

TEST_CASE("solver failure exits 4") {
  // Far above the threshold there is no convex solution to continue to.
  CHECK(run("solve --p 0.5 --f const:5").status == 4);
}

TEST_CASE("I/O failure exits 5") {
  CHECK(run("solve --p 0.5 --f const:0.05 --out /nonexistent/dir/x").status == 5);
  CHECK(run("measure --p 1 --polygon /nonexistent/poly.csv").status == 5);
}

TEST_CASE("scan with failed cells exits 3") {
  const Run r = run("theta-scan --ps 0.5 --ss 2 --nc 3 --c-min 0.5 --c-max 1.2");
  CHECK(r.status == 3);
  CHECK(lines(r.out) == 4);
}

TEST_CASE("solve example") {
  const Run r = run("solve --p 0.5 --f const:0.05 --n 64 --out cli_solve");
  CHECK(r.status == 0);
  const std::string csv = slurp("cli_solve.csv");
  CHECK(lines(csv) == 65);
  const auto doc = nlohmann::json::parse(slurp("cli_solve.json"));
  CHECK(doc["residual_sup"].get<double>() < 1e-10);
  CHECK(run("solve --p 0.5 --f const:0.05 --n 64 --out cli_solve2").status == 0);
  CHECK(slurp("cli_solve2.csv") == csv);
  CHECK(slurp("cli_solve2.json") == slurp("cli_solve.json"));
}

TEST_CASE("default theta scan has 150 rows and is reproducible") {
  REQUIRE(run("theta-scan --out cli_scan --jobs 4").status == 0);
  REQUIRE(run("theta-scan --out cli_scan1 --jobs 1").status == 0);
  const std::string csv = slurp("cli_scan.csv");
  CHECK(lines(csv) == 151);
  CHECK(csv == slurp("cli_scan1.csv"));
  CHECK(slurp("cli_scan.json") == slurp("cli_scan1.json"));
}

TEST_CASE("other subcommands run") {
  CHECK(run("roots --p 0.5 --C 0.05").status == 0);
  CHECK(run("goodset --p 0.5 --s 2 --c 0.2").status == 0);
  CHECK(run("theta --p 0.5 --s 2 --c 0.2 --form raw").status == 0);
  const Run sh = run("shoot --p 0.5 --c 0.3 --h0 0.3 --span 3.14159");
  CHECK(sh.status == 0);
  CHECK(lines(sh.out) > 10);
  CHECK(run("find-closed --p 0.5 --c 0.2 --n 40").status == 0);
  const Run cx = run("counterexample --p 0.5 --j 2,4 --n 256 --out cli_family");
  CHECK(cx.status == 0);
  CHECK(std::filesystem::exists("cli_family_j4.csv"));
  const Run m = run("measure --p 1 --regular 4 --r 1.4142135623730951");
  CHECK(m.status == 0);
  CHECK(lines(m.out) == 5);
  CHECK(run("measure --p 0.5 --support const:1,cos:2:0.1 --n 64").status == 0);
}
