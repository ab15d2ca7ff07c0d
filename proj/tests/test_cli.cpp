#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>

#include <sys/wait.h>

namespace {

const std::string kCli = DWP_CLI_PATH;
const std::string kDataDir = DWP_TEST_DATA_DIR;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf;
  while (size_t got = fread(buf.data(), 1, buf.size(), pipe)) r.output.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("solve renders the 1-d portrait and exits 0") {
  const RunResult r = run("solve " + kDataDir + "/example1.json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("global minimizer set: unique") != std::string::npos);
  CHECK(r.output.find("-5.74837") != std::string::npos);
  CHECK(r.output.find("-47.1089") != std::string::npos);
  CHECK(r.output.find("5.56066") != std::string::npos);
  CHECK(r.output.find("0.187707") != std::string::npos);
  CHECK(r.output.find("[fail]") == std::string::npos);
}

TEST_CASE("solve --format json emits a machine-readable report") {
  const RunResult r = run("solve --format json " + kDataDir + "/example2.json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"all_checks_pass\": true") != std::string::npos);
  CHECK(r.output.find("\"variant\": \"unique\"") != std::string::npos);
}

TEST_CASE("solve reports the sphere for the flat well") {
  const RunResult r = run("solve " + kDataDir + "/example3.json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("sphere") != std::string::npos);
  CHECK(r.output.find("8.7178") != std::string::npos);  // sqrt(76)
  CHECK(r.output.find("local maximizer: w = [0, 0]") != std::string::npos);
}

TEST_CASE("malformed input exits 1 with a line/column diagnostic") {
  const RunResult r = run("solve " + kDataDir + "/malformed.json");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("line") != std::string::npos);
  CHECK(r.output.find("column") != std::string::npos);
}

TEST_CASE("missing file exits 1") {
  const RunResult r = run("solve /no/such/file.json");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("error") != std::string::npos);
}

TEST_CASE("singular B^T B input exits 1 with the dedicated message") {
  const RunResult r = run("solve " + kDataDir + "/singular_btb.json");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("positive definite") != std::string::npos);
}

TEST_CASE("sample-secular prints CSV rows") {
  const RunResult r = run("sample-secular " + kDataDir + "/example1.json 0 40 --count 200");
  CHECK(r.exit_code == 0);
  CHECK(r.output.rfind("t,h,h_prime,region", 0) == 0);
  CHECK(r.output.find(",alg1") != std::string::npos);
}

TEST_CASE("sample-surface prints grid rows for n=2") {
  const RunResult r = run("sample-surface " + kDataDir + "/example3.json -10 10 --resolution 16");
  CHECK(r.exit_code == 0);
  CHECK(r.output.rfind("w1,w2,g", 0) == 0);
}

TEST_CASE("sample-surface on n=3 input is an input error") {
  const std::string tmp = "/tmp/dwp_cli_n3.json";
  std::FILE* f = std::fopen(tmp.c_str(), "w");
  REQUIRE(f != nullptr);
  std::fputs(R"({"form":"reduced","alpha":[0,1,2],"psi":[0,0,0],"nu":1})", f);
  std::fclose(f);
  const RunResult r = run("sample-surface " + tmp + " -1 1 --resolution 4");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("n <= 2") != std::string::npos);
}

TEST_CASE("reduce prints the reduced data for a general problem") {
  const RunResult r = run("reduce " + kDataDir + "/general_small.json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("alpha = ") != std::string::npos);
  CHECK(r.output.find("offset = ") != std::string::npos);
  CHECK(r.output.find("congruence residuals") != std::string::npos);
}

TEST_CASE("verify exits 0 on a healthy instance") {
  const RunResult r = run("verify " + kDataDir + "/example1.json --seed 99");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("all checks passed") != std::string::npos);
  CHECK(r.output.find("[fail]") == std::string::npos);
}
