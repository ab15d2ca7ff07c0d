#include <doctest.h>

#include <dwp.h>

#include <json.hpp>

#include <cmath>
#include <string>

namespace {

using nlohmann::json;

const std::string kDataDir = DWP_TEST_DATA_DIR;

constexpr const char* kExample1 = R"({"form":"reduced","alpha":[-2],"psi":[-3],"nu":14})";

struct Problem {
  dwp_problem* handle = nullptr;
  ~Problem() { dwp_problem_free(handle); }
};

}  // namespace

TEST_CASE("parse, query and free a problem handle") {
  Problem p;
  REQUIRE(dwp_problem_from_json(kExample1, &p.handle) == DWP_OK);
  int n = 0, general = -1;
  CHECK(dwp_problem_dim(p.handle, &n) == DWP_OK);
  CHECK(n == 1);
  CHECK(dwp_problem_is_general(p.handle, &general) == DWP_OK);
  CHECK(general == 0);
}

TEST_CASE("solve through the C boundary reproduces the 1-d portrait") {
  Problem p;
  REQUIRE(dwp_problem_from_json(kExample1, &p.handle) == DWP_OK);
  char* raw = nullptr;
  REQUIRE(dwp_solve(p.handle, 0.0, &raw) == DWP_OK);
  const json j = json::parse(raw);
  dwp_string_free(raw);
  CHECK(std::abs(j["global"]["points"][0]["w"][0].get<double>() - (-5.7484)) <= 1e-3);
  CHECK(std::abs(j["local_nonglobal"]["w"][0].get<double>() - 5.5607) <= 1e-3);
  CHECK(std::abs(j["local_max"]["w"][0].get<double>() - 0.1877) <= 1e-3);
  CHECK(j["all_checks_pass"] == true);
}

TEST_CASE("solve accepts a tolerance override") {
  Problem p;
  REQUIRE(dwp_problem_from_json(kExample1, &p.handle) == DWP_OK);
  char* raw = nullptr;
  REQUIRE(dwp_solve(p.handle, 1e-6, &raw) == DWP_OK);
  const json j = json::parse(raw);
  dwp_string_free(raw);
  CHECK(j["grad_tol"].get<double>() == 1e-6);
}

TEST_CASE("parse errors set the parse code and a message") {
  dwp_problem* h = nullptr;
  CHECK(dwp_problem_from_json("{not json", &h) == DWP_ERR_PARSE);
  CHECK(h == nullptr);
  CHECK(std::string(dwp_last_error()).find("line") != std::string::npos);
}

TEST_CASE("singular B^T B is reported as not positive definite") {
  Problem p;
  const int rc = dwp_problem_from_file((kDataDir + "/singular_btb.json").c_str(), &p.handle);
  CHECK(rc == DWP_ERR_NOT_POSITIVE_DEFINITE);
}

TEST_CASE("missing file is a parse error with the path in the message") {
  dwp_problem* h = nullptr;
  CHECK(dwp_problem_from_file("/nonexistent/nope.json", &h) == DWP_ERR_PARSE);
  CHECK(std::string(dwp_last_error()).find("nope.json") != std::string::npos);
}

TEST_CASE("null arguments are rejected") {
  CHECK(dwp_problem_from_json(nullptr, nullptr) == DWP_ERR_ARGUMENT);
  CHECK(dwp_solve(nullptr, 0.0, nullptr) == DWP_ERR_ARGUMENT);
  int n = 0;
  CHECK(dwp_problem_dim(nullptr, &n) == DWP_ERR_ARGUMENT);
}

TEST_CASE("problem JSON round-trips through the boundary") {
  Problem p;
  REQUIRE(dwp_problem_from_json(kExample1, &p.handle) == DWP_OK);
  char* raw = nullptr;
  REQUIRE(dwp_problem_to_json(p.handle, &raw) == DWP_OK);
  const json j = json::parse(raw);
  dwp_string_free(raw);
  CHECK(j["form"] == "reduced");
  CHECK(j["alpha"][0] == -2.0);
  CHECK(j["nu"] == 14.0);
}

TEST_CASE("reduce endpoint carries the back map for general problems") {
  Problem p;
  REQUIRE(dwp_problem_from_file((kDataDir + "/general_small.json").c_str(), &p.handle) == DWP_OK);
  char* raw = nullptr;
  REQUIRE(dwp_reduce(p.handle, &raw) == DWP_OK);
  const json j = json::parse(raw);
  dwp_string_free(raw);
  CHECK(j.contains("back_map"));
  CHECK(j["residuals"]["congruence_A"].get<double>() <= 1e-8 * 10);
  CHECK(j["residuals"]["congruence_B"].get<double>() <= 1e-8 * 10);
}

TEST_CASE("secular and surface CSV endpoints") {
  Problem p;
  REQUIRE(dwp_problem_from_json(kExample1, &p.handle) == DWP_OK);
  char* csv = nullptr;
  REQUIRE(dwp_sample_secular(p.handle, 0.0, 40.0, 100, &csv) == DWP_OK);
  CHECK(std::string(csv).rfind("t,h,h_prime,region\n", 0) == 0);
  dwp_string_free(csv);
  csv = nullptr;
  REQUIRE(dwp_sample_surface(p.handle, -8.0, 8.0, 10, &csv) == DWP_OK);
  CHECK(std::string(csv).rfind("w1,g\n", 0) == 0);
  dwp_string_free(csv);
  // invalid range surfaces as a numeric/argument failure, not a crash
  csv = nullptr;
  CHECK(dwp_sample_secular(p.handle, 5.0, 1.0, 100, &csv) == DWP_ERR_ARGUMENT);
}

TEST_CASE("verify endpoint reports all-pass for the 1-d instance") {
  Problem p;
  REQUIRE(dwp_problem_from_json(kExample1, &p.handle) == DWP_OK);
  char* raw = nullptr;
  int all_pass = 0;
  REQUIRE(dwp_verify(p.handle, 0.0, 1234, &raw, &all_pass) == DWP_OK);
  const json j = json::parse(raw);
  dwp_string_free(raw);
  CHECK(all_pass == 1);
  CHECK(j["all_pass"] == true);
  CHECK(j["seed"] == 1234);
  CHECK(j["checks"].size() >= 5);
}

TEST_CASE("version string is present") {
  CHECK(std::string(dwp_version()).find('.') != std::string::npos);
}
