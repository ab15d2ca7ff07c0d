// Command-line front end. Everything goes through the C API in dwp.h; reports
// cross the boundary as JSON and are rendered here.

#include <dwp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitCheckFailed = 2;

struct ProblemDeleter {
  void operator()(dwp_problem* p) const { dwp_problem_free(p); }
};
using ProblemPtr = std::unique_ptr<dwp_problem, ProblemDeleter>;

struct StringDeleter {
  void operator()(char* s) const { dwp_string_free(s); }
};
using ApiString = std::unique_ptr<char, StringDeleter>;

ProblemPtr open_problem(const std::string& path, int& exit_code) {
  dwp_problem* raw = nullptr;
  const int rc = dwp_problem_from_file(path.c_str(), &raw);
  if (rc != DWP_OK) {
    std::cerr << "error: " << dwp_last_error() << "\n";
    exit_code = kExitInputError;
    return nullptr;
  }
  exit_code = kExitOk;
  return ProblemPtr(raw);
}

std::string sig6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string vec_str(const json& arr) {
  std::string s = "[";
  for (size_t i = 0; i < arr.size(); ++i) {
    if (i) s += ", ";
    s += sig6(arr[i].get<double>());
  }
  return s + "]";
}

void print_point(const json& pt, const std::string& label) {
  std::cout << label << ": w = " << vec_str(pt["w"]) << ", ||w||^2 = "
            << sig6(pt["norm_sq"].get<double>()) << ", g = " << sig6(pt["value"].get<double>());
  if (pt.contains("pi_value"))
    std::cout << ", x = " << vec_str(pt["x"]) << ", Pi = " << sig6(pt["pi_value"].get<double>());
  std::cout << "\n";
  const auto& sig = pt["hessian_signature"];
  std::cout << "  hessian signature (neg,zero,pos): (" << sig["negative"] << "," << sig["zero"]
            << "," << sig["positive"] << ")\n";
  if (pt.contains("certificate")) {
    const auto& c = pt["certificate"];
    std::cout << "  certificate: t* = " << sig6(c["t_star"].get<double>())
              << ", h(t*) = " << sig6(c["h_value"].get<double>())
              << ", h'(t*) = " << sig6(c["h_prime"].get<double>()) << "\n";
  }
}

void print_portrait_text(const json& j) {
  std::cout << "problem: " << j["problem"]["form"].get<std::string>()
            << " form, n = " << j["problem"]["n"] << "\n";
  std::cout << "reduced: alpha = " << vec_str(j["reduced"]["alpha"])
            << ", psi = " << vec_str(j["reduced"]["psi"])
            << ", nu = " << sig6(j["reduced"]["nu"].get<double>()) << "\n";
  if (j.contains("offset"))
    std::cout << "value offset Pi(x) - g(w) = " << sig6(j["offset"].get<double>()) << "\n";

  const auto& glob = j["global"];
  std::cout << "\nglobal minimizer set: " << glob["variant"].get<std::string>()
            << ", value = " << sig6(glob["value"].get<double>()) << "\n";
  if (glob.contains("sphere")) {
    const auto& sp = glob["sphere"];
    std::cout << "  sphere: center = " << vec_str(sp["center"])
              << ", radius = " << sig6(sp["radius"].get<double>()) << ", free indices = [";
    for (size_t i = 0; i < sp["free_indices"].size(); ++i)
      std::cout << (i ? "," : "") << sp["free_indices"][i];
    std::cout << "]  (" << glob["points"].size() << " sampled points certified)\n";
  } else {
    for (const auto& pt : glob["points"]) print_point(pt, "  point");
  }

  std::cout << "\n";
  if (j["local_nonglobal"].is_null())
    std::cout << "local non-global minimizer: none\n";
  else
    print_point(j["local_nonglobal"], "local non-global minimizer");
  if (j["local_max"].is_null())
    std::cout << "local maximizer: none\n";
  else
    print_point(j["local_max"], "local maximizer");

  std::cout << "\nchecks:\n";
  for (const auto& c : j["checks"]) {
    std::cout << "  [" << c["status"].get<std::string>() << "] "
              << c["name"].get<std::string>();
    const std::string detail = c["detail"].get<std::string>();
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
  }
  for (const auto& note : j["notes"])
    std::cout << "  note: " << note.get<std::string>() << "\n";
}

int write_output(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return kExitOk;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kExitInputError;
  }
  f << content;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified critical-point portraits of double-well potentials"};
  app.require_subcommand(1);

  std::string path, format = "text", out_path;
  double tol = 0.0;
  std::uint64_t seed = 0;
  double t_lo = 0.0, t_hi = 0.0, box_lo = 0.0, box_hi = 0.0;
  int count = 400, resolution = 128;

  auto* solve = app.add_subcommand("solve", "Compute the certified critical-point portrait");
  solve->add_option("file", path, "problem file (JSON)")->required();
  solve->add_option("--tol", tol, "override the stationarity certification tolerance");
  solve->add_option("--format", format, "text|json")->check(CLI::IsMember({"text", "json"}));

  auto* reduce = app.add_subcommand("reduce", "Print the reduced problem and the lift-back map");
  reduce->add_option("file", path, "problem file (JSON)")->required();
  reduce->add_option("--format", format, "text|json")->check(CLI::IsMember({"text", "json"}));

  auto* secular =
      app.add_subcommand("sample-secular", "CSV sample of the secular function h(t)");
  secular->add_option("file", path, "problem file (JSON)")->required();
  secular->add_option("t_lo", t_lo, "lower end of the t range")->required();
  secular->add_option("t_hi", t_hi, "upper end of the t range")->required();
  secular->add_option("--count", count, "number of samples (default 400)");
  secular->add_option("-o,--output", out_path, "write CSV here instead of stdout");

  auto* surface = app.add_subcommand("sample-surface", "CSV grid of g(w) for plotting (n <= 2)");
  surface->add_option("file", path, "problem file (JSON)")->required();
  surface->add_option("lo", box_lo, "lower corner of the box")->required();
  surface->add_option("hi", box_hi, "upper corner of the box")->required();
  surface->add_option("--resolution", resolution, "points per axis (default 128)");
  surface->add_option("-o,--output", out_path, "write CSV here instead of stdout");

  auto* verify = app.add_subcommand("verify", "Run the brute-force oracle against the solvers");
  verify->add_option("file", path, "problem file (JSON)")->required();
  verify->add_option("--tol", tol, "override the stationarity certification tolerance");
  verify->add_option("--seed", seed, "seed for the random evaluation points");
  verify->add_option("--format", format, "text|json")->check(CLI::IsMember({"text", "json"}));

  CLI11_PARSE(app, argc, argv);

  int rc = kExitOk;
  ProblemPtr problem = open_problem(path, rc);
  if (!problem) return rc;

  if (solve->parsed()) {
    char* raw = nullptr;
    if (dwp_solve(problem.get(), tol, &raw) != DWP_OK) {
      std::cerr << "error: " << dwp_last_error() << "\n";
      return kExitInputError;
    }
    ApiString report(raw);
    const json j = json::parse(report.get());
    if (format == "json")
      std::cout << report.get() << "\n";
    else
      print_portrait_text(j);
    return j["all_checks_pass"].get<bool>() ? kExitOk : kExitCheckFailed;
  }

  if (reduce->parsed()) {
    char* raw = nullptr;
    if (dwp_reduce(problem.get(), &raw) != DWP_OK) {
      std::cerr << "error: " << dwp_last_error() << "\n";
      return kExitInputError;
    }
    ApiString report(raw);
    if (format == "json") {
      std::cout << report.get() << "\n";
      return kExitOk;
    }
    const json j = json::parse(report.get());
    std::cout << "alpha = " << vec_str(j["reduced"]["alpha"]) << "\n"
              << "psi   = " << vec_str(j["reduced"]["psi"]) << "\n"
              << "nu    = " << sig6(j["reduced"]["nu"].get<double>()) << "\n";
    if (j.contains("back_map")) {
      std::cout << "shift = " << vec_str(j["back_map"]["shift"]) << "\n"
                << "offset = " << sig6(j["back_map"]["offset"].get<double>()) << "\n"
                << "congruence residuals: A " << sig6(j["residuals"]["congruence_A"].get<double>())
                << ", B^T B " << sig6(j["residuals"]["congruence_B"].get<double>()) << "\n";
    }
    return kExitOk;
  }

  if (secular->parsed()) {
    char* raw = nullptr;
    if (dwp_sample_secular(problem.get(), t_lo, t_hi, count, &raw) != DWP_OK) {
      std::cerr << "error: " << dwp_last_error() << "\n";
      return kExitInputError;
    }
    ApiString csv(raw);
    return write_output(csv.get(), out_path);
  }

  if (surface->parsed()) {
    char* raw = nullptr;
    if (dwp_sample_surface(problem.get(), box_lo, box_hi, resolution, &raw) != DWP_OK) {
      std::cerr << "error: " << dwp_last_error() << "\n";
      return kExitInputError;
    }
    ApiString csv(raw);
    return write_output(csv.get(), out_path);
  }

  // verify
  char* raw = nullptr;
  int all_pass = 0;
  if (dwp_verify(problem.get(), tol, seed, &raw, &all_pass) != DWP_OK) {
    std::cerr << "error: " << dwp_last_error() << "\n";
    return kExitInputError;
  }
  ApiString report(raw);
  if (format == "json") {
    std::cout << report.get() << "\n";
  } else {
    const json j = json::parse(report.get());
    std::cout << "verification (seed " << j["seed"] << "):\n";
    for (const auto& c : j["checks"]) {
      std::cout << "  [" << c["status"].get<std::string>() << "] "
                << c["name"].get<std::string>();
      const std::string detail = c["detail"].get<std::string>();
      if (!detail.empty()) std::cout << "  (" << detail << ")";
      std::cout << "\n";
    }
    std::cout << (all_pass ? "all checks passed\n" : "CHECK FAILURES PRESENT\n");
  }
  return all_pass ? kExitOk : kExitCheckFailed;
}
