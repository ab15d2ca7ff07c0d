#pragma once

// Runs the oracle suite against the solver outputs for one problem:
// finite-difference derivative agreement, secular root-count agreement,
// grid-scan equivalence, reduction identity, and the portrait cross-checks.

#include "problem_io.hpp"

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

namespace dwp {

struct VerifyOptions {
  std::optional<double> grad_tol;
  std::uint64_t seed = 7052390251u;
  int fd_points = 20;
  int grid_resolution = 128;
};

struct VerifyReport {
  struct Entry {
    std::string name;
    CheckResult::Status status = CheckResult::Status::Skip;
    std::string detail;
  };
  std::vector<Entry> entries;
  bool all_pass() const;
};

VerifyReport run_verify(const PreparedProblem& pp, const VerifyOptions& opts);
nlohmann::json verify_to_json(const PreparedProblem& pp, const VerifyReport& report,
                              const VerifyOptions& opts);

}  // namespace dwp
