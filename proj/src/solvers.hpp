#pragma once

// End-to-end critical-point solvers: the global minimizer set (decreasing
// branch of the secular function, falling back to the pseudoinverse branch
// when the root lands on the largest pole), the at-most-one local non-global
// minimizer, and the at-most-one local maximizer. solve_portrait composes all
// three and evaluates the cross-point consistency checks.

#include "model.hpp"
#include "secular.hpp"
#include "types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dwp {

struct SolveOptions {
  // Absolute override for the stationarity certification tolerance; when
  // unset the scale-invariant default from certification_tol() is used.
  std::optional<double> grad_tol;
};

double grad_tolerance(const ReducedDwp& p, const SolveOptions& opts);

// Equality band for grouping the smallest alpha values.
double alpha_group_tol(const ReducedDwp& p);
// Number of indices with alpha_i = alpha_1 (within the band).
int alpha_min_multiplicity(const ReducedDwp& p);

// Data of the degenerate branch where ||w*||^2 = 2 nu - 2 alpha_1.
struct DegenerateInfo {
  int k_bar = 0;
  Vec pinv_point;          // (-alpha_1 I + D)^+ psi, zero on the alpha_1 block
  double radius_sq = 0.0;  // 2 nu - 2 alpha_1 - ||pinv_point||^2, clamped at 0
};

// Requires every psi_i on the alpha_1 block to be zero (within tolerance);
// anything else means the decreasing-branch search could not have failed.
DegenerateInfo degenerate_info(const ReducedDwp& p);

struct CheckResult {
  enum class Status { Pass, Fail, Skip };
  std::string name;
  Status status = Status::Skip;
  std::string detail;
};

struct Portrait {
  SolutionSet global_set;
  std::optional<CriticalPoint> local_nonglobal;
  std::optional<CriticalPoint> local_max;
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;  // degenerate roots and other observations

  bool all_checks_pass() const;
};

SolutionSet solve_global(const ReducedDwp& p, const SolveOptions& opts = {});
std::optional<CriticalPoint> solve_local_nonglobal(const ReducedDwp& p,
                                                   const SolveOptions& opts = {},
                                                   RootSearchNotes* notes = nullptr);
std::optional<CriticalPoint> solve_local_max(const ReducedDwp& p, const SolveOptions& opts = {},
                                             RootSearchNotes* notes = nullptr);
Portrait solve_portrait(const ReducedDwp& p, const SolveOptions& opts = {});

}  // namespace dwp
