#pragma once

// Brute-force verification machinery, independent of the solvers: central
// finite differences, dense grid scanning with Newton polish for small n, and
// dense sign-change bracketing of the secular function. Used by the test
// suites and the `verify` subcommand; never called from the solvers.

#include "model.hpp"
#include "secular.hpp"
#include "types.hpp"

#include <utility>
#include <vector>

namespace dwp {

Vec fd_gradient(const ReducedDwp& p, const Vec& w, double step);
Mat fd_hessian(const ReducedDwp& p, const Vec& w, double step);

enum class ScanKind { Minimum, Maximum, Saddle, Degenerate };

struct ScanCandidate {
  Vec w;
  ScanKind kind = ScanKind::Degenerate;
  HessianSignature signature;
  double value = 0.0;
};

struct GridScanResult {
  std::vector<ScanCandidate> candidates;  // sorted lexicographically by w
  std::vector<std::pair<double, double>> box;
  int resolution = 0;
};

// Default scan box half-width: R = 2 + 2 sqrt(max(2 nu - 2 alpha_1, 1)).
double default_scan_radius(const ReducedDwp& p);

// Newton-polishes a seed from every grid cell where all gradient components
// change sign; deduplicates and classifies converged points. n <= 3 only.
// workers <= 0 picks a hardware-based default; results are identical for any
// worker count.
GridScanResult grid_critical_scan(const ReducedDwp& p,
                                  const std::vector<std::pair<double, double>>& box,
                                  int resolution, int workers = 0);

// Sign-change brackets of h over a uniform grid on [lo, hi]; samples within
// the pole guard are skipped.
std::vector<std::pair<double, double>> secular_root_scan(const SecularFn& s, double lo, double hi,
                                                         int samples);

const char* to_string(ScanKind kind);

}  // namespace dwp
