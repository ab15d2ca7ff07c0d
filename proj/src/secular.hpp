#pragma once

// The convex secular function
//   h(t) = sum_i 4 psi_i^2 / (t - 2 nu + 2 alpha_i)^2 - t
// with zero-psi terms dropped, and the three root searches the solvers need:
// the decreasing branch right of the largest pole, the convex window between
// the two smallest poles, and the pole-free interval left of the smallest one.
// Every returned root carries a residual/derivative certificate.

#include "model.hpp"
#include "types.hpp"

#include <optional>
#include <vector>

namespace dwp {

struct SecularTerm {
  double pole = 0.0;    // 2 nu - 2 alpha_i
  double weight = 0.0;  // 4 psi_i^2, strictly positive
};

class SecularFn {
 public:
  static SecularFn build(const ReducedDwp& p);

  const std::vector<SecularTerm>& terms() const { return terms_; }
  int n_all() const { return n_all_; }
  const std::vector<int>& zero_mask() const { return zero_mask_; }
  bool empty() const { return terms_.empty(); }

  double eval(double t) const;    // h(t); throws PoleEvaluation inside the guard
  double prime(double t) const;   // h'(t) = -sum 2 w_i/(t-p_i)^3 - 1
  double second(double t) const;  // h''(t) = sum 6 w_i/(t-p_i)^4

  bool has_weighted_pole_at(double x) const;

 private:
  std::vector<SecularTerm> terms_;
  std::vector<int> zero_mask_;
  int n_all_ = 0;

  void check_pole_guard(double t) const;
};

// Relative tolerance on |psi_i| below which a term is treated as exactly zero.
double psi_zero_tol(const ReducedDwp& p);

// Root acceptance thresholds.
inline double root_tol_h(double t) { return 1e-12 * (1.0 + std::abs(t)); }
inline double root_tol_width(double t) { return 1e-13 * (1.0 + std::abs(t)); }
// |h'| at or below this is classified as a zero derivative (not certifiable).
inline constexpr double kPrimeStrictness = 2e-8;

// Degenerate-root observations collected during a search (tangencies and
// roots rejected for failing the strict derivative-sign requirement).
struct RootSearchNotes {
  std::vector<std::string> notes;
};

// Root on (left, inf), where all poles are <= left and h is strictly
// decreasing. Returns nullopt iff lim_{t->left+} h(t) <= 0.
std::optional<RootCertificate> root_decreasing_branch(const SecularFn& s, double left);

// Roots on the open interval (lo, hi) where h is smooth and strictly convex.
// Returns 0, 1 or 2 certificates ordered by t, with h' signs (<=0, >=0).
std::vector<RootCertificate> roots_convex_interval(const SecularFn& s, double lo, double hi);

// The unique root with strict h' < 0 on [0, hi), if any. Poles are >= hi by
// construction. Tangent or derivative-degenerate roots are rejected and noted.
std::optional<RootCertificate> root_max_interval(const SecularFn& s, double hi,
                                                 RootSearchNotes* notes = nullptr);

}  // namespace dwp
