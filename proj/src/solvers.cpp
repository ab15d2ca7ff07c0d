#include "solvers.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dwp {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

double radius_clamp_tol(const ReducedDwp& p) {
  return 1e-9 * (1.0 + std::abs(2.0 * p.nu - 2.0 * p.alpha_min()));
}

// w_i = 2 psi_i / (t - 2 nu + 2 alpha_i); valid whenever the shifted diagonal
// is nonsingular, i.e. t is not a pole.
Vec reconstruct(const ReducedDwp& p, double t) {
  Vec w(p.n());
  for (int i = 0; i < p.n(); ++i) w[i] = 2.0 * p.psi[i] / (t - 2.0 * p.nu + 2.0 * p.alpha[i]);
  return w;
}

// Pseudoinverse variant: coordinates with psi_i = 0 are pinned to zero.
Vec reconstruct_pinv(const ReducedDwp& p, double t) {
  const double eps = psi_zero_tol(p);
  Vec w = Vec::Zero(p.n());
  for (int i = 0; i < p.n(); ++i) {
    if (std::abs(p.psi[i]) > eps) w[i] = 2.0 * p.psi[i] / (t - 2.0 * p.nu + 2.0 * p.alpha[i]);
  }
  return w;
}

// Improve-only Newton steps on grad g. When the root hugs a pole at large t
// the t-grid spacing caps the attainable |h|, and with it the stationarity of
// the reconstructed point; a step in w-space is not ulp-limited that way.
// Rejecting non-improving steps keeps singular-Hessian points untouched.
Vec polish_stationary(const ReducedDwp& p, Vec w) {
  for (int k = 0; k < 2; ++k) {
    const Vec g = eval_grad(w, p);
    const double gn = g.norm();
    if (gn == 0.0) break;
    const Vec step = eval_hess(w, p).partialPivLu().solve(-g);
    if (!step.allFinite()) break;
    const Vec next = w + step;
    if (!(eval_grad(next, p).norm() < gn)) break;
    w = next;
  }
  return w;
}

CriticalPoint make_point(const ReducedDwp& p, Vec w, PointKind kind,
                         std::optional<RootCertificate> cert, bool polish = true) {
  if (polish) w = polish_stationary(p, std::move(w));
  CriticalPoint cp;
  cp.t = w.squaredNorm();
  cp.value = eval_g(w, p);
  cp.signature = hessian_signature(eval_hess(w, p));
  cp.kind = kind;
  cp.w = std::move(w);
  cp.certificate = std::move(cert);
  return cp;
}

// 8 * k deterministic unit directions in the free subspace: axes, adjacent
// diagonals, then a fixed trigonometric fill.
std::vector<Vec> sphere_directions(int k) {
  std::vector<Vec> dirs;
  for (int i = 0; i < k; ++i) {
    Vec e = Vec::Zero(k);
    e[i] = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  for (int i = 0; i + 1 < k && static_cast<int>(dirs.size()) < 8 * k; ++i) {
    for (const double s : {1.0, -1.0}) {
      Vec v = Vec::Zero(k);
      v[i] = 1.0 / std::sqrt(2.0);
      v[i + 1] = s / std::sqrt(2.0);
      dirs.push_back(v);
      dirs.push_back(-v);
    }
  }
  int m = 0;
  while (static_cast<int>(dirs.size()) < 8 * k) {
    Vec v(k);
    for (int j = 0; j < k; ++j) v[j] = std::sin(1.2345678 * (m + 2) * (j + 1) + 0.456);
    ++m;
    if (v.norm() < 1e-6) continue;
    dirs.push_back(v / v.norm());
  }
  return dirs;
}

}  // namespace

double grad_tolerance(const ReducedDwp& p, const SolveOptions& opts) {
  return opts.grad_tol.value_or(certification_tol(p));
}

double alpha_group_tol(const ReducedDwp& p) { return 1e-9 * (1.0 + std::abs(p.alpha_min())); }

int alpha_min_multiplicity(const ReducedDwp& p) {
  const double tol = alpha_group_tol(p);
  int k = 1;
  while (k < p.n() && p.alpha[k] - p.alpha[0] <= tol) ++k;
  return k;
}

DegenerateInfo degenerate_info(const ReducedDwp& p) {
  DegenerateInfo info;
  info.k_bar = alpha_min_multiplicity(p);
  const double eps = psi_zero_tol(p);
  for (int i = 0; i < info.k_bar; ++i) {
    require(std::abs(p.psi[i]) <= eps, ErrorCode::Internal,
            "degenerate branch entered with psi[" + std::to_string(i) +
                "] = " + fmt(p.psi[i]) + " nonzero on the smallest-alpha block");
  }
  info.pinv_point = Vec::Zero(p.n());
  for (int i = info.k_bar; i < p.n(); ++i) {
    if (std::abs(p.psi[i]) > eps) info.pinv_point[i] = p.psi[i] / (p.alpha[i] - p.alpha[0]);
  }
  const double gap = 2.0 * p.nu - 2.0 * p.alpha_min();
  double r2 = gap - info.pinv_point.squaredNorm();
  const double tol = radius_clamp_tol(p);
  require(r2 >= -tol, ErrorCode::Internal,
          "degenerate branch with negative squared radius " + fmt(r2) +
              "; numerical breakdown, not a valid outcome");
  info.radius_sq = std::max(r2, 0.0);
  return info;
}

SolutionSet solve_global(const ReducedDwp& p, const SolveOptions& opts) {
  (void)opts;
  const SecularFn s = SecularFn::build(p);
  const double left = 2.0 * p.nu - 2.0 * p.alpha_min();

  SolutionSet set;
  if (auto cert = root_decreasing_branch(s, left)) {
    Vec w = reconstruct(p, cert->t_star);
    set.variant = SolutionSet::Variant::Unique;
    set.points.push_back(make_point(p, std::move(w), PointKind::GlobalMin, *cert));
    set.value = set.points[0].value;
    return set;
  }

  const DegenerateInfo info = degenerate_info(p);
  const double tol = radius_clamp_tol(p);

  // The squared norm is pinned at the boundary 2 nu - 2 alpha_1, where h is
  // not defined; these points carry no root certificate, their stationarity
  // check is the certificate.
  if (info.radius_sq <= tol) {
    set.variant = SolutionSet::Variant::Unique;
    set.points.push_back(
        make_point(p, info.pinv_point, PointKind::GlobalMin, std::nullopt, false));
    set.value = set.points[0].value;
    return set;
  }

  const double radius = std::sqrt(info.radius_sq);
  if (info.k_bar == 1) {
    set.variant = SolutionSet::Variant::Pair;
    for (const double sgn : {1.0, -1.0}) {
      Vec w = info.pinv_point;
      w[0] += sgn * radius;
      set.points.push_back(make_point(p, std::move(w), PointKind::GlobalMin, std::nullopt, false));
    }
    set.value = set.points[0].value;
    return set;
  }

  set.variant = SolutionSet::Variant::Sphere;
  SphereSet sphere;
  sphere.center = info.pinv_point;
  sphere.radius = radius;
  for (int i = 0; i < info.k_bar; ++i) sphere.free_indices.push_back(i);
  for (const Vec& dir : sphere_directions(info.k_bar)) {
    Vec w = info.pinv_point;
    for (int i = 0; i < info.k_bar; ++i) w[i] += radius * dir[i];
    set.points.push_back(make_point(p, std::move(w), PointKind::GlobalMin, std::nullopt, false));
  }
  set.value = set.points[0].value;
  set.sphere = std::move(sphere);
  return set;
}

std::optional<CriticalPoint> solve_local_nonglobal(const ReducedDwp& p, const SolveOptions& opts,
                                                   RootSearchNotes* notes) {
  (void)opts;
  const double hi = 2.0 * p.nu - 2.0 * p.alpha_min();
  if (hi <= 0.0) return std::nullopt;  // g convex
  const int k_bar = alpha_min_multiplicity(p);
  if (p.n() >= 2 && k_bar >= 2) return std::nullopt;  // alpha_1 = alpha_2

  const double eps = psi_zero_tol(p);
  if (std::abs(p.psi[0]) <= eps) return std::nullopt;  // psi_1 = 0

  const double lo = (p.n() >= 2) ? std::max(2.0 * p.nu - 2.0 * p.alpha[1], 0.0) : 0.0;
  if (!(lo < hi)) return std::nullopt;

  const SecularFn s = SecularFn::build(p);
  for (const RootCertificate& cert : roots_convex_interval(s, lo, hi)) {
    if (std::abs(cert.h_prime) <= kPrimeStrictness) {
      if (notes)
        notes->notes.push_back("root t=" + fmt(cert.t_star) +
                               " rejected: |h'| below strictness threshold");
      continue;
    }
    if (cert.h_prime < 0.0) continue;  // belongs to the maximizer branch
    CriticalPoint cp = make_point(p, reconstruct(p, cert.t_star), PointKind::LocalNonGlobalMin,
                                  cert);
    if (cp.signature.negative > 0) {
      if (notes)
        notes->notes.push_back("root t=" + fmt(cert.t_star) +
                               " rejected: Hessian has a negative eigenvalue");
      continue;
    }
    return cp;
  }
  return std::nullopt;
}

std::optional<CriticalPoint> solve_local_max(const ReducedDwp& p, const SolveOptions& opts,
                                             RootSearchNotes* notes) {
  (void)opts;
  if (p.nu - p.alpha_max() <= 0.0) return std::nullopt;

  const SecularFn s = SecularFn::build(p);
  if (s.empty()) {
    RootCertificate cert{0.0, 0.0, -1.0, 0.0, 0.0};
    return make_point(p, Vec::Zero(p.n()), PointKind::LocalMax, cert, false);
  }

  const double hi = 2.0 * p.nu - 2.0 * p.alpha_max();
  auto cert = root_max_interval(s, hi, notes);
  if (!cert) return std::nullopt;

  CriticalPoint cp =
      make_point(p, reconstruct_pinv(p, cert->t_star), PointKind::LocalMax, *cert);
  if (cp.signature.positive > 0) {
    if (notes)
      notes->notes.push_back("root t=" + fmt(cert->t_star) +
                             " rejected: Hessian has a positive eigenvalue");
    return std::nullopt;
  }
  return cp;
}

bool Portrait::all_checks_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) {
    return c.status != CheckResult::Status::Fail;
  });
}

namespace {

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

void add_check(Portrait& pt, const std::string& name, bool vacuous, bool pass,
               const std::string& detail) {
  CheckResult c;
  c.name = name;
  c.status = vacuous ? CheckResult::Status::Skip
                     : (pass ? CheckResult::Status::Pass : CheckResult::Status::Fail);
  c.detail = detail;
  pt.checks.push_back(std::move(c));
}

}  // namespace

Portrait solve_portrait(const ReducedDwp& p, const SolveOptions& opts) {
  Portrait pt;
  RootSearchNotes notes;
  pt.global_set = solve_global(p, opts);
  pt.local_nonglobal = solve_local_nonglobal(p, opts, &notes);
  pt.local_max = solve_local_max(p, opts, &notes);
  pt.notes = std::move(notes.notes);

  const double gtol = grad_tolerance(p, opts);
  const double hi_gap = 2.0 * p.nu - 2.0 * p.alpha_min();

  std::vector<const CriticalPoint*> all_points;
  for (const auto& cp : pt.global_set.points) all_points.push_back(&cp);
  if (pt.local_nonglobal) all_points.push_back(&*pt.local_nonglobal);
  if (pt.local_max) all_points.push_back(&*pt.local_max);

  // (a) sign opposition between the first components of the two minimizers.
  {
    const bool applicable = pt.local_nonglobal.has_value() &&
                            pt.global_set.variant != SolutionSet::Variant::Sphere;
    bool pass = true;
    std::string detail;
    if (applicable) {
      const int s_psi = sign_of(p.psi[0]);
      const int s_local = sign_of(pt.local_nonglobal->w[0]);
      for (const auto& cp : pt.global_set.points) {
        const int s_glob = sign_of(cp.w[0]);
        if (!(s_psi != 0 && s_glob == s_psi && s_local == -s_psi)) pass = false;
      }
      detail = "sign(psi_1)=" + std::to_string(s_psi) +
               ", sign(w*_1)=" + std::to_string(sign_of(pt.global_set.points[0].w[0])) +
               ", sign(w_local_1)=" + std::to_string(s_local);
    }
    add_check(pt, "sign_opposition", !applicable, pass, detail);
  }

  // (b) the local maximizer has strictly smaller norm than every minimizer.
  {
    const bool applicable = pt.local_max.has_value();
    bool pass = true;
    std::string detail;
    if (applicable) {
      const double max_norm = std::sqrt(pt.local_max->t);
      double min_norm = std::numeric_limits<double>::infinity();
      for (const auto& cp : pt.global_set.points) min_norm = std::min(min_norm, std::sqrt(cp.t));
      if (pt.local_nonglobal) min_norm = std::min(min_norm, std::sqrt(pt.local_nonglobal->t));
      pass = max_norm < min_norm;
      detail = "||w_max||=" + fmt(max_norm) + " vs min ||w_min||=" + fmt(min_norm);
    }
    add_check(pt, "norm_ordering", !applicable, pass, detail);
  }

  // (c) value ordering between global and local non-global minimizer.
  {
    const bool applicable = pt.local_nonglobal.has_value();
    bool pass = true;
    std::string detail;
    if (applicable) {
      const double vg = pt.global_set.value;
      const double vl = pt.local_nonglobal->value;
      pass = vg <= vl + 1e-9 * (1.0 + std::abs(vl));
      detail = "g(global)=" + fmt(vg) + ", g(local)=" + fmt(vl);
    }
    add_check(pt, "value_ordering", !applicable, pass, detail);
  }

  // (d) stationarity and Hessian signatures of every produced point.
  {
    bool pass = true;
    std::string detail;
    for (const auto* cp : all_points) {
      const double gn = eval_grad(cp->w, p).norm();
      if (gn > gtol) {
        pass = false;
        detail += "||grad||=" + fmt(gn) + " above " + fmt(gtol) + "; ";
      }
      const bool sig_ok = (cp->kind == PointKind::LocalMax) ? cp->signature.positive == 0
                                                            : cp->signature.negative == 0;
      if (!sig_ok) {
        pass = false;
        detail += std::string("signature inconsistent with ") + to_string(cp->kind) + "; ";
      }
    }
    add_check(pt, "stationarity_and_signatures", false, pass, detail);
  }

  // Global-branch invariants: norm bound, sign consistency, value equality.
  {
    bool pass = true;
    std::string detail;
    const double tol = radius_clamp_tol(p);
    for (const auto& cp : pt.global_set.points) {
      if (!(cp.t >= hi_gap - tol)) {
        pass = false;
        detail += "||w*||^2=" + fmt(cp.t) + " below " + fmt(hi_gap) + "; ";
      }
      for (int i = 0; i < p.n(); ++i) {
        if (p.psi[i] * cp.w[i] < -1e-9 * (1.0 + p.psi.cwiseAbs().maxCoeff())) {
          pass = false;
          detail += "psi_i w_i < 0 at i=" + std::to_string(i) + "; ";
        }
      }
    }
    add_check(pt, "global_norm_and_sign", false, pass, detail);
  }
  {
    bool pass = true;
    std::string detail;
    for (const auto& cp : pt.global_set.points) {
      if (std::abs(cp.value - pt.global_set.value) >
          1e-9 * (1.0 + std::abs(pt.global_set.value))) {
        pass = false;
        detail = "global set values differ: " + fmt(cp.value) + " vs " + fmt(pt.global_set.value);
      }
    }
    add_check(pt, "global_value_consistency", false, pass, detail);
  }

  // Interval membership of the local non-global minimizer's squared norm.
  {
    const bool applicable = pt.local_nonglobal.has_value();
    bool pass = true;
    std::string detail;
    if (applicable) {
      const double lo = (p.n() >= 2) ? std::max(2.0 * p.nu - 2.0 * p.alpha[1], 0.0) : 0.0;
      const double t = pt.local_nonglobal->t;
      pass = lo < t && t < hi_gap;
      detail = "||w||^2=" + fmt(t) + " in (" + fmt(lo) + ", " + fmt(hi_gap) + ")";
    }
    add_check(pt, "local_min_interval", !applicable, pass, detail);
  }

  // Strain condition at the local maximizer: 1/2||w||^2 - nu + alpha_i <= 0.
  {
    const bool applicable = pt.local_max.has_value();
    bool pass = true;
    std::string detail;
    if (applicable) {
      const double strain = 0.5 * pt.local_max->t - p.nu;
      const double worst = strain + p.alpha_max();
      pass = worst <= 1e-9 * (1.0 + std::abs(p.alpha_max()) + std::abs(p.nu));
      detail = "max_i (strain + alpha_i) = " + fmt(worst);
    }
    add_check(pt, "local_max_strain", !applicable, pass, detail);
  }

  return pt;
}

}  // namespace dwp
