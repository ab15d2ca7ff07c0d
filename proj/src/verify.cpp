#include "verify.hpp"

#include "oracle.hpp"
#include "secular.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace dwp {

namespace {

std::string fmt(double x) { return num_str(x); }

// Uniform double in [lo, hi] from a seeded engine; mt19937_64 output is
// specified exactly, so the stream is platform-independent.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng()) / static_cast<double>(std::mt19937_64::max());
  return lo + (hi - lo) * u;
}

struct EntrySink {
  std::vector<VerifyReport::Entry>& entries;
  void add(const std::string& name, CheckResult::Status status, const std::string& detail) {
    entries.push_back({name, status, detail});
  }
  void pass_fail(const std::string& name, bool ok, const std::string& detail) {
    add(name, ok ? CheckResult::Status::Pass : CheckResult::Status::Fail, detail);
  }
};

}  // namespace

bool VerifyReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const Entry& e) {
    return e.status != CheckResult::Status::Fail;
  });
}

VerifyReport run_verify(const PreparedProblem& pp, const VerifyOptions& opts) {
  const ReducedDwp& p = pp.reduced;
  const int n = p.n();
  VerifyReport report;
  EntrySink sink{report.entries};
  std::mt19937_64 rng(opts.seed);

  const double span = 1.0 + std::sqrt(std::max(2.0 * p.nu - 2.0 * p.alpha_min(), 1.0));

  // 1) analytic vs finite-difference gradient/Hessian at random points.
  {
    double worst_g = 0.0, worst_h = 0.0;
    for (int k = 0; k < opts.fd_points; ++k) {
      Vec w(n);
      for (int i = 0; i < n; ++i) w[i] = uniform(rng, -span, span);
      const Vec ag = eval_grad(w, p);
      const Vec fg = fd_gradient(p, w, 1e-5);
      worst_g = std::max(worst_g, (ag - fg).norm() / (1.0 + ag.norm()));
      const Mat ah = eval_hess(w, p);
      // Double differencing of g: h ~ eps^(1/4) balances truncation/roundoff.
      const Mat fh = fd_hessian(p, w, 1e-4 * (1.0 + w.cwiseAbs().maxCoeff()));
      worst_h = std::max(worst_h, (ah - fh).norm() / (1.0 + ah.norm()));
    }
    sink.pass_fail("fd_gradient_agreement", worst_g <= 1e-6, "worst relative error " + fmt(worst_g));
    sink.pass_fail("fd_hessian_agreement", worst_h <= 1e-5, "worst relative error " + fmt(worst_h));
  }

  // 2) secular derivatives vs central differences, plus convexity of h''.
  const SecularFn s = SecularFn::build(p);
  {
    double worst = 0.0;
    bool convex_ok = true;
    int used = 0;
    for (int k = 0; k < 200 && used < 50; ++k) {
      const double t = uniform(rng, -2.0 * span * span, 2.0 * span * span);
      bool ok = true;
      for (const auto& term : s.terms())
        if (std::abs(t - term.pole) < 1e-2 * (1.0 + std::abs(term.pole))) ok = false;
      if (!ok) continue;
      ++used;
      const double dt = 1e-6 * (1.0 + std::abs(t));
      const double fd1 = (s.eval(t + dt) - s.eval(t - dt)) / (2.0 * dt);
      const double fd2 = (s.prime(t + dt) - s.prime(t - dt)) / (2.0 * dt);
      worst = std::max(worst, std::abs(fd1 - s.prime(t)) / (1.0 + std::abs(s.prime(t))));
      worst = std::max(worst, std::abs(fd2 - s.second(t)) / (1.0 + std::abs(s.second(t))));
      if (!s.empty() && !(s.second(t) > 0.0)) convex_ok = false;
    }
    sink.pass_fail("secular_derivative_agreement", worst <= 1e-5,
                   "worst relative error " + fmt(worst) + " over " + std::to_string(used) +
                       " points");
    sink.pass_fail("secular_convexity", convex_ok, "h'' > 0 at all sampled pole-free points");
  }

  // 3) solve, then compare root counts claimed by the solvers against dense
  // sign-change scans on each algorithm interval.
  const SolveOptions sopts{opts.grad_tol};
  const Portrait portrait = solve_portrait(p, sopts);
  {
    const double left = 2.0 * p.nu - 2.0 * p.alpha_min();
    const double margin = 1e-6 * (1.0 + std::abs(left));
    auto dec_root = root_decreasing_branch(s, left);
    const double window_hi =
        dec_root ? std::max(2.0 * dec_root->t_star - left, left + 1.0) : left + 10.0 * span * span;
    const auto brackets = secular_root_scan(s, left + margin, window_hi, 4001);
    const size_t expect = dec_root ? 1 : 0;
    sink.pass_fail("root_count_decreasing_branch", brackets.size() == expect,
                   "scan found " + std::to_string(brackets.size()) + ", solver claims " +
                       std::to_string(expect));
  }
  {
    const double hi = 2.0 * p.nu - 2.0 * p.alpha_min();
    const double lo = (n >= 2) ? std::max(2.0 * p.nu - 2.0 * p.alpha[1], 0.0) : 0.0;
    if (lo < hi && hi > 0.0) {
      const double m_lo = lo + 1e-6 * (1.0 + std::abs(lo));
      const double m_hi = hi - 1e-6 * (1.0 + std::abs(hi));
      if (m_lo < m_hi) {
        const auto brackets = secular_root_scan(s, m_lo, m_hi, 4001);
        const auto roots = roots_convex_interval(s, lo, hi);
        // Tangential double roots produce no sign change; compare only
        // sign-crossing roots.
        size_t crossing = 0;
        for (const auto& r : roots)
          if (std::abs(r.h_prime) > kPrimeStrictness) ++crossing;
        sink.pass_fail("root_count_convex_interval", brackets.size() == crossing,
                       "scan found " + std::to_string(brackets.size()) + ", solver claims " +
                           std::to_string(crossing));
      } else {
        sink.add("root_count_convex_interval", CheckResult::Status::Skip, "interval too narrow");
      }
    } else {
      sink.add("root_count_convex_interval", CheckResult::Status::Skip, "empty interval");
    }
  }

  // 4) grid-scan equivalence (n <= 3).
  if (n <= 3) {
    std::vector<const CriticalPoint*> solver_points;
    for (const auto& cp : portrait.global_set.points) solver_points.push_back(&cp);
    if (portrait.local_nonglobal) solver_points.push_back(&*portrait.local_nonglobal);
    if (portrait.local_max) solver_points.push_back(&*portrait.local_max);

    double radius = default_scan_radius(p);
    for (const auto* cp : solver_points)
      radius = std::max(radius, 1.25 * cp->w.cwiseAbs().maxCoeff() + 0.5);
    std::vector<std::pair<double, double>> box(n, {-radius, radius});
    const int resolution = (n == 3) ? std::min(opts.grid_resolution, 64) : opts.grid_resolution;
    const GridScanResult scan = grid_critical_scan(p, box, resolution);

    const double match_tol = 1e-4 * (1.0 + radius);
    bool ok = true;
    std::string detail;
    if (portrait.global_set.variant == SolutionSet::Variant::Sphere) {
      // A continuum of minimizers: every certified extremum the scan finds
      // must lie on the sphere (or at the local maximizer).
      const auto& sp = *portrait.global_set.sphere;
      for (const auto& cand : scan.candidates) {
        if (cand.kind == ScanKind::Saddle) continue;
        if (portrait.local_max && (cand.w - portrait.local_max->w).norm() <= match_tol) continue;
        double free_sq = 0.0, fixed_err = 0.0;
        for (int i = 0; i < n; ++i) {
          const bool is_free = std::find(sp.free_indices.begin(), sp.free_indices.end(), i) !=
                               sp.free_indices.end();
          if (is_free)
            free_sq += cand.w[i] * cand.w[i];
          else
            fixed_err = std::max(fixed_err, std::abs(cand.w[i] - sp.center[i]));
        }
        if (std::abs(std::sqrt(free_sq) - sp.radius) > 1e-3 * (1.0 + sp.radius) ||
            fixed_err > 1e-3) {
          ok = false;
          detail += "scan extremum off the solution sphere; ";
        }
      }
    } else {
      for (const auto* cp : solver_points) {
        bool found = false;
        for (const auto& cand : scan.candidates)
          if ((cand.w - cp->w).norm() <= match_tol) found = true;
        if (!found) {
          ok = false;
          detail += std::string("solver point of kind ") + to_string(cp->kind) +
                    " not found by scan; ";
        }
      }
      for (const auto& cand : scan.candidates) {
        if (cand.kind != ScanKind::Minimum && cand.kind != ScanKind::Maximum) continue;
        bool matched = false;
        for (const auto* cp : solver_points)
          if ((cand.w - cp->w).norm() <= match_tol) matched = true;
        if (!matched) {
          ok = false;
          detail += std::string("scan found an unmatched ") + to_string(cand.kind) + " at w=(";
          for (int i = 0; i < n; ++i) detail += (i ? "," : "") + fmt(cand.w[i]);
          detail += "); ";
        }
      }
    }
    sink.pass_fail("grid_scan_equivalence", ok,
                   detail.empty() ? std::to_string(scan.candidates.size()) +
                                        " scan candidates all consistent"
                                  : detail);
  } else {
    sink.add("grid_scan_equivalence", CheckResult::Status::Skip, "n > 3");
  }

  // 5) reduction identity for general-form inputs.
  if (pp.is_general()) {
    const auto& gp = *pp.general;
    const auto& bm = *pp.back;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      Vec w(n);
      for (int i = 0; i < n; ++i) w[i] = uniform(rng, -span, span);
      const double pi = eval_pi(gp, lift_point(w, bm));
      const double g = eval_g(w, p);
      worst = std::max(worst, std::abs(pi - g - bm.offset) / (1.0 + std::abs(pi)));
    }
    const Mat BtB = gp.B.transpose() * gp.B;
    Mat residA = bm.P.transpose() * gp.A * bm.P;
    residA.diagonal() -= p.alpha;
    const Mat residB = bm.P.transpose() * BtB * bm.P - Mat::Identity(n, n);
    const double congA = residA.cwiseAbs().maxCoeff() / (1.0 + gp.A.cwiseAbs().maxCoeff());
    const double congB = residB.cwiseAbs().maxCoeff() / (1.0 + BtB.cwiseAbs().maxCoeff());
    sink.pass_fail("reduction_identity", worst <= 1e-8, "worst relative error " + fmt(worst));
    sink.pass_fail("congruence_residuals", congA <= 1e-8 && congB <= 1e-8,
                   "A-residual " + fmt(congA) + ", B-residual " + fmt(congB));
  } else {
    sink.add("reduction_identity", CheckResult::Status::Skip, "reduced-form input");
  }

  // 6) portrait cross-checks.
  {
    bool ok = true;
    std::string detail;
    for (const auto& c : portrait.checks) {
      if (c.status == CheckResult::Status::Fail) {
        ok = false;
        detail += c.name + ": " + c.detail + "; ";
      }
    }
    sink.pass_fail("portrait_cross_checks", ok, detail);
  }

  return report;
}

nlohmann::json verify_to_json(const PreparedProblem& pp, const VerifyReport& report,
                              const VerifyOptions& opts) {
  nlohmann::json j;
  j["seed"] = opts.seed;
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : report.entries) {
    const char* status = e.status == CheckResult::Status::Pass
                             ? "pass"
                             : (e.status == CheckResult::Status::Fail ? "fail" : "skip");
    entries.push_back({{"name", e.name}, {"status", status}, {"detail", e.detail}});
  }
  j["checks"] = std::move(entries);
  j["all_pass"] = report.all_pass();
  const SolveOptions sopts{opts.grad_tol};
  j["portrait"] = portrait_to_json(pp, solve_portrait(pp.reduced, sopts),
                                   grad_tolerance(pp.reduced, sopts));
  return j;
}

}  // namespace dwp
