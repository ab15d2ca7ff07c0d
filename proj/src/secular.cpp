#include "secular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dwp {

namespace {

constexpr double kPoleGuardRel = 1e-13;
constexpr int kMaxRootIter = 200;

std::string fmt(double x) { return std::to_string(x); }

// Safeguarded Newton on a sign-changing bracket [a,b], f(a)*f(b) < 0. The
// residual is driven to the evaluation roundoff floor, well below the
// 1e-12-relative acceptance bound: the gradient of g at a reconstructed
// critical point is (h(t)/2) w, so extra digits here are stationarity digits.
RootCertificate solve_bracketed(const SecularFn& s, double a, double b, double fa, double fb) {
  require(a < b, ErrorCode::Internal, "solve_bracketed: inverted bracket");
  require(fa * fb < 0.0, ErrorCode::Internal, "solve_bracketed: no sign change");
  double t = 0.5 * (a + b);
  double best_t = a, best_f = fa;
  if (std::abs(fb) < std::abs(fa)) {
    best_t = b;
    best_f = fb;
  }
  bool converged = false;
  for (int iter = 0; iter < kMaxRootIter; ++iter) {
    const double f = s.eval(t);
    if (std::abs(f) < std::abs(best_f)) {
      best_f = f;
      best_t = t;
    }
    const double floor_tol = 16.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(t));
    if (std::abs(f) <= floor_tol) {
      converged = true;
      break;
    }
    if ((f > 0.0) == (fa > 0.0)) {
      a = t;
      fa = f;
    } else {
      b = t;
      fb = f;
    }
    if (b - a <= root_tol_width(t)) {
      converged = true;
      break;
    }
    const double fp = s.prime(t);
    double next = t - f / fp;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    t = next;
  }
  if (!converged && !(std::abs(best_f) <= root_tol_h(best_t)))
    fail(ErrorCode::Numeric, "secular root search: no convergence after " +
                                 std::to_string(kMaxRootIter) + " iterations, bracket [" + fmt(a) +
                                 ", " + fmt(b) + "], residual " + fmt(best_f));
  // A few free Newton steps: the bracket-width stop can leave residual on the
  // table when h' is large (root hugging a pole).
  for (int k = 0; k < 4 && best_f != 0.0; ++k) {
    const double fp = s.prime(best_t);
    const double tn = best_t - best_f / fp;
    if (!std::isfinite(tn) || tn == best_t) break;
    double fn;
    try {
      fn = s.eval(tn);
    } catch (const Error&) {
      break;
    }
    if (!(std::abs(fn) < std::abs(best_f))) break;
    best_t = tn;
    best_f = fn;
  }
  return RootCertificate{best_t, best_f, s.prime(best_t), std::min(a, best_t),
                         std::max(b, best_t)};
}

// Minimizer of h on [a,b] given h'(a) < 0 < h'(b): Newton on h' (h'' > 0),
// bisection safeguard.
double minimize_on_bracket(const SecularFn& s, double a, double b) {
  double t = 0.5 * (a + b);
  for (int iter = 0; iter < kMaxRootIter; ++iter) {
    const double fp = s.prime(t);
    if (fp > 0.0)
      b = t;
    else
      a = t;
    if (b - a <= root_tol_width(t)) break;
    const double fpp = s.second(t);
    double next = (fpp > 0.0) ? t - fp / fpp : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    t = next;
  }
  return 0.5 * (a + b);
}

// Step off `endpoint` in `dir` (+1/-1). When a weighted pole sits at the
// endpoint h blows up there, so shrink delta until h > 0 (at most 5 times,
// staying above the pole guard).
std::pair<double, double> step_off_endpoint(const SecularFn& s, double endpoint, int dir) {
  double delta = 1e-9 * (1.0 + std::abs(endpoint));
  const double guard = 10.0 * kPoleGuardRel * (1.0 + std::abs(endpoint));
  if (s.has_weighted_pole_at(endpoint)) {
    for (int k = 0; k < 5; ++k) {
      const double t = endpoint + dir * delta;
      const double h = s.eval(t);
      if (h > 0.0) return {t, h};
      if (delta * 1e-2 <= guard) break;
      delta *= 1e-2;
    }
    // Weight so tiny the pole never lifts h above 0 at guard distance; treat
    // the endpoint as non-blowing.
  }
  const double t = endpoint + dir * delta;
  return {t, s.eval(t)};
}

}  // namespace

double psi_zero_tol(const ReducedDwp& p) { return 1e-10 * (1.0 + p.psi.norm()); }

SecularFn SecularFn::build(const ReducedDwp& p) {
  SecularFn s;
  s.n_all_ = p.n();
  const double eps = psi_zero_tol(p);
  for (int i = 0; i < p.n(); ++i) {
    if (std::abs(p.psi[i]) > eps) {
      s.terms_.push_back(SecularTerm{2.0 * p.nu - 2.0 * p.alpha[i], 4.0 * p.psi[i] * p.psi[i]});
    } else {
      s.zero_mask_.push_back(i);
    }
  }
  return s;
}

void SecularFn::check_pole_guard(double t) const {
  for (const auto& term : terms_) {
    if (std::abs(t - term.pole) <= kPoleGuardRel * (1.0 + std::abs(term.pole)))
      fail(ErrorCode::PoleEvaluation,
           "secular function evaluated at t=" + fmt(t) + " within guard of pole " + fmt(term.pole));
  }
}

double SecularFn::eval(double t) const {
  check_pole_guard(t);
  double sum = 0.0;
  for (const auto& term : terms_) {
    const double d = t - term.pole;
    sum += term.weight / (d * d);
  }
  return sum - t;
}

double SecularFn::prime(double t) const {
  check_pole_guard(t);
  double sum = 0.0;
  for (const auto& term : terms_) {
    const double d = t - term.pole;
    sum += 2.0 * term.weight / (d * d * d);
  }
  return -sum - 1.0;
}

double SecularFn::second(double t) const {
  check_pole_guard(t);
  double sum = 0.0;
  for (const auto& term : terms_) {
    const double d = t - term.pole;
    const double d2 = d * d;
    sum += 6.0 * term.weight / (d2 * d2);
  }
  return sum;
}

bool SecularFn::has_weighted_pole_at(double x) const {
  for (const auto& term : terms_)
    if (std::abs(term.pole - x) <= 1e-12 * (1.0 + std::abs(x))) return true;
  return false;
}

std::optional<RootCertificate> root_decreasing_branch(const SecularFn& s, double left) {
  if (s.empty()) {
    // h(t) = -t: the root is t = 0, inside (left, inf) iff left < 0.
    if (left < 0.0) return RootCertificate{0.0, 0.0, -1.0, left, 0.0};
    return std::nullopt;
  }
  auto [a, fa] = step_off_endpoint(s, left, +1);
  if (fa <= 0.0) {
    // No blow-up at `left`; re-check just inside the guard so a root within
    // the first delta window is not missed.
    const double a2 = left + 10.0 * kPoleGuardRel * (1.0 + std::abs(left));
    if (a2 < a) {
      const double fa2 = s.eval(a2);
      if (fa2 > 0.0) return solve_bracketed(s, a2, a, fa2, fa);
    }
    return std::nullopt;
  }
  // March right, doubling the step, until h goes negative (it must: h <= c - t).
  double step = 1e-3 * (1.0 + std::abs(left));
  double b = a + step;
  double fb = s.eval(b);
  int doubles = 0;
  while (fb >= 0.0) {
    a = b;
    fa = fb;
    step *= 2.0;
    b = a + step;
    require(++doubles < 200 && std::isfinite(b), ErrorCode::Numeric,
            "root_decreasing_branch: failed to bracket a root");
    fb = s.eval(b);
  }
  return solve_bracketed(s, a, b, fa, fb);
}

std::vector<RootCertificate> roots_convex_interval(const SecularFn& s, double lo, double hi) {
  require(lo < hi, ErrorCode::EmptyInterval,
          "roots_convex_interval: empty interval [" + fmt(lo) + ", " + fmt(hi) + ")");
  auto [a, fa] = step_off_endpoint(s, lo, +1);
  auto [b, fb] = step_off_endpoint(s, hi, -1);
  if (!(a < b)) return {};  // interval narrower than the endpoint guards

  const double fpa = s.prime(a);
  const double fpb = s.prime(b);

  if (fpa >= 0.0) {
    // h is nondecreasing on [a,b]: at most one crossing, from below.
    if (fa < 0.0 && fb > 0.0) return {solve_bracketed(s, a, b, fa, fb)};
    return {};
  }
  if (fpb <= 0.0) {
    // h is nonincreasing on [a,b]: at most one crossing, from above.
    if (fa > 0.0 && fb < 0.0) return {solve_bracketed(s, a, b, fa, fb)};
    return {};
  }

  const double tm = minimize_on_bracket(s, a, b);
  const double hm = s.eval(tm);
  if (std::abs(hm) <= root_tol_h(tm)) {
    // Tangency: the two roots coincide at the minimizer.
    return {RootCertificate{tm, hm, s.prime(tm), a, b}};
  }
  if (hm > 0.0) return {};

  std::vector<RootCertificate> roots;
  if (fa > 0.0) roots.push_back(solve_bracketed(s, a, tm, fa, hm));
  if (fb > 0.0) roots.push_back(solve_bracketed(s, tm, b, hm, fb));
  return roots;
}

std::optional<RootCertificate> root_max_interval(const SecularFn& s, double hi,
                                                 RootSearchNotes* notes) {
  if (hi <= 0.0) return std::nullopt;
  if (s.empty()) return RootCertificate{0.0, 0.0, -1.0, 0.0, 0.0};

  auto reject_degenerate = [&](const RootCertificate& cert) {
    if (notes)
      notes->notes.push_back("root t=" + fmt(cert.t_star) + " rejected: |h'|=" +
                             fmt(std::abs(cert.h_prime)) + " below strictness threshold");
  };

  const double h0 = s.eval(0.0);  // > 0: all weights positive, no pole in [0, hi)
  const double fp0 = s.prime(0.0);
  if (fp0 >= 0.0) return std::nullopt;

  auto [b, fb] = step_off_endpoint(s, hi, -1);
  if (!(b > 0.0)) return std::nullopt;
  const double fpb = s.prime(b);

  RootCertificate cert;
  if (fpb <= 0.0) {
    // Decreasing on all of [0,b].
    if (!(fb < 0.0)) return std::nullopt;
    cert = solve_bracketed(s, 0.0, b, h0, fb);
  } else {
    const double tm = minimize_on_bracket(s, 0.0, b);
    const double hm = s.eval(tm);
    if (std::abs(hm) <= root_tol_h(tm)) {
      reject_degenerate(RootCertificate{tm, hm, s.prime(tm), 0.0, b});
      return std::nullopt;
    }
    if (hm > 0.0) return std::nullopt;
    cert = solve_bracketed(s, 0.0, tm, h0, hm);
  }
  if (!(cert.h_prime < -kPrimeStrictness)) {
    reject_degenerate(cert);
    return std::nullopt;
  }
  return cert;
}

}  // namespace dwp
