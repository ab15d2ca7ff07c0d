#include "oracle.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

namespace dwp {

Vec fd_gradient(const ReducedDwp& p, const Vec& w, double step) {
  require(step > 0.0, ErrorCode::Argument, "fd_gradient: step must be positive");
  Vec g(p.n());
  Vec wp = w, wm = w;
  for (int i = 0; i < p.n(); ++i) {
    wp[i] = w[i] + step;
    wm[i] = w[i] - step;
    g[i] = (eval_g(wp, p) - eval_g(wm, p)) / (2.0 * step);
    wp[i] = w[i];
    wm[i] = w[i];
  }
  return g;
}

Mat fd_hessian(const ReducedDwp& p, const Vec& w, double step) {
  require(step > 0.0, ErrorCode::Argument, "fd_hessian: step must be positive");
  const int n = p.n();
  Mat H(n, n);
  Vec v = w;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      v = w;
      v[i] += step;
      v[j] += step;
      const double fpp = eval_g(v, p);
      v = w;
      v[i] += step;
      v[j] -= step;
      const double fpm = eval_g(v, p);
      v = w;
      v[i] -= step;
      v[j] += step;
      const double fmp = eval_g(v, p);
      v = w;
      v[i] -= step;
      v[j] -= step;
      const double fmm = eval_g(v, p);
      H(i, j) = (fpp - fpm - fmp + fmm) / (4.0 * step * step);
    }
  }
  return ((H + H.transpose()) / 2.0).eval();
}

double default_scan_radius(const ReducedDwp& p) {
  return 2.0 + 2.0 * std::sqrt(std::max(2.0 * p.nu - 2.0 * p.alpha_min(), 1.0));
}

namespace {

constexpr int kNewtonCap = 50;

// Newton iteration on grad g = 0; returns the converged point or nullopt.
std::optional<Vec> polish(const ReducedDwp& p, Vec w, double tol, double escape_radius) {
  for (int iter = 0; iter < kNewtonCap; ++iter) {
    const Vec g = eval_grad(w, p);
    if (g.norm() <= tol) return w;
    const Mat H = eval_hess(w, p);
    const Vec step = H.partialPivLu().solve(-g);
    if (!step.allFinite()) return std::nullopt;
    w += step;
    if (!w.allFinite() || w.cwiseAbs().maxCoeff() > escape_radius) return std::nullopt;
  }
  return std::nullopt;
}

ScanKind classify(const HessianSignature& sig) {
  if (sig.zero > 0) return ScanKind::Degenerate;
  if (sig.negative == 0) return ScanKind::Minimum;
  if (sig.positive == 0) return ScanKind::Maximum;
  return ScanKind::Saddle;
}

bool lex_less(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

}  // namespace

GridScanResult grid_critical_scan(const ReducedDwp& p,
                                  const std::vector<std::pair<double, double>>& box,
                                  int resolution, int workers) {
  const int n = p.n();
  require(n <= 3, ErrorCode::Unsupported, "grid_critical_scan supports n <= 3");
  require(static_cast<int>(box.size()) == n, ErrorCode::Argument,
          "grid_critical_scan: box must have one (lo,hi) per coordinate");
  require(resolution >= 16, ErrorCode::Argument, "grid_critical_scan: resolution must be >= 16");
  for (const auto& [lo, hi] : box)
    require(lo < hi, ErrorCode::Argument, "grid_critical_scan: empty box interval");

  // Gradient at every lattice point, then a seed per cell where every
  // gradient component attains both signs among the 2^n corners.
  std::vector<double> axes_step(n), axes_lo(n);
  for (int i = 0; i < n; ++i) {
    axes_lo[i] = box[i].first;
    axes_step[i] = (box[i].second - box[i].first) / (resolution - 1);
  }
  auto lattice_point = [&](const std::array<int, 3>& idx) {
    Vec w(n);
    for (int i = 0; i < n; ++i) w[i] = axes_lo[i] + axes_step[i] * idx[i];
    return w;
  };

  long total = 1;
  for (int i = 0; i < n; ++i) total *= resolution;
  std::vector<Vec> grads(static_cast<size_t>(total));
  auto flat = [&](const std::array<int, 3>& idx) {
    long f = 0;
    for (int i = 0; i < n; ++i) f = f * resolution + idx[i];
    return f;
  };
  std::array<int, 3> idx{0, 0, 0};
  for (long f = 0; f < total; ++f) {
    long rem = f;
    for (int i = n - 1; i >= 0; --i) {
      idx[i] = static_cast<int>(rem % resolution);
      rem /= resolution;
    }
    grads[static_cast<size_t>(f)] = eval_grad(lattice_point(idx), p);
  }

  // Collect cell seeds.
  std::vector<Vec> seeds;
  const int cells_per_axis = resolution - 1;
  long total_cells = 1;
  for (int i = 0; i < n; ++i) total_cells *= cells_per_axis;
  const int corners = 1 << n;
  for (long cf = 0; cf < total_cells; ++cf) {
    long rem = cf;
    std::array<int, 3> cidx{0, 0, 0};
    for (int i = n - 1; i >= 0; --i) {
      cidx[i] = static_cast<int>(rem % cells_per_axis);
      rem /= cells_per_axis;
    }
    bool all_change = true;
    for (int comp = 0; comp < n && all_change; ++comp) {
      double lo_v = std::numeric_limits<double>::infinity();
      double hi_v = -std::numeric_limits<double>::infinity();
      for (int c = 0; c < corners; ++c) {
        std::array<int, 3> corner = cidx;
        for (int i = 0; i < n; ++i) corner[i] += (c >> i) & 1;
        const double v = grads[static_cast<size_t>(flat(corner))][comp];
        lo_v = std::min(lo_v, v);
        hi_v = std::max(hi_v, v);
      }
      if (!(lo_v <= 0.0 && hi_v >= 0.0)) all_change = false;
    }
    if (!all_change) continue;
    Vec center(n);
    for (int i = 0; i < n; ++i) center[i] = axes_lo[i] + axes_step[i] * (cidx[i] + 0.5);
    seeds.push_back(std::move(center));
  }

  // Polish seeds (chunked across workers; the merge below is order-free).
  const double tol = certification_tol(p);
  double escape = 0.0;
  for (int i = 0; i < n; ++i)
    escape = std::max(escape, 2.0 * std::max(std::abs(box[i].first), std::abs(box[i].second)));
  escape = std::max(escape, 1.0);

  int nworkers = workers;
  if (nworkers <= 0)
    nworkers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, 8);
  nworkers = std::min(nworkers, static_cast<int>(std::max<size_t>(seeds.size(), 1)));

  std::vector<std::vector<Vec>> chunks(nworkers);
  auto run_chunk = [&](int c) {
    std::vector<Vec> found;
    for (size_t i = c; i < seeds.size(); i += nworkers) {
      if (auto w = polish(p, seeds[i], tol, escape)) found.push_back(std::move(*w));
    }
    return found;
  };
  if (nworkers == 1) {
    chunks[0] = run_chunk(0);
  } else {
    std::vector<std::future<std::vector<Vec>>> futs;
    for (int c = 0; c < nworkers; ++c)
      futs.push_back(std::async(std::launch::async, run_chunk, c));
    for (int c = 0; c < nworkers; ++c) chunks[c] = futs[c].get();
  }

  std::vector<Vec> converged;
  for (auto& chunk : chunks)
    for (auto& w : chunk) converged.push_back(std::move(w));
  std::sort(converged.begin(), converged.end(), lex_less);

  GridScanResult result;
  result.box = box;
  result.resolution = resolution;
  double scale = 1.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(box[i].second - box[i].first));
  const double dedupe = 1e-6 * scale;
  for (const Vec& w : converged) {
    bool dup = false;
    for (const auto& c : result.candidates) {
      if ((c.w - w).norm() < dedupe) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    ScanCandidate cand;
    cand.w = w;
    cand.signature = hessian_signature(eval_hess(w, p));
    cand.kind = classify(cand.signature);
    cand.value = eval_g(w, p);
    result.candidates.push_back(std::move(cand));
  }
  return result;
}

std::vector<std::pair<double, double>> secular_root_scan(const SecularFn& s, double lo, double hi,
                                                         int samples) {
  require(samples >= 1000, ErrorCode::Argument, "secular_root_scan: samples must be >= 1000");
  require(lo < hi, ErrorCode::Argument, "secular_root_scan: empty interval");

  std::vector<std::pair<double, double>> brackets;
  const double step = (hi - lo) / (samples - 1);
  auto near_pole = [&](double t) {
    for (const auto& term : s.terms())
      if (std::abs(t - term.pole) <= 1e-9 * (1.0 + std::abs(term.pole))) return true;
    return false;
  };

  bool have_prev = false;
  double prev_t = 0.0, prev_h = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = lo + step * i;
    if (near_pole(t)) {
      have_prev = false;  // gap
      continue;
    }
    const double h = s.eval(t);
    if (have_prev && ((prev_h < 0.0 && h > 0.0) || (prev_h > 0.0 && h < 0.0) || h == 0.0)) {
      brackets.emplace_back(prev_t, t);
    }
    prev_t = t;
    prev_h = h;
    have_prev = true;
  }
  return brackets;
}

const char* to_string(ScanKind kind) {
  switch (kind) {
    case ScanKind::Minimum: return "minimum";
    case ScanKind::Maximum: return "maximum";
    case ScanKind::Saddle: return "saddle";
    case ScanKind::Degenerate: return "degenerate";
  }
  return "unknown";
}

}  // namespace dwp
