#include "model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dwp {

namespace {

bool all_finite(const Mat& m) { return m.allFinite(); }

void check_dim(const Vec& w, int n, const char* who) {
  if (static_cast<int>(w.size()) != n)
    fail(ErrorCode::Argument, std::string(who) + ": expected dimension " + std::to_string(n) +
                                  ", got " + std::to_string(w.size()));
}

}  // namespace

GeneralDwp make_general(Mat A, Mat B, Vec c, double d, Vec f) {
  const auto n = A.rows();
  require(n >= 1 && A.cols() == n, ErrorCode::Argument, "A must be square, n >= 1");
  require(B.rows() >= 1 && B.cols() == n, ErrorCode::Argument, "B must be m x n with m >= 1");
  require(c.size() == B.rows(), ErrorCode::Argument, "c must have dimension m");
  require(f.size() == n, ErrorCode::Argument, "f must have dimension n");
  require(all_finite(A) && all_finite(B) && c.allFinite() && f.allFinite() && std::isfinite(d),
          ErrorCode::Argument, "problem data must be finite");
  const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
  require(asym <= 1e-10 * (1.0 + A.cwiseAbs().maxCoeff()), ErrorCode::Argument,
          "A must be symmetric");
  require(B.cwiseAbs().maxCoeff() > 0.0, ErrorCode::Argument, "B must be nonzero");
  A = ((A + A.transpose()) / 2.0).eval();
  return GeneralDwp{std::move(A), std::move(B), std::move(c), d, std::move(f)};
}

double eval_pi(const GeneralDwp& gp, const Vec& x) {
  check_dim(x, gp.n(), "eval_pi");
  const double strain = 0.5 * (gp.B * x - gp.c).squaredNorm() - gp.d;
  return 0.5 * strain * strain + 0.5 * x.dot(gp.A * x) - gp.f.dot(x);
}

ReducedDwp make_reduced(Vec alpha, Vec psi, double nu, std::vector<int>* perm_out) {
  const auto n = alpha.size();
  require(n >= 1, ErrorCode::Argument, "alpha must be nonempty");
  require(psi.size() == n, ErrorCode::Argument, "psi must match alpha in dimension");
  require(alpha.allFinite() && psi.allFinite() && std::isfinite(nu), ErrorCode::Argument,
          "reduced data must be finite");

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return alpha[a] < alpha[b]; });

  Vec a_sorted(n), p_sorted(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a_sorted[i] = alpha[perm[i]];
    p_sorted[i] = psi[perm[i]];
  }
  if (perm_out) *perm_out = perm;
  return ReducedDwp{std::move(a_sorted), std::move(p_sorted), nu};
}

Vec lift_point(const Vec& w, const BackMap& bm) {
  check_dim(w, static_cast<int>(bm.P.cols()), "lift_point");
  return bm.P * w + bm.shift;
}

double eval_g(const Vec& w, const ReducedDwp& p) {
  check_dim(w, p.n(), "eval_g");
  const double strain = 0.5 * w.squaredNorm() - p.nu;
  return 0.5 * strain * strain + 0.5 * w.dot(p.alpha.cwiseProduct(w)) - p.psi.dot(w);
}

Vec eval_grad(const Vec& w, const ReducedDwp& p) {
  check_dim(w, p.n(), "eval_grad");
  const double strain = 0.5 * w.squaredNorm() - p.nu;
  return (strain + p.alpha.array()).matrix().cwiseProduct(w) - p.psi;
}

Mat eval_hess(const Vec& w, const ReducedDwp& p) {
  check_dim(w, p.n(), "eval_hess");
  const double strain = 0.5 * w.squaredNorm() - p.nu;
  Mat H = w * w.transpose();
  H.diagonal().array() += strain + p.alpha.array();
  return H;
}

double certification_tol(const ReducedDwp& p) {
  return 1e-8 * (1.0 + p.psi.norm() + std::abs(p.nu) + p.alpha.cwiseAbs().maxCoeff());
}

HessianSignature hessian_signature(const Mat& H) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(H, Eigen::EigenvaluesOnly);
  require(eig.info() == Eigen::Success, ErrorCode::Numeric, "Hessian eigensolve failed");
  const double norm_inf = H.cwiseAbs().rowwise().sum().maxCoeff();
  const double zero_tol = 1e-8 * (1.0 + norm_inf);
  HessianSignature sig;
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    const double lam = eig.eigenvalues()[i];
    if (std::abs(lam) <= zero_tol)
      ++sig.zero;
    else if (lam < 0.0)
      ++sig.negative;
    else
      ++sig.positive;
  }
  return sig;
}

const char* to_string(PointKind kind) {
  switch (kind) {
    case PointKind::GlobalMin: return "global_min";
    case PointKind::LocalNonGlobalMin: return "local_nonglobal_min";
    case PointKind::LocalMax: return "local_max";
  }
  return "unknown";
}

const char* to_string(SolutionSet::Variant variant) {
  switch (variant) {
    case SolutionSet::Variant::Unique: return "unique";
    case SolutionSet::Variant::Pair: return "pair";
    case SolutionSet::Variant::Sphere: return "sphere";
  }
  return "unknown";
}

}  // namespace dwp
