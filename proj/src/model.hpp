#pragma once

// Problem data types for the double-well objective
//   g(w) = 1/2 (1/2 ||w||^2 - nu)^2 + 1/2 w^T D w - psi^T w,  D = Diag(alpha),
// together with its gradient, Hessian and the classification records used by
// the solvers.

#include "types.hpp"

#include <optional>
#include <vector>

namespace dwp {

// Raw problem data: Pi(x) = 1/2 (1/2 ||Bx-c||^2 - d)^2 + 1/2 x^T A x - f^T x.
struct GeneralDwp {
  Mat A;  // n x n, stored exactly symmetric
  Mat B;  // m x n, nonzero
  Vec c;  // m
  double d = 0.0;
  Vec f;  // n

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.rows()); }
};

// Validates dimensions, symmetrizes A exactly, rejects non-finite entries.
GeneralDwp make_general(Mat A, Mat B, Vec c, double d, Vec f);

double eval_pi(const GeneralDwp& gp, const Vec& x);

// Diagonalized problem: alpha ascending, finite entries only.
struct ReducedDwp {
  Vec alpha;
  Vec psi;
  double nu = 0.0;

  int n() const { return static_cast<int>(alpha.size()); }
  double alpha_min() const { return alpha[0]; }
  double alpha_max() const { return alpha[n() - 1]; }
};

// Sorts alpha ascending (stable permutation, applied to psi as well).
// Returns the permutation used: sorted[i] = input[perm[i]].
ReducedDwp make_reduced(Vec alpha, Vec psi, double nu, std::vector<int>* perm = nullptr);

// Congruence lift back to original coordinates: x = P w + shift, and
// Pi(x) = g(w) + offset.
struct BackMap {
  Mat P;
  Vec shift;
  double offset = 0.0;
};

Vec lift_point(const Vec& w, const BackMap& bm);

// ----- objective, gradient, Hessian in reduced coordinates -----

double eval_g(const Vec& w, const ReducedDwp& p);
Vec eval_grad(const Vec& w, const ReducedDwp& p);
Mat eval_hess(const Vec& w, const ReducedDwp& p);

// Scale-invariant threshold for accepting ||grad g|| as zero:
// 1e-8 * (1 + ||psi|| + |nu| + max|alpha_i|).
double certification_tol(const ReducedDwp& p);

// ----- classification records -----

enum class PointKind { GlobalMin, LocalNonGlobalMin, LocalMax };

struct HessianSignature {
  int negative = 0;
  int zero = 0;
  int positive = 0;
};

// Eigenvalues with |lambda| <= 1e-8 * (1 + ||H||_inf) count as zero.
HessianSignature hessian_signature(const Mat& H);

struct RootCertificate {
  double t_star = 0.0;
  double h_value = 0.0;
  double h_prime = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

struct CriticalPoint {
  Vec w;
  double t = 0.0;  // ||w||^2
  PointKind kind = PointKind::GlobalMin;
  double value = 0.0;  // g(w)
  HessianSignature signature;
  std::optional<RootCertificate> certificate;
};

// The global minimizer set. Never empty: a unique point, an antipodal pair
// differing in the first coordinate, or a sphere with free coordinate
// directions spanned by the smallest-alpha indices.
struct SphereSet {
  Vec center;
  double radius = 0.0;
  std::vector<int> free_indices;
};

struct SolutionSet {
  enum class Variant { Unique, Pair, Sphere };
  Variant variant = Variant::Unique;
  std::vector<CriticalPoint> points;  // Unique: 1 entry; Pair: 2; Sphere: sampled points
  std::optional<SphereSet> sphere;
  double value = 0.0;  // common g value of the set
};

const char* to_string(PointKind kind);
const char* to_string(SolutionSet::Variant variant);

}  // namespace dwp
