#include "reduction.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace dwp {

Mat spd_factor(const Mat& M) {
  const auto n = M.rows();
  require(n >= 1 && M.cols() == n, ErrorCode::Argument, "spd_factor: M must be square");
  const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
  require(asym <= 1e-10 * (1.0 + M.cwiseAbs().maxCoeff()), ErrorCode::Argument,
          "spd_factor: M must be symmetric");

  Eigen::LLT<Mat> llt(M);
  const double norm_inf = M.cwiseAbs().rowwise().sum().maxCoeff();
  const double pivot_floor = n * std::numeric_limits<double>::epsilon() * norm_inf;
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::NotPositiveDefinite, "spd_factor: matrix is not positive definite");
  Mat L = llt.matrixL();
  // LLT succeeds on barely-positive pivots; enforce the relative floor.
  for (Eigen::Index i = 0; i < n; ++i) {
    const double pivot = L(i, i) * L(i, i);
    if (!(pivot > pivot_floor))
      fail(ErrorCode::NotPositiveDefinite,
           "spd_factor: pivot " + std::to_string(pivot) + " below threshold " +
               std::to_string(pivot_floor));
  }
  return L;
}

SymEig sym_eig_ascending(const Mat& M) {
  const auto n = M.rows();
  require(n >= 1 && M.cols() == n, ErrorCode::Argument, "sym_eig_ascending: M must be square");
  Eigen::SelfAdjointEigenSolver<Mat> eig(M);
  if (eig.info() != Eigen::Success) {
    fail(ErrorCode::Numeric, "sym_eig_ascending: eigensolver did not converge, residual " +
                                 std::to_string((M * eig.eigenvectors() -
                                                 eig.eigenvectors() *
                                                     eig.eigenvalues().asDiagonal().toDenseMatrix())
                                                    .norm()));
  }
  Mat Q = eig.eigenvectors();
  // Deterministic sign: first component of magnitude > 1e-9 made positive
  // (columns are unit vectors, so one always exists).
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(Q(i, j)) > 1e-9) {
        if (Q(i, j) < 0.0) Q.col(j) = -Q.col(j);
        break;
      }
    }
  }
  return SymEig{std::move(Q), eig.eigenvalues()};
}

Reduction reduce(const GeneralDwp& gp) {
  const Mat BtB = gp.B.transpose() * gp.B;
  const Mat L = spd_factor(BtB);

  // Pencil reduction: symmetrize L^{-1} A L^{-T}, eigendecompose, P = L^{-T} Q.
  Mat M = L.triangularView<Eigen::Lower>().solve(gp.A);
  M = L.triangularView<Eigen::Lower>().solve(M.transpose()).eval();
  M = ((M + M.transpose()) / 2.0).eval();
  SymEig eig = sym_eig_ascending(M);
  Mat P = L.transpose().triangularView<Eigen::Upper>().solve(eig.Q);

  const Vec Btc = gp.B.transpose() * gp.c;
  // shift = (B^T B)^{-1} B^T c via the Cholesky factor.
  Vec shift = L.triangularView<Eigen::Lower>().solve(Btc);
  shift = L.transpose().triangularView<Eigen::Upper>().solve(shift).eval();

  const double nu = -0.5 * gp.c.dot(gp.c - gp.B * shift) + gp.d;
  const Vec PtBtc = P.transpose() * Btc;
  Vec psi = P.transpose() * gp.f - eig.lambda.cwiseProduct(PtBtc);

  // Pi(x) = g(w) + offset for x = P w + shift; the dropped constant is the
  // quadratic part of Pi at x = shift (the quartic parts match exactly).
  const double offset = 0.5 * shift.dot(gp.A * shift) - gp.f.dot(shift);

  ReducedDwp reduced{eig.lambda, std::move(psi), nu};
  require(reduced.alpha.allFinite() && reduced.psi.allFinite() && std::isfinite(nu),
          ErrorCode::Numeric, "reduce: non-finite reduced data");
  return Reduction{std::move(reduced), BackMap{std::move(P), std::move(shift), offset}};
}

}  // namespace dwp
