#pragma once

// Transforms the raw problem into reduced coordinates by simultaneous
// diagonalization by congruence: P^T A P = Diag(alpha), P^T (B^T B) P = I.
// Requires B^T B positive definite; rank-deficient inputs are rejected.

#include "model.hpp"
#include "types.hpp"

namespace dwp {

struct CongruencePair {
  Mat P;      // nonsingular
  Vec alpha;  // ascending
};

// Cholesky M = L L^T. Throws NotPositiveDefinite when some pivot is
// <= n * eps_machine * ||M||_inf.
Mat spd_factor(const Mat& M);

struct SymEig {
  Mat Q;       // orthogonal, columns are eigenvectors
  Vec lambda;  // ascending
};

// Symmetric eigendecomposition with ascending eigenvalues and a fixed sign
// convention (first nonzero component of each eigenvector positive).
SymEig sym_eig_ascending(const Mat& M);

struct Reduction {
  ReducedDwp reduced;
  BackMap back;
};

Reduction reduce(const GeneralDwp& gp);

}  // namespace dwp
