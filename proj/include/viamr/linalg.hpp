#pragma once

#include <Eigen/Sparse>

#include <stdexcept>
#include <string>
#include <vector>

namespace viamr {

// Compressed-row sparse matrix; Eigen is the single math dependency and its
// compressed storage guarantees sorted, unique column indices per row.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

struct SolverFailure : std::runtime_error {
  double residual_norm;
  explicit SolverFailure(const std::string& what, double res)
      : std::runtime_error(what), residual_norm(res) {}
};

// Solve A x = b for symmetric positive definite A with diagonally
// preconditioned conjugate gradients. Guarantees the true residual satisfies
// ||A x - b||_2 <= rel_tol * ||b||_2 on return (b = 0 yields x = 0 exactly);
// throws SolverFailure carrying the achieved residual norm otherwise.
// Iterations are capped at 10 * n.
Vector solve_spd(const SparseMatrix& A, const Vector& b, double rel_tol = 1e-10);

// Principal submatrix A[idx, idx]; idx must be sorted, unique and in range.
SparseMatrix extract_submatrix(const SparseMatrix& A, const std::vector<int>& idx);

}  // namespace viamr
