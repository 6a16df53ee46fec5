#include "viamr/linalg.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <algorithm>
#include <cmath>

namespace viamr {

Vector solve_spd(const SparseMatrix& A, const Vector& b, double rel_tol) {
  if (A.rows() != A.cols()) throw std::invalid_argument("solve_spd: matrix not square");
  if (A.rows() != b.size()) throw std::invalid_argument("solve_spd: dimension mismatch");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("solve_spd: rel_tol must be positive");
  const double bnorm = b.norm();
  if (bnorm == 0.0) return Vector::Zero(b.size());

  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
  cg.setMaxIterations(10 * A.rows());
  cg.setTolerance(0.5 * rel_tol);  // CG tracks a recurrence residual; leave margin
  cg.compute(A);
  Vector x = cg.solve(b);

  double res = (A * x - b).norm();
  if (!(res <= rel_tol * bnorm)) {  // negated so a NaN residual also fails
    // one continuation pass against the same cap before giving up
    x = cg.solveWithGuess(b, x);
    res = (A * x - b).norm();
    if (!(res <= rel_tol * bnorm)) {
      if (!std::isfinite(res)) res = bnorm;  // breakdown: report the rhs norm
      throw SolverFailure("solve_spd: conjugate gradients did not reach tolerance", res);
    }
  }
  return x;
}

SparseMatrix extract_submatrix(const SparseMatrix& A, const std::vector<int>& idx) {
  const int n = static_cast<int>(A.rows());
  const int k = static_cast<int>(idx.size());
  for (int i = 0; i < k; ++i) {
    if (idx[i] < 0 || idx[i] >= n) throw std::invalid_argument("extract_submatrix: index out of range");
    if (i > 0 && idx[i] <= idx[i - 1])
      throw std::invalid_argument("extract_submatrix: indices must be sorted and unique");
  }
  std::vector<int> where(n, -1);
  for (int i = 0; i < k; ++i) where[idx[i]] = i;

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(A.nonZeros());
  for (int r = 0; r < k; ++r) {
    for (SparseMatrix::InnerIterator it(A, idx[r]); it; ++it) {
      const int c = where[it.col()];
      if (c >= 0) trips.emplace_back(r, c, it.value());
    }
  }
  SparseMatrix S(k, k);
  S.setFromTriplets(trips.begin(), trips.end());
  S.makeCompressed();
  return S;
}

}  // namespace viamr
