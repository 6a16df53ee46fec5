#pragma once

#include "viamr/linalg.hpp"

#include <vector>

namespace viamr {

// Discrete complementarity problem for the lower-obstacle variational
// inequality, posed on the vertices of the assembled system:
//   u >= psi,  (A u - b) >= 0,  (u - psi)^T (A u - b) = 0   on free ids,
//   u = b on the remaining (Dirichlet) ids, whose rows of A are identity.
// The solver works in the shifted variable w = u - psi restricted to the
// free ids, where the residual is F(w) = A_ff w - q, q = b_f - A_ff psi_f.
struct VIProblemDiscrete {
  SparseMatrix A;             // full system, Dirichlet rows already eliminated
  Vector b;                   // full right-hand side (boundary rows hold data)
  Vector psi;                 // obstacle at every vertex
  std::vector<int> free_ids;  // sorted non-Dirichlet vertex ids
};

struct SolverParams {
  double atol = 1e-12;         // absolute tolerance on the reduced residual
  double rtol = 1e-8;          // relative drop from the first residual
  double stol = 1e-12;         // relative size of the accepted step
  double vi_zero_tol = 1e-12;  // threshold deciding w_i is at the bound
  int max_iterations = 200;
  double armijo_sigma = 1e-4;  // sufficient-decrease slope
  double min_step = 1e-12;     // smallest admissible backtracking step
  double lin_rel_tol = 1e-10;  // tolerance handed to the inner linear solves
};

enum class ConvergedReason { atol, rtol, stol, line_search_failure, max_iterations };
const char* to_string(ConvergedReason reason);

// One line of the iteration log: residual plus "active lower constraints
// a/b", a = |{w_i <= tol and F_i > 0}|, b = |{w_i <= tol}|.
struct MonitorRecord {
  int iteration;
  double residual;
  int active;
  int at_bound;
};

struct VISolveResult {
  Vector u;                  // full-length solution, data values on Dirichlet ids
  std::vector<int> active;   // free ids with u - psi at the bound, sorted
  std::vector<int> inactive; // remaining free ids, sorted
  int iterations = 0;        // accepted Newton updates
  std::vector<double> residual_history;  // reduced-residual norm per iteration
  std::vector<MonitorRecord> monitor;
  ConvergedReason reason = ConvergedReason::max_iterations;
};

// Algebraic pieces of the method, exposed for direct verification.

// F(w) = A_ff w - q.
Vector vi_residual(const SparseMatrix& A_ff, const Vector& q, const Vector& w);

// Active set of the reduced Newton step: at the bound with outward residual.
std::vector<char> classify_active(const Vector& w, const Vector& F, double tol);

// Reduced residual: F_i where w_i is off the bound, min(F_i, 0) at the bound.
Vector reduced_residual(const Vector& w, const Vector& F, double tol);

// Projection onto the feasible cone w >= 0.
Vector project_feasible(const Vector& w);

// Solve A_II d_I = -F_I on the inactive ids, zero on the active ids.
Vector newton_step(const SparseMatrix& A_ff, const Vector& F, const std::vector<char>& active,
                   double lin_rel_tol);

// Backtracking projected line search: the largest beta in {1, 1/2, 1/4, ...}
// with ||Fhat(pi(w + beta d))||_2 <= (1 - sigma beta) * current_norm, or 0.0
// once beta would drop below min_step.
double line_search(const SparseMatrix& A_ff, const Vector& q, const Vector& w, const Vector& d,
                   double current_norm, const SolverParams& params);

// Reduced-space active-set Newton method with projected Armijo backtracking.
// The initial iterate projects the unconstrained solve onto the feasible set.
VISolveResult solve_vi(const VIProblemDiscrete& prob, const SolverParams& params = {});

}  // namespace viamr
