#include "viamr/visolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace viamr {

const char* to_string(ConvergedReason reason) {
  switch (reason) {
    case ConvergedReason::atol: return "atol";
    case ConvergedReason::rtol: return "rtol";
    case ConvergedReason::stol: return "stol";
    case ConvergedReason::line_search_failure: return "line_search_failure";
    case ConvergedReason::max_iterations: return "max_iterations";
  }
  return "unknown";
}

Vector vi_residual(const SparseMatrix& A_ff, const Vector& q, const Vector& w) {
  return A_ff * w - q;
}

std::vector<char> classify_active(const Vector& w, const Vector& F, double tol) {
  if (w.size() != F.size()) throw std::invalid_argument("classify_active: size mismatch");
  std::vector<char> active(static_cast<std::size_t>(w.size()), 0);
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w[i] <= tol && F[i] > 0.0) active[static_cast<std::size_t>(i)] = 1;
  return active;
}

Vector reduced_residual(const Vector& w, const Vector& F, double tol) {
  if (w.size() != F.size()) throw std::invalid_argument("reduced_residual: size mismatch");
  Vector r(F.size());
  for (Eigen::Index i = 0; i < F.size(); ++i)
    r[i] = (w[i] > tol) ? F[i] : std::min(F[i], 0.0);
  return r;
}

Vector project_feasible(const Vector& w) { return w.cwiseMax(0.0); }

Vector newton_step(const SparseMatrix& A_ff, const Vector& F, const std::vector<char>& active,
                   double lin_rel_tol) {
  const Eigen::Index n = F.size();
  if (static_cast<Eigen::Index>(active.size()) != n)
    throw std::invalid_argument("newton_step: size mismatch");
  std::vector<int> inactive;
  inactive.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    if (!active[static_cast<std::size_t>(i)]) inactive.push_back(static_cast<int>(i));

  Vector d = Vector::Zero(n);
  if (inactive.empty()) return d;

  const SparseMatrix A_II = extract_submatrix(A_ff, inactive);
  Vector rhs(static_cast<Eigen::Index>(inactive.size()));
  for (std::size_t k = 0; k < inactive.size(); ++k) rhs[static_cast<Eigen::Index>(k)] = -F[inactive[k]];
  const Vector d_I = solve_spd(A_II, rhs, lin_rel_tol);
  for (std::size_t k = 0; k < inactive.size(); ++k) d[inactive[k]] = d_I[static_cast<Eigen::Index>(k)];
  return d;
}

double line_search(const SparseMatrix& A_ff, const Vector& q, const Vector& w, const Vector& d,
                   double current_norm, const SolverParams& params) {
  double beta = 1.0;
  while (beta >= params.min_step) {
    const Vector trial = project_feasible(w + beta * d);
    const Vector F = vi_residual(A_ff, q, trial);
    const double trial_norm = reduced_residual(trial, F, params.vi_zero_tol).norm();
    if (trial_norm <= (1.0 - params.armijo_sigma * beta) * current_norm) return beta;
    beta *= 0.5;
  }
  return 0.0;
}

VISolveResult solve_vi(const VIProblemDiscrete& prob, const SolverParams& params) {
  const Eigen::Index n = prob.A.rows();
  if (prob.A.cols() != n || prob.b.size() != n || prob.psi.size() != n)
    throw std::invalid_argument("solve_vi: inconsistent system dimensions");
  const auto nf = static_cast<Eigen::Index>(prob.free_ids.size());

  // reduced data; extract_submatrix validates the free id list
  const SparseMatrix A_ff = extract_submatrix(prob.A, prob.free_ids);
  Vector psi_f(nf), b_f(nf);
  for (Eigen::Index k = 0; k < nf; ++k) {
    psi_f[k] = prob.psi[prob.free_ids[static_cast<std::size_t>(k)]];
    b_f[k] = prob.b[prob.free_ids[static_cast<std::size_t>(k)]];
  }
  const Vector q = b_f - A_ff * psi_f;

  // initial iterate: project the unconstrained solution onto the bound
  const Vector u0 = solve_spd(prob.A, prob.b, params.lin_rel_tol);
  Vector u0_f(nf);
  for (Eigen::Index k = 0; k < nf; ++k) u0_f[k] = u0[prob.free_ids[static_cast<std::size_t>(k)]];
  Vector w = project_feasible(u0_f - psi_f);

  VISolveResult result;
  result.reason = ConvergedReason::max_iterations;
  double first_norm = -1.0;
  for (int iter = 0; iter <= params.max_iterations; ++iter) {
    const Vector F = vi_residual(A_ff, q, w);
    const Vector fhat = reduced_residual(w, F, params.vi_zero_tol);
    const double norm = fhat.norm();
    int active_count = 0, bound_count = 0;
    for (Eigen::Index i = 0; i < nf; ++i) {
      if (w[i] <= params.vi_zero_tol) {
        ++bound_count;
        if (F[i] > 0.0) ++active_count;
      }
    }
    result.residual_history.push_back(norm);
    result.monitor.push_back(MonitorRecord{iter, norm, active_count, bound_count});
    if (first_norm < 0.0) first_norm = norm;

    if (norm <= params.atol) {
      result.reason = ConvergedReason::atol;
      break;
    }
    if (norm <= params.rtol * first_norm) {
      result.reason = ConvergedReason::rtol;
      break;
    }
    if (iter == params.max_iterations) {
      result.reason = ConvergedReason::max_iterations;
      break;
    }

    const std::vector<char> active = classify_active(w, F, params.vi_zero_tol);
    const Vector d = newton_step(A_ff, F, active, params.lin_rel_tol);
    const double beta = line_search(A_ff, q, w, d, norm, params);
    if (beta == 0.0) {
      result.reason = ConvergedReason::line_search_failure;
      break;
    }
    const Vector w_next = project_feasible(w + beta * d);
    const double step_norm = (w_next - w).norm();
    w = w_next;
    result.iterations = iter + 1;
    if (step_norm <= params.stol * w.norm()) {
      result.reason = ConvergedReason::stol;
      break;
    }
  }

  // assemble the full solution: exact data values on eliminated rows
  result.u = prob.b;
  for (Eigen::Index k = 0; k < nf; ++k)
    result.u[prob.free_ids[static_cast<std::size_t>(k)]] = psi_f[k] + w[k];

  for (Eigen::Index k = 0; k < nf; ++k) {
    const int id = prob.free_ids[static_cast<std::size_t>(k)];
    if (w[k] <= params.vi_zero_tol)
      result.active.push_back(id);
    else
      result.inactive.push_back(id);
  }
  return result;
}

}  // namespace viamr
