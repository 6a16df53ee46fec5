#pragma once

#include "viamr/fem.hpp"
#include "viamr/visolve.hpp"

#include <functional>
#include <string>

namespace viamr {

// Reference problem on a square: lower-obstacle data plus whatever analytic
// structure the particular configuration admits.
struct ObstacleProblem {
  std::string name;
  double lo = -2.0, hi = 2.0;  // square domain [lo, hi]^2
  ScalarFn psi;                // obstacle
  ScalarFn load;               // source term f
  ScalarFn dirichlet;          // boundary data, >= psi on the boundary

  bool has_exact = false;
  ScalarFn exact;
  GradFn exact_grad;

  bool has_exact_free_boundary = false;
  std::function<Eigen::Vector2d(double)> free_boundary_point;  // t in [0,1)
  std::function<bool(double, double)> exact_active;            // contact membership
};

// Constants of the radially symmetric configuration: contact radius a and
// the log-solution coefficients of u(r) = -A log(r) + B outside it.
struct BallConstants {
  double r0;  // obstacle switches from sphere cap to tangent line here
  double a;
  double A;
  double B;
};

// Solves a^2 log(2/a) = 1 - a^2 (smooth fit of the log branch against the
// unit sphere cap) and derives A, B from value/slope matching.
BallConstants ball_constants();

// Sphere-cap obstacle on [-2,2]^2 with full analytic solution.
ObstacleProblem ball_obstacle();

// Oscillating spiral obstacle on (-1,1)^2 with zero boundary data; no
// analytic solution is available.
ObstacleProblem spiral_obstacle();

// Harmonic reference solution for the plain Poisson convergence study.
struct PoissonProblem {
  double lo = -1.0, hi = 1.0;
  ScalarFn load;       // identically zero
  ScalarFn exact;      // u*(x,y) = 2(1+y) / ((3+x)^2 + (1+y)^2)
  GradFn exact_grad;
  ScalarFn dirichlet;  // trace of the exact solution
};
PoissonProblem poisson_reference();

// Sampled feasibility of the boundary data against the obstacle.
bool feasible_boundary(const ObstacleProblem& prob, int samples_per_side = 64);

// Assemble the discrete complementarity system for a problem on a mesh:
// stiffness + load with Dirichlet rows eliminated, nodal obstacle, interior
// free ids. Throws std::invalid_argument if the boundary data dips below the
// obstacle at a boundary vertex.
VIProblemDiscrete discretize_obstacle(const Mesh& mesh, const ObstacleProblem& prob);

// discretize_obstacle followed by the reduced-space Newton solve.
VISolveResult solve_obstacle(const Mesh& mesh, const ObstacleProblem& prob,
                             const SolverParams& params = {});

// One-dimensional studies on [-1,1] with n uniform cells.
struct Result1D {
  Vector x;  // n + 1 nodes
  Vector u;  // nodal solution
  double l2_error = 0.0;
  double fb_gap = 0.0;  // |rightmost contact node - exact free boundary|
  int solver_iterations = 0;
  ConvergedReason reason = ConvergedReason::atol;
};

// Membrane over the parabolic obstacle 1/2 - x^2 with zero boundary data.
Result1D solve_1d_obstacle(int n);
// Plain two-point boundary value problem u'' = 1, u(-1) = u(1) = 0.
Result1D solve_1d_poisson(int n);

// Analytic data of the 1D pair.
double exact_1d_free_boundary();      // (2 - sqrt(2)) / 2
double exact_1d_obstacle(double x);   // parabola inside, tangent lines outside
double exact_1d_poisson(double x);    // (x^2 - 1) / 2

}  // namespace viamr
