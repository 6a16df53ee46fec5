#include "viamr/problems.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace viamr {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 5-point Gauss-Legendre rule on [-1, 1], exact through degree 9.
struct GaussPoint {
  double x, w;
};
const GaussPoint kGauss5[5] = {
    {-0.9061798459386640, 0.2369268850561891},
    {-0.5384693101056831, 0.4786286704993665},
    {0.0, 0.5688888888888889},
    {0.5384693101056831, 0.4786286704993665},
    {0.9061798459386640, 0.2369268850561891},
};

// Nodal L2 error of a P1 function on a uniform 1D grid, elementwise Gauss.
double l2_error_1d(const Vector& x, const Vector& u, const std::function<double(double)>& exact) {
  double acc = 0.0;
  for (Eigen::Index e = 0; e + 1 < x.size(); ++e) {
    const double half = 0.5 * (x[e + 1] - x[e]), mid = 0.5 * (x[e] + x[e + 1]);
    for (const GaussPoint& g : kGauss5) {
      const double xi = mid + half * g.x;
      const double t = (xi - x[e]) / (x[e + 1] - x[e]);
      const double uh = (1.0 - t) * u[e] + t * u[e + 1];
      const double d = uh - exact(xi);
      acc += g.w * half * d * d;
    }
  }
  return std::sqrt(acc);
}

// Uniform P1 stiffness on [-1,1] with identity rows at both endpoints.
SparseMatrix stiffness_1d(int n) {
  const double h = 2.0 / n;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(3 * static_cast<std::size_t>(n));
  trips.emplace_back(0, 0, 1.0);
  for (int i = 1; i < n; ++i) {
    trips.emplace_back(i, i - 1, -1.0 / h);
    trips.emplace_back(i, i, 2.0 / h);
    trips.emplace_back(i, i + 1, -1.0 / h);
  }
  trips.emplace_back(n, n, 1.0);
  SparseMatrix A(n + 1, n + 1);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

Vector nodes_1d(int n) {
  Vector x(n + 1);
  const double h = 2.0 / n;
  for (int i = 0; i <= n; ++i) x[i] = -1.0 + i * h;
  x[n] = 1.0;
  return x;
}

}  // namespace

BallConstants ball_constants() {
  // Newton on phi(a) = a^2 log(2/a) - (1 - a^2); phi' = 2a log(2/a) + a.
  double a = 0.7;
  for (int k = 0; k < 64; ++k) {
    const double phi = a * a * std::log(2.0 / a) - (1.0 - a * a);
    const double dphi = 2.0 * a * std::log(2.0 / a) + a;
    const double step = phi / dphi;
    a -= step;
    if (std::abs(step) <= 1e-17) break;
  }
  BallConstants c;
  c.r0 = 0.9;
  c.a = a;
  c.A = a * a / std::sqrt(1.0 - a * a);
  c.B = c.A * std::log(2.0);
  return c;
}

ObstacleProblem ball_obstacle() {
  const BallConstants c = ball_constants();
  ObstacleProblem p;
  p.name = "ball";
  p.lo = -2.0;
  p.hi = 2.0;
  p.psi = [r0 = c.r0](double x, double y) {
    const double r = std::hypot(x, y);
    if (r <= r0) return std::sqrt(1.0 - r * r);
    const double v0 = std::sqrt(1.0 - r0 * r0);
    return v0 - (r0 / v0) * (r - r0);  // tangent-line continuation
  };
  p.load = [](double, double) { return 0.0; };
  const auto exact = [c](double x, double y) {
    const double r = std::hypot(x, y);
    if (r <= c.a) return std::sqrt(1.0 - r * r);
    return -c.A * std::log(r) + c.B;
  };
  p.dirichlet = exact;
  p.has_exact = true;
  p.exact = exact;
  p.exact_grad = [c](double x, double y) {
    const double r = std::hypot(x, y);
    if (r <= c.a) {
      const double s = std::sqrt(1.0 - r * r);
      return Eigen::Vector2d(-x / s, -y / s);
    }
    return Eigen::Vector2d(-c.A * x / (r * r), -c.A * y / (r * r));
  };
  p.has_exact_free_boundary = true;
  p.free_boundary_point = [a = c.a](double t) {
    return Eigen::Vector2d(a * std::cos(2.0 * kPi * t), a * std::sin(2.0 * kPi * t));
  };
  p.exact_active = [a = c.a](double x, double y) { return std::hypot(x, y) <= a; };
  return p;
}

ObstacleProblem spiral_obstacle() {
  ObstacleProblem p;
  p.name = "spiral";
  p.lo = -1.0;
  p.hi = 1.0;
  p.psi = [](double x, double y) {
    const double r = std::hypot(x, y);
    if (r == 0.0) return 3.6;
    const double theta = std::atan2(y, x);
    return std::sin(2.0 * kPi / r + 0.5 * kPi - theta) + r * (r + 1.0) / (r - 2.0) - 3.0 * r +
           3.6;
  };
  p.load = [](double, double) { return 0.0; };
  p.dirichlet = [](double, double) { return 0.0; };
  return p;
}

PoissonProblem poisson_reference() {
  PoissonProblem p;
  p.lo = -1.0;
  p.hi = 1.0;
  p.load = [](double, double) { return 0.0; };
  p.exact = [](double x, double y) {
    const double d = (3.0 + x) * (3.0 + x) + (1.0 + y) * (1.0 + y);
    return 2.0 * (1.0 + y) / d;
  };
  p.exact_grad = [](double x, double y) {
    const double a = 3.0 + x, b = 1.0 + y;
    const double d = a * a + b * b;
    return Eigen::Vector2d(-4.0 * b * a / (d * d), 2.0 * (a * a - b * b) / (d * d));
  };
  p.dirichlet = p.exact;
  return p;
}

bool feasible_boundary(const ObstacleProblem& prob, int samples_per_side) {
  for (int k = 0; k <= samples_per_side; ++k) {
    const double t = prob.lo + (prob.hi - prob.lo) * k / samples_per_side;
    const double pts[4][2] = {
        {t, prob.lo}, {t, prob.hi}, {prob.lo, t}, {prob.hi, t}};
    for (const auto& pt : pts)
      if (prob.dirichlet(pt[0], pt[1]) < prob.psi(pt[0], pt[1])) return false;
  }
  return true;
}

VIProblemDiscrete discretize_obstacle(const Mesh& mesh, const ObstacleProblem& prob) {
  const SparseMatrix A = assemble_stiffness(mesh);
  const Vector load = assemble_load(mesh, prob.load);
  const DirichletBC bc = boundary_condition(mesh, prob.dirichlet);

  VIProblemDiscrete d;
  std::tie(d.A, d.b) = apply_dirichlet(A, load, bc);
  d.psi = interpolate_p1(mesh, prob.psi).values;
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (!mesh.is_boundary_vertex(v)) d.free_ids.push_back(v);
  for (std::size_t i = 0; i < bc.vertices.size(); ++i) {
    if (bc.values[static_cast<Eigen::Index>(i)] < d.psi[bc.vertices[i]])
      throw std::invalid_argument("discretize_obstacle: boundary data below the obstacle at vertex " +
                                  std::to_string(bc.vertices[i]));
  }
  return d;
}

VISolveResult solve_obstacle(const Mesh& mesh, const ObstacleProblem& prob,
                             const SolverParams& params) {
  return solve_vi(discretize_obstacle(mesh, prob), params);
}

double exact_1d_free_boundary() { return (2.0 - std::sqrt(2.0)) / 2.0; }

double exact_1d_obstacle(double x) {
  const double b = exact_1d_free_boundary();
  const double ax = std::abs(x);
  if (ax <= b) return 0.5 - x * x;
  return 2.0 * b * (1.0 - ax);  // tangent line through (+-1, 0)
}

double exact_1d_poisson(double x) { return 0.5 * (x * x - 1.0); }

Result1D solve_1d_obstacle(int n) {
  if (n < 2) throw std::invalid_argument("solve_1d_obstacle: need at least 2 cells");
  VIProblemDiscrete prob;
  prob.A = stiffness_1d(n);
  prob.b = Vector::Zero(n + 1);
  const Vector x = nodes_1d(n);
  prob.psi.resize(n + 1);
  for (int i = 0; i <= n; ++i) prob.psi[i] = 0.5 - x[i] * x[i];
  prob.free_ids.resize(n - 1);
  for (int i = 1; i < n; ++i) prob.free_ids[i - 1] = i;

  const VISolveResult res = solve_vi(prob);

  Result1D out;
  out.x = x;
  out.u = res.u;
  out.solver_iterations = res.iterations;
  out.reason = res.reason;
  out.l2_error = l2_error_1d(x, res.u, exact_1d_obstacle);
  if (res.active.empty()) {
    out.fb_gap = std::numeric_limits<double>::quiet_NaN();
  } else {
    const double rightmost = x[res.active.back()];
    out.fb_gap = std::abs(rightmost - exact_1d_free_boundary());
  }
  return out;
}

Result1D solve_1d_poisson(int n) {
  if (n < 2) throw std::invalid_argument("solve_1d_poisson: need at least 2 cells");
  const double h = 2.0 / n;
  const SparseMatrix A = stiffness_1d(n);
  Vector b = Vector::Zero(n + 1);
  for (int i = 1; i < n; ++i) b[i] = -h;  // f = -1, exact for a constant source

  Result1D out;
  out.x = nodes_1d(n);
  out.u = solve_spd(A, b, 1e-12);
  out.l2_error = l2_error_1d(out.x, out.u, exact_1d_poisson);
  out.fb_gap = 0.0;
  return out;
}

}  // namespace viamr
