#include "viamr/fem.hpp"

#include <cmath>
#include <string>

namespace viamr {

namespace {

// Degree-4 exact 6-point rule on the reference triangle (barycentric orbits).
struct QPoint {
  double l0, l1, l2, w;
};
const QPoint kQuad6[6] = {
    {0.816847572980459, 0.091576213509771, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.816847572980459, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.091576213509771, 0.816847572980459, 0.109951743655322},
    {0.108103018168070, 0.445948490915965, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.108103018168070, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.445948490915965, 0.108103018168070, 0.223381589678011},
};

struct CellGeom {
  Eigen::Vector2d p0, p1, p2;
  double area;
};

CellGeom cell_geom(const Mesh& mesh, int c) {
  const auto& t = mesh.cells[c];
  CellGeom g{mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]], 0.0};
  g.area = 0.5 * ((g.p1.x() - g.p0.x()) * (g.p2.y() - g.p0.y()) -
                  (g.p2.x() - g.p0.x()) * (g.p1.y() - g.p0.y()));
  return g;
}

}  // namespace

FieldP1 interpolate_p1(const Mesh& mesh, const ScalarFn& f) {
  FieldP1 u{&mesh, Vector(mesh.num_vertices())};
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    u.values[v] = f(mesh.vertices[v].x(), mesh.vertices[v].y());
    if (!std::isfinite(u.values[v]))
      throw AssemblyError("interpolate_p1: non-finite value at vertex " + std::to_string(v));
  }
  return u;
}

DirichletBC boundary_condition(const Mesh& mesh, const ScalarFn& g) {
  DirichletBC bc;
  bc.vertices = mesh.boundary_vertices;
  bc.values.resize(bc.vertices.size());
  for (std::size_t i = 0; i < bc.vertices.size(); ++i) {
    const auto& p = mesh.vertices[bc.vertices[i]];
    bc.values[i] = g(p.x(), p.y());
  }
  return bc;
}

SparseMatrix assemble_stiffness(const Mesh& mesh) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(9 * mesh.cells.size());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeom g = cell_geom(mesh, c);
    if (!(g.area > 1e-300))
      throw AssemblyError("assemble_stiffness: degenerate cell " + std::to_string(c));
    // gradients of the barycentric basis: rotated opposite edges / (2 area)
    const Eigen::Vector2d e0 = g.p2 - g.p1, e1 = g.p0 - g.p2, e2 = g.p1 - g.p0;
    const Eigen::Vector2d grad[3] = {Eigen::Vector2d(-e0.y(), e0.x()) / (2.0 * g.area),
                                     Eigen::Vector2d(-e1.y(), e1.x()) / (2.0 * g.area),
                                     Eigen::Vector2d(-e2.y(), e2.x()) / (2.0 * g.area)};
    const auto& t = mesh.cells[c];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trips.emplace_back(t[i], t[j], g.area * grad[i].dot(grad[j]));
  }
  SparseMatrix A(mesh.num_vertices(), mesh.num_vertices());
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

Vector assemble_load(const Mesh& mesh, const ScalarFn& f) {
  Vector b = Vector::Zero(mesh.num_vertices());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeom g = cell_geom(mesh, c);
    const auto& t = mesh.cells[c];
    // midpoint-of-edges rule: degree-2 exact, weight area/3 per point; the
    // basis function of vertex i is 1/2 on its two adjacent edge midpoints
    const Eigen::Vector2d m01 = 0.5 * (g.p0 + g.p1), m12 = 0.5 * (g.p1 + g.p2),
                          m20 = 0.5 * (g.p2 + g.p0);
    const double f01 = f(m01.x(), m01.y()), f12 = f(m12.x(), m12.y()), f20 = f(m20.x(), m20.y());
    if (!std::isfinite(f01) || !std::isfinite(f12) || !std::isfinite(f20))
      throw AssemblyError("assemble_load: non-finite load on cell " + std::to_string(c));
    const double w = g.area / 3.0;
    b[t[0]] += w * 0.5 * (f01 + f20);
    b[t[1]] += w * 0.5 * (f01 + f12);
    b[t[2]] += w * 0.5 * (f12 + f20);
  }
  return b;
}

Vector lumped_mass(const Mesh& mesh) {
  Vector m = Vector::Zero(mesh.num_vertices());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double third = cell_area(mesh, c) / 3.0;
    for (int v : mesh.cells[c]) m[v] += third;
  }
  return m;
}

std::pair<SparseMatrix, Vector> apply_dirichlet(const SparseMatrix& A, const Vector& b,
                                                const DirichletBC& bc) {
  const int n = static_cast<int>(A.rows());
  if (b.size() != n) throw std::invalid_argument("apply_dirichlet: dimension mismatch");
  std::vector<char> is_bdry(n, 0);
  Vector g = Vector::Zero(n);
  for (std::size_t i = 0; i < bc.vertices.size(); ++i) {
    const int v = bc.vertices[i];
    if (v < 0 || v >= n) throw std::invalid_argument("apply_dirichlet: vertex out of range");
    is_bdry[v] = 1;
    g[v] = bc.values[i];
  }

  Vector bout = b;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(A.nonZeros());
  for (int r = 0; r < n; ++r) {
    if (is_bdry[r]) continue;
    for (SparseMatrix::InnerIterator it(A, r); it; ++it) {
      if (is_bdry[it.col()])
        bout[r] -= it.value() * g[it.col()];  // lift known values to the rhs
      else
        trips.emplace_back(r, it.col(), it.value());
    }
  }
  for (int r = 0; r < n; ++r) {
    if (is_bdry[r]) {
      trips.emplace_back(r, r, 1.0);
      bout[r] = g[r];
    }
  }
  SparseMatrix Aout(n, n);
  Aout.setFromTriplets(trips.begin(), trips.end());
  Aout.makeCompressed();
  return {std::move(Aout), std::move(bout)};
}

FieldDG0 interpolate_dg0(const FieldP1& u) {
  const Mesh& mesh = *u.mesh;
  FieldDG0 w{&mesh, Vector(mesh.num_cells())};
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& t = mesh.cells[c];
    w.values[c] = (u.values[t[0]] + u.values[t[1]] + u.values[t[2]]) / 3.0;
  }
  return w;
}

double error_l2(const FieldP1& u, const ScalarFn& exact) {
  const Mesh& mesh = *u.mesh;
  double acc = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeom g = cell_geom(mesh, c);
    const auto& t = mesh.cells[c];
    for (const QPoint& q : kQuad6) {
      const Eigen::Vector2d x = q.l0 * g.p0 + q.l1 * g.p1 + q.l2 * g.p2;
      const double uh = q.l0 * u.values[t[0]] + q.l1 * u.values[t[1]] + q.l2 * u.values[t[2]];
      const double d = uh - exact(x.x(), x.y());
      acc += q.w * g.area * d * d;
    }
  }
  return std::sqrt(acc);
}

double error_h1_semi(const FieldP1& u, const GradFn& exact_grad) {
  const Mesh& mesh = *u.mesh;
  double acc = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeom g = cell_geom(mesh, c);
    const Eigen::Vector2d gh = cell_gradient(u, c);
    for (const QPoint& q : kQuad6) {
      const Eigen::Vector2d x = q.l0 * g.p0 + q.l1 * g.p1 + q.l2 * g.p2;
      acc += q.w * g.area * (gh - exact_grad(x.x(), x.y())).squaredNorm();
    }
  }
  return std::sqrt(acc);
}

Eigen::Vector2d cell_gradient(const FieldP1& u, int cell) {
  const Mesh& mesh = *u.mesh;
  const CellGeom g = cell_geom(mesh, cell);
  const auto& t = mesh.cells[cell];
  const Eigen::Vector2d e0 = g.p2 - g.p1, e1 = g.p0 - g.p2, e2 = g.p1 - g.p0;
  return (u.values[t[0]] * Eigen::Vector2d(-e0.y(), e0.x()) +
          u.values[t[1]] * Eigen::Vector2d(-e1.y(), e1.x()) +
          u.values[t[2]] * Eigen::Vector2d(-e2.y(), e2.x())) /
         (2.0 * cell_area(mesh, cell));
}

}  // namespace viamr
