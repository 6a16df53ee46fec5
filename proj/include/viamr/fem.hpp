#pragma once

#include "viamr/linalg.hpp"
#include "viamr/mesh.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace viamr {

using ScalarFn = std::function<double(double, double)>;
using GradFn = std::function<Eigen::Vector2d(double, double)>;

// Continuous piecewise-linear field: one coefficient per vertex.
struct FieldP1 {
  const Mesh* mesh = nullptr;
  Vector values;
};

// Piecewise-constant field: one value per cell.
struct FieldDG0 {
  const Mesh* mesh = nullptr;
  Vector values;
};

struct DirichletBC {
  std::vector<int> vertices;  // sorted boundary vertex ids
  Vector values;              // same length
};

struct AssemblyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Interpolate a function at mesh vertices / build boundary data from it.
FieldP1 interpolate_p1(const Mesh& mesh, const ScalarFn& f);
DirichletBC boundary_condition(const Mesh& mesh, const ScalarFn& g);

// Stiffness matrix a(phi_j, phi_i) = integral of grad phi_j . grad phi_i.
// Throws AssemblyError naming the offending cell if one is degenerate.
SparseMatrix assemble_stiffness(const Mesh& mesh);

// Load vector via the degree-2 midpoint-of-edges quadrature rule.
Vector assemble_load(const Mesh& mesh, const ScalarFn& f);

// Lumped mass vector m_i = integral of phi_i (one third of incident area).
Vector lumped_mass(const Mesh& mesh);

// Symmetric elimination of Dirichlet rows/columns: boundary rows become
// identity with the boundary value on the rhs, interior rhs entries are
// lifted. Returns the modified pair; the input is untouched.
std::pair<SparseMatrix, Vector> apply_dirichlet(const SparseMatrix& A, const Vector& b,
                                                const DirichletBC& bc);

// Cellwise average of a P1 field (equals the mean of its 3 vertex values).
FieldDG0 interpolate_dg0(const FieldP1& u);

// L2 and H1-seminorm errors against a given exact solution, via the 6-point
// degree-4 triangle quadrature rule.
double error_l2(const FieldP1& u, const ScalarFn& exact);
double error_h1_semi(const FieldP1& u, const GradFn& exact_grad);

// Constant gradient of a P1 field on one cell.
Eigen::Vector2d cell_gradient(const FieldP1& u, int cell);

}  // namespace viamr
