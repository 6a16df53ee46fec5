#include "viamr/amr.hpp"

#include <algorithm>
#include <stdexcept>

namespace viamr {

Vector nodal_active_indicator(const FieldP1& u, const FieldP1& psi, double tol) {
  if (u.mesh != psi.mesh || u.values.size() != psi.values.size())
    throw std::invalid_argument("nodal_active_indicator: fields on different meshes");
  Vector s(u.values.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    s[i] = (u.values[i] - psi.values[i] <= tol) ? 1.0 : 0.0;
  return s;
}

Vector vces_smooth(const Mesh& mesh, const Adjacency& adj, const Vector& s0) {
  const int n = mesh.num_vertices();
  if (s0.size() != n) throw std::invalid_argument("vces_smooth: indicator size mismatch");

  const SparseMatrix K = assemble_stiffness(mesh);
  const Vector m = lumped_mass(mesh);
  const Vector davg = vertex_avg_incident_diameter(mesh, adj);

  // (D + K) s1 = D s0 with D = diag(m_i / dt_i), dt_i = 0.5 davg_i^2
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(n));
  Vector rhs(n);
  for (int i = 0; i < n; ++i) {
    const double dt = 0.5 * davg[i] * davg[i];
    const double d = m[i] / dt;
    trips.emplace_back(i, i, d);
    rhs[i] = d * s0[i];
  }
  SparseMatrix D(n, n);
  D.setFromTriplets(trips.begin(), trips.end());
  SparseMatrix M = D + K;

  // hold the boundary values fixed at the input indicator
  DirichletBC bc;
  bc.vertices = mesh.boundary_vertices;
  bc.values.resize(static_cast<Eigen::Index>(bc.vertices.size()));
  for (std::size_t k = 0; k < bc.vertices.size(); ++k)
    bc.values[static_cast<Eigen::Index>(k)] = s0[bc.vertices[k]];
  const auto [Md, rhsd] = apply_dirichlet(M, rhs, bc);
  return solve_spd(Md, rhsd, 1e-12);
}

std::vector<std::uint8_t> vces_tag(const Mesh& mesh, const Vector& s1, double alpha,
                                   double beta) {
  if (!(0.0 <= alpha && alpha < beta && beta <= 1.0))
    throw std::invalid_argument("vces_tag: need 0 <= alpha < beta <= 1");
  if (s1.size() != mesh.num_vertices())
    throw std::invalid_argument("vces_tag: indicator size mismatch");
  std::vector<std::uint8_t> mask(mesh.cells.size(), 0);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& t = mesh.cells[c];
    const double avg = (s1[t[0]] + s1[t[1]] + s1[t[2]]) / 3.0;
    mask[static_cast<std::size_t>(c)] = (alpha < avg && avg < beta) ? 1 : 0;
  }
  return mask;
}

std::vector<std::uint8_t> udo_border(const Mesh& mesh, const Vector& s0) {
  if (s0.size() != mesh.num_vertices())
    throw std::invalid_argument("udo_border: indicator size mismatch");
  std::vector<std::uint8_t> mask(mesh.cells.size(), 0);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& t = mesh.cells[c];
    const double avg = (s0[t[0]] + s0[t[1]] + s0[t[2]]) / 3.0;
    mask[static_cast<std::size_t>(c)] = (0.0 < avg && avg < 1.0) ? 1 : 0;
  }
  return mask;
}

std::vector<std::uint8_t> udo_dilate(const Mesh& mesh, const Adjacency& adj,
                                     const std::vector<std::uint8_t>& cells, int depth) {
  if (cells.size() != mesh.cells.size())
    throw std::invalid_argument("udo_dilate: mask size mismatch");
  if (depth < 0) throw std::invalid_argument("udo_dilate: negative depth");

  std::vector<std::uint8_t> visited = cells;
  std::vector<int> frontier;
  for (int c = 0; c < mesh.num_cells(); ++c)
    if (visited[static_cast<std::size_t>(c)]) frontier.push_back(c);

  for (int step = 0; step < depth && !frontier.empty(); ++step) {
    std::vector<int> next;
    for (int c : frontier) {
      for (int v : mesh.cells[c]) {
        for (int nb : adj.vertex_cells[v]) {
          if (!visited[static_cast<std::size_t>(nb)]) {
            visited[static_cast<std::size_t>(nb)] = 1;
            next.push_back(nb);
          }
        }
      }
    }
    frontier = std::move(next);
  }
  return visited;
}

std::vector<std::uint8_t> udo_tag(const Mesh& mesh, const Adjacency& adj, const Vector& s0,
                                  int depth) {
  return udo_dilate(mesh, adj, udo_border(mesh, s0), depth);
}

double max_inactive_diameter(const Mesh& mesh, const Vector& s0) {
  if (s0.size() != mesh.num_vertices())
    throw std::invalid_argument("max_inactive_diameter: indicator size mismatch");
  double h_inactive = 0.0, h_all = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double d = cell_diameter(mesh, c);
    h_all = std::max(h_all, d);
    const auto& t = mesh.cells[c];
    if (s0[t[0]] == 0.0 && s0[t[1]] == 0.0 && s0[t[2]] == 0.0)
      h_inactive = std::max(h_inactive, d);
  }
  return h_inactive > 0.0 ? h_inactive : h_all;
}

bool hybrid_decide(double hausdorff, double h_inactive) {
  return hausdorff < h_inactive * h_inactive;
}

}  // namespace viamr
