#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

namespace viamr {

enum class ChildKind : std::uint8_t { Root, Red, Green };

// Per-cell refinement provenance. Red children record the cell they were
// split from. Green children additionally carry enough information to undo
// the bisection: a green child is never refined directly, instead the pair
// is replaced by a red refinement of the recorded parent triangle.
struct CellGenealogy {
  int parent = -1;  // cell id in the mesh this cell was refined from, -1 if none
  ChildKind kind = ChildKind::Root;
  int green_sibling = -1;                          // other half of the pair (this mesh)
  std::array<int, 3> green_parent = {-1, -1, -1};  // parent verts; midpoint on edge (0,1)
  int green_midpoint = -1;                         // hanging midpoint the pair removed
};

// Conforming triangle mesh. Cells store CCW vertex ids; boundary vertices are
// derived from the edge census (an edge with exactly one incident cell is a
// boundary edge) and kept sorted.
struct Mesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> cells;
  std::vector<int> boundary_vertices;
  std::vector<CellGenealogy> genealogy;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }
  bool is_boundary_vertex(int v) const;
};

// Topology queries built once per mesh.
struct Adjacency {
  struct EdgeRec {
    int a, b;    // vertex ids, a < b
    int c0, c1;  // incident cells, c1 = -1 for boundary edges
  };
  std::vector<std::vector<int>> vertex_cells;  // sorted cell ids per vertex
  std::vector<EdgeRec> edges;                  // sorted by (a, b)

  const EdgeRec* find_edge(int a, int b) const;  // nullptr if absent
};

struct MeshQuality {
  double min_angle_deg;
  double max_diameter;
  double min_area;
};

Mesh build_structured_square(int n, double lo, double hi);
Adjacency build_adjacency(const Mesh& mesh);

// Boundary vertices from the edge census: endpoints of edges with exactly
// one incident cell, sorted ascending.
std::vector<int> derive_boundary_vertices(const std::vector<std::array<int, 3>>& cells);

// Star of a vertex: all cells sharing it, sorted ascending.
const std::vector<int>& star(const Adjacency& adj, int vertex);
// Closure of a cell: its three vertex ids, sorted ascending.
std::array<int, 3> closure_vertices(const Mesh& mesh, int cell);

double cell_area(const Mesh& mesh, int cell);
double cell_diameter(const Mesh& mesh, int cell);  // longest edge
Eigen::VectorXd vertex_avg_incident_diameter(const Mesh& mesh, const Adjacency& adj);
MeshQuality quality(const Mesh& mesh);

// Red/green conforming refinement. Every marked cell is red-refined (4 similar
// children via edge midpoints); the closure green-bisects or promotes
// neighbors until no hanging node remains. Marked green children trigger a
// red refinement of their recorded parent instead.
Mesh refine_marked(const Mesh& mesh, const std::vector<std::uint8_t>& mask);
Mesh uniform_refine(const Mesh& mesh);  // all-true mask

// Integrity helpers used by the test suite.
int count_hanging_nodes(const Mesh& mesh);
void validate(const Mesh& mesh);  // throws std::runtime_error on violation

}  // namespace viamr
