#pragma once

#include "viamr/linalg.hpp"
#include "viamr/mesh.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace viamr {

// Cells whose three vertices all carry the contact indicator; their union is
// the discrete contact region.
std::vector<std::uint8_t> active_cells(const Mesh& mesh, const Vector& s0);

// Sampling of the interior interface between contact cells and the rest.
// Edges on the domain boundary never contribute: the free boundary is the
// part of the contact-region boundary inside the domain.
struct FreeBoundary {
  bool empty = true;
  std::vector<Eigen::Vector2d> points;
};
FreeBoundary extract_free_boundary(const Mesh& mesh, const Adjacency& adj,
                                   const std::vector<std::uint8_t>& active,
                                   int samples_per_edge = 16);

// Area Jaccard index between the discrete contact region and an analytic
// region, by centroid sampling over the k^2 similar-subtriangle subdivision
// of every cell. Two empty regions count as identical (index 1).
double jaccard(const Mesh& mesh, const std::vector<std::uint8_t>& active,
               const std::function<bool(double, double)>& exact_region, int k = 16);

// Symmetric Hausdorff distance between nonempty finite point sets.
double hausdorff(const std::vector<Eigen::Vector2d>& a, const std::vector<Eigen::Vector2d>& b);

// Recursive coordinate bisection of the cell centroids (widest axis, ties to
// x; deterministic (coordinate, id) ordering) into balanced parts: every part
// receives floor or ceil of cells/parts. Returns the part id of each cell.
std::vector<int> rcb_partition(const Mesh& mesh, int parts);

// Share of a cell subset owned by each part; all zeros if the subset is empty.
std::vector<double> partition_ratios(const std::vector<int>& part_of_cell,
                                     const std::vector<std::uint8_t>& subset, int parts);

}  // namespace viamr
