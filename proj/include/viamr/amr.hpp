#pragma once

#include "viamr/fem.hpp"

#include <cstdint>
#include <vector>

namespace viamr {

// Nodal contact indicator of a feasible solution: 1 where u - psi <= tol.
Vector nodal_active_indicator(const FieldP1& u, const FieldP1& psi, double tol = 1e-12);

// One implicit Euler step of the heat equation applied to the indicator,
// with a lumped mass matrix, a per-vertex timestep of half the squared
// average incident cell diameter, and the boundary values held fixed.
// On meshes without obtuse cells the result stays inside [0, 1].
Vector vces_smooth(const Mesh& mesh, const Adjacency& adj, const Vector& s0);

// Tag cells whose average smoothed indicator lies strictly inside the
// thresholding band (alpha, beta). Requires 0 <= alpha < beta <= 1.
std::vector<std::uint8_t> vces_tag(const Mesh& mesh, const Vector& s1, double alpha,
                                   double beta);

// Cells whose vertices mix contact and non-contact states: the cellwise
// average of the 0/1 indicator is strictly between 0 and 1.
std::vector<std::uint8_t> udo_border(const Mesh& mesh, const Vector& s0);

// Inclusive dilation of a cell set by breadth-first steps over the
// shares-a-vertex adjacency graph; depth 0 returns the set unchanged.
std::vector<std::uint8_t> udo_dilate(const Mesh& mesh, const Adjacency& adj,
                                     const std::vector<std::uint8_t>& cells, int depth);

// Border extraction followed by dilation.
std::vector<std::uint8_t> udo_tag(const Mesh& mesh, const Adjacency& adj, const Vector& s0,
                                  int depth);

// Largest diameter among cells fully outside the contact region (all three
// vertices off the obstacle); falls back to the largest diameter overall
// when every cell touches the contact region.
double max_inactive_diameter(const Mesh& mesh, const Vector& s0);

// Switch the refinement loop to uniform once the free-boundary error is
// below the square of the inactive-region resolution.
bool hybrid_decide(double hausdorff, double h_inactive);

}  // namespace viamr
