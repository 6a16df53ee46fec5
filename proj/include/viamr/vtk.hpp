#pragma once

#include "viamr/linalg.hpp"
#include "viamr/mesh.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace viamr {

// Named scalar fields attached to a mesh for serialization: point data has
// one value per vertex, cell data one value per cell.
struct VtkFields {
  std::vector<std::pair<std::string, Vector>> point_data;
  std::vector<std::pair<std::string, Vector>> cell_data;
};

// Legacy ASCII unstructured-grid writer (triangles, cell type 5); doubles
// are printed with 16 significant digits so output is reproducible.
void write_vtk(std::ostream& os, const Mesh& mesh, const VtkFields& fields = {});
void write_vtk_file(const std::string& path, const Mesh& mesh, const VtkFields& fields = {});

// Parsed contents of a legacy file written by write_vtk (tolerant of extra
// whitespace). The mesh comes back with derived boundary vertices and root
// genealogy.
struct VtkData {
  Mesh mesh;
  VtkFields fields;
};
VtkData read_vtk(std::istream& is);
VtkData read_vtk_file(const std::string& path);

}  // namespace viamr
