#include "viamr/vtk.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace viamr {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void write_scalars(std::ostream& os, const std::vector<std::pair<std::string, Vector>>& fields,
                   const char* section, Eigen::Index expected) {
  if (fields.empty()) return;
  os << section << " " << expected << "\n";
  for (const auto& [name, values] : fields) {
    if (values.size() != expected)
      throw std::invalid_argument("write_vtk: field '" + name + "' has the wrong length");
    if (name.find_first_of(" \t\n") != std::string::npos)
      throw std::invalid_argument("write_vtk: field name '" + name + "' contains whitespace");
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (Eigen::Index i = 0; i < values.size(); ++i) os << fmt(values[i]) << "\n";
  }
}

}  // namespace

void write_vtk(std::ostream& os, const Mesh& mesh, const VtkFields& fields) {
  os << "# vtk DataFile Version 2.0\n";
  os << "triangle mesh with scalar fields\n";
  os << "ASCII\n";
  os << "DATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.num_vertices() << " double\n";
  for (const auto& p : mesh.vertices)
    os << fmt(p.x()) << " " << fmt(p.y()) << " " << fmt(0.0) << "\n";
  os << "CELLS " << mesh.num_cells() << " " << 4 * mesh.num_cells() << "\n";
  for (const auto& c : mesh.cells) os << "3 " << c[0] << " " << c[1] << " " << c[2] << "\n";
  os << "CELL_TYPES " << mesh.num_cells() << "\n";
  for (int c = 0; c < mesh.num_cells(); ++c) os << "5\n";
  write_scalars(os, fields.point_data, "POINT_DATA", mesh.num_vertices());
  write_scalars(os, fields.cell_data, "CELL_DATA", mesh.num_cells());
  if (!os) throw std::runtime_error("write_vtk: stream failure");
}

void write_vtk_file(const std::string& path, const Mesh& mesh, const VtkFields& fields) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_vtk_file: cannot open " + path);
  write_vtk(os, mesh, fields);
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::runtime_error("read_vtk: " + what); }

std::string next_token(std::istream& is) {
  std::string tok;
  if (!(is >> tok)) bad("unexpected end of file");
  return tok;
}

void expect(std::istream& is, const std::string& want) {
  const std::string got = next_token(is);
  if (got != want) bad("expected '" + want + "', found '" + got + "'");
}

double next_double(std::istream& is) {
  double v;
  if (!(is >> v)) bad("malformed number");
  return v;
}

int next_int(std::istream& is) {
  int v;
  if (!(is >> v)) bad("malformed integer");
  return v;
}

// SCALARS blocks under a POINT_DATA / CELL_DATA section.
void read_scalars(std::istream& is, std::string& pending,
                  std::vector<std::pair<std::string, Vector>>& out, int count) {
  while (true) {
    if (!(is >> pending)) {
      pending.clear();
      return;
    }
    if (pending != "SCALARS") return;  // start of the next section
    const std::string name = next_token(is);
    const std::string type = next_token(is);
    if (type != "double" && type != "float") bad("unsupported scalar type " + type);
    int comps = 1;
    // the component count is optional in the legacy format
    std::string maybe = next_token(is);
    if (maybe != "LOOKUP_TABLE") {
      comps = std::stoi(maybe);
      expect(is, "LOOKUP_TABLE");
    }
    if (comps != 1) bad("only single-component scalars are supported");
    next_token(is);  // table name
    Vector values(count);
    for (int i = 0; i < count; ++i) values[i] = next_double(is);
    out.emplace_back(name, std::move(values));
  }
}

}  // namespace

VtkData read_vtk(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# vtk DataFile", 0) != 0) bad("missing header");
  if (!std::getline(is, line)) bad("missing title");
  expect(is, "ASCII");
  expect(is, "DATASET");
  expect(is, "UNSTRUCTURED_GRID");

  VtkData data;
  expect(is, "POINTS");
  const int nv = next_int(is);
  next_token(is);  // number type
  if (nv < 0) bad("negative point count");
  data.mesh.vertices.reserve(nv);
  for (int v = 0; v < nv; ++v) {
    const double x = next_double(is), y = next_double(is);
    next_double(is);  // flat z
    data.mesh.vertices.emplace_back(x, y);
  }

  expect(is, "CELLS");
  const int nc = next_int(is);
  next_int(is);  // total index count
  if (nc < 0) bad("negative cell count");
  data.mesh.cells.reserve(nc);
  for (int c = 0; c < nc; ++c) {
    if (next_int(is) != 3) bad("only triangles are supported");
    std::array<int, 3> t;
    for (int k = 0; k < 3; ++k) {
      t[k] = next_int(is);
      if (t[k] < 0 || t[k] >= nv) bad("cell vertex id out of range");
    }
    data.mesh.cells.push_back(t);
  }

  expect(is, "CELL_TYPES");
  if (next_int(is) != nc) bad("cell type count mismatch");
  for (int c = 0; c < nc; ++c)
    if (next_int(is) != 5) bad("only triangle cells (type 5) are supported");

  data.mesh.boundary_vertices = derive_boundary_vertices(data.mesh.cells);
  data.mesh.genealogy.assign(data.mesh.cells.size(), CellGenealogy{});

  std::string section;
  is >> section;
  std::string pending;
  while (!section.empty()) {
    if (section == "POINT_DATA") {
      if (next_int(is) != nv) bad("point data count mismatch");
      read_scalars(is, pending, data.fields.point_data, nv);
    } else if (section == "CELL_DATA") {
      if (next_int(is) != nc) bad("cell data count mismatch");
      read_scalars(is, pending, data.fields.cell_data, nc);
    } else {
      bad("unexpected section '" + section + "'");
    }
    section = pending;
    pending.clear();
  }
  return data;
}

VtkData read_vtk_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_vtk_file: cannot open " + path);
  return read_vtk(is);
}

}  // namespace viamr
