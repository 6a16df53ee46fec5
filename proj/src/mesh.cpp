#include "viamr/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace viamr {

namespace {

// Undirected edge key packed into 64 bits.
inline std::uint64_t ekey(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

inline double signed_area2(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                           const Eigen::Vector2d& p2) {
  return (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
}

}  // namespace

std::vector<int> derive_boundary_vertices(const std::vector<std::array<int, 3>>& cells) {
  std::unordered_map<std::uint64_t, int> edge_count;
  for (const auto& c : cells)
    for (int e = 0; e < 3; ++e) edge_count[ekey(c[e], c[(e + 1) % 3])]++;
  std::vector<int> bdry;
  for (const auto& [k, cnt] : edge_count) {
    if (cnt == 1) {
      bdry.push_back(static_cast<int>(k >> 32));
      bdry.push_back(static_cast<int>(k & 0xffffffffu));
    }
  }
  std::sort(bdry.begin(), bdry.end());
  bdry.erase(std::unique(bdry.begin(), bdry.end()), bdry.end());
  return bdry;
}

bool Mesh::is_boundary_vertex(int v) const {
  return std::binary_search(boundary_vertices.begin(), boundary_vertices.end(), v);
}

Mesh build_structured_square(int n, double lo, double hi) {
  if (n < 1) throw std::invalid_argument("build_structured_square: n must be >= 1");
  if (!(hi > lo)) throw std::invalid_argument("build_structured_square: need hi > lo");
  Mesh m;
  const double h = (hi - lo) / n;
  m.vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) m.vertices.emplace_back(lo + i * h, lo + j * h);
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  m.cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      // same diagonal in every quad: (i,j) -- (i+1,j+1)
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      m.cells.push_back({a, b, c});
      m.cells.push_back({a, c, d});
    }
  }
  m.genealogy.assign(m.cells.size(), CellGenealogy{});
  m.boundary_vertices = derive_boundary_vertices(m.cells);
  return m;
}

Adjacency build_adjacency(const Mesh& mesh) {
  Adjacency adj;
  adj.vertex_cells.assign(mesh.num_vertices(), {});
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (int v : mesh.cells[c]) adj.vertex_cells[v].push_back(c);
  // cell ids were pushed in increasing order, so lists are already sorted

  std::vector<std::pair<std::uint64_t, int>> inc;
  inc.reserve(3 * mesh.cells.size());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& t = mesh.cells[c];
    for (int e = 0; e < 3; ++e) inc.emplace_back(ekey(t[e], t[(e + 1) % 3]), c);
  }
  std::sort(inc.begin(), inc.end());
  for (std::size_t i = 0; i < inc.size();) {
    std::size_t j = i;
    while (j < inc.size() && inc[j].first == inc[i].first) ++j;
    if (j - i > 2)
      throw std::runtime_error("build_adjacency: edge with more than two incident cells");
    Adjacency::EdgeRec r;
    r.a = static_cast<int>(inc[i].first >> 32);
    r.b = static_cast<int>(inc[i].first & 0xffffffffu);
    r.c0 = inc[i].second;
    r.c1 = (j - i == 2) ? inc[i + 1].second : -1;
    adj.edges.push_back(r);
    i = j;
  }
  return adj;
}

const Adjacency::EdgeRec* Adjacency::find_edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(a, b),
                             [](const EdgeRec& r, const std::pair<int, int>& q) {
                               return std::make_pair(r.a, r.b) < q;
                             });
  if (it == edges.end() || it->a != a || it->b != b) return nullptr;
  return &*it;
}

const std::vector<int>& star(const Adjacency& adj, int vertex) {
  if (vertex < 0 || vertex >= static_cast<int>(adj.vertex_cells.size()))
    throw std::invalid_argument("star: vertex id out of range");
  return adj.vertex_cells[vertex];
}

std::array<int, 3> closure_vertices(const Mesh& mesh, int cell) {
  if (cell < 0 || cell >= mesh.num_cells())
    throw std::invalid_argument("closure_vertices: cell id out of range");
  std::array<int, 3> v = mesh.cells[cell];
  std::sort(v.begin(), v.end());
  return v;
}

double cell_area(const Mesh& mesh, int cell) {
  const auto& t = mesh.cells[cell];
  return 0.5 * signed_area2(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
}

double cell_diameter(const Mesh& mesh, int cell) {
  const auto& t = mesh.cells[cell];
  double d = 0.0;
  for (int e = 0; e < 3; ++e)
    d = std::max(d, (mesh.vertices[t[e]] - mesh.vertices[t[(e + 1) % 3]]).norm());
  return d;
}

Eigen::VectorXd vertex_avg_incident_diameter(const Mesh& mesh, const Adjacency& adj) {
  Eigen::VectorXd out(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const auto& cs = adj.vertex_cells[v];
    if (cs.empty()) throw std::runtime_error("vertex_avg_incident_diameter: isolated vertex");
    double s = 0.0;
    for (int c : cs) s += cell_diameter(mesh, c);
    out[v] = s / static_cast<double>(cs.size());
  }
  return out;
}

MeshQuality quality(const Mesh& mesh) {
  if (mesh.num_cells() == 0) throw std::invalid_argument("quality: empty mesh");
  MeshQuality q{180.0, 0.0, std::numeric_limits<double>::max()};
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& t = mesh.cells[c];
    const Eigen::Vector2d p[3] = {mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]};
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector2d u = p[(i + 1) % 3] - p[i];
      const Eigen::Vector2d w = p[(i + 2) % 3] - p[i];
      const double cosang = u.dot(w) / (u.norm() * w.norm());
      q.min_angle_deg =
          std::min(q.min_angle_deg, std::acos(std::clamp(cosang, -1.0, 1.0)) * 180.0 / M_PI);
    }
    q.max_diameter = std::max(q.max_diameter, cell_diameter(mesh, c));
    q.min_area = std::min(q.min_area, cell_area(mesh, c));
  }
  return q;
}

// ---------------------------------------------------------------------------
// refine_marked
//
// Phase A computes, as a fixed point, which cells of the current generation
// get red-refined. Green children are never split further: as soon as a green
// is marked or any of its edges is split, the pair is removed and its recorded
// parent triangle is restored and red-refined (reusing the old midpoint
// vertex, so the surrounding mesh stays compatible). Phase B emits children;
// cells left with exactly one split edge receive a green bisection. A corner
// child of a restored parent can face an already-refined old neighbor across
// one half of the restored long edge, in which case that child is emitted as
// a green pair directly.
// ---------------------------------------------------------------------------

namespace {

struct WCell {
  std::array<int, 3> v;
  ChildKind kind = ChildKind::Root;
  int src = -1;      // id in the input mesh, -1 for restored parents
  int sibling = -1;  // work index of green sibling
  std::array<int, 3> gparent = {-1, -1, -1};
  int gmid = -1;
  bool alive = true;
  bool red = false;
};

}  // namespace

Mesh refine_marked(const Mesh& mesh, const std::vector<std::uint8_t>& mask) {
  if (static_cast<int>(mask.size()) != mesh.num_cells())
    throw std::invalid_argument("refine_marked: mask size does not match cell count");

  std::vector<WCell> work;
  work.reserve(mesh.cells.size() + 16);
  for (int i = 0; i < mesh.num_cells(); ++i) {
    WCell w;
    w.v = mesh.cells[i];
    w.kind = mesh.genealogy[i].kind;
    w.src = i;
    w.sibling = mesh.genealogy[i].green_sibling;  // cell ids == work indices here
    w.gparent = mesh.genealogy[i].green_parent;
    w.gmid = mesh.genealogy[i].green_midpoint;
    work.push_back(w);
  }

  // Edge incidence over alive work cells (at most two per edge).
  std::unordered_map<std::uint64_t, std::pair<int, int>> inc;
  inc.reserve(3 * work.size());
  auto inc_add = [&](std::uint64_t k, int w) {
    auto [it, fresh] = inc.try_emplace(k, std::make_pair(w, -1));
    if (!fresh) {
      if (it->second.second != -1)
        throw std::runtime_error("refine_marked: non-manifold edge");
      it->second.second = w;
    }
  };
  auto inc_del = [&](std::uint64_t k, int w) {
    auto it = inc.find(k);
    if (it == inc.end()) return;
    if (it->second.first == w) it->second.first = it->second.second, it->second.second = -1;
    else if (it->second.second == w) it->second.second = -1;
    if (it->second.first == -1) inc.erase(it);
  };
  for (int i = 0; i < static_cast<int>(work.size()); ++i)
    for (int e = 0; e < 3; ++e) inc_add(ekey(work[i].v[e], work[i].v[(e + 1) % 3]), i);

  std::unordered_set<std::uint64_t> split;
  std::unordered_map<std::uint64_t, int> midv;  // edge -> midpoint vertex id
  std::deque<int> dirty;

  std::function<void(int)> make_red = [&](int i) {
    if (!work[i].alive || work[i].red) return;
    if (work[i].kind == ChildKind::Green) {
      // restore the parent triangle and red-refine it instead
      const int j = work[i].sibling;
      if (j < 0 || !work[j].alive)
        throw std::runtime_error("refine_marked: inconsistent green pair genealogy");
      const std::array<int, 3> gp = work[i].gparent;
      const int gm = work[i].gmid;
      for (WCell* g : {&work[i], &work[j]}) {
        g->alive = false;
        for (int e = 0; e < 3; ++e)
          inc_del(ekey(g->v[e], g->v[(e + 1) % 3]), static_cast<int>(g - work.data()));
      }
      WCell p;
      p.v = gp;
      p.kind = ChildKind::Root;
      p.src = -1;
      work.push_back(p);
      const int pi = static_cast<int>(work.size()) - 1;
      for (int e = 0; e < 3; ++e) inc_add(ekey(gp[e], gp[(e + 1) % 3]), pi);
      midv[ekey(gp[0], gp[1])] = gm;  // reuse the old hanging midpoint
      make_red(pi);
      return;
    }
    work[i].red = true;
    for (int e = 0; e < 3; ++e) {
      const std::uint64_t k = ekey(work[i].v[e], work[i].v[(e + 1) % 3]);
      if (split.insert(k).second) {
        auto it = inc.find(k);
        if (it != inc.end()) {
          if (it->second.first != -1 && it->second.first != i) dirty.push_back(it->second.first);
          if (it->second.second != -1 && it->second.second != i) dirty.push_back(it->second.second);
        }
      }
    }
  };

  for (int i = 0; i < mesh.num_cells(); ++i)
    if (mask[i]) make_red(i);

  while (!dirty.empty()) {
    const int i = dirty.front();
    dirty.pop_front();
    if (!work[i].alive || work[i].red) continue;
    int nsplit = 0;
    for (int e = 0; e < 3; ++e)
      if (split.count(ekey(work[i].v[e], work[i].v[(e + 1) % 3]))) ++nsplit;
    if (work[i].kind == ChildKind::Green) {
      if (nsplit >= 1) make_red(i);  // routes through the parent restore
    } else if (nsplit >= 2) {
      make_red(i);
    }
  }

  // ---- emission
  Mesh out;
  out.vertices = mesh.vertices;
  auto midpoint_of = [&](int a, int b) {
    const std::uint64_t k = ekey(a, b);
    auto it = midv.find(k);
    if (it != midv.end()) return it->second;
    out.vertices.emplace_back(0.5 * (out.vertices[a] + out.vertices[b]));
    const int id = static_cast<int>(out.vertices.size()) - 1;
    midv.emplace(k, id);
    return id;
  };
  // create split-edge midpoints in deterministic (work index, edge) order
  for (const auto& w : work) {
    if (!w.alive || !w.red) continue;
    for (int e = 0; e < 3; ++e) {
      const int a = w.v[e], b = w.v[(e + 1) % 3];
      if (split.count(ekey(a, b))) midpoint_of(a, b);
    }
  }

  auto push_cell = [&](const std::array<int, 3>& v, const CellGenealogy& g) {
    out.cells.push_back(v);
    out.genealogy.push_back(g);
    return static_cast<int>(out.cells.size()) - 1;
  };
  // Emit a pair of green children of triangle (a,b,c) with midpoint on (a,b).
  auto push_green_pair = [&](int a, int b, int c, int parent) {
    const int q = midv.at(ekey(a, b));
    CellGenealogy g;
    g.parent = parent;
    g.kind = ChildKind::Green;
    g.green_parent = {a, b, c};
    g.green_midpoint = q;
    const int i0 = push_cell({a, q, c}, g);
    const int i1 = push_cell({q, b, c}, g);
    out.genealogy[i0].green_sibling = i1;
    out.genealogy[i1].green_sibling = i0;
  };

  std::vector<int> old2new(mesh.num_cells(), -1);  // for copied cells only
  std::vector<std::pair<int, int>> green_fixups;   // (new cell id, old sibling cell id)

  for (const auto& w : work) {
    if (!w.alive) continue;
    if (w.red) {
      const int m01 = midv.at(ekey(w.v[0], w.v[1]));
      const int m12 = midv.at(ekey(w.v[1], w.v[2]));
      const int m20 = midv.at(ekey(w.v[2], w.v[0]));
      const std::array<std::array<int, 3>, 3> corner = {
          {{w.v[0], m01, m20}, {w.v[1], m12, m01}, {w.v[2], m20, m12}}};
      for (const auto& ch : corner) {
        // A corner child can face an already-refined old neighbor across one
        // of its two outer half-edges (restored parents only); green-bisect it
        // then. Both outer halves split is impossible for a conforming input.
        const bool s0 = split.count(ekey(ch[0], ch[1])) > 0;
        const bool s1 = split.count(ekey(ch[2], ch[0])) > 0;
        if (s0 && s1)
          throw std::runtime_error("refine_marked: conflicting splits on red child");
        if (s0) push_green_pair(ch[0], ch[1], ch[2], w.src);
        else if (s1) push_green_pair(ch[2], ch[0], ch[1], w.src);
        else push_cell(ch, CellGenealogy{w.src, ChildKind::Red, -1, {-1, -1, -1}, -1});
      }
      push_cell({m01, m12, m20}, CellGenealogy{w.src, ChildKind::Red, -1, {-1, -1, -1}, -1});
    } else {
      int se = -1;
      for (int e = 0; e < 3; ++e)
        if (split.count(ekey(w.v[e], w.v[(e + 1) % 3]))) se = e;
      if (se < 0) {
        // survivor: keep its genealogy (green bookkeeping fixed below)
        CellGenealogy g;
        g.parent = w.src;
        g.kind = w.kind;
        g.green_parent = w.gparent;
        g.green_midpoint = w.gmid;
        const int id = push_cell(w.v, g);
        old2new[w.src] = id;
        if (w.kind == ChildKind::Green) green_fixups.emplace_back(id, work[w.sibling].src);
      } else {
        push_green_pair(w.v[se], w.v[(se + 1) % 3], w.v[(se + 2) % 3], w.src);
      }
    }
  }
  for (const auto& [id, old_sib] : green_fixups) {
    const int ns = old2new[old_sib];
    if (ns < 0) throw std::runtime_error("refine_marked: green sibling lost");
    out.genealogy[id].green_sibling = ns;
  }

  out.boundary_vertices = derive_boundary_vertices(out.cells);
  return out;
}

Mesh uniform_refine(const Mesh& mesh) {
  return refine_marked(mesh, std::vector<std::uint8_t>(mesh.cells.size(), 1));
}

int count_hanging_nodes(const Mesh& mesh) {
  // A vertex m hangs on edge (a,b) when some cell has the full edge (a,b)
  // while the other side was split into (a,m),(m,b). Detect via the edge
  // census plus an exact position lookup of edge midpoints.
  std::unordered_map<std::uint64_t, int> edge_count;
  for (const auto& c : mesh.cells)
    for (int e = 0; e < 3; ++e) edge_count[ekey(c[e], c[(e + 1) % 3])]++;

  auto pos_key = [](const Eigen::Vector2d& p) {
    std::uint64_t hx, hy;
    const double x = p.x(), y = p.y();
    std::memcpy(&hx, &x, 8);
    std::memcpy(&hy, &y, 8);
    return hx * 1000003u ^ hy;
  };
  std::unordered_map<std::uint64_t, std::vector<int>> at;
  for (int v = 0; v < mesh.num_vertices(); ++v) at[pos_key(mesh.vertices[v])].push_back(v);

  int hanging = 0;
  for (const auto& [k, cnt] : edge_count) {
    if (cnt != 1) continue;
    const int a = static_cast<int>(k >> 32), b = static_cast<int>(k & 0xffffffffu);
    const Eigen::Vector2d mid = 0.5 * (mesh.vertices[a] + mesh.vertices[b]);
    auto it = at.find(pos_key(mid));
    if (it == at.end()) continue;
    for (int m : it->second) {
      if (m == a || m == b || mesh.vertices[m] != mid) continue;
      if (edge_count.count(ekey(a, m)) && edge_count.count(ekey(m, b))) ++hanging;
    }
  }
  return hanging;
}

void validate(const Mesh& mesh) {
  auto fail = [](const std::string& msg) { throw std::runtime_error("mesh validate: " + msg); };
  if (mesh.genealogy.size() != mesh.cells.size()) fail("genealogy size mismatch");
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& t = mesh.cells[c];
    for (int v : t)
      if (v < 0 || v >= mesh.num_vertices()) fail("vertex id out of range in cell " + std::to_string(c));
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) fail("repeated vertex in cell " + std::to_string(c));
    if (signed_area2(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]) <= 0.0)
      fail("non-positive area (orientation) in cell " + std::to_string(c));
    const auto& g = mesh.genealogy[c];
    if (g.kind == ChildKind::Green) {
      if (g.green_sibling < 0 || g.green_sibling >= mesh.num_cells())
        fail("green sibling out of range in cell " + std::to_string(c));
      if (mesh.genealogy[g.green_sibling].green_sibling != c)
        fail("green sibling not symmetric at cell " + std::to_string(c));
      const auto& gp = g.green_parent;
      const Eigen::Vector2d mid = 0.5 * (mesh.vertices[gp[0]] + mesh.vertices[gp[1]]);
      if ((mesh.vertices[g.green_midpoint] - mid).norm() > 1e-12)
        fail("green midpoint not on parent edge at cell " + std::to_string(c));
    }
  }
  if (derive_boundary_vertices(mesh.cells) != mesh.boundary_vertices)
    fail("boundary vertex set does not match edge census");
  if (count_hanging_nodes(mesh) != 0) fail("hanging nodes present");
}

}  // namespace viamr
