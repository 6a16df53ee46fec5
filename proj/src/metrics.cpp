#include "viamr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace viamr {

std::vector<std::uint8_t> active_cells(const Mesh& mesh, const Vector& s0) {
  if (s0.size() != mesh.num_vertices())
    throw std::invalid_argument("active_cells: indicator size mismatch");
  std::vector<std::uint8_t> mask(mesh.cells.size(), 0);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& t = mesh.cells[c];
    mask[static_cast<std::size_t>(c)] =
        (s0[t[0]] == 1.0 && s0[t[1]] == 1.0 && s0[t[2]] == 1.0) ? 1 : 0;
  }
  return mask;
}

FreeBoundary extract_free_boundary(const Mesh& mesh, const Adjacency& adj,
                                   const std::vector<std::uint8_t>& active,
                                   int samples_per_edge) {
  if (active.size() != mesh.cells.size())
    throw std::invalid_argument("extract_free_boundary: mask size mismatch");
  if (samples_per_edge < 2)
    throw std::invalid_argument("extract_free_boundary: need at least 2 samples per edge");

  FreeBoundary fb;
  fb.empty = std::none_of(active.begin(), active.end(), [](std::uint8_t v) { return v != 0; });
  if (fb.empty) return fb;

  for (const auto& e : adj.edges) {
    if (e.c1 < 0) continue;  // domain boundary: not part of the free boundary
    if (active[static_cast<std::size_t>(e.c0)] == active[static_cast<std::size_t>(e.c1)])
      continue;
    const Eigen::Vector2d& pa = mesh.vertices[e.a];
    const Eigen::Vector2d& pb = mesh.vertices[e.b];
    for (int j = 0; j < samples_per_edge; ++j) {
      const double t = static_cast<double>(j) / (samples_per_edge - 1);
      fb.points.push_back((1.0 - t) * pa + t * pb);
    }
  }
  return fb;
}

double jaccard(const Mesh& mesh, const std::vector<std::uint8_t>& active,
               const std::function<bool(double, double)>& exact_region, int k) {
  if (active.size() != mesh.cells.size())
    throw std::invalid_argument("jaccard: mask size mismatch");
  if (k < 1) throw std::invalid_argument("jaccard: subdivision order must be positive");

  double inter = 0.0, uni = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& t = mesh.cells[c];
    const Eigen::Vector2d v0 = mesh.vertices[t[0]];
    const Eigen::Vector2d e1 = mesh.vertices[t[1]] - v0;
    const Eigen::Vector2d e2 = mesh.vertices[t[2]] - v0;
    const double sub_area = cell_area(mesh, c) / (k * k);
    const bool in_a = active[static_cast<std::size_t>(c)] != 0;

    // centroids of the lattice subdivision: upward (i+1/3, j+1/3)/k for
    // i+j <= k-1, downward (i+2/3, j+2/3)/k for i+j <= k-2
    for (int pass = 0; pass < 2; ++pass) {
      const double off = pass == 0 ? 1.0 / 3.0 : 2.0 / 3.0;
      const int rows = pass == 0 ? k : k - 1;
      for (int i = 0; i < rows; ++i) {
        for (int j = 0; i + j < rows; ++j) {
          const double l1 = (i + off) / k, l2 = (j + off) / k;
          const Eigen::Vector2d p = v0 + l1 * e1 + l2 * e2;
          const bool in_b = exact_region(p.x(), p.y());
          if (in_a && in_b) inter += sub_area;
          if (in_a || in_b) uni += sub_area;
        }
      }
    }
  }
  return uni == 0.0 ? 1.0 : inter / uni;
}

namespace {

double directed_hausdorff(const std::vector<Eigen::Vector2d>& a,
                          const std::vector<Eigen::Vector2d>& b) {
  double worst = 0.0;
  for (const auto& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : b) best = std::min(best, (p - q).squaredNorm());
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

}  // namespace

double hausdorff(const std::vector<Eigen::Vector2d>& a, const std::vector<Eigen::Vector2d>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff: empty point set");
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

namespace {

struct CentroidRec {
  double x, y;
  int cell;
};

// Assign parts [part_lo, part_hi) to cells[lo, hi); boundaries[p] is the
// global number of cells owned by parts 0..p-1, which pins every leaf to
// floor or ceil of the proportional share.
void rcb_recurse(std::vector<CentroidRec>& cells, int lo, int hi, int part_lo, int part_hi,
                 const std::vector<int>& boundaries, std::vector<int>& out) {
  if (part_hi - part_lo == 1) {
    for (int i = lo; i < hi; ++i) out[cells[static_cast<std::size_t>(i)].cell] = part_lo;
    return;
  }
  const int part_mid = part_lo + (part_hi - part_lo) / 2;
  const int n_left = boundaries[part_mid] - boundaries[part_lo];

  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for (int i = lo; i < hi; ++i) {
    const auto& c = cells[static_cast<std::size_t>(i)];
    min_x = std::min(min_x, c.x);
    max_x = std::max(max_x, c.x);
    min_y = std::min(min_y, c.y);
    max_y = std::max(max_y, c.y);
  }
  const bool split_x = (max_x - min_x) >= (max_y - min_y);
  std::sort(cells.begin() + lo, cells.begin() + hi,
            [split_x](const CentroidRec& a, const CentroidRec& b) {
              const double ka = split_x ? a.x : a.y, kb = split_x ? b.x : b.y;
              if (ka != kb) return ka < kb;
              return a.cell < b.cell;
            });
  rcb_recurse(cells, lo, lo + n_left, part_lo, part_mid, boundaries, out);
  rcb_recurse(cells, lo + n_left, hi, part_mid, part_hi, boundaries, out);
}

}  // namespace

std::vector<int> rcb_partition(const Mesh& mesh, int parts) {
  const int n = mesh.num_cells();
  if (parts < 1) throw std::invalid_argument("rcb_partition: need at least one part");
  if (parts > n) throw std::invalid_argument("rcb_partition: more parts than cells");

  std::vector<CentroidRec> recs(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    const auto& t = mesh.cells[c];
    const Eigen::Vector2d p =
        (mesh.vertices[t[0]] + mesh.vertices[t[1]] + mesh.vertices[t[2]]) / 3.0;
    recs[static_cast<std::size_t>(c)] = CentroidRec{p.x(), p.y(), c};
  }

  std::vector<int> boundaries(static_cast<std::size_t>(parts) + 1);
  for (int p = 0; p <= parts; ++p)
    boundaries[static_cast<std::size_t>(p)] =
        static_cast<int>((static_cast<long long>(n) * p) / parts);

  std::vector<int> out(static_cast<std::size_t>(n), -1);
  rcb_recurse(recs, 0, n, 0, parts, boundaries, out);
  return out;
}

std::vector<double> partition_ratios(const std::vector<int>& part_of_cell,
                                     const std::vector<std::uint8_t>& subset, int parts) {
  if (part_of_cell.size() != subset.size())
    throw std::invalid_argument("partition_ratios: size mismatch");
  if (parts < 1) throw std::invalid_argument("partition_ratios: need at least one part");
  std::vector<long long> counts(static_cast<std::size_t>(parts), 0);
  long long total = 0;
  for (std::size_t c = 0; c < subset.size(); ++c) {
    if (!subset[c]) continue;
    const int p = part_of_cell[c];
    if (p < 0 || p >= parts) throw std::invalid_argument("partition_ratios: part id out of range");
    ++counts[static_cast<std::size_t>(p)];
    ++total;
  }
  std::vector<double> ratios(static_cast<std::size_t>(parts), 0.0);
  if (total > 0)
    for (int p = 0; p < parts; ++p)
      ratios[static_cast<std::size_t>(p)] =
          static_cast<double>(counts[static_cast<std::size_t>(p)]) / static_cast<double>(total);
  return ratios;
}

}  // namespace viamr
