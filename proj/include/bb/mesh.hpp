#ifndef BB_MESH_HPP
#define BB_MESH_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace bb {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class BoundarySegment { left, right, bottom, top };

BoundarySegment boundary_segment_from_name(const std::string& name);

/// Triangulation of the unit square. Entities are immutable after
/// construction; incidence and geometry are precomputed.
struct TriMesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> cells; // counter-clockwise vertex ids

  // Edges as sorted vertex pairs, lexicographically ordered.
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> cell_edges;   // per cell, edge ids of (v0,v1),(v1,v2),(v2,v0)
  std::vector<std::array<int, 2>> edge_cells;   // incident cells, lower id first; -1 when boundary
  std::vector<bool> edge_on_boundary;
  std::vector<bool> vertex_on_boundary;
  std::vector<double> edge_length;
  std::vector<Point> edge_normal; // unit; interior: lower-id cell -> higher-id cell; boundary: outward
  std::vector<double> cell_area;
  std::vector<double> cell_diameter;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }

  /// Edges whose both endpoints lie on the given side of the unit square.
  std::vector<int> boundary_edges_on(BoundarySegment seg) const;

  /// Plain-text dump (vertex and cell lists) for debugging.
  std::string dump_off() const;
};

/// n x n squares, each split by the diagonal from (i/n, j/n) to
/// ((i+1)/n, (j+1)/n); 2n^2 cells.
TriMesh unit_square_mesh(int n);

struct RefinementMaps {
  std::vector<std::array<int, 4>> cell_children;
  std::vector<std::array<int, 2>> edge_children;    // halves of each parent edge
  std::vector<std::array<int, 3>> cell_inner_edges; // edges of the middle child
};

TriMesh uniform_refine(const TriMesh& coarse, RefinementMaps* maps = nullptr);

/// Nested meshes, coarse to fine.
struct MeshHierarchy {
  std::vector<TriMesh> levels;
  std::vector<RefinementMaps> maps; // maps[l] refines levels[l] into levels[l+1]

  int n_levels() const { return static_cast<int>(levels.size()); }
  const TriMesh& finest() const { return levels.back(); }
};

MeshHierarchy build_hierarchy(const TriMesh& coarse, int n_levels);

struct VertexPatch {
  int vertex = -1;
  std::vector<int> cells;
  std::vector<int> edges;
};

/// One patch per vertex: all cells and edges containing it, ordered by id.
std::vector<VertexPatch> vertex_star_patches(const TriMesh& mesh);

} // namespace bb

#endif
