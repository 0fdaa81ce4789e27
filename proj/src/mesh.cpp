#include "bb/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace bb {

BoundarySegment boundary_segment_from_name(const std::string& name)
{
  if (name == "left")
    return BoundarySegment::left;
  if (name == "right")
    return BoundarySegment::right;
  if (name == "bottom")
    return BoundarySegment::bottom;
  if (name == "top")
    return BoundarySegment::top;
  throw std::invalid_argument("unknown boundary segment: " + name);
}

namespace {

bool on_segment(const Point& p, BoundarySegment seg)
{
  const double tol = 1e-12;
  switch (seg) {
  case BoundarySegment::left:
    return std::abs(p.x) < tol;
  case BoundarySegment::right:
    return std::abs(p.x - 1.0) < tol;
  case BoundarySegment::bottom:
    return std::abs(p.y) < tol;
  case BoundarySegment::top:
    return std::abs(p.y - 1.0) < tol;
  }
  return false;
}

// Fill edges, incidence and geometry from vertices + cells.
void finalize(TriMesh& m)
{
  const int n_cells = m.n_cells();
  std::map<std::array<int, 2>, int> edge_ids;
  m.cell_edges.assign(n_cells, {-1, -1, -1});

  // First pass: collect unique sorted vertex pairs in lexicographic order.
  for (const auto& cell : m.cells)
    for (int k = 0; k < 3; ++k) {
      int a = cell[k], b = cell[(k + 1) % 3];
      if (a > b)
        std::swap(a, b);
      edge_ids.insert({{a, b}, -1});
    }
  m.edges.clear();
  m.edges.reserve(edge_ids.size());
  for (auto& [key, id] : edge_ids) {
    id = static_cast<int>(m.edges.size());
    m.edges.push_back(key);
  }

  const int n_edges = m.n_edges();
  m.edge_cells.assign(n_edges, {-1, -1});
  for (int c = 0; c < n_cells; ++c)
    for (int k = 0; k < 3; ++k) {
      int a = m.cells[c][k], b = m.cells[c][(k + 1) % 3];
      if (a > b)
        std::swap(a, b);
      const int e = edge_ids.at({a, b});
      m.cell_edges[c][k] = e;
      if (m.edge_cells[e][0] < 0)
        m.edge_cells[e][0] = c;
      else if (m.edge_cells[e][1] < 0)
        m.edge_cells[e][1] = c;
      else
        throw std::runtime_error("edge incident to more than two cells");
    }
  for (auto& ec : m.edge_cells)
    if (ec[1] >= 0 && ec[0] > ec[1])
      std::swap(ec[0], ec[1]);

  m.edge_on_boundary.assign(n_edges, false);
  m.vertex_on_boundary.assign(m.n_vertices(), false);
  m.edge_length.assign(n_edges, 0.0);
  m.edge_normal.assign(n_edges, Point{});
  for (int e = 0; e < n_edges; ++e) {
    const Point& pa = m.vertices[m.edges[e][0]];
    const Point& pb = m.vertices[m.edges[e][1]];
    const double dx = pb.x - pa.x, dy = pb.y - pa.y;
    m.edge_length[e] = std::hypot(dx, dy);
    m.edge_on_boundary[e] = m.edge_cells[e][1] < 0;
    if (m.edge_on_boundary[e]) {
      m.vertex_on_boundary[m.edges[e][0]] = true;
      m.vertex_on_boundary[m.edges[e][1]] = true;
    }
    // Candidate normal: tangent rotated by -90 degrees.
    Point n{dy / m.edge_length[e], -dx / m.edge_length[e]};
    const int c0 = m.edge_cells[e][0];
    // Orient away from the lower-id cell (outward for boundary edges).
    const auto& cv = m.cells[c0];
    Point centroid{(m.vertices[cv[0]].x + m.vertices[cv[1]].x + m.vertices[cv[2]].x) / 3.0,
                   (m.vertices[cv[0]].y + m.vertices[cv[1]].y + m.vertices[cv[2]].y) / 3.0};
    Point mid{0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)};
    if ((mid.x - centroid.x) * n.x + (mid.y - centroid.y) * n.y < 0.0) {
      n.x = -n.x;
      n.y = -n.y;
    }
    m.edge_normal[e] = n;
  }

  m.cell_area.assign(n_cells, 0.0);
  m.cell_diameter.assign(n_cells, 0.0);
  for (int c = 0; c < n_cells; ++c) {
    const Point& p0 = m.vertices[m.cells[c][0]];
    const Point& p1 = m.vertices[m.cells[c][1]];
    const Point& p2 = m.vertices[m.cells[c][2]];
    const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
    if (det <= 0.0)
      throw std::runtime_error("cell with non-positive area");
    m.cell_area[c] = 0.5 * det;
    for (int k = 0; k < 3; ++k)
      m.cell_diameter[c] = std::max(m.cell_diameter[c], m.edge_length[m.cell_edges[c][k]]);
  }
}

} // namespace

std::vector<int> TriMesh::boundary_edges_on(BoundarySegment seg) const
{
  std::vector<int> out;
  for (int e = 0; e < n_edges(); ++e) {
    if (!edge_on_boundary[e])
      continue;
    if (on_segment(vertices[edges[e][0]], seg) && on_segment(vertices[edges[e][1]], seg))
      out.push_back(e);
  }
  return out;
}

std::string TriMesh::dump_off() const
{
  std::ostringstream os;
  os << "OFF\n" << n_vertices() << " " << n_cells() << " " << n_edges() << "\n";
  os.precision(17);
  for (const auto& p : vertices)
    os << p.x << " " << p.y << " 0\n";
  for (const auto& c : cells)
    os << "3 " << c[0] << " " << c[1] << " " << c[2] << "\n";
  return os.str();
}

TriMesh unit_square_mesh(int n)
{
  if (n < 1)
    throw std::invalid_argument("unit_square_mesh: n must be >= 1");
  TriMesh m;
  const double h = 1.0 / n;
  m.vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      m.vertices.push_back({i * h, j * h});
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  m.cells.reserve(static_cast<std::size_t>(2) * n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      // Diagonal runs from (i,j) to (i+1,j+1).
      m.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      m.cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  finalize(m);
  return m;
}

TriMesh uniform_refine(const TriMesh& coarse, RefinementMaps* maps)
{
  TriMesh fine;
  fine.vertices = coarse.vertices;
  const int nv = coarse.n_vertices();
  // Midpoint vertex of coarse edge e gets id nv + e.
  fine.vertices.reserve(nv + coarse.n_edges());
  for (const auto& e : coarse.edges) {
    const Point& a = coarse.vertices[e[0]];
    const Point& b = coarse.vertices[e[1]];
    fine.vertices.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
  }

  fine.cells.reserve(4 * coarse.n_cells());
  if (maps)
    maps->cell_children.assign(coarse.n_cells(), {-1, -1, -1, -1});
  for (int c = 0; c < coarse.n_cells(); ++c) {
    const auto& v = coarse.cells[c];
    const int m01 = nv + coarse.cell_edges[c][0];
    const int m12 = nv + coarse.cell_edges[c][1];
    const int m20 = nv + coarse.cell_edges[c][2];
    const int base = fine.n_cells();
    fine.cells.push_back({v[0], m01, m20});
    fine.cells.push_back({m01, v[1], m12});
    fine.cells.push_back({m20, m12, v[2]});
    fine.cells.push_back({m01, m12, m20});
    if (maps)
      maps->cell_children[c] = {base, base + 1, base + 2, base + 3};
  }
  finalize(fine);

  if (maps) {
    auto find_edge = [&fine](int a, int b) {
      if (a > b)
        std::swap(a, b);
      const auto it =
          std::lower_bound(fine.edges.begin(), fine.edges.end(), std::array<int, 2>{a, b});
      if (it == fine.edges.end() || (*it)[0] != a || (*it)[1] != b)
        throw std::runtime_error("uniform_refine: child edge not found");
      return static_cast<int>(it - fine.edges.begin());
    };
    maps->edge_children.assign(coarse.n_edges(), {-1, -1});
    for (int e = 0; e < coarse.n_edges(); ++e) {
      const int mid = nv + e;
      maps->edge_children[e] = {find_edge(coarse.edges[e][0], mid),
                                find_edge(mid, coarse.edges[e][1])};
    }
    maps->cell_inner_edges.assign(coarse.n_cells(), {-1, -1, -1});
    for (int c = 0; c < coarse.n_cells(); ++c) {
      const int m01 = nv + coarse.cell_edges[c][0];
      const int m12 = nv + coarse.cell_edges[c][1];
      const int m20 = nv + coarse.cell_edges[c][2];
      maps->cell_inner_edges[c] = {find_edge(m01, m12), find_edge(m12, m20), find_edge(m20, m01)};
    }
  }
  return fine;
}

MeshHierarchy build_hierarchy(const TriMesh& coarse, int n_levels)
{
  if (n_levels < 1)
    throw std::invalid_argument("build_hierarchy: need at least one level");
  MeshHierarchy h;
  h.levels.push_back(coarse);
  for (int l = 1; l < n_levels; ++l) {
    RefinementMaps maps;
    h.levels.push_back(uniform_refine(h.levels.back(), &maps));
    h.maps.push_back(std::move(maps));
  }
  return h;
}

std::vector<VertexPatch> vertex_star_patches(const TriMesh& mesh)
{
  std::vector<VertexPatch> patches(mesh.n_vertices());
  for (int v = 0; v < mesh.n_vertices(); ++v)
    patches[v].vertex = v;
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (int k = 0; k < 3; ++k)
      patches[mesh.cells[c][k]].cells.push_back(c);
  for (int e = 0; e < mesh.n_edges(); ++e) {
    patches[mesh.edges[e][0]].edges.push_back(e);
    patches[mesh.edges[e][1]].edges.push_back(e);
  }
  for (auto& p : patches) {
    std::sort(p.cells.begin(), p.cells.end());
    std::sort(p.edges.begin(), p.edges.end());
  }
  return patches;
}

} // namespace bb
