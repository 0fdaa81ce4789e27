#include "bb/spaces.hpp"

#include <cmath>

#include "bb/dense.hpp"
#include "bb/quadrature.hpp"

namespace bb {

namespace {

// Moment of an analytic field against s^m on edge e, normalized
// parameterization from the lower vertex id.
double edge_moment(const TriMesh& mesh, int e, int m, const VectorField& field)
{
  const Point& a = mesh.vertices[mesh.edges[e][0]];
  const Point& b = mesh.vertices[mesh.edges[e][1]];
  const Point& n = mesh.edge_normal[e];
  const auto rule = gauss_legendre_01(5);
  double acc = 0.0;
  for (const auto& q : rule) {
    const double x = a.x + q.x * (b.x - a.x);
    const double y = a.y + q.x * (b.y - a.y);
    const auto v = field(x, y);
    const double vn = v[0] * n.x + v[1] * n.y;
    acc += q.w * vn * (m == 0 ? 1.0 : q.x);
  }
  return acc;
}

} // namespace

Bdm1Space::Bdm1Space(const TriMesh& mesh) : mesh_(&mesh)
{
  const int nc = mesh.n_cells();
  cell_dofs_.resize(nc);
  basis_coeffs_.resize(nc);
  cell_center_.resize(nc);

  const auto rule = gauss_legendre_01(3);
  for (int c = 0; c < nc; ++c) {
    const auto& v = mesh.cells[c];
    const Point p0 = mesh.vertices[v[0]], p1 = mesh.vertices[v[1]], p2 = mesh.vertices[v[2]];
    const Point center{(p0.x + p1.x + p2.x) / 3.0, (p0.y + p1.y + p2.y) / 3.0};
    cell_center_[c] = center;

    for (int k = 0; k < 3; ++k) {
      const int e = mesh.cell_edges[c][k];
      cell_dofs_[c][2 * k] = 2 * e;
      cell_dofs_[c][2 * k + 1] = 2 * e + 1;
    }

    // Dof functionals applied to the centered monomial basis.
    DenseMatrix vand(6, 6);
    for (int k = 0; k < 3; ++k) {
      const int e = mesh.cell_edges[c][k];
      const Point& a = mesh.vertices[mesh.edges[e][0]];
      const Point& b = mesh.vertices[mesh.edges[e][1]];
      const Point& n = mesh.edge_normal[e];
      for (const auto& q : rule) {
        const double x = a.x + q.x * (b.x - a.x);
        const double y = a.y + q.x * (b.y - a.y);
        const double xi = x - center.x, eta = y - center.y;
        // Normal traces of the six monomials.
        const double mono_n[6] = {n.x, n.y, xi * n.x, xi * n.y, eta * n.x, eta * n.y};
        for (int j = 0; j < 6; ++j) {
          vand(2 * k, j) += q.w * mono_n[j];
          vand(2 * k + 1, j) += q.w * q.x * mono_n[j];
        }
      }
    }
    const DenseMatrix coeff = lu_solve(vand, DenseMatrix::identity(6));
    for (int j = 0; j < 6; ++j)
      for (int i = 0; i < 6; ++i)
        basis_coeffs_[c][6 * i + j] = coeff(j, i); // column i = basis i
  }
}

std::array<double, 2> Bdm1Space::eval_basis(int cell, int i, double x, double y) const
{
  const double* cc = &basis_coeffs_[cell][6 * i];
  const double xi = x - cell_center_[cell].x;
  const double eta = y - cell_center_[cell].y;
  return {cc[0] + cc[2] * xi + cc[4] * eta, cc[1] + cc[3] * xi + cc[5] * eta};
}

std::array<double, 4> Bdm1Space::basis_gradient(int cell, int i) const
{
  const double* cc = &basis_coeffs_[cell][6 * i];
  return {cc[2], cc[4], cc[3], cc[5]};
}

double Bdm1Space::basis_divergence(int cell, int i) const
{
  const double* cc = &basis_coeffs_[cell][6 * i];
  return cc[2] + cc[5];
}

std::array<double, 2> Bdm1Space::eval_function(int cell, const Vector& coeffs, double x,
                                               double y) const
{
  std::array<double, 2> out{0.0, 0.0};
  for (int i = 0; i < 6; ++i) {
    const double u = coeffs[cell_dofs_[cell][i]];
    const auto phi = eval_basis(cell, i, x, y);
    out[0] += u * phi[0];
    out[1] += u * phi[1];
  }
  return out;
}

std::array<double, 4> Bdm1Space::function_gradient(int cell, const Vector& coeffs) const
{
  std::array<double, 4> g{0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < 6; ++i) {
    const double u = coeffs[cell_dofs_[cell][i]];
    const auto gi = basis_gradient(cell, i);
    for (int k = 0; k < 4; ++k)
      g[k] += u * gi[k];
  }
  return g;
}

double Bdm1Space::function_divergence(int cell, const Vector& coeffs) const
{
  double d = 0.0;
  for (int i = 0; i < 6; ++i)
    d += coeffs[cell_dofs_[cell][i]] * basis_divergence(cell, i);
  return d;
}

Vector Bdm1Space::interpolate(const VectorField& field) const
{
  Vector coeffs(dim(), 0.0);
  for (int e = 0; e < mesh_->n_edges(); ++e) {
    coeffs[2 * e] = edge_moment(*mesh_, e, 0, field);
    coeffs[2 * e + 1] = edge_moment(*mesh_, e, 1, field);
  }
  return coeffs;
}

std::vector<int> Bdm1Space::boundary_dofs(const std::set<BoundarySegment>& segments) const
{
  std::vector<int> dofs;
  for (const auto seg : segments)
    for (int e : mesh_->boundary_edges_on(seg)) {
      dofs.push_back(2 * e);
      dofs.push_back(2 * e + 1);
    }
  std::sort(dofs.begin(), dofs.end());
  dofs.erase(std::unique(dofs.begin(), dofs.end()), dofs.end());
  return dofs;
}

Vector P0Space::interpolate_cell_averages(const ScalarField& field, int quad_degree) const
{
  const auto rule = triangle_rule(quad_degree);
  Vector avg(dim(), 0.0);
  for (int c = 0; c < mesh_->n_cells(); ++c) {
    const auto& v = mesh_->cells[c];
    const Point p0 = mesh_->vertices[v[0]], p1 = mesh_->vertices[v[1]], p2 = mesh_->vertices[v[2]];
    double acc = 0.0;
    for (const auto& q : rule) {
      const double x = p0.x + q.x * (p1.x - p0.x) + q.y * (p2.x - p0.x);
      const double y = p0.y + q.x * (p1.y - p0.y) + q.y * (p2.y - p0.y);
      acc += q.w * field(x, y);
    }
    avg[c] = 2.0 * acc; // reference weights sum to 1/2
  }
  return avg;
}

} // namespace bb
