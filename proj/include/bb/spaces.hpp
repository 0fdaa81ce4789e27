#ifndef BB_SPACES_HPP
#define BB_SPACES_HPP

#include <array>
#include <functional>
#include <set>
#include <vector>

#include "bb/mesh.hpp"
#include "bb/vector_ops.hpp"

namespace bb {

using VectorField = std::function<std::array<double, 2>(double, double)>;
using ScalarField = std::function<double(double, double)>;

/// H(div)-conforming BDM1 space: full linear vector polynomials per cell,
/// two normal-moment dofs per edge. Edge moments are taken against {1, s}
/// in the normalized edge parameterization running from the lower vertex
/// id to the higher, paired with the stored global edge normal, which
/// makes normal traces single-valued across interior edges.
class Bdm1Space {
public:
  explicit Bdm1Space(const TriMesh& mesh);

  const TriMesh& mesh() const { return *mesh_; }
  int dim() const { return 2 * mesh_->n_edges(); }

  /// Global dof ids of a cell's six local dofs (local edge k, moment m).
  const std::array<int, 6>& cell_dofs(int cell) const { return cell_dofs_[cell]; }

  /// Value of local basis function i of a cell at a physical point.
  std::array<double, 2> eval_basis(int cell, int i, double x, double y) const;
  /// Constant gradient [dφ1/dx, dφ1/dy; dφ2/dx, dφ2/dy] of local basis i.
  std::array<double, 4> basis_gradient(int cell, int i) const;
  /// Constant divergence of local basis i.
  double basis_divergence(int cell, int i) const;

  std::array<double, 2> eval_function(int cell, const Vector& coeffs, double x, double y) const;
  std::array<double, 4> function_gradient(int cell, const Vector& coeffs) const;
  double function_divergence(int cell, const Vector& coeffs) const;

  /// Canonical interpolation: edge moments by 3-point Gauss quadrature.
  Vector interpolate(const VectorField& field) const;

  /// Dofs that control v.n on the given boundary segments.
  std::vector<int> boundary_dofs(const std::set<BoundarySegment>& segments) const;

private:
  const TriMesh* mesh_;
  std::vector<std::array<int, 6>> cell_dofs_;
  // Columns of the 6x6 dual-basis coefficient matrix per cell, in the
  // centered monomial basis {(1,0),(0,1),(x,0),(0,x),(y,0),(0,y)}.
  std::vector<std::array<double, 36>> basis_coeffs_;
  std::vector<Point> cell_center_;
};

/// Piecewise constants, one dof per cell.
class P0Space {
public:
  explicit P0Space(const TriMesh& mesh) : mesh_(&mesh) {}
  const TriMesh& mesh() const { return *mesh_; }
  int dim() const { return mesh_->n_cells(); }
  const std::vector<double>& cell_measures() const { return mesh_->cell_area; }

  Vector interpolate_cell_averages(const ScalarField& field, int quad_degree = 8) const;

private:
  const TriMesh* mesh_;
};

/// Global index ranges of the coupled system
/// [u | v_1 .. v_n | p_1 .. p_n | multipliers].
struct SystemLayout {
  int n_networks = 0;
  int u_offset = 0;
  int u_size = 0;
  int v_size = 0; // per network
  int p_size = 0; // per network
  int total = 0;

  SystemLayout() = default;
  SystemLayout(int n, int bdm_dim, int p0_dim)
      : n_networks(n), u_size(bdm_dim), v_size(bdm_dim), p_size(p0_dim)
  {
    total = u_size + n * v_size + n * p_size + n;
  }

  int v_offset(int i) const { return u_size + i * v_size; }
  int p_offset(int i) const { return u_size + n_networks * v_size + i * p_size; }
  int multiplier_offset(int i) const
  {
    return u_size + n_networks * (v_size + p_size) + i;
  }
};

} // namespace bb

#endif
