#ifndef BB_ASSEMBLY_HPP
#define BB_ASSEMBLY_HPP

#include <set>
#include <string>

#include "bb/params.hpp"
#include "bb/sparse.hpp"
#include "bb/spaces.hpp"

namespace bb {

/// Boundary condition setup. Normal components (u.n, v_i.n) are enforced
/// strongly by dof elimination; tangential displacement is imposed weakly
/// through Nitsche facet terms on the listed segments. Flux tangential
/// tractions are natural and never add boundary facet terms.
struct BcSpec {
  std::set<BoundarySegment> u_strong;
  std::set<BoundarySegment> u_nitsche;
  std::set<BoundarySegment> v_strong;
};

/// Presets: "mms" (clamped everywhere), "sensitivity" (left/right only),
/// "mg" (normal components clamped everywhere, no Nitsche terms).
BcSpec bc_preset(const std::string& name);

/// Interior-penalty DG form for the symmetric gradient: cell strain terms,
/// tangential jump consistency/symmetry terms on interior edges, and the
/// same terms on the boundary edges listed in nitsche_segments.
SparseMatrix assemble_ah(const Bdm1Space& space, double eta,
                         const std::set<BoundarySegment>& nitsche_segments);

SparseMatrix assemble_divdiv(const Bdm1Space& space);
SparseMatrix assemble_vector_mass(const Bdm1Space& space, double weight);

/// (div w, q) pairing; rows are cells, columns are vector dofs. Exact since
/// both factors are cellwise constant.
SparseMatrix assemble_coupling(const Bdm1Space& space, const P0Space& p_space);

/// Pressure exchange block -(Lambda_1 + Lambda_2) (x) diag(cell areas).
SparseMatrix assemble_exchange(const P0Space& p_space, const DerivedParams& derived);

/// Norm matrix for the broken H1-type norm: full-gradient cell terms plus
/// h^-1-weighted tangential jumps on every edge. Used by the inf-sup
/// diagnostics.
SparseMatrix assemble_h1h_norm(const Bdm1Space& space);

struct FeSystem {
  SystemLayout layout;
  SparseMatrix matrix;
  Vector rhs;
  std::vector<index_t> constrained; // eliminated dofs, ascending
  double eta = 0.0;
  BcSpec bc;

  /// Dofs kept in eigenvalue diagnostics: everything except eliminated
  /// dofs; multipliers optionally dropped as well.
  std::vector<index_t> free_dofs(bool include_multipliers) const;
};

FeSystem assemble_system(const PhysicalParams& params, const DerivedParams& derived,
                         const Bdm1Space& space, const P0Space& p_space, const BcSpec& bc,
                         double eta);

/// Right-hand side from the physical data of the static problem: (f, w),
/// (tau K_i^-1 r_i, z_i), (tau g_i, q_i); multiplier entries zero.
Vector assemble_rhs(const PhysicalParams& params, const Bdm1Space& space, const P0Space& p_space,
                    const VectorField& f, const std::vector<VectorField>& r,
                    const std::vector<ScalarField>& g);

/// Symmetric elimination: zero row and column, unit diagonal, zero rhs.
void apply_symmetric_bc(SparseMatrix& a, Vector* rhs, const std::vector<index_t>& dofs);

} // namespace bb

#endif
