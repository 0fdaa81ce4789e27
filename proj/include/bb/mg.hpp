#ifndef BB_MG_HPP
#define BB_MG_HPP

#include <vector>

#include "bb/dense.hpp"
#include "bb/factorization.hpp"
#include "bb/mesh.hpp"
#include "bb/spaces.hpp"

namespace bb {

enum class MgCycle { v, w, f };

/// Patch combination inside one smoothing step. The additive sweep solves
/// all patches against one residual and needs strong damping (omega around
/// 0.5 keeps the cycle definite); the multiplicative sweep updates the
/// residual patch by patch and runs pre-smoothing forward and
/// post-smoothing backward, which keeps the cycle symmetric.
enum class PatchSweep { additive, multiplicative };

struct MgCycleSpec {
  MgCycle cycle = MgCycle::f;
  int pre_smooth = 2;
  int post_smooth = 2;
  int levels = 3;
  double omega = 0.75; // Richardson damping of the patch corrections
  PatchSweep sweep = PatchSweep::multiplicative;
};

/// Canonical injection of the coarse BDM1 space into the fine one. Exact on
/// nested meshes, where it coincides with the L2 projection. Rows of
/// constrained fine dofs and columns of constrained coarse dofs are zeroed.
SparseMatrix bdm_prolongation(const Bdm1Space& coarse, const Bdm1Space& fine,
                              const RefinementMaps& maps,
                              const std::vector<index_t>& coarse_constrained,
                              const std::vector<index_t>& fine_constrained);

/// Replicate a single-field prolongation block-diagonally over n fields.
SparseMatrix block_diag_prolongation(const SparseMatrix& p, int n_fields);

/// Geometric multigrid for one preconditioner block: damped-Richardson
/// vertex-star smoothing (additive patch combination, deterministic
/// accumulation order), transposed-injection restriction and an exact
/// coarsest-level solve. One cycle on a zero initial guess is a symmetric
/// linear operator usable inside CG and MinRes.
class MgApplier {
public:
  struct Level {
    SparseMatrix matrix;
    SparseMatrix prolongation; // from the next-coarser level; empty on level 0
    std::vector<std::vector<int>> patch_dofs;
    std::vector<index_t> constrained;
  };

  MgApplier(std::vector<Level> levels, const MgCycleSpec& spec);

  Vector apply(const Vector& x) const;
  const MgCycleSpec& spec() const { return spec_; }
  int n_levels() const { return static_cast<int>(levels_.size()); }

  /// One residual-correction sweep over all patches. backward reverses the
  /// patch order (used by multiplicative post-smoothing).
  void smooth(int level, const Vector& b, Vector& x, bool backward = false) const;

private:
  void cycle(int level, const Vector& b, Vector& x, MgCycle type) const;

  struct LevelData {
    SparseMatrix matrix;
    SparseMatrix prolongation;
    SparseMatrix restriction;
    std::vector<std::vector<int>> patch_dofs;
    std::vector<DenseMatrix> patch_inverse;
    std::vector<index_t> constrained;
  };
  std::vector<LevelData> levels_;
  std::unique_ptr<Factorization> coarse_solver_;
  MgCycleSpec spec_;
};

/// Patch dof lists for an n_fields-wide BDM block: all dofs of the edges in
/// each vertex star, per field, with constrained dofs removed.
std::vector<std::vector<int>> block_patch_dofs(const TriMesh& mesh, int bdm_dim, int n_fields,
                                               const std::vector<index_t>& constrained);

} // namespace bb

#endif
