#ifndef BB_PRECOND_HPP
#define BB_PRECOND_HPP

#include <functional>
#include <memory>

#include "bb/assembly.hpp"
#include "bb/factorization.hpp"

namespace bb {

/// Weight of the (Div, Div) coupling in the flux block: the norm carries
/// tau^2 Lambda^-1, the operator form only Lambda^-1; both are selectable.
enum class DivWeight { tau2_lambda_inv, lambda_inv };

/// The three diagonal blocks of the preconditioner, assembled with the same
/// discretization choices as the system. Constrained dofs carry unit
/// diagonals; the pressure block appends one unit row per multiplier.
struct BlockMatrices {
  SparseMatrix b_u; // a_h + lambda (div,div)
  SparseMatrix b_v; // blockdiag(gamma_i a_h + tau/K_i mass) + weighted (Div,Div)
  SparseMatrix b_p; // Lambda (x) pressure mass, multipliers unit
  std::vector<index_t> u_constrained;
  std::vector<index_t> v_constrained;
};

BlockMatrices build_block_matrices(const PhysicalParams& params, const DerivedParams& derived,
                                   const Bdm1Space& space, const P0Space& p_space,
                                   const BcSpec& bc, double eta,
                                   DivWeight div_weight = DivWeight::tau2_lambda_inv);

/// Block-diagonal norm matrix blockdiag(B_u, B_v, B_p) on the full layout.
SparseMatrix block_norm_matrix(const SystemLayout& layout, const BlockMatrices& blocks);

using Applier = std::function<Vector(const Vector&)>;

/// Block-diagonal preconditioner; appliers are stateless and symmetric
/// positive definite as operators.
class BlockPreconditioner {
public:
  BlockPreconditioner(const SystemLayout& layout, Applier block_u, Applier block_v,
                      Applier block_p);

  /// All three blocks factorized exactly.
  static BlockPreconditioner exact(const SystemLayout& layout, const BlockMatrices& blocks);

  Vector apply(const Vector& x) const;
  const SystemLayout& layout() const { return layout_; }

private:
  SystemLayout layout_;
  Applier block_u_;
  Applier block_v_;
  Applier block_p_;
};

/// Factorize one block (LDLT with LU fallback) and wrap it as an applier.
Applier exact_block_applier(const SparseMatrix& block);

/// Apply the pressure block cellwise: dense n x n solves per cell.
/// Diagnostic counterpart of the factorized route.
Vector apply_bp_cellwise(const DerivedParams& derived, const P0Space& p_space, const Vector& x);

} // namespace bb

#endif
