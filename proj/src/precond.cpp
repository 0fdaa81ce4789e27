#include "bb/precond.hpp"

#include <stdexcept>

namespace bb {

namespace {

void add_block_at(CooBuilder& coo, const SparseMatrix& m, index_t row_offset, index_t col_offset,
                  double weight)
{
  if (weight == 0.0)
    return;
  for (index_t i = 0; i < m.n_rows(); ++i)
    for (index_t k = m.row_offsets()[i]; k < m.row_offsets()[i + 1]; ++k)
      coo.add(row_offset + i, col_offset + m.col_indices()[k], weight * m.values()[k]);
}

} // namespace

BlockMatrices build_block_matrices(const PhysicalParams& params, const DerivedParams& derived,
                                   const Bdm1Space& space, const P0Space& p_space,
                                   const BcSpec& bc, double eta, DivWeight div_weight)
{
  const int n = params.n;
  const int vdim = space.dim();
  BlockMatrices out;

  const SparseMatrix ah_u = assemble_ah(space, eta, bc.u_nitsche);
  const SparseMatrix ah_v = assemble_ah(space, eta, {});
  const SparseMatrix divdiv = assemble_divdiv(space);
  const SparseMatrix mass = assemble_vector_mass(space, 1.0);

  out.b_u = ah_u.add_scaled(params.lambda, divdiv);
  for (const int d : space.boundary_dofs(bc.u_strong))
    out.u_constrained.push_back(d);
  apply_symmetric_bc(out.b_u, nullptr, out.u_constrained);

  {
    CooBuilder coo(static_cast<index_t>(n) * vdim, static_cast<index_t>(n) * vdim);
    const double tau2 = params.tau * params.tau;
    for (int i = 0; i < n; ++i) {
      const index_t off = static_cast<index_t>(i) * vdim;
      add_block_at(coo, ah_v, off, off, derived.gamma[i]);
      add_block_at(coo, mass, off, off, params.tau / params.K[i]);
      for (int j = 0; j < n; ++j) {
        const double w = (div_weight == DivWeight::tau2_lambda_inv ? tau2 : 1.0) *
                         derived.lambda_inv(i, j);
        add_block_at(coo, divdiv, off, static_cast<index_t>(j) * vdim, w);
      }
    }
    out.b_v = coo.compress();
    const auto v_bdofs = space.boundary_dofs(bc.v_strong);
    for (int i = 0; i < n; ++i)
      for (const int d : v_bdofs)
        out.v_constrained.push_back(static_cast<index_t>(i) * vdim + d);
    std::sort(out.v_constrained.begin(), out.v_constrained.end());
    apply_symmetric_bc(out.b_v, nullptr, out.v_constrained);
  }

  {
    const int pc = p_space.dim();
    const auto& areas = p_space.cell_measures();
    CooBuilder coo(static_cast<index_t>(n) * pc + n, static_cast<index_t>(n) * pc + n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double lam = derived.lambda_mat(i, j);
        if (lam == 0.0)
          continue;
        for (int c = 0; c < pc; ++c)
          coo.add(static_cast<index_t>(i) * pc + c, static_cast<index_t>(j) * pc + c,
                  lam * areas[c]);
      }
    for (int i = 0; i < n; ++i)
      coo.add(static_cast<index_t>(n) * pc + i, static_cast<index_t>(n) * pc + i, 1.0);
    out.b_p = coo.compress();
  }
  return out;
}

SparseMatrix block_norm_matrix(const SystemLayout& layout, const BlockMatrices& blocks)
{
  CooBuilder coo(layout.total, layout.total);
  add_block_at(coo, blocks.b_u, 0, 0, 1.0);
  add_block_at(coo, blocks.b_v, layout.v_offset(0), layout.v_offset(0), 1.0);
  add_block_at(coo, blocks.b_p, layout.p_offset(0), layout.p_offset(0), 1.0);
  return coo.compress();
}

BlockPreconditioner::BlockPreconditioner(const SystemLayout& layout, Applier block_u,
                                         Applier block_v, Applier block_p)
    : layout_(layout), block_u_(std::move(block_u)), block_v_(std::move(block_v)),
      block_p_(std::move(block_p))
{
}

BlockPreconditioner BlockPreconditioner::exact(const SystemLayout& layout,
                                               const BlockMatrices& blocks)
{
  return BlockPreconditioner(layout, exact_block_applier(blocks.b_u),
                             exact_block_applier(blocks.b_v), exact_block_applier(blocks.b_p));
}

Vector BlockPreconditioner::apply(const Vector& x) const
{
  if (static_cast<index_t>(x.size()) != layout_.total)
    throw std::invalid_argument("BlockPreconditioner::apply: dimension mismatch");
  const int n = layout_.n_networks;
  Vector xu(x.begin(), x.begin() + layout_.u_size);
  Vector xv(x.begin() + layout_.v_offset(0), x.begin() + layout_.v_offset(0) + n * layout_.v_size);
  Vector xp(x.begin() + layout_.p_offset(0), x.end());

  const Vector yu = block_u_(xu);
  const Vector yv = block_v_(xv);
  const Vector yp = block_p_(xp);

  Vector y(layout_.total);
  std::copy(yu.begin(), yu.end(), y.begin());
  std::copy(yv.begin(), yv.end(), y.begin() + layout_.v_offset(0));
  std::copy(yp.begin(), yp.end(), y.begin() + layout_.p_offset(0));
  return y;
}

Applier exact_block_applier(const SparseMatrix& block)
{
  std::shared_ptr<Factorization> fact;
  try {
    fact = std::make_shared<Factorization>(block, FactorizationKind::ldlt);
  } catch (const SingularMatrixError&) {
    fact = std::make_shared<Factorization>(block, FactorizationKind::lu);
  }
  return [fact](const Vector& x) { return fact->solve(x); };
}

Vector apply_bp_cellwise(const DerivedParams& derived, const P0Space& p_space, const Vector& x)
{
  const int n = static_cast<int>(derived.s.size());
  const int pc = p_space.dim();
  if (static_cast<int>(x.size()) != n * pc + n)
    throw std::invalid_argument("apply_bp_cellwise: dimension mismatch");
  const auto& areas = p_space.cell_measures();
  Vector y(x.size(), 0.0);
  for (int c = 0; c < pc; ++c) {
    DenseMatrix lam(n, n);
    Vector rhs(n);
    for (int i = 0; i < n; ++i) {
      rhs[i] = x[static_cast<std::size_t>(i) * pc + c];
      for (int j = 0; j < n; ++j)
        lam(i, j) = derived.lambda_mat(i, j) * areas[c];
    }
    const Vector sol = lu_solve(lam, rhs);
    for (int i = 0; i < n; ++i)
      y[static_cast<std::size_t>(i) * pc + c] = sol[i];
  }
  for (int i = 0; i < n; ++i)
    y[static_cast<std::size_t>(n) * pc + i] = x[static_cast<std::size_t>(n) * pc + i];
  return y;
}

} // namespace bb
