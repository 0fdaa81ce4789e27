#include "bb/mg.hpp"

#include <algorithm>
#include <stdexcept>

#include "bb/quadrature.hpp"

namespace bb {

SparseMatrix bdm_prolongation(const Bdm1Space& coarse, const Bdm1Space& fine,
                              const RefinementMaps& maps,
                              const std::vector<index_t>& coarse_constrained,
                              const std::vector<index_t>& fine_constrained)
{
  const TriMesh& cm = coarse.mesh();
  const TriMesh& fm = fine.mesh();
  const auto rule = gauss_legendre_01(3);

  // Evaluation cell on the coarse mesh for every fine edge.
  std::vector<int> eval_cell(fm.n_edges(), -1);
  for (int e = 0; e < cm.n_edges(); ++e)
    for (const int child : maps.edge_children[e])
      eval_cell[child] = cm.edge_cells[e][0];
  for (int c = 0; c < cm.n_cells(); ++c)
    for (const int inner : maps.cell_inner_edges[c])
      eval_cell[inner] = c;

  std::vector<bool> c_fixed(coarse.dim(), false), f_fixed(fine.dim(), false);
  for (const index_t d : coarse_constrained)
    c_fixed[d] = true;
  for (const index_t d : fine_constrained)
    f_fixed[d] = true;

  CooBuilder coo(fine.dim(), coarse.dim());
  for (int ef = 0; ef < fm.n_edges(); ++ef) {
    const int c = eval_cell[ef];
    if (c < 0)
      throw std::runtime_error("bdm_prolongation: hierarchy not nested");
    const Point& a = fm.vertices[fm.edges[ef][0]];
    const Point& b = fm.vertices[fm.edges[ef][1]];
    const Point& n = fm.edge_normal[ef];
    for (int k = 0; k < 6; ++k) {
      const int col = coarse.cell_dofs(c)[k];
      double m0 = 0.0, m1 = 0.0;
      for (const auto& q : rule) {
        const double x = a.x + q.x * (b.x - a.x);
        const double y = a.y + q.x * (b.y - a.y);
        const auto phi = coarse.eval_basis(c, k, x, y);
        const double pn = phi[0] * n.x + phi[1] * n.y;
        m0 += q.w * pn;
        m1 += q.w * q.x * pn;
      }
      if (c_fixed[col])
        continue;
      if (!f_fixed[2 * ef] && m0 != 0.0)
        coo.add(2 * ef, col, m0);
      if (!f_fixed[2 * ef + 1] && m1 != 0.0)
        coo.add(2 * ef + 1, col, m1);
    }
  }
  return coo.compress();
}

SparseMatrix block_diag_prolongation(const SparseMatrix& p, int n_fields)
{
  CooBuilder coo(p.n_rows() * n_fields, p.n_cols() * n_fields);
  for (int f = 0; f < n_fields; ++f)
    for (index_t i = 0; i < p.n_rows(); ++i)
      for (index_t k = p.row_offsets()[i]; k < p.row_offsets()[i + 1]; ++k)
        coo.add(f * p.n_rows() + i, f * p.n_cols() + p.col_indices()[k], p.values()[k]);
  return coo.compress();
}

std::vector<std::vector<int>> block_patch_dofs(const TriMesh& mesh, int bdm_dim, int n_fields,
                                               const std::vector<index_t>& constrained)
{
  std::vector<bool> fixed(static_cast<std::size_t>(bdm_dim) * n_fields, false);
  for (const index_t d : constrained)
    fixed[d] = true;
  const auto patches = vertex_star_patches(mesh);
  std::vector<std::vector<int>> dofs;
  dofs.reserve(patches.size());
  for (const auto& patch : patches) {
    std::vector<int> pd;
    for (int f = 0; f < n_fields; ++f)
      for (const int e : patch.edges)
        for (int m = 0; m < 2; ++m) {
          const int d = f * bdm_dim + 2 * e + m;
          if (!fixed[d])
            pd.push_back(d);
        }
    if (!pd.empty())
      dofs.push_back(std::move(pd));
  }
  return dofs;
}

MgApplier::MgApplier(std::vector<Level> levels, const MgCycleSpec& spec) : spec_(spec)
{
  if (static_cast<int>(levels.size()) < 2)
    throw std::invalid_argument("MgApplier: need at least two levels");
  if (spec.omega <= 0.0 || spec.omega > 1.0)
    throw std::invalid_argument("MgApplier: omega must be in (0, 1]");

  levels_.resize(levels.size());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    LevelData& ld = levels_[l];
    ld.matrix = std::move(levels[l].matrix);
    ld.constrained = std::move(levels[l].constrained);
    if (l > 0) {
      ld.prolongation = std::move(levels[l].prolongation);
      ld.restriction = ld.prolongation.transposed();
    }
    ld.patch_dofs = std::move(levels[l].patch_dofs);
    ld.patch_inverse.resize(ld.patch_dofs.size());
    if (l > 0) {
      for (std::size_t p = 0; p < ld.patch_dofs.size(); ++p) {
        const auto& pd = ld.patch_dofs[p];
        DenseMatrix ap(pd.size(), pd.size());
        for (std::size_t i = 0; i < pd.size(); ++i)
          for (std::size_t j = 0; j < pd.size(); ++j)
            ap(i, j) = ld.matrix.coeff(pd[i], pd[j]);
        ld.patch_inverse[p] = lu_inverse(ap);
      }
    }
  }

  try {
    coarse_solver_ =
        std::make_unique<Factorization>(levels_[0].matrix, FactorizationKind::ldlt);
  } catch (const SingularMatrixError&) {
    coarse_solver_ = std::make_unique<Factorization>(levels_[0].matrix, FactorizationKind::lu);
  }
}

void MgApplier::smooth(int level, const Vector& b, Vector& x, bool backward) const
{
  const LevelData& ld = levels_[level];
  Vector r = ld.matrix.multiply(x);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = b[i] - r[i];
  const std::int64_t np = static_cast<std::int64_t>(ld.patch_dofs.size());

  if (spec_.sweep == PatchSweep::additive) {
    std::vector<Vector> corrections(np);
    // Patch solves are independent; the damped update is accumulated
    // afterwards in patch order so the sweep is deterministic.
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 0; p < np; ++p) {
      const auto& pd = ld.patch_dofs[p];
      Vector rp(pd.size());
      for (std::size_t i = 0; i < pd.size(); ++i)
        rp[i] = r[pd[i]];
      corrections[p] = ld.patch_inverse[p].multiply(rp);
    }
    for (std::int64_t p = 0; p < np; ++p) {
      const auto& pd = ld.patch_dofs[p];
      for (std::size_t i = 0; i < pd.size(); ++i)
        x[pd[i]] += spec_.omega * corrections[p][i];
    }
    return;
  }

  // Multiplicative sweep: the residual is kept current patch by patch via
  // the rows of the symmetric level matrix.
  const auto& offsets = ld.matrix.row_offsets();
  const auto& cols = ld.matrix.col_indices();
  const auto& vals = ld.matrix.values();
  Vector rp, cp;
  for (std::int64_t step = 0; step < np; ++step) {
    const std::int64_t p = backward ? np - 1 - step : step;
    const auto& pd = ld.patch_dofs[p];
    rp.assign(pd.size(), 0.0);
    for (std::size_t i = 0; i < pd.size(); ++i)
      rp[i] = r[pd[i]];
    cp = ld.patch_inverse[p].multiply(rp);
    for (std::size_t i = 0; i < pd.size(); ++i) {
      const double dx = spec_.omega * cp[i];
      if (dx == 0.0)
        continue;
      const index_t d = pd[i];
      x[d] += dx;
      for (index_t k = offsets[d]; k < offsets[d + 1]; ++k)
        r[cols[k]] -= vals[k] * dx;
    }
  }
}

void MgApplier::cycle(int level, const Vector& b, Vector& x, MgCycle type) const
{
  if (level == 0) {
    x = coarse_solver_->solve(b);
    return;
  }
  const LevelData& ld = levels_[level];
  for (int s = 0; s < spec_.pre_smooth; ++s)
    smooth(level, b, x, /*backward=*/false);

  Vector r = ld.matrix.multiply(x);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = b[i] - r[i];
  Vector rc = ld.restriction.multiply(r);
  Vector ec(rc.size(), 0.0);

  if (type == MgCycle::v) {
    cycle(level - 1, rc, ec, MgCycle::v);
  } else {
    // W: two corrections with the same cycle; F: one F followed by one V.
    cycle(level - 1, rc, ec, type == MgCycle::w ? MgCycle::w : MgCycle::f);
    Vector r2 = levels_[level - 1].matrix.multiply(ec);
    for (std::size_t i = 0; i < r2.size(); ++i)
      r2[i] = rc[i] - r2[i];
    Vector e2(rc.size(), 0.0);
    cycle(level - 1, r2, e2, type == MgCycle::w ? MgCycle::w : MgCycle::v);
    for (std::size_t i = 0; i < ec.size(); ++i)
      ec[i] += e2[i];
  }

  const Vector pe = ld.prolongation.multiply(ec);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] += pe[i];

  const bool backward = spec_.sweep == PatchSweep::multiplicative;
  for (int s = 0; s < spec_.post_smooth; ++s)
    smooth(level, b, x, backward);
}

Vector MgApplier::apply(const Vector& x) const
{
  const int top = n_levels() - 1;
  Vector y(x.size(), 0.0);
  cycle(top, x, y, spec_.cycle);
  // Constrained components mimic the unit-diagonal exact solve.
  for (const index_t d : levels_[top].constrained)
    y[d] = x[d];
  return y;
}

} // namespace bb
