#include "bb/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bb/quadrature.hpp"

namespace bb {

BcSpec bc_preset(const std::string& name)
{
  const std::set<BoundarySegment> all = {BoundarySegment::left, BoundarySegment::right,
                                         BoundarySegment::bottom, BoundarySegment::top};
  const std::set<BoundarySegment> sides = {BoundarySegment::left, BoundarySegment::right};
  BcSpec bc;
  if (name == "mms") {
    bc.u_strong = all;
    bc.u_nitsche = all;
    bc.v_strong = all;
  } else if (name == "sensitivity") {
    bc.u_strong = sides;
    bc.u_nitsche = sides;
    bc.v_strong = sides;
  } else if (name == "mg") {
    bc.u_strong = all;
    bc.u_nitsche = {};
    bc.v_strong = all;
  } else {
    throw std::invalid_argument("unknown bc preset: " + name);
  }
  return bc;
}

namespace {

struct Strain {
  double e11, e22, e12;
};

Strain strain_of(const std::array<double, 4>& grad)
{
  return {grad[0], grad[3], 0.5 * (grad[1] + grad[2])};
}

double strain_inner(const Strain& a, const Strain& b)
{
  return a.e11 * b.e11 + a.e22 * b.e22 + 2.0 * a.e12 * b.e12;
}

std::array<double, 2> strain_times_normal(const Strain& s, const Point& n)
{
  return {s.e11 * n.x + s.e12 * n.y, s.e12 * n.x + s.e22 * n.y};
}

void scatter_dense(CooBuilder& coo, std::size_t slot, const double* block, const int* rows,
                   const int* cols, int nr, int nc)
{
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j)
      coo.set(slot + i * nc + j, rows[i], cols[j], block[i * nc + j]);
}

} // namespace

SparseMatrix assemble_ah(const Bdm1Space& space, double eta,
                         const std::set<BoundarySegment>& nitsche_segments)
{
  if (!(eta > 0.0))
    throw std::invalid_argument("assemble_ah: eta must be positive");
  const TriMesh& mesh = space.mesh();
  const int nc = mesh.n_cells();
  const auto edge_rule = gauss_legendre_01(3);

  std::vector<int> interior_edges;
  std::vector<int> nitsche_edges;
  for (int e = 0; e < mesh.n_edges(); ++e)
    if (!mesh.edge_on_boundary[e])
      interior_edges.push_back(e);
  for (const auto seg : nitsche_segments)
    for (int e : mesh.boundary_edges_on(seg))
      nitsche_edges.push_back(e);
  std::sort(nitsche_edges.begin(), nitsche_edges.end());
  nitsche_edges.erase(std::unique(nitsche_edges.begin(), nitsche_edges.end()),
                      nitsche_edges.end());

  CooBuilder coo(space.dim(), space.dim());
  const std::size_t cell_slots = coo.allocate(36 * static_cast<std::size_t>(nc));
  const std::size_t int_slots = coo.allocate(144 * interior_edges.size());
  const std::size_t bnd_slots = coo.allocate(36 * nitsche_edges.size());

  // Cell strain terms: strains are constant, integrate exactly.
#pragma omp parallel for schedule(static)
  for (int c = 0; c < nc; ++c) {
    Strain eps[6];
    for (int i = 0; i < 6; ++i)
      eps[i] = strain_of(space.basis_gradient(c, i));
    double block[36];
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        block[6 * i + j] = mesh.cell_area[c] * strain_inner(eps[i], eps[j]);
    int dofs[6];
    for (int i = 0; i < 6; ++i)
      dofs[i] = space.cell_dofs(c)[i];
    scatter_dense(coo, cell_slots + 36 * static_cast<std::size_t>(c), block, dofs, dofs, 6, 6);
  }

  // Interior facets: 12x12 block over the two incident cells' dofs.
#pragma omp parallel for schedule(static)
  for (std::int64_t ei = 0; ei < static_cast<std::int64_t>(interior_edges.size()); ++ei) {
    const int e = interior_edges[ei];
    const Point& n = mesh.edge_normal[e];
    const Point& pa = mesh.vertices[mesh.edges[e][0]];
    const Point& pb = mesh.vertices[mesh.edges[e][1]];
    const double he = mesh.edge_length[e];
    const int cells[2] = {mesh.edge_cells[e][0], mesh.edge_cells[e][1]};

    std::array<double, 2> avg[12];
    std::array<std::array<double, 2>, 3> jt[12];
    int gdofs[12];
    for (int s = 0; s < 2; ++s) {
      const int c = cells[s];
      const double sign = s == 0 ? 1.0 : -1.0;
      for (int i = 0; i < 6; ++i) {
        const int a = 6 * s + i;
        gdofs[a] = space.cell_dofs(c)[i];
        const Strain eps = strain_of(space.basis_gradient(c, i));
        const auto en = strain_times_normal(eps, n);
        avg[a] = {0.5 * en[0], 0.5 * en[1]};
        for (int q = 0; q < 3; ++q) {
          const double x = pa.x + edge_rule[q].x * (pb.x - pa.x);
          const double y = pa.y + edge_rule[q].x * (pb.y - pa.y);
          const auto phi = space.eval_basis(c, i, x, y);
          const double pn = phi[0] * n.x + phi[1] * n.y;
          jt[a][q] = {sign * (phi[0] - pn * n.x), sign * (phi[1] - pn * n.y)};
        }
      }
    }

    double block[144];
    const double pen = eta / he;
    for (int a = 0; a < 12; ++a)
      for (int b = 0; b < 12; ++b) {
        double acc = 0.0;
        for (int q = 0; q < 3; ++q) {
          const double consistency = avg[a][0] * jt[b][q][0] + avg[a][1] * jt[b][q][1];
          const double adjoint = avg[b][0] * jt[a][q][0] + avg[b][1] * jt[a][q][1];
          const double penalty = jt[a][q][0] * jt[b][q][0] + jt[a][q][1] * jt[b][q][1];
          acc += edge_rule[q].w * (-consistency - adjoint + pen * penalty);
        }
        block[12 * a + b] = he * acc;
      }
    scatter_dense(coo, int_slots + 144 * static_cast<std::size_t>(ei), block, gdofs, gdofs, 12,
                  12);
  }

  // Boundary facets on Nitsche segments: full trace, no halving.
#pragma omp parallel for schedule(static)
  for (std::int64_t ei = 0; ei < static_cast<std::int64_t>(nitsche_edges.size()); ++ei) {
    const int e = nitsche_edges[ei];
    const Point& n = mesh.edge_normal[e];
    const Point& pa = mesh.vertices[mesh.edges[e][0]];
    const Point& pb = mesh.vertices[mesh.edges[e][1]];
    const double he = mesh.edge_length[e];
    const int c = mesh.edge_cells[e][0];

    std::array<double, 2> avg[6];
    std::array<std::array<double, 2>, 3> jt[6];
    int gdofs[6];
    for (int i = 0; i < 6; ++i) {
      gdofs[i] = space.cell_dofs(c)[i];
      const Strain eps = strain_of(space.basis_gradient(c, i));
      avg[i] = strain_times_normal(eps, n);
      for (int q = 0; q < 3; ++q) {
        const double x = pa.x + edge_rule[q].x * (pb.x - pa.x);
        const double y = pa.y + edge_rule[q].x * (pb.y - pa.y);
        const auto phi = space.eval_basis(c, i, x, y);
        const double pn = phi[0] * n.x + phi[1] * n.y;
        jt[i][q] = {phi[0] - pn * n.x, phi[1] - pn * n.y};
      }
    }
    double block[36];
    const double pen = eta / he;
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        double acc = 0.0;
        for (int q = 0; q < 3; ++q) {
          const double consistency = avg[a][0] * jt[b][q][0] + avg[a][1] * jt[b][q][1];
          const double adjoint = avg[b][0] * jt[a][q][0] + avg[b][1] * jt[a][q][1];
          const double penalty = jt[a][q][0] * jt[b][q][0] + jt[a][q][1] * jt[b][q][1];
          acc += edge_rule[q].w * (-consistency - adjoint + pen * penalty);
        }
        block[6 * a + b] = he * acc;
      }
    scatter_dense(coo, bnd_slots + 36 * static_cast<std::size_t>(ei), block, gdofs, gdofs, 6, 6);
  }

  return coo.compress();
}

SparseMatrix assemble_divdiv(const Bdm1Space& space)
{
  const TriMesh& mesh = space.mesh();
  const int nc = mesh.n_cells();
  CooBuilder coo(space.dim(), space.dim());
  const std::size_t slots = coo.allocate(36 * static_cast<std::size_t>(nc));
#pragma omp parallel for schedule(static)
  for (int c = 0; c < nc; ++c) {
    double div[6];
    for (int i = 0; i < 6; ++i)
      div[i] = space.basis_divergence(c, i);
    double block[36];
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        block[6 * i + j] = mesh.cell_area[c] * div[i] * div[j];
    int dofs[6];
    for (int i = 0; i < 6; ++i)
      dofs[i] = space.cell_dofs(c)[i];
    scatter_dense(coo, slots + 36 * static_cast<std::size_t>(c), block, dofs, dofs, 6, 6);
  }
  return coo.compress();
}

SparseMatrix assemble_vector_mass(const Bdm1Space& space, double weight)
{
  if (!(weight > 0.0))
    throw std::invalid_argument("assemble_vector_mass: weight must be positive");
  const TriMesh& mesh = space.mesh();
  const int nc = mesh.n_cells();
  const auto rule = triangle_rule(4);
  CooBuilder coo(space.dim(), space.dim());
  const std::size_t slots = coo.allocate(36 * static_cast<std::size_t>(nc));
#pragma omp parallel for schedule(static)
  for (int c = 0; c < nc; ++c) {
    const auto& v = mesh.cells[c];
    const Point p0 = mesh.vertices[v[0]], p1 = mesh.vertices[v[1]], p2 = mesh.vertices[v[2]];
    double block[36] = {0.0};
    for (const auto& q : rule) {
      const double x = p0.x + q.x * (p1.x - p0.x) + q.y * (p2.x - p0.x);
      const double y = p0.y + q.x * (p1.y - p0.y) + q.y * (p2.y - p0.y);
      std::array<double, 2> phi[6];
      for (int i = 0; i < 6; ++i)
        phi[i] = space.eval_basis(c, i, x, y);
      const double w = weight * 2.0 * mesh.cell_area[c] * q.w;
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
          block[6 * i + j] += w * (phi[i][0] * phi[j][0] + phi[i][1] * phi[j][1]);
    }
    int dofs[6];
    for (int i = 0; i < 6; ++i)
      dofs[i] = space.cell_dofs(c)[i];
    scatter_dense(coo, slots + 36 * static_cast<std::size_t>(c), block, dofs, dofs, 6, 6);
  }
  return coo.compress();
}

SparseMatrix assemble_coupling(const Bdm1Space& space, const P0Space& p_space)
{
  if (&space.mesh() != &p_space.mesh())
    throw std::invalid_argument("assemble_coupling: spaces built on different meshes");
  const TriMesh& mesh = space.mesh();
  const int nc = mesh.n_cells();
  CooBuilder coo(p_space.dim(), space.dim());
  const std::size_t slots = coo.allocate(6 * static_cast<std::size_t>(nc));
#pragma omp parallel for schedule(static)
  for (int c = 0; c < nc; ++c) {
    for (int i = 0; i < 6; ++i)
      coo.set(slots + 6 * static_cast<std::size_t>(c) + i, c, space.cell_dofs(c)[i],
              mesh.cell_area[c] * space.basis_divergence(c, i));
  }
  return coo.compress();
}

SparseMatrix assemble_exchange(const P0Space& p_space, const DerivedParams& derived)
{
  const int n = static_cast<int>(derived.s.size());
  const int nc = p_space.dim();
  CooBuilder coo(static_cast<index_t>(n) * nc, static_cast<index_t>(n) * nc);
  coo.reserve(static_cast<std::size_t>(n) * n * nc);
  const auto& areas = p_space.cell_measures();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double w = -(derived.lambda1(i, j) + derived.lambda2(i, j));
      if (w == 0.0)
        continue;
      for (int c = 0; c < nc; ++c)
        coo.add(static_cast<index_t>(i) * nc + c, static_cast<index_t>(j) * nc + c,
                w * areas[c]);
    }
  return coo.compress();
}

SparseMatrix assemble_h1h_norm(const Bdm1Space& space)
{
  const TriMesh& mesh = space.mesh();
  const int nc = mesh.n_cells();
  const auto edge_rule = gauss_legendre_01(3);
  CooBuilder coo(space.dim(), space.dim());
  const std::size_t cell_slots = coo.allocate(36 * static_cast<std::size_t>(nc));

#pragma omp parallel for schedule(static)
  for (int c = 0; c < nc; ++c) {
    std::array<double, 4> g[6];
    for (int i = 0; i < 6; ++i)
      g[i] = space.basis_gradient(c, i);
    double block[36];
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        double gg = 0.0;
        for (int k = 0; k < 4; ++k)
          gg += g[i][k] * g[j][k];
        block[6 * i + j] = mesh.cell_area[c] * gg;
      }
    int dofs[6];
    for (int i = 0; i < 6; ++i)
      dofs[i] = space.cell_dofs(c)[i];
    scatter_dense(coo, cell_slots + 36 * static_cast<std::size_t>(c), block, dofs, dofs, 6, 6);
  }

  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Point& n = mesh.edge_normal[e];
    const Point& pa = mesh.vertices[mesh.edges[e][0]];
    const Point& pb = mesh.vertices[mesh.edges[e][1]];
    const bool interior = !mesh.edge_on_boundary[e];
    const int nsides = interior ? 2 : 1;
    const int nfunc = 6 * nsides;

    std::vector<std::array<std::array<double, 2>, 3>> jt(nfunc);
    std::vector<int> gdofs(nfunc);
    for (int s = 0; s < nsides; ++s) {
      const int c = mesh.edge_cells[e][s];
      const double sign = s == 0 ? 1.0 : -1.0;
      for (int i = 0; i < 6; ++i) {
        const int a = 6 * s + i;
        gdofs[a] = space.cell_dofs(c)[i];
        for (int q = 0; q < 3; ++q) {
          const double x = pa.x + edge_rule[q].x * (pb.x - pa.x);
          const double y = pa.y + edge_rule[q].x * (pb.y - pa.y);
          const auto phi = space.eval_basis(c, i, x, y);
          const double pn = phi[0] * n.x + phi[1] * n.y;
          jt[a][q] = {sign * (phi[0] - pn * n.x), sign * (phi[1] - pn * n.y)};
        }
      }
    }
    for (int a = 0; a < nfunc; ++a)
      for (int b = 0; b < nfunc; ++b) {
        double acc = 0.0;
        for (int q = 0; q < 3; ++q)
          acc += edge_rule[q].w * (jt[a][q][0] * jt[b][q][0] + jt[a][q][1] * jt[b][q][1]);
        coo.add(gdofs[a], gdofs[b], acc); // he/he: |e| measure against h_e^-1
      }
  }
  return coo.compress();
}

std::vector<index_t> FeSystem::free_dofs(bool include_multipliers) const
{
  std::vector<bool> drop(layout.total, false);
  for (const index_t k : constrained)
    drop[k] = true;
  if (!include_multipliers)
    for (int i = 0; i < layout.n_networks; ++i)
      drop[layout.multiplier_offset(i)] = true;
  std::vector<index_t> free;
  free.reserve(layout.total);
  for (index_t k = 0; k < layout.total; ++k)
    if (!drop[k])
      free.push_back(k);
  return free;
}

namespace {

void add_block(CooBuilder& coo, const SparseMatrix& m, index_t row_offset, index_t col_offset,
               double weight)
{
  if (weight == 0.0)
    return;
  for (index_t i = 0; i < m.n_rows(); ++i)
    for (index_t k = m.row_offsets()[i]; k < m.row_offsets()[i + 1]; ++k)
      coo.add(row_offset + i, col_offset + m.col_indices()[k], weight * m.values()[k]);
}

void add_block_transposed(CooBuilder& coo, const SparseMatrix& m, index_t row_offset,
                          index_t col_offset, double weight)
{
  for (index_t i = 0; i < m.n_rows(); ++i)
    for (index_t k = m.row_offsets()[i]; k < m.row_offsets()[i + 1]; ++k)
      coo.add(row_offset + m.col_indices()[k], col_offset + i, weight * m.values()[k]);
}

} // namespace

FeSystem assemble_system(const PhysicalParams& params, const DerivedParams& derived,
                         const Bdm1Space& space, const P0Space& p_space, const BcSpec& bc,
                         double eta)
{
  if (&space.mesh() != &p_space.mesh())
    throw std::invalid_argument("assemble_system: spaces built on different meshes");
  const int n = params.n;
  FeSystem sys;
  sys.layout = SystemLayout(n, space.dim(), p_space.dim());
  sys.eta = eta;
  sys.bc = bc;

  const SparseMatrix ah_u = assemble_ah(space, eta, bc.u_nitsche);
  const SparseMatrix ah_v = assemble_ah(space, eta, {});
  const SparseMatrix divdiv = assemble_divdiv(space);
  const SparseMatrix mass = assemble_vector_mass(space, 1.0);
  const SparseMatrix coupling = assemble_coupling(space, p_space);
  const SparseMatrix exchange = assemble_exchange(p_space, derived);

  CooBuilder coo(sys.layout.total, sys.layout.total);
  add_block(coo, ah_u, 0, 0, 1.0);
  add_block(coo, divdiv, 0, 0, params.lambda);
  for (int i = 0; i < n; ++i) {
    const index_t off = sys.layout.v_offset(i);
    add_block(coo, ah_v, off, off, derived.gamma[i]);
    add_block(coo, mass, off, off, params.tau / params.K[i]);
  }
  for (int i = 0; i < n; ++i) {
    const index_t po = sys.layout.p_offset(i);
    add_block(coo, coupling, po, 0, params.alpha[i]);
    add_block_transposed(coo, coupling, 0, po, params.alpha[i]);
    add_block(coo, coupling, po, sys.layout.v_offset(i), params.tau);
    add_block_transposed(coo, coupling, sys.layout.v_offset(i), po, params.tau);
  }
  add_block(coo, exchange, sys.layout.p_offset(0), sys.layout.p_offset(0), 1.0);

  const auto& areas = p_space.cell_measures();
  for (int i = 0; i < n; ++i) {
    const index_t mo = sys.layout.multiplier_offset(i);
    const index_t po = sys.layout.p_offset(i);
    for (int c = 0; c < p_space.dim(); ++c) {
      coo.add(mo, po + c, areas[c]);
      coo.add(po + c, mo, areas[c]);
    }
  }
  // Structural diagonal so eliminated rows keep an entry.
  for (index_t k = 0; k < sys.layout.total; ++k)
    coo.add(k, k, 0.0);

  sys.matrix = coo.compress();
  sys.rhs.assign(sys.layout.total, 0.0);

  const auto u_bdofs = space.boundary_dofs(bc.u_strong);
  const auto v_bdofs = space.boundary_dofs(bc.v_strong);
  for (const int d : u_bdofs)
    sys.constrained.push_back(d);
  for (int i = 0; i < n; ++i)
    for (const int d : v_bdofs)
      sys.constrained.push_back(sys.layout.v_offset(i) + d);
  std::sort(sys.constrained.begin(), sys.constrained.end());

  apply_symmetric_bc(sys.matrix, &sys.rhs, sys.constrained);
  return sys;
}

Vector assemble_rhs(const PhysicalParams& params, const Bdm1Space& space, const P0Space& p_space,
                    const VectorField& f, const std::vector<VectorField>& r,
                    const std::vector<ScalarField>& g)
{
  const int n = params.n;
  if (static_cast<int>(r.size()) != n || static_cast<int>(g.size()) != n)
    throw std::invalid_argument("assemble_rhs: need one r_i and g_i per network");
  const SystemLayout layout(n, space.dim(), p_space.dim());
  const TriMesh& mesh = space.mesh();
  const auto rule = triangle_rule(6);

  Vector rhs(layout.total, 0.0);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& v = mesh.cells[c];
    const Point p0 = mesh.vertices[v[0]], p1 = mesh.vertices[v[1]], p2 = mesh.vertices[v[2]];
    for (const auto& q : rule) {
      const double x = p0.x + q.x * (p1.x - p0.x) + q.y * (p2.x - p0.x);
      const double y = p0.y + q.x * (p1.y - p0.y) + q.y * (p2.y - p0.y);
      const double w = 2.0 * mesh.cell_area[c] * q.w;
      std::array<double, 2> phi[6];
      for (int i = 0; i < 6; ++i)
        phi[i] = space.eval_basis(c, i, x, y);

      const auto fv = f(x, y);
      for (int i = 0; i < 6; ++i)
        rhs[space.cell_dofs(c)[i]] += w * (fv[0] * phi[i][0] + fv[1] * phi[i][1]);

      for (int net = 0; net < n; ++net) {
        const auto rv = r[net](x, y);
        const double wr = params.tau / params.K[net];
        for (int i = 0; i < 6; ++i)
          rhs[layout.v_offset(net) + space.cell_dofs(c)[i]] +=
              w * wr * (rv[0] * phi[i][0] + rv[1] * phi[i][1]);
        rhs[layout.p_offset(net) + c] += w * params.tau * g[net](x, y);
      }
    }
  }
  return rhs;
}

void apply_symmetric_bc(SparseMatrix& a, Vector* rhs, const std::vector<index_t>& dofs)
{
  std::vector<bool> fixed(a.n_rows(), false);
  for (const index_t d : dofs)
    fixed[d] = true;
  auto& values = a.values();
  const auto& offsets = a.row_offsets();
  const auto& cols = a.col_indices();
  for (index_t i = 0; i < a.n_rows(); ++i)
    for (index_t k = offsets[i]; k < offsets[i + 1]; ++k) {
      if (fixed[i] || fixed[cols[k]])
        values[k] = (i == cols[k] && fixed[i]) ? 1.0 : 0.0;
    }
  if (rhs)
    for (const index_t d : dofs)
      (*rhs)[d] = 0.0;
}

} // namespace bb
