#include "bb/mms.hpp"

#include <cmath>
#include <stdexcept>

#include "bb/quadrature.hpp"

namespace bb {

namespace {

constexpr double pi = 3.14159265358979323846;

// g(t) = t^2 (t-1)^2 and derivatives
double g0(double t) { return t * t * (t - 1.0) * (t - 1.0); }
double g1d(double t) { return 4.0 * t * t * t - 6.0 * t * t + 2.0 * t; }
double g2d(double t) { return 12.0 * t * t - 12.0 * t + 2.0; }
double g3d(double t) { return 24.0 * t - 12.0; }

// G(t) = t^4 (t-1)^4 and derivatives
double G0(double t)
{
  const double w = t * (t - 1.0);
  return w * w * w * w;
}
double G1d(double t)
{
  return ((((8.0 * t - 28.0) * t + 36.0) * t - 20.0) * t + 4.0) * t * t * t;
}
double G2d(double t)
{
  return ((((56.0 * t - 168.0) * t + 180.0) * t - 80.0) * t + 12.0) * t * t;
}
double G3d(double t)
{
  return ((((336.0 * t - 840.0) * t + 720.0) * t - 240.0) * t + 24.0) * t;
}

} // namespace

ManufacturedSolution::ManufacturedSolution(const PhysicalParams& params) : params_(params)
{
  if (params.n != 1)
    throw std::invalid_argument("ManufacturedSolution: single-network only");
  params_.validate();
  double beta_bar = 0.0;
  for (double b : params_.beta[0])
    beta_bar += params_.tau * b;
  s_ = params_.c[0] + beta_bar;
  gamma_ = params_.tau * params_.nu[0] / params_.K[0];
}

std::array<double, 2> ManufacturedSolution::u(double x, double y) const
{
  return {g0(x) * g1d(y), -g1d(x) * g0(y)};
}

std::array<double, 4> ManufacturedSolution::grad_u(double x, double y) const
{
  return {g1d(x) * g1d(y), g0(x) * g2d(y), -g2d(x) * g0(y), -g1d(x) * g1d(y)};
}

std::array<double, 6> ManufacturedSolution::hess_u(double x, double y) const
{
  return {g2d(x) * g1d(y),  g1d(x) * g2d(y),  g0(x) * g3d(y),
          -g3d(x) * g0(y), -g2d(x) * g1d(y), -g1d(x) * g2d(y)};
}

std::array<double, 2> ManufacturedSolution::v1(double x, double y) const
{
  return {G1d(x) * G0(y), G0(x) * G1d(y)};
}

std::array<double, 4> ManufacturedSolution::grad_v1(double x, double y) const
{
  return {G2d(x) * G0(y), G1d(x) * G1d(y), G1d(x) * G1d(y), G0(x) * G2d(y)};
}

double ManufacturedSolution::div_v1(double x, double y) const
{
  return G2d(x) * G0(y) + G0(x) * G2d(y);
}

std::array<double, 6> ManufacturedSolution::hess_v1(double x, double y) const
{
  return {G3d(x) * G0(y), G2d(x) * G1d(y), G1d(x) * G2d(y),
          G2d(x) * G1d(y), G1d(x) * G2d(y), G0(x) * G3d(y)};
}

double ManufacturedSolution::p1(double x, double y) const { return std::sin(pi * (x - y)); }

std::array<double, 2> ManufacturedSolution::grad_p1(double x, double y) const
{
  const double c = pi * std::cos(pi * (x - y));
  return {c, -c};
}

std::array<double, 2> ManufacturedSolution::f(double x, double y) const
{
  // Momentum operator of the discrete system: -div eps(u) - lambda grad div u.
  // div u = 0 for the stream-function ansatz, so -div eps(u) = -Laplace(u)/2
  // and the lambda term drops.
  const double lap_u1 = g2d(x) * g1d(y) + g0(x) * g3d(y);
  const double lap_u2 = -(g3d(x) * g0(y) + g1d(x) * g2d(y));
  const auto gp = grad_p1(x, y);
  const double a = params_.alpha[0];
  return {-0.5 * lap_u1 - a * gp[0], -0.5 * lap_u2 - a * gp[1]};
}

std::array<double, 2> ManufacturedSolution::r1(double x, double y) const
{
  // eps(grad phi1) is the Hessian, so div eps(v1) = grad(Laplace phi1).
  const double d1 = G3d(x) * G0(y) + G1d(x) * G2d(y);
  const double d2 = G2d(x) * G1d(y) + G0(x) * G3d(y);
  const auto vv = v1(x, y);
  const auto gp = grad_p1(x, y);
  return {-params_.nu[0] * d1 + vv[0] - params_.K[0] * gp[0],
          -params_.nu[0] * d2 + vv[1] - params_.K[0] * gp[1]};
}

double ManufacturedSolution::g1(double x, double y) const
{
  return (-s_ * p1(x, y) + params_.tau * div_v1(x, y)) / params_.tau;
}

std::array<double, 2> ManufacturedSolution::scaled_flux_rhs(double x, double y) const
{
  const double d1 = G3d(x) * G0(y) + G1d(x) * G2d(y);
  const double d2 = G2d(x) * G1d(y) + G0(x) * G3d(y);
  const auto vv = v1(x, y);
  const auto gp = grad_p1(x, y);
  const double tk = params_.tau / params_.K[0];
  return {-gamma_ * d1 + tk * vv[0] - params_.tau * gp[0],
          -gamma_ * d2 + tk * vv[1] - params_.tau * gp[1]};
}

double ManufacturedSolution::scaled_mass_rhs(double x, double y) const
{
  return -s_ * p1(x, y) + params_.tau * div_v1(x, y);
}

WeightedErrors compute_errors(const ManufacturedSolution& mms, const DerivedParams& derived,
                              const Bdm1Space& space, const P0Space&,
                              const SystemLayout& layout, const Vector& solution)
{
  const TriMesh& mesh = space.mesh();
  const PhysicalParams& pp = mms.params();
  const auto cell_rule = triangle_rule(8);
  const auto edge_rule = gauss_legendre_01(5);

  Vector u_coeff(space.dim()), v_coeff(space.dim());
  for (int k = 0; k < space.dim(); ++k) {
    u_coeff[k] = solution[layout.u_offset + k];
    v_coeff[k] = solution[layout.v_offset(0) + k];
  }

  const double lam_p = derived.lambda_mat(0, 0);
  const double lam_inv = derived.lambda_inv(0, 0);
  const double gamma = derived.gamma[0];
  const double tau_k = pp.tau / pp.K[0];

  double eu2 = 0.0, ev2 = 0.0, ep2 = 0.0;

  // Cell contributions, accumulated per cell then summed in cell order.
  std::vector<double> eu_cell(mesh.n_cells(), 0.0), ev_cell(mesh.n_cells(), 0.0),
      ep_cell(mesh.n_cells(), 0.0);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& vtx = mesh.cells[c];
    const Point p0 = mesh.vertices[vtx[0]], p1 = mesh.vertices[vtx[1]], p2 = mesh.vertices[vtx[2]];
    const auto gu_h = space.function_gradient(c, u_coeff);
    const auto gv_h = space.function_gradient(c, v_coeff);
    const double div_u_h = gu_h[0] + gu_h[3];
    const double div_v_h = gv_h[0] + gv_h[3];
    const double p_h = solution[layout.p_offset(0) + c];
    const double hT2 = mesh.cell_diameter[c] * mesh.cell_diameter[c];

    double acc_u = 0.0, acc_v = 0.0, acc_p = 0.0;
    for (const auto& q : cell_rule) {
      const double x = p0.x + q.x * (p1.x - p0.x) + q.y * (p2.x - p0.x);
      const double y = p0.y + q.x * (p1.y - p0.y) + q.y * (p2.y - p0.y);
      const double w = 2.0 * mesh.cell_area[c] * q.w;

      const auto gu = mms.grad_u(x, y);
      double grad_err_u = 0.0;
      for (int k = 0; k < 4; ++k) {
        const double d = gu[k] - gu_h[k];
        grad_err_u += d * d;
      }
      const auto hu = mms.hess_u(x, y);
      const double hess_u = hu[0] * hu[0] + 2.0 * hu[1] * hu[1] + hu[2] * hu[2] +
                            hu[3] * hu[3] + 2.0 * hu[4] * hu[4] + hu[5] * hu[5];
      const double div_err_u = 0.0 - div_u_h; // div u = 0
      acc_u += w * (grad_err_u + hT2 * hess_u + pp.lambda * div_err_u * div_err_u);

      const auto gv = mms.grad_v1(x, y);
      double grad_err_v = 0.0;
      for (int k = 0; k < 4; ++k) {
        const double d = gv[k] - gv_h[k];
        grad_err_v += d * d;
      }
      const auto hv = mms.hess_v1(x, y);
      const double hess_v = hv[0] * hv[0] + 2.0 * hv[1] * hv[1] + hv[2] * hv[2] +
                            hv[3] * hv[3] + 2.0 * hv[4] * hv[4] + hv[5] * hv[5];
      const auto vv = mms.v1(x, y);
      const auto vv_h = space.eval_function(c, v_coeff, x, y);
      const double l2_v = (vv[0] - vv_h[0]) * (vv[0] - vv_h[0]) +
                          (vv[1] - vv_h[1]) * (vv[1] - vv_h[1]);
      const double div_err_v = mms.div_v1(x, y) - div_v_h;
      acc_v += w * (gamma * (grad_err_v + hT2 * hess_v) + tau_k * l2_v +
                    pp.tau * pp.tau * lam_inv * div_err_v * div_err_v);

      const double dp = mms.p1(x, y) - p_h;
      acc_p += w * lam_p * dp * dp;
    }
    eu_cell[c] = acc_u;
    ev_cell[c] = acc_v;
    ep_cell[c] = acc_p;
  }
  for (int c = 0; c < mesh.n_cells(); ++c) {
    eu2 += eu_cell[c];
    ev2 += ev_cell[c];
    ep2 += ep_cell[c];
  }

  // Tangential jump terms over all edges (boundary edges use the trace).
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Point& n = mesh.edge_normal[e];
    const Point& pa = mesh.vertices[mesh.edges[e][0]];
    const Point& pb = mesh.vertices[mesh.edges[e][1]];
    const int c0 = mesh.edge_cells[e][0];
    const int c1 = mesh.edge_cells[e][1];

    double jump_u = 0.0, jump_v = 0.0;
    for (const auto& q : edge_rule) {
      const double x = pa.x + q.x * (pb.x - pa.x);
      const double y = pa.y + q.x * (pb.y - pa.y);
      auto tangential_sq = [&n](const std::array<double, 2>& w) {
        const double wn = w[0] * n.x + w[1] * n.y;
        const double tx = w[0] - wn * n.x;
        const double ty = w[1] - wn * n.y;
        return tx * tx + ty * ty;
      };
      const auto ue = mms.u(x, y);
      const auto ve = mms.v1(x, y);
      if (c1 >= 0) {
        const auto u0 = space.eval_function(c0, u_coeff, x, y);
        const auto u1v = space.eval_function(c1, u_coeff, x, y);
        const auto v0 = space.eval_function(c0, v_coeff, x, y);
        const auto v1v = space.eval_function(c1, v_coeff, x, y);
        jump_u += q.w * tangential_sq({u0[0] - u1v[0], u0[1] - u1v[1]});
        jump_v += q.w * tangential_sq({v0[0] - v1v[0], v0[1] - v1v[1]});
      } else {
        const auto u0 = space.eval_function(c0, u_coeff, x, y);
        const auto v0 = space.eval_function(c0, v_coeff, x, y);
        jump_u += q.w * tangential_sq({ue[0] - u0[0], ue[1] - u0[1]});
        jump_v += q.w * tangential_sq({ve[0] - v0[0], ve[1] - v0[1]});
      }
    }
    // int_e = he * sum(w q); jump term carries he^-1.
    eu2 += jump_u;
    ev2 += gamma * jump_v;
  }

  return {std::sqrt(eu2), std::sqrt(ev2), std::sqrt(ep2)};
}

} // namespace bb
