#ifndef BB_MMS_HPP
#define BB_MMS_HPP

#include <array>

#include "bb/assembly.hpp"
#include "bb/params.hpp"
#include "bb/spaces.hpp"

namespace bb {

/// Closed-form single-network solution on the unit square:
///   u  = curl(x^2 (x-1)^2 y^2 (y-1)^2)
///   v1 = grad(x^4 (x-1)^4 y^4 (y-1)^4)
///   p1 = sin(pi (x - y))
/// u and v1 vanish on the boundary together with the traces entering the
/// weak forms, so all essential conditions are homogeneous.
class ManufacturedSolution {
public:
  explicit ManufacturedSolution(const PhysicalParams& params);

  const PhysicalParams& params() const { return params_; }

  std::array<double, 2> u(double x, double y) const;
  std::array<double, 4> grad_u(double x, double y) const;      // row-major 2x2
  double div_u(double, double) const { return 0.0; }
  std::array<double, 6> hess_u(double x, double y) const;      // u1_xx,u1_xy,u1_yy,u2_xx,u2_xy,u2_yy

  std::array<double, 2> v1(double x, double y) const;
  std::array<double, 4> grad_v1(double x, double y) const;
  double div_v1(double x, double y) const;
  std::array<double, 6> hess_v1(double x, double y) const;

  double p1(double x, double y) const;
  std::array<double, 2> grad_p1(double x, double y) const;

  /// Momentum right-hand side f = -div(eps(u)) - lambda grad(div u)
  /// - alpha grad p1, matching the assembled momentum block.
  std::array<double, 2> f(double x, double y) const;
  /// Unscaled flux data r1 = -nu div(eps(v1)) + v1 - K grad p1.
  std::array<double, 2> r1(double x, double y) const;
  /// Unscaled mass source g1 with -s p1 + alpha div u + tau div v1 = tau g1.
  double g1(double x, double y) const;

  /// Flux row of the rescaled system: tau K^-1 r1.
  std::array<double, 2> scaled_flux_rhs(double x, double y) const;
  /// Mass row of the rescaled system: tau g1.
  double scaled_mass_rhs(double x, double y) const;

private:
  PhysicalParams params_;
  double s_ = 0.0;     // c1 for a single network
  double gamma_ = 0.0; // tau nu1 / K1
};

struct WeightedErrors {
  double e_u = 0.0;
  double e_v = 0.0;
  double e_p = 0.0;
};

/// Errors of a solved coefficient vector in the parameter-weighted norms:
/// DG norm with h_T-weighted second derivatives plus lambda-weighted
/// divergence for u; DG/mass/weighted-Div combination for the flux; the
/// Lambda-weighted L2 norm for the pressure. Degree-8 quadrature.
WeightedErrors compute_errors(const ManufacturedSolution& mms, const DerivedParams& derived,
                              const Bdm1Space& space, const P0Space& p_space,
                              const SystemLayout& layout, const Vector& solution);

} // namespace bb

#endif
