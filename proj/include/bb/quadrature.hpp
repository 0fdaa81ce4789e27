#ifndef BB_QUADRATURE_HPP
#define BB_QUADRATURE_HPP

#include <array>
#include <vector>

namespace bb {

struct QuadPoint1d {
  double x;
  double w;
};

/// Gauss-Legendre rule on [0,1], exact for polynomials of degree 2n-1.
/// Nodes in closed form for n <= 5.
std::vector<QuadPoint1d> gauss_legendre_01(int n_points);

struct QuadPointTri {
  double x; // reference coordinates on the unit triangle
  double y;
  double w; // weights sum to 1/2 (reference area)
};

/// Rule on the reference triangle {(x,y): x,y >= 0, x+y <= 1}, exact for
/// total degree <= degree. Built by collapsing a tensor Gauss rule.
std::vector<QuadPointTri> triangle_rule(int degree);

} // namespace bb

#endif
