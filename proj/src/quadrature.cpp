#include "bb/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace bb {

std::vector<QuadPoint1d> gauss_legendre_01(int n_points)
{
  // Nodes/weights on [-1,1], then mapped to [0,1].
  std::vector<QuadPoint1d> pts;
  switch (n_points) {
  case 1:
    pts = {{0.0, 2.0}};
    break;
  case 2: {
    const double a = 1.0 / std::sqrt(3.0);
    pts = {{-a, 1.0}, {a, 1.0}};
    break;
  }
  case 3: {
    const double a = std::sqrt(3.0 / 5.0);
    pts = {{-a, 5.0 / 9.0}, {0.0, 8.0 / 9.0}, {a, 5.0 / 9.0}};
    break;
  }
  case 4: {
    const double c = 2.0 * std::sqrt(6.0 / 5.0);
    const double a = std::sqrt((3.0 - c) / 7.0);
    const double b = std::sqrt((3.0 + c) / 7.0);
    const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
    const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
    pts = {{-b, wb}, {-a, wa}, {a, wa}, {b, wb}};
    break;
  }
  case 5: {
    const double c = 2.0 * std::sqrt(10.0 / 7.0);
    const double a = std::sqrt(5.0 - c) / 3.0;
    const double b = std::sqrt(5.0 + c) / 3.0;
    const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
    const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
    pts = {{-b, wb}, {-a, wa}, {0.0, 128.0 / 225.0}, {a, wa}, {b, wb}};
    break;
  }
  default:
    throw std::invalid_argument("gauss_legendre_01: supported up to 5 points");
  }
  for (auto& p : pts) {
    p.x = 0.5 * (p.x + 1.0);
    p.w *= 0.5;
  }
  return pts;
}

std::vector<QuadPointTri> triangle_rule(int degree)
{
  // Collapsed-square (Duffy) rule: x = u, y = v(1-u). The Jacobian (1-u)
  // raises the u-degree by one, so n points per direction integrate total
  // degree 2n-2 exactly.
  int n = (degree + 3) / 2; // 2n-1 >= degree+1
  if (n < 1)
    n = 1;
  if (n > 5)
    throw std::invalid_argument("triangle_rule: degree too high");
  const auto g = gauss_legendre_01(n);
  std::vector<QuadPointTri> pts;
  pts.reserve(g.size() * g.size());
  for (const auto& pu : g)
    for (const auto& pv : g) {
      QuadPointTri q;
      q.x = pu.x;
      q.y = pv.x * (1.0 - pu.x);
      q.w = pu.w * pv.w * (1.0 - pu.x);
      pts.push_back(q);
    }
  return pts;
}

} // namespace bb
