#include <doctest.h>

#include "bb/mms.hpp"
#include "bb/quadrature.hpp"
#include "bb/spaces.hpp"
#include "oracle_utils.hpp"

using namespace bb;

TEST_CASE("quadrature rules are exact for monomials")
{
  // reference integral of x^a y^b equals a! b! / (a+b+2)!
  auto exact = [](int a, int b) {
    auto fact = [](int k) {
      double f = 1.0;
      for (int i = 2; i <= k; ++i)
        f *= i;
      return f;
    };
    return fact(a) * fact(b) / fact(a + b + 2);
  };
  for (const int degree : {2, 4, 6, 8}) {
    const auto rule = triangle_rule(degree);
    for (int a = 0; a + 0 <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b) {
        double acc = 0.0;
        for (const auto& q : rule)
          acc += q.w * std::pow(q.x, a) * std::pow(q.y, b);
        CHECK(acc == doctest::Approx(exact(a, b)).epsilon(1e-13));
      }
  }
  for (const int n : {1, 2, 3, 4, 5}) {
    const auto rule = gauss_legendre_01(n);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double acc = 0.0;
      for (const auto& q : rule)
        acc += q.w * std::pow(q.x, d);
      CHECK(acc == doctest::Approx(1.0 / (d + 1)).epsilon(1e-14));
    }
  }
}

TEST_CASE("bdm1 dimension and divergence of interpolants")
{
  const TriMesh m1 = unit_square_mesh(1);
  const Bdm1Space space(m1);
  CHECK(space.dim() == 10);

  const Vector c_const = space.interpolate([](double, double) {
    return std::array<double, 2>{1.0, 0.0};
  });
  for (int c = 0; c < m1.n_cells(); ++c)
    CHECK(space.function_divergence(c, c_const) == doctest::Approx(0.0).epsilon(1e-13));

  const Vector c_lin = space.interpolate([](double x, double y) {
    return std::array<double, 2>{x, y};
  });
  for (int c = 0; c < m1.n_cells(); ++c)
    CHECK(space.function_divergence(c, c_lin) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("linear fields are reproduced exactly")
{
  const TriMesh m = unit_square_mesh(3);
  const Bdm1Space space(m);
  const double a11 = 0.3, a12 = -1.2, a21 = 0.8, a22 = 0.5, b1 = 0.1, b2 = -0.7;
  const auto field = [=](double x, double y) {
    return std::array<double, 2>{a11 * x + a12 * y + b1, a21 * x + a22 * y + b2};
  };
  const Vector coeffs = space.interpolate(field);
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto& vtx = m.cells[c];
    const double sx = (m.vertices[vtx[0]].x + m.vertices[vtx[1]].x + m.vertices[vtx[2]].x) / 3.0;
    const double sy = (m.vertices[vtx[0]].y + m.vertices[vtx[1]].y + m.vertices[vtx[2]].y) / 3.0;
    const auto val = space.eval_function(c, coeffs, sx, sy);
    const auto ref = field(sx, sy);
    CHECK(val[0] == doctest::Approx(ref[0]).epsilon(1e-13));
    CHECK(val[1] == doctest::Approx(ref[1]).epsilon(1e-13));
  }

  const Vector zero = space.interpolate([](double, double) {
    return std::array<double, 2>{0.0, 0.0};
  });
  for (double v : zero)
    CHECK(v == 0.0);
}

TEST_CASE("dual pairing of the mapped basis is the Kronecker delta")
{
  const TriMesh m = unit_square_mesh(2);
  const Bdm1Space space(m);
  // independent 5-point quadrature of the edge moments
  const auto rule = gauss_legendre_01(5);
  for (int c = 0; c < m.n_cells(); ++c)
    for (int k = 0; k < 3; ++k) {
      const int e = m.cell_edges[c][k];
      const Point& a = m.vertices[m.edges[e][0]];
      const Point& b = m.vertices[m.edges[e][1]];
      for (int i = 0; i < 6; ++i)
        for (int mom = 0; mom < 2; ++mom) {
          double acc = 0.0;
          for (const auto& q : rule) {
            const double x = a.x + q.x * (b.x - a.x);
            const double y = a.y + q.x * (b.y - a.y);
            const auto phi = space.eval_basis(c, i, x, y);
            const double pn = phi[0] * m.edge_normal[e].x + phi[1] * m.edge_normal[e].y;
            acc += q.w * pn * (mom == 0 ? 1.0 : q.x);
          }
          const double expected = (2 * k + mom == i) ? 1.0 : 0.0;
          CHECK(acc == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("normal traces of the interpolated flux are single valued")
{
  const TriMesh m = unit_square_mesh(8);
  const Bdm1Space space(m);
  const ManufacturedSolution mms(PhysicalParams::uniform(1));
  const Vector coeffs = space.interpolate([&mms](double x, double y) { return mms.v1(x, y); });

  const auto rule = gauss_legendre_01(3);
  for (int e = 0; e < m.n_edges(); ++e) {
    if (m.edge_on_boundary[e])
      continue;
    const Point& a = m.vertices[m.edges[e][0]];
    const Point& b = m.vertices[m.edges[e][1]];
    const int c0 = m.edge_cells[e][0], c1 = m.edge_cells[e][1];
    for (const auto& q : rule) {
      const double x = a.x + q.x * (b.x - a.x);
      const double y = a.y + q.x * (b.y - a.y);
      const auto v0 = space.eval_function(c0, coeffs, x, y);
      const auto v1 = space.eval_function(c1, coeffs, x, y);
      const double jump = (v0[0] - v1[0]) * m.edge_normal[e].x +
                          (v0[1] - v1[1]) * m.edge_normal[e].y;
      CHECK(std::abs(jump) <= 1e-12);
    }
  }
}

TEST_CASE("commuting property: div of the interpolant is the cell average of div")
{
  const TriMesh m = unit_square_mesh(4);
  const Bdm1Space space(m);
  const P0Space p0(m);
  const auto field = [](double x, double y) {
    return std::array<double, 2>{std::sin(x) * std::cos(y), x * x * y};
  };
  const auto div_field = [](double x, double y) { return std::cos(x) * std::cos(y) + x * x; };
  const Vector coeffs = space.interpolate(field);
  const Vector avg = p0.interpolate_cell_averages(div_field);
  for (int c = 0; c < m.n_cells(); ++c)
    CHECK(space.function_divergence(c, coeffs) == doctest::Approx(avg[c]).epsilon(1e-10));
}

TEST_CASE("boundary dof sets")
{
  const TriMesh m1 = unit_square_mesh(1);
  const Bdm1Space s1(m1);
  const std::set<BoundarySegment> all = {BoundarySegment::left, BoundarySegment::right,
                                         BoundarySegment::bottom, BoundarySegment::top};
  CHECK(s1.boundary_dofs(all).size() == 8);

  const TriMesh m2 = unit_square_mesh(2);
  const Bdm1Space s2(m2);
  const auto lr = s2.boundary_dofs({BoundarySegment::left, BoundarySegment::right});
  // oracle: enumerate boundary edges with both endpoints at x=0 or x=1
  std::size_t expected = 0;
  for (int e = 0; e < m2.n_edges(); ++e) {
    if (!m2.edge_on_boundary[e])
      continue;
    const Point& a = m2.vertices[m2.edges[e][0]];
    const Point& b = m2.vertices[m2.edges[e][1]];
    if ((a.x == 0.0 && b.x == 0.0) || (a.x == 1.0 && b.x == 1.0))
      expected += 2;
  }
  CHECK(lr.size() == expected);
  CHECK(lr.size() == 8);

  CHECK(s2.boundary_dofs({}).empty());
}

TEST_CASE("system layout ranges are contiguous and exhaustive")
{
  const SystemLayout layout(2, 40, 16);
  CHECK(layout.total == 40 + 2 * 40 + 2 * 16 + 2);
  CHECK(layout.v_offset(0) == 40);
  CHECK(layout.v_offset(1) == 80);
  CHECK(layout.p_offset(0) == 120);
  CHECK(layout.p_offset(1) == 136);
  CHECK(layout.multiplier_offset(0) == 152);
  CHECK(layout.multiplier_offset(1) == 153);
}
