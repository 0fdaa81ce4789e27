// The OpenMP kernels must produce bitwise identical results for any thread
// count; serial reference implementations are the baseline.

#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bb/experiments.hpp"

using namespace bb;

namespace {

template <typename F> auto with_threads(int n, F&& f)
{
#ifdef _OPENMP
  const int old = omp_get_max_threads();
  omp_set_num_threads(n);
  auto result = f();
  omp_set_num_threads(old);
  return result;
#else
  (void)n;
  return f();
#endif
}

} // namespace

TEST_CASE("assembly is bitwise reproducible across thread counts")
{
  PhysicalParams p = PhysicalParams::uniform(2);
  p.beta[0][1] = p.beta[1][0] = 1e-3;
  const DerivedParams d = derive(p);
  const TriMesh m = unit_square_mesh(8);
  const Bdm1Space space(m);
  const P0Space p0(m);
  const BcSpec bc = bc_preset("sensitivity");

  const auto assemble = [&] { return assemble_system(p, d, space, p0, bc, 6.0); };
  const FeSystem s1 = with_threads(1, assemble);
  const FeSystem s4 = with_threads(4, assemble);
  REQUIRE(s1.matrix.nnz() == s4.matrix.nnz());
  CHECK(s1.matrix.values() == s4.matrix.values());
  CHECK(s1.matrix.col_indices() == s4.matrix.col_indices());
}

TEST_CASE("spmv openmp path equals the serial reference bitwise")
{
  const PhysicalParams p = PhysicalParams::uniform(1);
  const DerivedParams d = derive(p);
  const TriMesh m = unit_square_mesh(6);
  const Bdm1Space space(m);
  const P0Space p0(m);
  const FeSystem sys = assemble_system(p, d, space, p0, bc_preset("mms"), 6.0);

  Vector x(sys.layout.total);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = std::sin(0.1 * static_cast<double>(i));
  const Vector serial = sys.matrix.multiply_serial(x);
  const Vector par1 = with_threads(1, [&] { return sys.matrix.multiply(x); });
  const Vector par4 = with_threads(4, [&] { return sys.matrix.multiply(x); });
  CHECK(serial == par1);
  CHECK(serial == par4);
}

TEST_CASE("additive smoother sweep is thread-count independent")
{
  const PhysicalParams p = PhysicalParams::uniform(1);
  const DerivedParams d = derive(p);
  const BcSpec bc = bc_preset("mg");
  const MgBlockSetup setup = make_mg_setup(3, 2);
  MgCycleSpec spec;
  spec.sweep = PatchSweep::additive;
  spec.omega = 0.5;
  const MgApplier mg =
      build_block_mg(setup, 'u', p, d, bc, 6.0, DivWeight::tau2_lambda_inv, spec);

  Vector b(setup.spaces.back()->dim());
  for (std::size_t i = 0; i < b.size(); ++i)
    b[i] = std::cos(0.3 * static_cast<double>(i));
  const Vector y1 = with_threads(1, [&] { return mg.apply(b); });
  const Vector y4 = with_threads(4, [&] { return mg.apply(b); });
  CHECK(y1 == y4);
}
