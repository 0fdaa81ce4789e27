// Benchmark of the OpenMP kernels against their serial reference
// implementations: CSR matrix-vector products, system assembly and one
// smoother sweep of the multigrid hierarchy.

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>

#include "bb/assembly.hpp"
#include "bb/experiments.hpp"
#include "bb/mg.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F> double time_best_of(int reps, F&& f)
{
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, seconds_since(t0));
  }
  return best;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"serial vs OpenMP kernel benchmark"};
  int min_exp = 6;
  int reps = 5;
  int threads = 0;
  app.add_option("--min-exp", min_exp, "mesh is 2^-min_exp");
  app.add_option("--reps", reps, "repetitions, best time reported");
  app.add_option("--threads", threads, "OpenMP thread count (0 = default)");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (threads > 0)
    omp_set_num_threads(threads);
  std::printf("openmp: max %d threads\n", omp_get_max_threads());
#else
  std::printf("openmp: disabled at build time\n");
#endif

  const bb::PhysicalParams params = bb::sensitivity_params(1.0, 1e-3, 1e-3, 1.0, 1e-6, 0.0);
  const bb::DerivedParams derived = bb::derive(params);
  const bb::BcSpec bc = bb::bc_preset("mg");
  const bb::TriMesh mesh = bb::unit_square_mesh(1 << min_exp);
  const bb::Bdm1Space space(mesh);
  const bb::P0Space p0(mesh);

  std::printf("mesh: %d cells, %d edges\n", mesh.n_cells(), mesh.n_edges());

  const auto t_asm = time_best_of(
      reps, [&] { (void)bb::assemble_system(params, derived, space, p0, bc, 10.0); });
  std::printf("assemble_system        %10.4f s (parallel cell/facet loops)\n", t_asm);

  const bb::FeSystem sys = bb::assemble_system(params, derived, space, p0, bc, 10.0);
  bb::Vector x(sys.layout.total);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = 1.0 / (1.0 + static_cast<double>(i % 97));

  bb::Vector y_serial, y_parallel;
  const auto t_serial =
      time_best_of(reps, [&] { y_serial = sys.matrix.multiply_serial(x); });
  const auto t_parallel = time_best_of(reps, [&] { y_parallel = sys.matrix.multiply(x); });
  bool identical = y_serial.size() == y_parallel.size();
  for (std::size_t i = 0; identical && i < y_serial.size(); ++i)
    identical = y_serial[i] == y_parallel[i];
  std::printf("spmv serial            %10.4f s\n", t_serial);
  std::printf("spmv openmp            %10.4f s   speedup %.2fx, bitwise equal: %s\n",
              t_parallel, t_serial / t_parallel, identical ? "yes" : "NO");

  const bb::MgBlockSetup setup = bb::make_mg_setup(min_exp, 3);
  bb::MgCycleSpec spec;
  const bb::MgApplier mg =
      bb::build_block_mg(setup, 'u', params, derived, bc, 10.0, bb::DivWeight::tau2_lambda_inv,
                         spec);
  bb::Vector r(space.dim(), 1.0);
  const auto t_cycle = time_best_of(reps, [&] { (void)mg.apply(r); });
  std::printf("mg F(2,2) cycle        %10.4f s (parallel patch solves)\n", t_cycle);
  return 0;
}
