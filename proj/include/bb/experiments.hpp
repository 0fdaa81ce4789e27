#ifndef BB_EXPERIMENTS_HPP
#define BB_EXPERIMENTS_HPP

#include <map>
#include <string>
#include <vector>

#include "bb/mg.hpp"
#include "bb/mms.hpp"
#include "bb/precond.hpp"
#include "bb/solvers.hpp"

namespace bb {

struct ExperimentConfig {
  std::string command;
  std::string preset = "mms"; // mms | sensitivity | mg
  int min_exp = 2;            // coarsest mesh is 2^-min_exp
  int levels = 4;             // number of mesh levels in sweeps
  int mg_levels = 3;
  double eta = 6.0;
  double omega = 0.75;
  double rtol = 1e-9;     // MinRes relative tolerance
  double reduction = 1e8; // CG preconditioned-residual reduction
  std::string block = "coupled";
  std::string out;        // CSV path or output directory
  std::string params_file;
  std::string import_dir; // solve from exported matrices
  bool export_matrix = false;
  bool minres_true_residual = false; // stop on the unpreconditioned residual
  DivWeight div_weight = DivWeight::tau2_lambda_inv;
  PatchSweep sweep = PatchSweep::multiplicative;
  std::map<std::string, std::vector<double>> grids;

  std::vector<double> grid_or(const std::string& name, std::vector<double> fallback) const;
};

/// key=value experiment file; grid parameters accumulate over repeated keys.
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig read_experiment_config(const std::string& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  bool all_ok = true;

  void write(const std::string& path) const;
  std::string to_string() const;
};

/// Convergence-rate study for the single-network manufactured solution.
CsvTable run_convergence(const ExperimentConfig& config);

/// Condition numbers of the preconditioned two-network operator over the
/// sensitivity parameter grid.
CsvTable run_sensitivity(const ExperimentConfig& config);

/// Multigrid studies: CG on the displacement/flux blocks and coupled MinRes
/// with exact and multigrid preconditioners.
CsvTable run_mgstudy(const ExperimentConfig& config);

/// One coupled solve; writes per-field coefficients and the solver report.
int run_solve(const ExperimentConfig& config);

/// Export the assembled system and preconditioner blocks.
int run_export(const ExperimentConfig& config);

// Building blocks shared with the test suites.

/// Two-network parameter set of the sensitivity and multigrid studies:
/// network 1 fixed at unity, mu = tau = 1.
PhysicalParams sensitivity_params(double lambda, double nu2, double K2, double alpha2,
                                  double beta, double c2);

/// Convergence-study parameters: mu=1, tau=0.1, alpha=1e-3, c=1e-2.
PhysicalParams convergence_params(double lambda, double nu1, double K1);

struct MgBlockSetup {
  MeshHierarchy hierarchy;
  std::vector<std::unique_ptr<Bdm1Space>> spaces;
  std::vector<std::unique_ptr<P0Space>> p0s;
};

/// Nested meshes and spaces with the finest mesh at 2^-fine_exp.
MgBlockSetup make_mg_setup(int fine_exp, int levels);

/// Multigrid cycle for the displacement or flux block ('u' or 'v').
MgApplier build_block_mg(const MgBlockSetup& setup, char which, const PhysicalParams& params,
                         const DerivedParams& derived, const BcSpec& bc, double eta,
                         DivWeight div_weight, const MgCycleSpec& spec);

/// Residual-reduction MinRes on an assembled system with the block
/// preconditioner; reports iterations and preconditioner setup+solve time.
struct CoupledSolveResult {
  SolverReport report;
  double setup_seconds = 0.0;
  Vector solution;
};

CoupledSolveResult solve_coupled(const FeSystem& sys, const Vector& rhs,
                                 const BlockPreconditioner& precond, double rtol, int max_iter);

} // namespace bb

#endif
