#include "bb/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bb {

namespace {

std::string fmt(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

const std::vector<std::string> grid_keys = {"lambda", "nu1", "K1",   "nu2",
                                            "K2",     "alpha2", "beta", "c2"};

bool is_grid_key(const std::string& key)
{
  for (const auto& k : grid_keys)
    if (k == key)
      return true;
  return false;
}

std::vector<double> parse_value_list(const std::string& text)
{
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty())
      out.push_back(std::stod(item));
  return out;
}

} // namespace

std::vector<double> ExperimentConfig::grid_or(const std::string& name,
                                              std::vector<double> fallback) const
{
  const auto it = grids.find(name);
  return it != grids.end() && !it->second.empty() ? it->second : fallback;
}

ExperimentConfig parse_experiment_config(const std::string& text)
{
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      continue;
    if (key == "command")
      cfg.command = val;
    else if (key == "preset")
      cfg.preset = val;
    else if (key == "min_exp")
      cfg.min_exp = std::stoi(val);
    else if (key == "levels")
      cfg.levels = std::stoi(val);
    else if (key == "mg_levels")
      cfg.mg_levels = std::stoi(val);
    else if (key == "eta")
      cfg.eta = std::stod(val);
    else if (key == "omega")
      cfg.omega = std::stod(val);
    else if (key == "rtol")
      cfg.rtol = std::stod(val);
    else if (key == "reduction")
      cfg.reduction = std::stod(val);
    else if (key == "block")
      cfg.block = val;
    else if (key == "out")
      cfg.out = val;
    else if (key == "params")
      cfg.params_file = val;
    else if (key == "import_dir")
      cfg.import_dir = val;
    else if (key == "export_matrix")
      cfg.export_matrix = val == "1" || val == "true";
    else if (key == "minres_true_residual")
      cfg.minres_true_residual = val == "1" || val == "true";
    else if (key == "div_weight")
      cfg.div_weight = val == "plain" ? DivWeight::lambda_inv : DivWeight::tau2_lambda_inv;
    else if (key == "sweep")
      cfg.sweep = val == "additive" ? PatchSweep::additive : PatchSweep::multiplicative;
    else if (is_grid_key(key))
      for (const double v : parse_value_list(val))
        cfg.grids[key].push_back(v);
    else
      throw std::invalid_argument("unknown config key: " + key);
  }
  return cfg;
}

ExperimentConfig read_experiment_config(const std::string& path)
{
  std::ifstream is(path);
  if (!is)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_experiment_config(buf.str());
}

void CsvTable::write(const std::string& path) const
{
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("cannot open " + path);
  os << to_string();
}

std::string CsvTable::to_string() const
{
  std::ostringstream os;
  for (std::size_t j = 0; j < header.size(); ++j)
    os << header[j] << (j + 1 < header.size() ? "," : "");
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j)
      os << row[j] << (j + 1 < row.size() ? "," : "");
    os << "\n";
  }
  return os.str();
}

PhysicalParams sensitivity_params(double lambda, double nu2, double K2, double alpha2,
                                  double beta, double c2)
{
  PhysicalParams p = PhysicalParams::uniform(2);
  p.lambda = lambda;
  p.nu[1] = nu2;
  p.K[1] = K2;
  p.alpha[1] = alpha2;
  p.c[1] = c2;
  p.beta[0][1] = p.beta[1][0] = beta;
  return p;
}

PhysicalParams convergence_params(double lambda, double nu1, double K1)
{
  PhysicalParams p = PhysicalParams::uniform(1);
  p.mu = 1.0;
  p.tau = 0.1;
  p.lambda = lambda;
  p.alpha[0] = 1e-3;
  p.c[0] = 1e-2;
  p.nu[0] = nu1;
  p.K[0] = K1;
  return p;
}

CsvTable run_convergence(const ExperimentConfig& cfg)
{
  CsvTable table;
  table.header = {"param_name", "param_value", "h",      "e_U",    "e_V",
                  "e_P",        "rate_U",      "rate_V", "rate_P", "status"};

  struct Sweep {
    std::string name;
    std::vector<double> values;
  };
  const std::vector<Sweep> sweeps = {
      {"lambda", cfg.grid_or("lambda", {1.0, 1e4, 1e8, 1e12})},
      {"nu1", cfg.grid_or("nu1", {1.0, 1e-3, 1e-6, 1e-9})},
      {"K1", cfg.grid_or("K1", {1.0, 1e-3, 1e-6, 1e-9})},
  };

  // Meshes and spaces are shared across the sweep.
  std::vector<TriMesh> meshes;
  std::vector<std::unique_ptr<Bdm1Space>> spaces;
  std::vector<std::unique_ptr<P0Space>> p0s;
  for (int l = 0; l < cfg.levels; ++l) {
    meshes.push_back(unit_square_mesh(1 << (cfg.min_exp + l)));
  }
  for (int l = 0; l < cfg.levels; ++l) {
    spaces.push_back(std::make_unique<Bdm1Space>(meshes[l]));
    p0s.push_back(std::make_unique<P0Space>(meshes[l]));
  }
  const BcSpec bc = bc_preset("mms");

  for (const auto& sweep : sweeps) {
    for (const double value : sweep.values) {
      PhysicalParams params = convergence_params(
          sweep.name == "lambda" ? value : 1.0, sweep.name == "nu1" ? value : 1.0,
          sweep.name == "K1" ? value : 1.0);
      WeightedErrors prev{};
      for (int l = 0; l < cfg.levels; ++l) {
        const double h = 1.0 / (1 << (cfg.min_exp + l));
        std::vector<std::string> row = {sweep.name, fmt(value), fmt(h)};
        try {
          const DerivedParams derived = derive(params);
          const ManufacturedSolution mms(params);
          const FeSystem sys =
              assemble_system(params, derived, *spaces[l], *p0s[l], bc, cfg.eta);
          Vector rhs = assemble_rhs(
              params, *spaces[l], *p0s[l],
              [&mms](double x, double y) { return mms.f(x, y); },
              {[&mms](double x, double y) { return mms.r1(x, y); }},
              {[&mms](double x, double y) { return mms.g1(x, y); }});
          for (const index_t d : sys.constrained)
            rhs[d] = 0.0;
          const Factorization lu(sys.matrix, FactorizationKind::lu);
          const Vector sol = lu.solve(rhs);
          const WeightedErrors err =
              compute_errors(mms, derived, *spaces[l], *p0s[l], sys.layout, sol);
          row.push_back(fmt(err.e_u));
          row.push_back(fmt(err.e_v));
          row.push_back(fmt(err.e_p));
          if (l > 0) {
            row.push_back(fmt(std::log2(prev.e_u / err.e_u)));
            row.push_back(fmt(std::log2(prev.e_v / err.e_v)));
            row.push_back(fmt(std::log2(prev.e_p / err.e_p)));
          } else {
            row.insert(row.end(), {"", "", ""});
          }
          row.push_back("ok");
          prev = err;
        } catch (const std::exception& ex) {
          row.resize(3);
          row.insert(row.end(), {"", "", "", "", "", ""});
          row.push_back(std::string("error: ") + ex.what());
          table.all_ok = false;
        }
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

CsvTable run_sensitivity(const ExperimentConfig& cfg)
{
  CsvTable table;
  table.header = {"lambda", "nu2",        "K2",   "alpha2",     "beta",
                  "c2",     "kappa",      "lambda_min", "lambda_max", "cond_Lambda",
                  "status"};

  const auto lambdas = cfg.grid_or("lambda", {1.0, 1e4, 1e8, 1e12});
  const auto nu2s = cfg.grid_or("nu2", {1.0, 1e-4, 1e-8});
  const auto k2s = cfg.grid_or("K2", {1.0, 1e-4, 1e-8});
  const auto alpha2s = cfg.grid_or("alpha2", {1.0, 1e-4, 1e-8});
  const auto betas = cfg.grid_or("beta", {1e-6, 1.0, 1e6});
  const auto c2s = cfg.grid_or("c2", {0.0, 1.0});

  const TriMesh mesh = unit_square_mesh(1 << cfg.min_exp);
  const Bdm1Space space(mesh);
  const P0Space p0(mesh);
  const BcSpec bc = bc_preset("sensitivity");

  for (const double lambda : lambdas)
    for (const double nu2 : nu2s)
      for (const double k2 : k2s)
        for (const double alpha2 : alpha2s)
          for (const double beta : betas)
            for (const double c2 : c2s) {
              std::vector<std::string> row = {fmt(lambda), fmt(nu2),  fmt(k2),
                                              fmt(alpha2), fmt(beta), fmt(c2)};
              try {
                const PhysicalParams params =
                    sensitivity_params(lambda, nu2, k2, alpha2, beta, c2);
                const DerivedParams derived = derive(params);
                const FeSystem sys = assemble_system(params, derived, space, p0, bc, cfg.eta);
                const BlockMatrices blocks = build_block_matrices(
                    params, derived, space, p0, bc, cfg.eta, cfg.div_weight);
                const SparseMatrix norm = block_norm_matrix(sys.layout, blocks);
                const auto free = sys.free_dofs(/*include_multipliers=*/false);
                const SolverReport rep = condition_number(sys.matrix.submatrix(free, free),
                                                          norm.submatrix(free, free));
                const auto lam_eigs = sym_eigenvalues(derived.lambda_mat);
                row.push_back(fmt(rep.condition_number));
                row.push_back(fmt(rep.lambda_min));
                row.push_back(fmt(rep.lambda_max));
                row.push_back(fmt(lam_eigs.back() / lam_eigs.front()));
                row.push_back("ok");
              } catch (const std::exception& ex) {
                row.insert(row.end(), {"", "", "", ""});
                row.push_back(std::string("error: ") + ex.what());
                table.all_ok = false;
              }
              table.rows.push_back(std::move(row));
            }
  return table;
}

MgBlockSetup make_mg_setup(int fine_exp, int levels)
{
  if (fine_exp + 1 < levels)
    throw std::invalid_argument("make_mg_setup: hierarchy would leave the unit square");
  MgBlockSetup setup;
  setup.hierarchy = build_hierarchy(unit_square_mesh(1 << (fine_exp - levels + 1)), levels);
  for (int l = 0; l < levels; ++l) {
    setup.spaces.push_back(std::make_unique<Bdm1Space>(setup.hierarchy.levels[l]));
    setup.p0s.push_back(std::make_unique<P0Space>(setup.hierarchy.levels[l]));
  }
  return setup;
}

MgApplier build_block_mg(const MgBlockSetup& setup, char which, const PhysicalParams& params,
                         const DerivedParams& derived, const BcSpec& bc, double eta,
                         DivWeight div_weight, const MgCycleSpec& spec)
{
  const int levels = static_cast<int>(setup.spaces.size());
  const int n_fields = which == 'u' ? 1 : params.n;
  std::vector<MgApplier::Level> data(levels);

  std::vector<std::vector<index_t>> constrained(levels);
  for (int l = 0; l < levels; ++l) {
    const Bdm1Space& space = *setup.spaces[l];
    BlockMatrices blocks =
        build_block_matrices(params, derived, space, *setup.p0s[l], bc, eta, div_weight);
    if (which == 'u') {
      data[l].matrix = std::move(blocks.b_u);
      constrained[l] = blocks.u_constrained;
    } else {
      data[l].matrix = std::move(blocks.b_v);
      constrained[l] = blocks.v_constrained;
    }
    data[l].constrained = constrained[l];
    data[l].patch_dofs = block_patch_dofs(setup.hierarchy.levels[l], space.dim(), n_fields,
                                          constrained[l]);
  }
  for (int l = 1; l < levels; ++l) {
    // Single-field constrained lists for the injection, then replicate.
    std::vector<index_t> cc, fc;
    for (const index_t d : constrained[l - 1])
      if (d < setup.spaces[l - 1]->dim())
        cc.push_back(d);
    for (const index_t d : constrained[l])
      if (d < setup.spaces[l]->dim())
        fc.push_back(d);
    const SparseMatrix p = bdm_prolongation(*setup.spaces[l - 1], *setup.spaces[l],
                                            setup.hierarchy.maps[l - 1], cc, fc);
    data[l].prolongation = n_fields == 1 ? p : block_diag_prolongation(p, n_fields);
  }
  return MgApplier(std::move(data), spec);
}

CoupledSolveResult solve_coupled(const FeSystem& sys, const Vector& rhs,
                                 const BlockPreconditioner& precond, double rtol, int max_iter)
{
  CoupledSolveResult out;
  Vector b = rhs;
  for (const index_t d : sys.constrained)
    b[d] = 0.0;
  out.report = minres(matrix_operator(sys.matrix),
                      [&precond](const Vector& x) { return precond.apply(x); }, b, out.solution,
                      rtol, max_iter);
  return out;
}

namespace {

Vector ones_with_bc(index_t n, const std::vector<index_t>& constrained)
{
  Vector b(n, 1.0);
  for (const index_t d : constrained)
    b[d] = 0.0;
  return b;
}

} // namespace

CsvTable run_mgstudy(const ExperimentConfig& cfg)
{
  CsvTable table;
  table.header = {"block", "mode",  "h",          "lambda",    "nu2",     "K2",
                  "beta",  "omega", "iterations", "converged", "seconds", "status"};
  const BcSpec bc = bc_preset("mg");
  MgCycleSpec uspec;
  uspec.cycle = MgCycle::f;
  uspec.levels = cfg.mg_levels;
  uspec.omega = cfg.omega;
  uspec.sweep = cfg.sweep;
  MgCycleSpec vspec = uspec;
  vspec.cycle = MgCycle::w;

  const int h_first = std::max(cfg.min_exp, cfg.mg_levels - 1);
  std::vector<int> h_exps;
  for (int l = 0; l < cfg.levels; ++l)
    h_exps.push_back(h_first + l);

  if (cfg.block == "u" || cfg.block == "all") {
    const auto lambdas = cfg.grid_or("lambda", {1.0, 1e3, 1e6, 1e9, 1e12});
    for (const int he : h_exps) {
      const MgBlockSetup setup = make_mg_setup(he, cfg.mg_levels);
      for (const double lambda : lambdas) {
        std::vector<std::string> row = {"u",  "mg", fmt(std::ldexp(1.0, -he)), fmt(lambda),
                                        "",   "",   "",
                                        fmt(cfg.omega)};
        try {
          PhysicalParams params = PhysicalParams::uniform(1);
          params.lambda = lambda;
          const DerivedParams derived = derive(params);
          const auto t0 = std::chrono::steady_clock::now();
          BlockMatrices blocks = build_block_matrices(params, derived, *setup.spaces.back(),
                                                      *setup.p0s.back(), bc, cfg.eta,
                                                      cfg.div_weight);
          const MgApplier mg =
              build_block_mg(setup, 'u', params, derived, bc, cfg.eta, cfg.div_weight, uspec);
          const double setup_s =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          const Vector b = ones_with_bc(blocks.b_u.n_rows(), blocks.u_constrained);
          Vector x;
          const SolverReport rep =
              cg(matrix_operator(blocks.b_u), [&mg](const Vector& v) { return mg.apply(v); }, b,
                 x, cfg.reduction, 400);
          row.push_back(fmt(rep.iterations));
          row.push_back(rep.converged ? "1" : "0");
          row.push_back(fmt(setup_s + rep.wall_seconds));
          row.push_back(rep.converged ? "ok" : "error: " + rep.message);
          if (!rep.converged)
            table.all_ok = false;
        } catch (const std::exception& ex) {
          row.insert(row.end(), {"", "", ""});
          row.push_back(std::string("error: ") + ex.what());
          table.all_ok = false;
        }
        table.rows.push_back(std::move(row));
      }
    }
  }

  if (cfg.block == "v" || cfg.block == "all") {
    const auto betas = cfg.grid_or("beta", {1e6, 1e-6});
    const auto k2s = cfg.grid_or("K2", {1.0, 1e-4, 1e-8});
    const auto nu2s = cfg.grid_or("nu2", {1.0, 1e-4, 1e-8});
    const auto lambdas = cfg.grid_or("lambda", {1.0, 1e4, 1e8, 1e12});
    for (const int he : h_exps) {
      const MgBlockSetup setup = make_mg_setup(he, cfg.mg_levels);
      for (const double beta : betas)
        for (const double k2 : k2s)
          for (const double nu2 : nu2s)
            for (const double lambda : lambdas) {
              std::vector<std::string> row = {"v",        "mg",     fmt(std::ldexp(1.0, -he)),
                                              fmt(lambda), fmt(nu2), fmt(k2),
                                              fmt(beta),  fmt(cfg.omega)};
              try {
                const PhysicalParams params =
                    sensitivity_params(lambda, nu2, k2, 1.0, beta, 0.0);
                const DerivedParams derived = derive(params);
                const auto t0 = std::chrono::steady_clock::now();
                BlockMatrices blocks =
                    build_block_matrices(params, derived, *setup.spaces.back(),
                                         *setup.p0s.back(), bc, cfg.eta, cfg.div_weight);
                const MgApplier mg = build_block_mg(setup, 'v', params, derived, bc, cfg.eta,
                                                    cfg.div_weight, vspec);
                const double setup_s =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                        .count();
                const Vector b = ones_with_bc(blocks.b_v.n_rows(), blocks.v_constrained);
                Vector x;
                const SolverReport rep = cg(matrix_operator(blocks.b_v),
                                            [&mg](const Vector& v) { return mg.apply(v); }, b, x,
                                            cfg.reduction, 400);
                row.push_back(fmt(rep.iterations));
                row.push_back(rep.converged ? "1" : "0");
                row.push_back(fmt(setup_s + rep.wall_seconds));
                row.push_back(rep.converged ? "ok" : "error: " + rep.message);
                if (!rep.converged)
                  table.all_ok = false;
              } catch (const std::exception& ex) {
                row.insert(row.end(), {"", "", ""});
                row.push_back(std::string("error: ") + ex.what());
                table.all_ok = false;
              }
              table.rows.push_back(std::move(row));
            }
    }
  }

  if (cfg.block == "coupled" || cfg.block == "all") {
    const auto nu2s = cfg.grid_or("nu2", {1e-9, 1e-6, 1e-3, 1.0});
    const double k2 = cfg.grid_or("K2", {1e-3}).front();
    const double beta = cfg.grid_or("beta", {1e-6}).front();
    for (const int he : h_exps) {
      const MgBlockSetup setup = make_mg_setup(he, cfg.mg_levels);
      const Bdm1Space& space = *setup.spaces.back();
      const P0Space& p0 = *setup.p0s.back();
      for (const double nu2 : nu2s)
        for (const std::string mode : {"lu", "mg"}) {
          std::vector<std::string> row = {"coupled", mode,     fmt(std::ldexp(1.0, -he)),
                                          fmt(1.0),  fmt(nu2), fmt(k2),
                                          fmt(beta), fmt(cfg.omega)};
          try {
            const PhysicalParams params = sensitivity_params(1.0, nu2, k2, 1.0, beta, 0.0);
            const DerivedParams derived = derive(params);
            const FeSystem sys = assemble_system(params, derived, space, p0, bc, cfg.eta);
            const Vector rhs = assemble_rhs(
                params, space, p0,
                [](double, double) { return std::array<double, 2>{0.0, -1.0}; },
                {[](double, double) { return std::array<double, 2>{0.0, 0.0}; },
                 [](double, double) { return std::array<double, 2>{0.0, 0.0}; }},
                {[](double, double) { return 0.0; }, [](double, double) { return 0.0; }});

            const auto t0 = std::chrono::steady_clock::now();
            BlockMatrices blocks =
                build_block_matrices(params, derived, space, p0, bc, cfg.eta, cfg.div_weight);
            std::shared_ptr<MgApplier> mg_u, mg_v;
            BlockPreconditioner precond = [&]() -> BlockPreconditioner {
              if (mode == "lu")
                return BlockPreconditioner::exact(sys.layout, blocks);
              mg_u = std::make_shared<MgApplier>(
                  build_block_mg(setup, 'u', params, derived, bc, cfg.eta, cfg.div_weight,
                                 uspec));
              mg_v = std::make_shared<MgApplier>(
                  build_block_mg(setup, 'v', params, derived, bc, cfg.eta, cfg.div_weight,
                                 vspec));
              return BlockPreconditioner(
                  sys.layout, [mg_u](const Vector& v) { return mg_u->apply(v); },
                  [mg_v](const Vector& v) { return mg_v->apply(v); },
                  exact_block_applier(blocks.b_p));
            }();
            const double setup_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const CoupledSolveResult res = solve_coupled(sys, rhs, precond, cfg.rtol, 2000);
            row.push_back(fmt(res.report.iterations));
            row.push_back(res.report.converged ? "1" : "0");
            row.push_back(fmt(setup_s + res.report.wall_seconds));
            row.push_back(res.report.converged ? "ok" : "error: " + res.report.message);
            if (!res.report.converged)
              table.all_ok = false;
          } catch (const std::exception& ex) {
            row.insert(row.end(), {"", "", ""});
            row.push_back(std::string("error: ") + ex.what());
            table.all_ok = false;
          }
          table.rows.push_back(std::move(row));
        }
    }
  }
  return table;
}

namespace {

void write_layout(const SystemLayout& layout, const std::string& path)
{
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("cannot open " + path);
  os << "n=" << layout.n_networks << "\nu_size=" << layout.u_size
     << "\np_size=" << layout.p_size << "\n";
}

SystemLayout read_layout(const std::string& path)
{
  std::ifstream is(path);
  if (!is)
    throw std::runtime_error("cannot open " + path);
  int n = 0, u_size = 0, p_size = 0;
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      continue;
    const std::string key = line.substr(0, eq);
    const int val = std::stoi(line.substr(eq + 1));
    if (key == "n")
      n = val;
    else if (key == "u_size")
      u_size = val;
    else if (key == "p_size")
      p_size = val;
  }
  return SystemLayout(n, u_size, p_size);
}

PhysicalParams params_for_preset(const ExperimentConfig& cfg)
{
  if (!cfg.params_file.empty())
    return read_params_file(cfg.params_file);
  if (cfg.preset == "mms")
    return convergence_params(1.0, 1.0, 1.0);
  return sensitivity_params(1.0, 1.0, 1e-3, 1.0, 1e-6, 0.0);
}

} // namespace

int run_solve(const ExperimentConfig& cfg)
{
  namespace fs = std::filesystem;
  const std::string out = cfg.out.empty() ? "." : cfg.out;
  fs::create_directories(out);

  if (!cfg.import_dir.empty()) {
    // Re-run a previously exported system.
    const SystemLayout layout = read_layout(cfg.import_dir + "/layout.txt");
    const SparseMatrix a = read_matrix_market_file(cfg.import_dir + "/A.mtx");
    const Vector rhs = read_vector(cfg.import_dir + "/rhs.txt");
    const SparseMatrix bu = read_matrix_market_file(cfg.import_dir + "/Bu.mtx");
    const SparseMatrix bv = read_matrix_market_file(cfg.import_dir + "/Bv.mtx");
    const SparseMatrix bp = read_matrix_market_file(cfg.import_dir + "/Bp.mtx");
    const BlockPreconditioner precond(layout, exact_block_applier(bu), exact_block_applier(bv),
                                      exact_block_applier(bp));
    Vector x;
    const SolverReport rep =
        minres(matrix_operator(a), [&precond](const Vector& v) { return precond.apply(v); },
               rhs, x, cfg.rtol, 2000, cfg.minres_true_residual);
    rep.write_history_csv(out + "/residuals.csv");
    write_vector(x, out + "/solution.txt");
    std::printf("solve: %d iterations, converged=%d\n", rep.iterations, rep.converged ? 1 : 0);
    return rep.converged ? 0 : 1;
  }

  const PhysicalParams params = params_for_preset(cfg);
  const DerivedParams derived = derive(params);
  const TriMesh mesh = unit_square_mesh(1 << cfg.min_exp);
  const Bdm1Space space(mesh);
  const P0Space p0(mesh);
  const BcSpec bc = bc_preset(cfg.preset);
  const FeSystem sys = assemble_system(params, derived, space, p0, bc, cfg.eta);

  Vector rhs;
  if (params.n == 1 && cfg.preset == "mms") {
    const ManufacturedSolution mms(params);
    rhs = assemble_rhs(
        params, space, p0, [&mms](double x, double y) { return mms.f(x, y); },
        {[&mms](double x, double y) { return mms.r1(x, y); }},
        {[&mms](double x, double y) { return mms.g1(x, y); }});
  } else {
    std::vector<VectorField> r(params.n,
                               [](double, double) { return std::array<double, 2>{0.0, 0.0}; });
    std::vector<ScalarField> g(params.n, [](double, double) { return 0.0; });
    rhs = assemble_rhs(params, space, p0,
                       [](double, double) { return std::array<double, 2>{0.0, -1.0}; }, r, g);
  }
  for (const index_t d : sys.constrained)
    rhs[d] = 0.0;

  const BlockMatrices blocks =
      build_block_matrices(params, derived, space, p0, bc, cfg.eta, cfg.div_weight);
  const BlockPreconditioner precond = BlockPreconditioner::exact(sys.layout, blocks);
  Vector x;
  const SolverReport rep =
      minres(matrix_operator(sys.matrix),
             [&precond](const Vector& v) { return precond.apply(v); }, rhs, x, cfg.rtol, 2000,
             cfg.minres_true_residual);

  const auto field = [&x](int offset, int size) {
    return Vector(x.begin() + offset, x.begin() + offset + size);
  };
  write_vector(field(sys.layout.u_offset, sys.layout.u_size), out + "/u.txt");
  for (int i = 0; i < params.n; ++i) {
    write_vector(field(sys.layout.v_offset(i), sys.layout.v_size),
                 out + "/v" + std::to_string(i + 1) + ".txt");
    write_vector(field(sys.layout.p_offset(i), sys.layout.p_size),
                 out + "/p" + std::to_string(i + 1) + ".txt");
  }
  rep.write_history_csv(out + "/residuals.csv");
  if (cfg.export_matrix) {
    write_matrix_market(sys.matrix, out + "/A.mtx", /*symmetric=*/true);
    write_vector(rhs, out + "/rhs.txt");
    write_matrix_market(blocks.b_u, out + "/Bu.mtx", true);
    write_matrix_market(blocks.b_v, out + "/Bv.mtx", true);
    write_matrix_market(blocks.b_p, out + "/Bp.mtx", true);
    write_layout(sys.layout, out + "/layout.txt");
  }
  std::printf("solve: %d iterations, converged=%d\n", rep.iterations, rep.converged ? 1 : 0);
  return rep.converged ? 0 : 1;
}

int run_export(const ExperimentConfig& cfg)
{
  ExperimentConfig c = cfg;
  c.export_matrix = true;
  return run_solve(c);
}

} // namespace bb
