#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "bb/experiments.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string out;
  std::string preset;
  std::string block;
  std::string params_file;
  std::string import_dir;
  std::vector<std::string> grid_specs;
  int min_exp = -1;
  int levels = -1;
  int mg_levels = -1;
  double eta = -1.0;
  double omega = -1.0;
  double rtol = -1.0;
  double reduction = -1.0;
  bool export_matrix = false;
  bool true_residual = false;
  std::string div_weight;
  std::string sweep;
};

void add_common(CLI::App* cmd, CliOptions& opt)
{
  cmd->add_option("config", opt.config_path, "key=value experiment config file");
  cmd->add_option("--out", opt.out, "output CSV file or directory");
  cmd->add_option("--min-exp", opt.min_exp, "coarsest mesh is 2^-min_exp");
  cmd->add_option("--levels", opt.levels, "number of mesh levels");
  cmd->add_option("--mg-levels", opt.mg_levels, "grid levels per multigrid cycle");
  cmd->add_option("--eta", opt.eta, "interior penalty parameter");
  cmd->add_option("--omega", opt.omega, "Richardson damping of the patch smoother");
  cmd->add_option("--rtol", opt.rtol, "MinRes relative tolerance");
  cmd->add_option("--reduction", opt.reduction, "CG preconditioned-residual reduction");
  cmd->add_option("--preset", opt.preset, "boundary condition preset: mms|sensitivity|mg");
  cmd->add_option("--params", opt.params_file, "physical parameter file (key=value)");
  cmd->add_option("--grid", opt.grid_specs, "sweep override, e.g. --grid lambda=1,1e4,1e8")
      ->take_all();
  cmd->add_option("--div-weight", opt.div_weight,
                  "flux-block (Div,Div) weight: tau2 (default) or plain");
  cmd->add_option("--sweep", opt.sweep, "patch sweep: multiplicative (default) or additive");
  cmd->add_flag("--true-residual", opt.true_residual,
                "stop MinRes on the unpreconditioned residual");
}

bb::ExperimentConfig make_config(const CliOptions& opt, const std::string& command)
{
  bb::ExperimentConfig cfg;
  if (!opt.config_path.empty())
    cfg = bb::read_experiment_config(opt.config_path);
  cfg.command = command;
  if (!opt.out.empty())
    cfg.out = opt.out;
  if (!opt.preset.empty())
    cfg.preset = opt.preset;
  if (!opt.block.empty())
    cfg.block = opt.block;
  if (!opt.params_file.empty())
    cfg.params_file = opt.params_file;
  if (!opt.import_dir.empty())
    cfg.import_dir = opt.import_dir;
  if (opt.min_exp >= 0)
    cfg.min_exp = opt.min_exp;
  if (opt.levels >= 0)
    cfg.levels = opt.levels;
  if (opt.mg_levels >= 0)
    cfg.mg_levels = opt.mg_levels;
  if (opt.eta > 0)
    cfg.eta = opt.eta;
  if (opt.omega > 0)
    cfg.omega = opt.omega;
  if (opt.rtol > 0)
    cfg.rtol = opt.rtol;
  if (opt.reduction > 0)
    cfg.reduction = opt.reduction;
  if (opt.export_matrix)
    cfg.export_matrix = true;
  if (opt.true_residual)
    cfg.minres_true_residual = true;
  if (!opt.div_weight.empty())
    cfg.div_weight =
        opt.div_weight == "plain" ? bb::DivWeight::lambda_inv : bb::DivWeight::tau2_lambda_inv;
  if (!opt.sweep.empty())
    cfg.sweep = opt.sweep == "additive" ? bb::PatchSweep::additive : bb::PatchSweep::multiplicative;
  for (const auto& spec : opt.grid_specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--grid expects name=v1,v2,...");
    const std::string name = spec.substr(0, eq);
    cfg.grids[name].clear();
    std::stringstream ss(spec.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty())
        cfg.grids[name].push_back(std::stod(item));
  }
  return cfg;
}

int emit_table(const bb::CsvTable& table, const std::string& out)
{
  if (out.empty())
    std::fputs(table.to_string().c_str(), stdout);
  else
    table.write(out);
  return table.all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Biot-Brinkman finite element laboratory"};
  app.require_subcommand(1);

  CliOptions opt;
  auto* conv = app.add_subcommand("convergence", "manufactured-solution convergence study");
  add_common(conv, opt);
  auto* sens = app.add_subcommand("sensitivity", "preconditioned condition-number study");
  add_common(sens, opt);
  auto* mg = app.add_subcommand("mgstudy", "multigrid block and coupled solver study");
  add_common(mg, opt);
  mg->add_option("--block", opt.block, "u | v | coupled | all");
  auto* solve = app.add_subcommand("solve", "assemble and solve one system");
  add_common(solve, opt);
  solve->add_flag("--export-matrix", opt.export_matrix, "also write system matrices");
  solve->add_option("--from-dir", opt.import_dir, "solve a previously exported system");
  auto* exp = app.add_subcommand("export", "write the assembled system to Matrix Market files");
  add_common(exp, opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (conv->parsed())
      return emit_table(bb::run_convergence(make_config(opt, "convergence")),
                        make_config(opt, "convergence").out);
    if (sens->parsed())
      return emit_table(bb::run_sensitivity(make_config(opt, "sensitivity")),
                        make_config(opt, "sensitivity").out);
    if (mg->parsed())
      return emit_table(bb::run_mgstudy(make_config(opt, "mgstudy")),
                        make_config(opt, "mgstudy").out);
    if (solve->parsed())
      return bb::run_solve(make_config(opt, "solve"));
    if (exp->parsed())
      return bb::run_export(make_config(opt, "export"));
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
  return 0;
}
