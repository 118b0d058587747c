#include "cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

using namespace permatch::cli;

void add_family_options(CLI::App* cmd, FamilyOptions& f) {
  cmd->add_option("--family", f.family, "dirichlet | normalized_stable | pitman_yor | gnedin")
      ->capture_default_str();
  cmd->add_option("--theta", f.theta, "concentration")->capture_default_str();
  cmd->add_option("--discount", f.discount, "discount in (0, 1)")->capture_default_str();
  cmd->add_option("--gamma", f.gamma, "Gnedin parameter in (0, 1)")->capture_default_str();
}

void add_format_option(CLI::App* cmd, permatch::GraphFormat& format) {
  static const std::map<std::string, permatch::GraphFormat> names{
      {"auto", permatch::GraphFormat::automatic},
      {"dense", permatch::GraphFormat::dense},
      {"edges", permatch::GraphFormat::edges}};
  cmd->add_option("--format", format, "graph file format: auto | dense | edges")
      ->transform(CLI::CheckedTransformer(names));
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian graph matching with exchangeable permutation priors"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "simulate a pair of noisy graphs");
  simulate->add_option("--scenario", sim.scenario, "planted | two-cycle | mixed | prior")
      ->capture_default_str();
  simulate->add_option("--n", sim.n, "number of nodes")->capture_default_str();
  simulate->add_option("--blocks", sim.blocks, "planted block count")->capture_default_str();
  simulate->add_option("--p-in", sim.p_in, "within-block edge probability")->capture_default_str();
  simulate->add_option("--p-out", sim.p_out, "between-block edge probability")
      ->capture_default_str();
  simulate->add_option("--alpha", sim.alpha, "false-positive rate")->capture_default_str();
  simulate->add_option("--beta", sim.beta, "false-negative rate")->capture_default_str();
  simulate->add_option("--a-xi", sim.a_xi, "block probability prior (prior scenario)");
  simulate->add_option("--b-xi", sim.b_xi, "block probability prior (prior scenario)");
  add_family_options(simulate, sim.prior);
  simulate->add_option("--seed", sim.seed)->capture_default_str();
  simulate->add_option("--out", sim.out, "output directory")->required();

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "run the Gibbs sampler");
  fit_cmd->add_option("--graph1", fit.graph1)->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--graph2", fit.graph2)->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--config", fit.config, "key = value sampler settings")
      ->check(CLI::ExistingFile);
  fit_cmd->add_option("--seed", fit.seed, "overrides the config seed");
  fit_cmd->add_option("--chains", fit.chains, "independent chains with derived seeds")
      ->capture_default_str();
  fit_cmd->add_option("--nodes", fit.nodes, "node count for edge lists");
  add_format_option(fit_cmd, fit.format);
  fit_cmd->add_option("--out", fit.out, "run directory")->required();

  SummarizeOptions sum;
  auto* summarize = app.add_subcommand("summarize", "point estimate and report from draws");
  summarize->add_option("--draws", sum.draws)->required()->check(CLI::ExistingFile);
  summarize->add_option("--out", sum.out, "point estimate file")->required();
  summarize->add_option("--report", sum.report, "report CSV");
  summarize->add_option("--truth", sum.truth, "true permutation")->check(CLI::ExistingFile);
  summarize->add_option("--graph1", sum.graph1)->check(CLI::ExistingFile);
  summarize->add_option("--graph2", sum.graph2)->check(CLI::ExistingFile);
  summarize->add_option("--parent-draws", sum.parent_draws)->check(CLI::ExistingFile);
  summarize->add_option("--true-parent", sum.true_parent)->check(CLI::ExistingFile);
  summarize->add_option("--z-hat", sum.z_hat, "cycle partition for --fast")
      ->check(CLI::ExistingFile);
  summarize->add_flag("--fast", sum.fast, "restrict the search to one cycle partition");
  summarize->add_flag("!--no-early-stop", sum.early_stopping, "evaluate every draw in full");
  summarize->add_option("--seed", sum.seed)->capture_default_str();
  summarize->add_option("--zeal", sum.n_zeal, "zealous updates per restart")
      ->capture_default_str();
  summarize->add_option("--runs", sum.n_runs, "random restarts")->capture_default_str();
  add_format_option(summarize, sum.format);

  DiagnoseOptions diag;
  auto* diagnose = app.add_subcommand("diagnose", "trace and mapping-frequency CSVs");
  diagnose->add_option("--archive", diag.archive, "run directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  diagnose->add_option("--out", diag.out, "output directory")->required();

  OracleOptions orc;
  auto* oracle = app.add_subcommand("oracle", "exact tables by enumeration");
  oracle->add_option("table", orc.table, "prior | posterior | cayley")->required();
  oracle->add_option("--n", orc.n)->capture_default_str();
  add_family_options(oracle, orc.prior);
  oracle->add_option("--graph1", orc.graph1)->check(CLI::ExistingFile);
  oracle->add_option("--graph2", orc.graph2)->check(CLI::ExistingFile);
  oracle->add_option("--config", orc.config)->check(CLI::ExistingFile);
  oracle->add_option("--out", orc.out, "output CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    std::string note;
    if (*simulate)
      note = cmd_simulate(sim);
    else if (*fit_cmd)
      note = cmd_fit(fit);
    else if (*summarize)
      note = cmd_summarize(sum);
    else if (*diagnose)
      note = cmd_diagnose(diag);
    else
      note = cmd_oracle(orc);
    std::cout << note << '\n';
  } catch (const std::exception& e) {
    std::cerr << "permatch: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
