#include <CLI11.hpp>

#include "blr/io.hpp"

namespace {

void add_common(CLI::App* cmd, blr::RunConfig& config) {
  cmd->add_option("--problem", config.problem_path, "Problem document (JSON)")
      ->required();
  cmd->add_option("--seed", config.seed, "Top-level seed for every random stream");
  cmd->add_option("--grid", config.grid.points_per_axis,
                  "Points per axis (0 = per-dimension default)");
  cmd->add_option("--chunks", config.grid.parallel_chunks,
                  "Parallel reduction chunks (fixed reduction order)");
  cmd->add_option("--out", config.out_path, "Report path (default: stdout)");
  cmd->add_option("--format", config.format, "json or csv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Regularized Brascamp-Lieb growth exponents, lattice witnesses, and "
      "multilinear Kakeya tube-overlap simulation"};
  app.require_subcommand(1);

  blr::RunConfig config;

  auto* exponent = app.add_subcommand(
      "exponent", "Exponent over the candidate subspaces, with census");
  add_common(exponent, config);
  exponent->add_option("--random-per-dim", config.random_per_dim,
                       "Random candidate subspaces per dimension");

  auto* polytope = app.add_subcommand(
      "polytope", "Feasibility-polytope membership for an exponent tuple");
  add_common(polytope, config);
  polytope->add_option("--q", config.q, "Exponent tuple to test")->required();
  polytope->add_option("--random-per-dim", config.random_per_dim,
                       "Random candidate subspaces per dimension");

  auto* stability = app.add_subcommand(
      "stability", "Exponent scan over kernel perturbations");
  add_common(stability, config);
  stability->add_option("--nu", config.nu, "Perturbation radius")->required();
  stability->add_option("--samples", config.samples, "Perturbations to draw");
  stability->add_option("--random-per-dim", config.random_per_dim,
                        "Random candidate subspaces per dimension");

  auto* witness = app.add_subcommand(
      "witness", "Extremizing lattice indicators at the exponent argmax");
  add_common(witness, config);
  witness->add_option("--R", config.R, "Truncation scale");

  auto* ratio = app.add_subcommand(
      "ratio", "Best regularized ratio over witnesses and random inputs");
  add_common(ratio, config);
  ratio->add_option("--R", config.R, "Truncation scale");
  ratio->add_option("--budget", config.budget, "Random input tuples to try");

  auto* fit = app.add_subcommand("fit", "Log-log growth-rate fit of the ratio");
  add_common(fit, config);
  fit->add_option("--R-list", config.r_list, "Strictly increasing scales")
      ->required()
      ->expected(-3);
  fit->add_option("--mode", config.mode, "witness or empirical");
  fit->add_option("--budget", config.budget, "Random tuples per scale (empirical)");

  auto* sweep = app.add_subcommand(
      "kakeya-sweep", "Tube-overlap slope against the growth-law bound");
  add_common(sweep, config);
  sweep->add_option("--delta-list", config.delta_list,
                    "Strictly increasing tube radii")
      ->required()
      ->expected(-3);
  sweep->add_option("--nu", config.nu, "Direction deviation (overrides the problem)");
  sweep->add_option("--epsilon", config.epsilon, "Loss exponent in the bound");

  auto* ledger = app.add_subcommand(
      "kakeya-ledger", "Multi-scale recursion ledger for the overlap constant");
  add_common(ledger, config);
  ledger->add_option("--delta", config.delta,
                     "Base tube radius (default: the problem's tube block)");
  ledger->add_option("--epsilon", config.epsilon, "Loss exponent of the schedule");
  ledger->add_option("--c-kappa", config.c_kappa, "Schedule constant (> 1)");
  ledger->add_option("--families", config.families, "Family tuples sampled per scale");
  ledger->add_option("--nu", config.nu, "Direction deviation (default: omega)");

  auto* basis = app.add_subcommand(
      "basis", "Greedy basis selection with the step-dimension table");
  add_common(basis, config);
  basis->add_option("--trials", config.trials, "Unit vectors sampled per step");

  CLI11_PARSE(app, argc, argv);

  if (exponent->parsed()) config.command = blr::Command::kExponent;
  if (polytope->parsed()) config.command = blr::Command::kPolytope;
  if (stability->parsed()) config.command = blr::Command::kStability;
  if (witness->parsed()) config.command = blr::Command::kWitness;
  if (ratio->parsed()) config.command = blr::Command::kRatio;
  if (fit->parsed()) config.command = blr::Command::kFit;
  if (sweep->parsed()) config.command = blr::Command::kKakeyaSweep;
  if (ledger->parsed()) config.command = blr::Command::kKakeyaLedger;
  if (basis->parsed()) config.command = blr::Command::kBasis;

  return blr::run(config);
}
