#include <CLI11.hpp>

#include <iostream>

#include "hbvm/cli.hpp"

namespace {

// --h is an option here, so help must not claim -h.
void add_run_options(CLI::App* cmd, hbvm::RunSpec& spec, bool ladder) {
  cmd->set_help_flag("--help", "print this help message");
  cmd->add_option("--problem", spec.problem, "problem name (see list-problems)")
      ->required();
  cmd->add_option("--k", spec.node_count, "quadrature node count")->required();
  cmd->add_option("--s", spec.basis_size, "polynomial count")->required();
  if (!ladder) cmd->add_option("--h", spec.h, "stepsize");
  cmd->add_option("--steps", spec.steps,
                  ladder ? "steps at the coarsest level" : "number of steps");
  cmd->add_option("--periods", spec.periods, "horizon in problem periods");
  if (ladder) {
    cmd->add_option("--levels", spec.levels, "number of ladder levels");
    cmd->add_option("--h0", spec.h0, "coarsest stepsize of a halving ladder");
  }
  cmd->add_option("--out", spec.out_path, "CSV output path (default stdout)");
  cmd->add_option("--fp-tol", spec.fp_tol, "fixed-point tolerance");
  cmd->add_option("--fp-max-iters", spec.fp_max_iters, "fixed-point sweep limit");
  cmd->add_flag("--full-precision", spec.full_precision, "emit 17 significant digits");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy- and constraint-conserving integrators for separable "
               "Hamiltonian systems with holonomic constraints"};
  app.set_help_flag("--help", "print this help message");
  app.require_subcommand(1);

  CLI::App* list = app.add_subcommand("list-problems", "list the built-in problems");
  list->set_help_flag("--help", "print this help message");

  hbvm::RunSpec integrate_spec;
  CLI::App* run = app.add_subcommand("integrate", "integrate one run, emit trajectory CSV");
  add_run_options(run, integrate_spec, /*ladder=*/false);

  hbvm::RunSpec converge_spec;
  CLI::App* converge =
      app.add_subcommand("converge", "run a stepsize ladder, emit an error table");
  add_run_options(converge, converge_spec, /*ladder=*/true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return hbvm::kExitUsage;
  }

  if (list->parsed()) return hbvm::cmd_list_problems(std::cout);
  if (run->parsed()) return hbvm::cmd_integrate(integrate_spec, std::cout, std::cerr);
  return hbvm::cmd_converge(converge_spec, std::cout, std::cerr);
}
