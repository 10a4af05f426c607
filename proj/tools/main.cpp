#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cavityflow/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Steady incompressible Navier-Stokes cavity solver (Taylor-Hood P2/P1)"};
  app.require_subcommand(1);

  std::string solve_config, continue_config, sweep_config, mesh_target;

  auto* solve = app.add_subcommand("solve", "single stationary solve from a config file");
  solve->add_option("config", solve_config, "JSON config path")->required();

  auto* cont = app.add_subcommand("continue", "Reynolds continuation (schedule or bisection)");
  cont->add_option("config", continue_config, "JSON config path")->required();

  auto* sweep = app.add_subcommand("sweep", "relaxation-parameter sweep");
  sweep->add_option("config", sweep_config, "JSON config path")->required();

  auto* info = app.add_subcommand("mesh-info", "mesh statistics");
  info->add_option("target", mesh_target, "square:M, semi_ellipse:M, or an MSH file path")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (solve->parsed()) return cavityflow::cmd_solve(solve_config, std::cout);
  if (cont->parsed()) return cavityflow::cmd_continue(continue_config, std::cout);
  if (sweep->parsed()) return cavityflow::cmd_sweep(sweep_config, std::cout);
  if (info->parsed()) return cavityflow::cmd_mesh_info(mesh_target, std::cout);
  return 1;
}
