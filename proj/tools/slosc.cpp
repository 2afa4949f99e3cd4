#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "slosc/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Sturm-Liouville spectra, conjugate points and inertia for W2^-1 coefficients"};
  app.require_subcommand(1);

  slosc::cli::RunConfig config;
  std::string xi = "auto";
  std::string format = "csv";
  double lambda = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("problem", config.problem, "Problem file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--mesh-n", config.mesh_n, "FEM mesh size (>= 8)");
    sub->add_option("--tol-ode", config.tol_ode, "Relative ODE tolerance");
    sub->add_option("--out", config.out, "Output file (default stdout)");
    sub->add_option("--format", format, "csv | text")->check(CLI::IsMember({"csv", "text"}));
  };
  auto add_spectral = [&](CLI::App* sub) {
    sub->add_option("--n-max", config.n_max, "Eigenvalues per side of xi");
    sub->add_option("--xi", xi, "Positivity point, or 'auto'");
    sub->add_option("--tol-eig", config.tol_eig, "Relative eigenvalue tolerance");
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--lambda-min", config.lambda_min);
    sub->add_option("--lambda-max", config.lambda_max);
    sub->add_option("--lambda-steps", config.lambda_steps);
  };

  auto* solve = app.add_subcommand("solve", "Eigenvalues around xi as CSV");
  add_common(solve);
  add_spectral(solve);
  auto* verify = app.add_subcommand("verify", "Oscillation, index and interlacing checks");
  add_common(verify);
  add_spectral(verify);
  auto* inertia = app.add_subcommand("inertia", "Pencil inertia over a lambda grid, or over x at fixed lambda");
  add_common(inertia);
  add_grid(inertia);
  auto* inertia_lambda = inertia->add_option("--lambda", lambda, "Fixed lambda for the x-grid scan");
  inertia->add_option("--x-steps", config.x_steps, "Number of x grid points in (0, 1]");
  auto* conjugate = app.add_subcommand("conjugate", "Conjugate points of 0 and of 1 at a given lambda");
  add_common(conjugate);
  auto* conjugate_lambda = conjugate->add_option("--lambda", lambda, "Spectral parameter")->required();
  auto* curves = app.add_subcommand("eigencurves", "Eigencurves Lambda_n(lambda) over a lambda grid");
  add_common(curves);
  add_grid(curves);
  curves->add_option("--n-max", config.n_max, "Number of curves");

  CLI11_PARSE(app, argc, argv);

  config.command = app.get_subcommands().front()->get_name();
  config.format = format == "text" ? slosc::cli::Format::Text : slosc::cli::Format::Csv;
  if (xi != "auto") {
    try {
      config.xi = std::stod(xi);
    } catch (const std::exception&) {
      std::cerr << "error: --xi must be a number or 'auto'\n";
      return slosc::cli::kExitInput;
    }
  }
  if (inertia_lambda->count() > 0 || conjugate_lambda->count() > 0) config.lambda = lambda;
  return slosc::cli::run(config, std::cout, std::cerr);
}
