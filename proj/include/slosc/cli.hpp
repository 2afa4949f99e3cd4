#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace slosc::cli {

enum class Format { Csv, Text };

struct RunConfig {
  std::string command;  // solve | inertia | conjugate | eigencurves | verify
  std::filesystem::path problem;
  int n_max = 5;
  std::optional<double> xi;  // empty: automatic positivity shift
  int mesh_n = 2000;
  double tol_ode = 1e-10;
  double tol_eig = 1e-10;
  double lambda_min = -10.0;
  double lambda_max = 100.0;
  int lambda_steps = 111;
  std::optional<double> lambda;  // conjugate; inertia over an x-grid
  int x_steps = 0;               // inertia: > 0 selects the x-grid scan at --lambda
  std::filesystem::path out;     // empty: standard output
  Format format = Format::Csv;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// Executes one command. Diagnostics go to `err`; results go to `out` or to config.out.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace slosc::cli
