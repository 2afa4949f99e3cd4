#include "slosc/cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "slosc/csv.hpp"
#include "slosc/error.hpp"
#include "slosc/forms.hpp"
#include "slosc/io.hpp"
#include "slosc/shooting.hpp"
#include "slosc/spectrum.hpp"

namespace slosc::cli {

namespace {

struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void render(std::ostream& os, Format format) const {
    if (format == Format::Csv) {
      for (const auto& c : comments) os << "# " << c << '\n';
      auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << '\n';
      };
      line(header);
      for (const auto& r : rows) line(r);
      return;
    }
    for (const auto& c : comments) os << c << '\n';
    std::vector<std::size_t> width(header.size(), 0);
    for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
    for (const auto& r : rows)
      for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        os << (i ? "  " : "") << cells[i];
        if (i + 1 < cells.size()) os << std::string(width[i] - cells[i].size(), ' ');
      }
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

std::string num(double v) { return format_double(v); }
std::string num(int v) { return std::to_string(v); }

std::vector<double> lambda_grid(const RunConfig& c) {
  std::vector<double> grid;
  if (c.lambda_steps <= 1) return {c.lambda_min};
  for (int i = 0; i < c.lambda_steps; ++i)
    grid.push_back(c.lambda_min + (c.lambda_max - c.lambda_min) * i / (c.lambda_steps - 1));
  return grid;
}

SpectrumOptions spectrum_options(const RunConfig& c) {
  SpectrumOptions o;
  o.shoot.rtol = c.tol_ode;
  o.shoot.atol = c.tol_ode * 1e-2;
  o.eig_rtol = c.tol_eig;
  o.mesh_n = c.mesh_n;
  return o;
}

std::string xi_comment(const RunConfig& c, double xi) {
  return std::string("xi=") + num(xi) + (c.xi ? " (user)" : " (auto)");
}

int cmd_solve(const Problem& problem, const RunConfig& c, std::ostream& os) {
  const auto report = solve_spectrum(problem, c.xi, c.n_max, spectrum_options(c));
  Table t;
  t.comments.push_back(xi_comment(c, report.xi));
  if (report.positive.terminated) t.comments.push_back("positive side: " + report.positive.reason);
  if (report.negative.terminated) t.comments.push_back("negative side: " + report.negative.reason);
  t.header = {"n", "lambda", "zero_count", "inertia", "fem_lambda", "method_agreement"};
  for (const auto& r : report.records)
    t.rows.push_back({num(r.index), num(r.lambda), num(r.zero_count), num(r.inertia_at_lambda), num(r.fem_lambda),
                      r.methods_agree ? "1" : "0"});
  t.render(os, c.format);
  return kExitOk;
}

int cmd_inertia(const Problem& problem, const RunConfig& c, std::ostream& os, std::ostream& err) {
  const auto mesh = build_mesh(problem, c.mesh_n);
  Table t;
  if (c.x_steps > 0) {
    if (!c.lambda) {
      err << "inertia: --x-steps requires --lambda\n";
      return kExitInput;
    }
    Mesh m = mesh;
    std::vector<double> xs;
    for (int i = 1; i <= c.x_steps; ++i) {
      xs.push_back(static_cast<double>(i) / c.x_steps);
      m = m.with_node(xs.back());
    }
    const auto forms = assemble(problem, m);
    t.comments.push_back("lambda=" + num(*c.lambda));
    t.header = {"x", "negative", "zero", "positive"};
    for (double x : xs) {
      const auto in = restricted_inertia(forms, *c.lambda, x);
      t.rows.push_back({num(x), num(in.negative), num(in.zero), num(in.positive)});
    }
  } else {
    const auto forms = assemble(problem, mesh);
    t.header = {"lambda", "negative", "zero", "positive"};
    for (double lambda : lambda_grid(c)) {
      const auto in = inertia(pencil_matrix(forms, lambda));
      t.rows.push_back({num(lambda), num(in.negative), num(in.zero), num(in.positive)});
    }
  }
  t.render(os, c.format);
  return kExitOk;
}

int cmd_conjugate(const Problem& problem, const RunConfig& c, std::ostream& os, std::ostream& err) {
  if (!c.lambda) {
    err << "conjugate: --lambda is required\n";
    return kExitInput;
  }
  ShootOptions o = spectrum_options(c).shoot;
  Table t;
  t.comments.push_back("lambda=" + num(*c.lambda));
  t.header = {"side", "x"};
  for (double x : conjugate_points(problem, *c.lambda, o)) t.rows.push_back({"left", num(x)});
  for (double x : right_conjugate_points(problem, *c.lambda, o)) t.rows.push_back({"right", num(x)});
  t.render(os, c.format);
  return kExitOk;
}

int cmd_eigencurves(const Problem& problem, const RunConfig& c, std::ostream& os) {
  const auto forms = assemble(problem, build_mesh(problem, c.mesh_n));
  Table t;
  t.header = {"lambda"};
  for (int n = 1; n <= c.n_max; ++n) t.header.push_back("Lambda_" + std::to_string(n));
  for (double lambda : lambda_grid(c)) {
    std::vector<std::string> row{num(lambda)};
    for (int n = 1; n <= c.n_max; ++n) row.push_back(num(eigencurve(forms, lambda, n)));
    t.rows.push_back(std::move(row));
  }
  t.render(os, c.format);
  return kExitOk;
}

int cmd_verify(const Problem& problem, const RunConfig& c, std::ostream& os) {
  const auto report = solve_spectrum(problem, c.xi, c.n_max, spectrum_options(c));
  const auto check = verify_oscillation(problem, report);
  Table t;
  t.comments.push_back(xi_comment(c, report.xi));
  t.header = {"check", "n", "status", "detail"};
  for (const auto& ch : check.checks) t.rows.push_back({ch.name, num(ch.n), ch.passed ? "pass" : "FAIL", ch.detail});
  t.rows.push_back({"overall", "0", check.passed() ? "pass" : "FAIL", ""});
  t.render(os, c.format);
  return check.passed() ? kExitOk : kExitVerifyFailed;
}

bool is_input_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::NonPositiveP:
    case ErrorKind::ZeroWeight:
    case ErrorKind::BadGrid:
    case ErrorKind::OutOfDomain:
    case ErrorKind::MeshMismatch:
      return true;
    default:
      return false;
  }
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.n_max < 1) {
    err << "error: --n-max must be >= 1\n";
    return kExitInput;
  }
  if (config.mesh_n < 8) {
    err << "error: --mesh-n must be >= 8\n";
    return kExitInput;
  }
  try {
    const Problem problem = load_problem(config.problem);

    std::ofstream file;
    std::ostream* os = &out;
    if (!config.out.empty()) {
      file.open(config.out);
      if (!file) {
        err << "error: cannot write " << config.out.string() << '\n';
        return kExitInput;
      }
      os = &file;
    }

    if (config.command == "solve") return cmd_solve(problem, config, *os);
    if (config.command == "inertia") return cmd_inertia(problem, config, *os, err);
    if (config.command == "conjugate") return cmd_conjugate(problem, config, *os, err);
    if (config.command == "eigencurves") return cmd_eigencurves(problem, config, *os);
    if (config.command == "verify") return cmd_verify(problem, config, *os);
    err << "error: unknown command '" << config.command << "'\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_input_error(e.kind()) ? kExitInput : kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace slosc::cli
