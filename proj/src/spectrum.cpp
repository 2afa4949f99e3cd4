#include "slosc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "slosc/error.hpp"
#include "slosc/parallel.hpp"

namespace slosc {

namespace {

// Sign pattern of r: +1 if r >= 0 everywhere, -1 if r <= 0 everywhere, 0 otherwise.
int weight_sign(const DistributionalCoefficient& r) {
  bool has_pos = false;
  bool has_neg = false;
  auto see = [&](double v) {
    if (v > 0.0) has_pos = true;
    if (v < 0.0) has_neg = true;
  };
  const auto& d = r.density;
  for (std::size_t i = 0; i < d.polys.size(); ++i) {
    const auto& c = d.polys[i];
    const double len = d.breakpoints[i + 1] - d.breakpoints[i];
    see(c[0]);
    see(c[0] + len * (c[1] + len * c[2]));
    if (c[2] != 0.0) {
      const double s = -c[1] / (2.0 * c[2]);
      if (s > 0.0 && s < len) see(c[0] + s * (c[1] + s * c[2]));
    }
  }
  for (const auto& a : r.atoms) see(a.weight);
  if (has_pos && has_neg) return 0;
  return has_neg ? -1 : 1;
}

double tol_at(double rtol, double lo, double hi) {
  return rtol * std::max({1.0, std::abs(lo), std::abs(hi)});
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

PositivityCertificate check_positivity(const Problem& problem, double xi, const SpectrumOptions& options) {
  PositivityCertificate cert;
  cert.xi = xi;
  const auto forms = assemble(problem, build_mesh(problem, options.mesh_n));
  cert.fem = inertia(pencil_matrix(forms, xi), options.inertia_tol);
  const bool fem_positive = cert.fem.negative == 0 && cert.fem.zero == 0;

  const auto shot = integrate(problem, xi, options.shoot);
  cert.shooting_zeros = static_cast<int>(shot.zeros.size()) + (shot.end_zero ? 1 : 0);
  cert.shooting_index = oscillation_index(shot);
  cert.theta_end = shot.theta_end();
  cert.boundary_angle = shot.boundary_angle;
  cert.positive = fem_positive && cert.shooting_zeros == 0 && cert.shooting_index == 0 &&
                  cert.theta_end < cert.boundary_angle;
  return cert;
}

double find_positivity_shift(const Problem& problem, const SpectrumOptions& options) {
  for (double xi = -1.0; -xi <= options.xi_cap; xi *= 2.0)
    if (check_positivity(problem, xi, options).positive) return xi;
  throw Error(ErrorKind::NoPositivityFound, "no positive point xi with |xi| <= " + fmt(options.xi_cap));
}

int eigenvalue_count(const Problem& problem, double lambda, const ShootOptions& options) {
  return oscillation_index(integrate(problem, lambda, options));
}

BracketSet bracket_eigenvalues(const Problem& problem, double xi, int n_max, const SpectrumOptions& options) {
  if (n_max < 1) throw std::invalid_argument("bracket_eigenvalues: n_max must be >= 1");
  auto count = [&](double lambda) { return eigenvalue_count(problem, lambda, options.shoot); };
  if (count(xi) != 0) throw Error(ErrorKind::NotPositive, "pencil is not positive at xi = " + fmt(xi));

  BracketSet out;
  const int sign = weight_sign(problem.r);
  const double step0 = std::max(1.0, std::abs(xi) / 10.0);

  // dir = +1 scans right of xi, -1 left. Positions are measured as distance from xi.
  auto scan = [&](int dir, SequenceStatus& status) {
    std::vector<Bracket> found;
    if ((dir > 0 && sign < 0) || (dir < 0 && sign > 0)) {
      status.terminated = true;
      status.reason = dir > 0 ? "r <= 0: no eigenvalues above xi" : "r >= 0: no eigenvalues below xi";
      return found;
    }
    auto at = [&](double dist) { return xi + dir * dist; };
    // Splits (d0, d1] until each piece holds exactly one count increment.
    auto split = [&](auto&& self, double d0, int c0, double d1, int c1) -> void {
      if (c1 == c0 || static_cast<int>(found.size()) >= n_max) return;
      if (c1 < c0)
        throw Error(ErrorKind::InvariantViolation, "eigenvalue count decreased away from xi near " + fmt(at(d1)));
      if (c1 == c0 + 1) {
        const double a = at(d0);
        const double b = at(d1);
        found.push_back({dir * c1, std::min(a, b), std::max(a, b), xi});
        return;
      }
      const double dm = 0.5 * (d0 + d1);
      if (dm <= d0 || dm >= d1)
        throw Error(ErrorKind::InvariantViolation, "unresolvable multiple count jump near " + fmt(at(d0)));
      const int cm = count(at(dm));
      self(self, d0, c0, dm, cm);
      self(self, dm, cm, d1, c1);
    };
    double d = 0.0;
    int c = 0;
    double step = step0;
    while (static_cast<int>(found.size()) < n_max) {
      if (d >= options.scan_horizon) {
        status.terminated = true;
        status.reason = "no further eigenvalue within |lambda - xi| <= " + fmt(options.scan_horizon);
        break;
      }
      const double d_next = std::min(d + step, options.scan_horizon);
      const int c_next = count(at(d_next));
      if (c_next == c) {
        step *= 2.0;
      } else {
        split(split, d, c, d_next, c_next);
        step = step0;
      }
      d = d_next;
      c = c_next;
    }
    // The first eigenvalue on each side is bracketed from xi itself.
    if (!found.empty() && std::abs(found.front().n) == 1) (dir > 0 ? found.front().lo : found.front().hi) = xi;
    status.found = static_cast<int>(found.size());
    return found;
  };

  auto right = scan(+1, out.positive);
  auto left = scan(-1, out.negative);
  std::reverse(left.begin(), left.end());
  out.brackets = std::move(left);
  out.brackets.insert(out.brackets.end(), right.begin(), right.end());
  return out;
}

double fem_eigenvalue(const FormSet& forms, int n, double guess, double xi) {
  const int k = std::abs(n);
  const int dir = n > 0 ? 1 : -1;
  auto reached = [&](double lambda) { return negative_count(forms, lambda) >= k; };
  // near: not reached, far: reached; distances measured outward from xi.
  double delta = 1e-3 * std::max(1.0, std::abs(guess));
  double near = guess - dir * delta;
  double far = guess + dir * delta;
  while (dir * (near - xi) > 0.0 && reached(near)) {
    delta *= 2.0;
    near = guess - dir * delta;
  }
  if (dir * (near - xi) <= 0.0) near = xi;
  delta = 1e-3 * std::max(1.0, std::abs(guess));
  while (!reached(far)) {
    delta *= 2.0;
    far = guess + dir * delta;
    if (delta > 1e12) throw Error(ErrorKind::NoSignChange, "FEM eigenvalue not found for n = " + std::to_string(n));
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (near + far);
    if (mid == near || mid == far) break;
    (reached(mid) ? far : near) = mid;
    if (std::abs(far - near) <= 1e-13 * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (near + far);
}

EigenvalueRecord refine_eigenvalue(const Problem& problem, const FormSet& forms, const Bracket& bracket,
                                   const SpectrumOptions& options) {
  const int k = std::abs(bracket.n);
  const int dir = bracket.n > 0 ? 1 : -1;
  auto reached = [&](double lambda) { return eigenvalue_count(problem, lambda, options.shoot) >= k; };
  double near = dir > 0 ? bracket.lo : bracket.hi;
  double far = dir > 0 ? bracket.hi : bracket.lo;
  if (reached(near) || !reached(far))
    throw Error(ErrorKind::NoSignChange, "bracket for n = " + std::to_string(bracket.n) + " does not isolate it");
  while (std::abs(far - near) > tol_at(options.eig_rtol, near, far)) {
    const double mid = 0.5 * (near + far);
    if (mid == near || mid == far) break;
    (reached(mid) ? far : near) = mid;
  }

  EigenvalueRecord rec;
  rec.index = bracket.n;
  rec.lambda = 0.5 * (near + far);
  // The inner end carries exactly |n|-1 crossings; at the midpoint roundoff can
  // push the last crossing just inside x = 1 when the eigenfunction decays there.
  rec.eigenfunction = normalized(integrate(problem, near, options.shoot));
  rec.zero_count = prufer_count(rec.eigenfunction);
  rec.inertia_at_lambda = inertia(pencil_matrix(forms, rec.lambda), options.inertia_tol).negative;
  // Without a known xi the inner bracket end bounds the FEM search instead.
  const double floor = bracket.xi.value_or(dir > 0 ? bracket.lo : bracket.hi);
  rec.fem_lambda = fem_eigenvalue(forms, rec.index, rec.lambda, floor);
  rec.methods_agree =
      std::abs(rec.fem_lambda - rec.lambda) <= options.agreement_rtol * std::max(1.0, std::abs(rec.lambda));
  return rec;
}

EigenvalueRecord refine_eigenvalue(const Problem& problem, const Bracket& bracket, const SpectrumOptions& options) {
  return refine_eigenvalue(problem, assemble(problem, build_mesh(problem, options.mesh_n)), bracket, options);
}

bool SpectrumReport::all_methods_agree() const {
  return std::all_of(records.begin(), records.end(), [](const EigenvalueRecord& r) { return r.methods_agree; });
}

const EigenvalueRecord* SpectrumReport::find(int n) const {
  for (const auto& r : records)
    if (r.index == n) return &r;
  return nullptr;
}

SpectrumReport solve_spectrum(const Problem& problem, std::optional<double> xi, int n_max,
                              const SpectrumOptions& options) {
  SpectrumReport report;
  report.xi = xi ? *xi : find_positivity_shift(problem, options);
  report.certificate = check_positivity(problem, report.xi, options);
  if (!report.certificate.positive)
    throw Error(ErrorKind::NotPositive, "pencil is not positive at xi = " + fmt(report.xi));

  const auto brackets = bracket_eigenvalues(problem, report.xi, n_max, options);
  report.positive = brackets.positive;
  report.negative = brackets.negative;

  const auto forms = assemble(problem, build_mesh(problem, options.mesh_n));
  report.records.resize(brackets.brackets.size());
  parallel_for(brackets.brackets.size(), [&](std::size_t i) {
    report.records[i] = refine_eigenvalue(problem, forms, brackets.brackets[i], options);
  });
  return report;
}

bool zeros_interlace(const std::vector<double>& inner, const std::vector<double>& outer, std::string* where) {
  std::vector<double> fences{0.0};
  fences.insert(fences.end(), inner.begin(), inner.end());
  fences.push_back(1.0);
  std::size_t j = 0;
  for (std::size_t i = 0; i + 1 < fences.size(); ++i) {
    int inside = 0;
    while (j < outer.size() && outer[j] <= fences[i]) ++j;
    while (j < outer.size() && outer[j] < fences[i + 1]) {
      ++inside;
      ++j;
    }
    if (inside != 1) {
      if (where) *where = "(" + fmt(fences[i]) + ", " + fmt(fences[i + 1]) + ") holds " + std::to_string(inside) + " zeros";
      return false;
    }
  }
  // every outer zero must fall strictly inside some interval
  if (outer.size() + 1 != fences.size()) {
    if (where) *where = "zero count " + std::to_string(outer.size()) + " vs " + std::to_string(fences.size() - 1) + " intervals";
    return false;
  }
  return true;
}

bool VerificationReport::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const VerificationCheck& c) { return c.passed; });
}

VerificationReport verify_oscillation(const Problem& problem, const SpectrumReport& report) {
  (void)problem;
  VerificationReport out;
  auto add = [&](std::string name, int n, bool ok, std::string detail) {
    out.checks.push_back({std::move(name), n, ok, std::move(detail)});
  };
  auto zero_list = [](const EigenvalueRecord& r) {
    std::vector<double> z;
    for (const auto& zero : r.eigenfunction.zeros) z.push_back(zero.location);
    return z;
  };

  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    const int expected = std::abs(r.index) - 1;
    const auto zeros = zero_list(r);
    add("zero_count", r.index, r.zero_count == expected && static_cast<int>(zeros.size()) == expected,
        "zeros " + std::to_string(zeros.size()) + ", expected " + std::to_string(expected));
    bool all_change = true;
    std::string bad;
    for (const auto& z : r.eigenfunction.zeros)
      if (!z.sign_change) {
        all_change = false;
        bad = "no sign change at " + fmt(z.location);
      }
    add("sign_change", r.index, all_change, bad);
    add("index_formula", r.index, r.inertia_at_lambda == expected,
        "FEM negative squares " + std::to_string(r.inertia_at_lambda) + ", expected " + std::to_string(expected));
    const bool right_side = r.index > 0 ? r.lambda > report.xi : r.lambda < report.xi;
    add("side_of_xi", r.index, right_side, "lambda " + fmt(r.lambda) + ", xi " + fmt(report.xi));
    if (i > 0) {
      const auto& prev = report.records[i - 1];
      add("ordering", r.index, r.lambda > prev.lambda, fmt(prev.lambda) + " < " + fmt(r.lambda));
    }
  }

  // Interlacing between |n| and |n|+1 on each side.
  for (const auto& r : report.records) {
    const int next_index = r.index > 0 ? r.index + 1 : r.index - 1;
    const auto* next = report.find(next_index);
    if (!next) continue;
    std::string where;
    const bool ok = zeros_interlace(zero_list(r), zero_list(*next), &where);
    add("interlacing", r.index, ok, ok ? "" : where);
  }
  return out;
}

}  // namespace slosc
