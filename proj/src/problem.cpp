#include "slosc/problem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "slosc/error.hpp"

namespace slosc {

namespace {

std::size_t locate(const std::vector<double>& breakpoints, double x) {
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  auto idx = static_cast<std::ptrdiff_t>(it - breakpoints.begin()) - 1;
  auto last = static_cast<std::ptrdiff_t>(breakpoints.size()) - 2;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, last));
}

// Validates a breakpoint grid and drops zero-length pieces along with their
// payload entries.
template <typename T>
void normalize_grid(std::vector<double>& breakpoints, std::vector<T>& payload, const char* what) {
  const std::string name(what);
  if (breakpoints.size() < 2) throw Error(ErrorKind::BadGrid, name + ": need at least two breakpoints");
  if (payload.size() + 1 != breakpoints.size())
    throw Error(ErrorKind::BadGrid, name + ": expected one entry per subinterval");
  if (breakpoints.front() != 0.0 || breakpoints.back() != 1.0)
    throw Error(ErrorKind::BadGrid, name + ": breakpoints must start at 0 and end at 1");
  std::vector<double> bps{breakpoints.front()};
  std::vector<T> vals;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    if (!std::isfinite(b) || b < a) throw Error(ErrorKind::BadGrid, name + ": breakpoints must be increasing");
    if (b == a) continue;
    bps.push_back(b);
    vals.push_back(payload[i]);
  }
  if (vals.empty()) throw Error(ErrorKind::BadGrid, name + ": empty grid");
  breakpoints = std::move(bps);
  payload = std::move(vals);
}

std::vector<double> merge_grids(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Atom> combine_atoms(std::vector<Atom> atoms) {
  std::map<double, double> merged;
  for (const auto& atom : atoms) merged[atom.location] += atom.weight;
  std::vector<Atom> out;
  for (const auto& [x, w] : merged)
    if (w != 0.0) out.push_back({x, w});
  return out;
}

double wrap_angle(double theta) {
  if (!std::isfinite(theta)) throw Error(ErrorKind::BadGrid, "boundary angle must be finite");
  double t = std::remainder(theta, 2.0 * std::numbers::pi);
  if (t <= -std::numbers::pi) t = std::numbers::pi;
  return t;
}

}  // namespace

// --- PiecewiseConstant -------------------------------------------------------

PiecewiseConstant PiecewiseConstant::constant(double value) { return {{0.0, 1.0}, {value}}; }

double PiecewiseConstant::operator()(double x) const { return values[locate(breakpoints, x)]; }

double PiecewiseConstant::min_value() const { return *std::min_element(values.begin(), values.end()); }

// --- PiecewiseQuadratic ------------------------------------------------------

PiecewiseQuadratic PiecewiseQuadratic::constant(double value) {
  return {{0.0, 1.0}, {LocalQuadratic{value, 0.0, 0.0}}};
}

std::size_t PiecewiseQuadratic::piece_index(double x) const { return locate(breakpoints, x); }

double PiecewiseQuadratic::operator()(double x) const {
  const auto i = piece_index(x);
  const double s = x - breakpoints[i];
  const auto& c = polys[i];
  return c[0] + s * (c[1] + s * c[2]);
}

LocalQuadratic PiecewiseQuadratic::local_at(double a) const {
  const auto i = piece_index(a);
  const double d = a - breakpoints[i];
  const auto& c = polys[i];
  return {c[0] + d * (c[1] + d * c[2]), c[1] + 2.0 * c[2] * d, c[2]};
}

bool PiecewiseQuadratic::is_zero() const {
  return std::all_of(polys.begin(), polys.end(),
                     [](const LocalQuadratic& c) { return c[0] == 0.0 && c[1] == 0.0 && c[2] == 0.0; });
}

// --- DistributionalCoefficient ----------------------------------------------

DistributionalCoefficient DistributionalCoefficient::constant(double value) {
  return {PiecewiseQuadratic::constant(value), {}};
}

bool DistributionalCoefficient::is_zero() const {
  return density.is_zero() &&
         std::all_of(atoms.begin(), atoms.end(), [](const Atom& a) { return a.weight == 0.0; });
}

double DistributionalCoefficient::total_mass() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < density.polys.size(); ++i) {
    const double len = density.breakpoints[i + 1] - density.breakpoints[i];
    const auto& c = density.polys[i];
    sum += len * (c[0] + len * (c[1] / 2.0 + len * c[2] / 3.0));
  }
  for (const auto& atom : atoms) sum += atom.weight;
  return sum;
}

DistributionalCoefficient DistributionalCoefficient::scaled(double c) const {
  DistributionalCoefficient out = *this;
  for (auto& poly : out.density.polys)
    for (auto& v : poly) v *= c;
  for (auto& atom : out.atoms) atom.weight *= c;
  return out;
}

DistributionalCoefficient DistributionalCoefficient::plus(const DistributionalCoefficient& other) const {
  DistributionalCoefficient out;
  out.density.breakpoints = merge_grids(density.breakpoints, other.density.breakpoints);
  out.density.polys.clear();
  for (std::size_t i = 0; i + 1 < out.density.breakpoints.size(); ++i) {
    const double a = out.density.breakpoints[i];
    const auto lhs = density.local_at(a);
    const auto rhs = other.density.local_at(a);
    out.density.polys.push_back({lhs[0] + rhs[0], lhs[1] + rhs[1], lhs[2] + rhs[2]});
  }
  auto atoms_all = atoms;
  atoms_all.insert(atoms_all.end(), other.atoms.begin(), other.atoms.end());
  out.atoms = combine_atoms(std::move(atoms_all));
  return out;
}

DistributionalCoefficient DistributionalCoefficient::reflected() const {
  DistributionalCoefficient out;
  const auto& bps = density.breakpoints;
  out.density.breakpoints.clear();
  out.density.polys.clear();
  for (auto it = bps.rbegin(); it != bps.rend(); ++it) out.density.breakpoints.push_back(1.0 - *it);
  out.density.breakpoints.front() = 0.0;
  out.density.breakpoints.back() = 1.0;
  for (std::size_t k = density.polys.size(); k-- > 0;) {
    const double len = bps[k + 1] - bps[k];
    const auto& c = density.polys[k];
    // s = len - s' on the reflected piece
    out.density.polys.push_back({c[0] + len * (c[1] + len * c[2]), -c[1] - 2.0 * c[2] * len, c[2]});
  }
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) out.atoms.push_back({1.0 - it->location, it->weight});
  return out;
}

// --- Boundary data -----------------------------------------------------------

double boundary_v(double theta) {
  if (theta == 0.0) return 0.0;
  if (theta == std::numbers::pi) return 0.0;  // cos(pi/2) is not exactly zero in floating point
  const double half = theta / 2.0;
  return -std::cos(half) / std::sin(half);
}

double BoundaryAngles::v11() const { return boundary_v(theta0); }
double BoundaryAngles::v22() const { return boundary_v(theta1); }

// --- Problem -----------------------------------------------------------------

Problem validate_problem(const Problem& raw) {
  Problem out = raw;

  normalize_grid(out.p.breakpoints, out.p.values, "p");
  for (double v : out.p.values)
    if (!std::isfinite(v)) throw Error(ErrorKind::NonPositiveP, "p must be finite");
  if (!(out.p.min_value() > 0.0))
    throw Error(ErrorKind::NonPositiveP, "min p = " + std::to_string(out.p.min_value()) + " must be positive");

  auto normalize_coefficient = [](DistributionalCoefficient& c, const char* name) {
    normalize_grid(c.density.breakpoints, c.density.polys, name);
    for (const auto& poly : c.density.polys)
      for (double v : poly)
        if (!std::isfinite(v)) throw Error(ErrorKind::BadGrid, std::string(name) + ": non-finite density");
    for (const auto& atom : c.atoms) {
      if (!(atom.location > 0.0 && atom.location < 1.0))
        throw Error(ErrorKind::BadGrid, std::string(name) + ": atom locations must lie in (0, 1)");
      if (!std::isfinite(atom.weight)) throw Error(ErrorKind::BadGrid, std::string(name) + ": non-finite atom weight");
    }
    c.atoms = combine_atoms(std::move(c.atoms));
  };
  normalize_coefficient(out.q, "q");
  normalize_coefficient(out.r, "r");
  if (out.r.is_zero()) throw Error(ErrorKind::ZeroWeight, "weight r vanishes identically");

  out.bc.theta0 = wrap_angle(out.bc.theta0);
  out.bc.theta1 = wrap_angle(out.bc.theta1);
  return out;
}

std::vector<double> coefficient_grid(const Problem& problem) {
  std::vector<double> grid = problem.p.breakpoints;
  grid.insert(grid.end(), problem.q.density.breakpoints.begin(), problem.q.density.breakpoints.end());
  grid.insert(grid.end(), problem.r.density.breakpoints.begin(), problem.r.density.breakpoints.end());
  for (const auto& atom : problem.q.atoms) grid.push_back(atom.location);
  for (const auto& atom : problem.r.atoms) grid.push_back(atom.location);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

Problem scaled_problem(const Problem& problem, double c) {
  Problem out = problem;
  for (auto& v : out.p.values) v *= c;
  out.q = problem.q.scaled(c);
  out.r = problem.r.scaled(c);
  // The boundary term of the form must scale too; Dirichlet ends carry no term.
  auto scale_angle = [c](double theta) {
    if (theta == 0.0) return 0.0;
    const double v = c * boundary_v(theta);
    return std::remainder(2.0 * std::atan2(1.0, -v), 2.0 * std::numbers::pi);
  };
  out.bc = {scale_angle(problem.bc.theta0), scale_angle(problem.bc.theta1)};
  return out;
}

Problem shifted_problem(const Problem& problem, double c) {
  Problem out = problem;
  out.q = problem.q.plus(problem.r.scaled(c));
  return out;
}

Problem mirrored_problem(const Problem& problem) {
  Problem out;
  const auto& bps = problem.p.breakpoints;
  out.p.breakpoints.clear();
  for (auto it = bps.rbegin(); it != bps.rend(); ++it) out.p.breakpoints.push_back(1.0 - *it);
  out.p.breakpoints.front() = 0.0;
  out.p.breakpoints.back() = 1.0;
  out.p.values.assign(problem.p.values.rbegin(), problem.p.values.rend());
  out.q = problem.q.reflected();
  out.r = problem.r.reflected();
  out.bc = {problem.bc.theta1, problem.bc.theta0};
  return out;
}

// --- Omega -------------------------------------------------------------------

OmegaFunction::OmegaFunction(std::vector<Piece> pieces, std::vector<Jump> jumps)
    : pieces_(std::move(pieces)), jumps_(std::move(jumps)) {
  const auto& last = pieces_.back();
  const double s = last.b - last.a;
  omega1_ = last.c[0] + s * (last.c[1] + s * (last.c[2] + s * last.c[3]));
}

const OmegaFunction::Piece& OmegaFunction::piece_at(double x, Side side) const {
  if (side == Side::Right) {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](double v, const Piece& p) { return v < p.a; });
    return it == pieces_.begin() ? pieces_.front() : *std::prev(it);
  }
  auto it = std::lower_bound(pieces_.begin(), pieces_.end(), x,
                             [](const Piece& p, double v) { return p.b < v; });
  return it == pieces_.end() ? pieces_.back() : *it;
}

double OmegaFunction::operator()(double x, Side side) const {
  if (x <= 0.0) return 0.0;
  const auto& piece = piece_at(x, side);
  const double s = std::min(x, piece.b) - piece.a;
  return piece.c[0] + s * (piece.c[1] + s * (piece.c[2] + s * piece.c[3]));
}

OmegaFunction build_omega(const DistributionalCoefficient& q, const DistributionalCoefficient& r,
                          double lambda) {
  std::vector<double> grid = merge_grids(q.density.breakpoints, r.density.breakpoints);
  std::map<double, double> jump_at;
  for (const auto& atom : q.atoms) jump_at[atom.location] += atom.weight;
  for (const auto& atom : r.atoms) jump_at[atom.location] -= lambda * atom.weight;
  std::vector<double> atom_grid;
  for (const auto& [x, w] : jump_at) atom_grid.push_back(x);
  grid = merge_grids(grid, atom_grid);

  std::vector<OmegaFunction::Piece> pieces;
  double value = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = grid[i];
    const double b = grid[i + 1];
    if (auto it = jump_at.find(a); it != jump_at.end()) value += it->second;
    const auto gq = q.density.local_at(a);
    const auto gr = r.density.local_at(a);
    const std::array<double, 4> c{value, gq[0] - lambda * gr[0], (gq[1] - lambda * gr[1]) / 2.0,
                                  (gq[2] - lambda * gr[2]) / 3.0};
    pieces.push_back({a, b, c});
    const double s = b - a;
    value = c[0] + s * (c[1] + s * (c[2] + s * c[3]));
  }
  std::vector<OmegaFunction::Jump> jumps;
  for (const auto& [x, w] : jump_at) jumps.push_back({x, w});
  return OmegaFunction(std::move(pieces), std::move(jumps));
}

double eval_omega(const OmegaFunction& w, double x, Side side) {
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorKind::OutOfDomain, "x = " + std::to_string(x) + " outside [0, 1]");
  return w(x, side);
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveP: return "NonPositiveP";
    case ErrorKind::ZeroWeight: return "ZeroWeight";
    case ErrorKind::BadGrid: return "BadGrid";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::MeshMismatch: return "MeshMismatch";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::FactorizationBreakdown: return "FactorizationBreakdown";
    case ErrorKind::NoPositivityFound: return "NoPositivityFound";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace slosc
