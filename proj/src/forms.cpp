#include "slosc/forms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "slosc/error.hpp"

namespace slosc {

namespace {

// Three-point Gauss-Legendre on [0, 1]; exact for degree 5.
constexpr std::array<double, 3> kGaussX{0.5 - 0.3872983346207417, 0.5, 0.5 + 0.3872983346207417};
constexpr std::array<double, 3> kGaussW{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

// Element matrix of int f phi_a phi_b over [x0, x1] for a quadratic density.
std::array<double, 3> element_mass(const LocalQuadratic& f, double h) {
  std::array<double, 3> m{0.0, 0.0, 0.0};  // (0,0), (0,1), (1,1)
  for (std::size_t g = 0; g < 3; ++g) {
    const double s = kGaussX[g] * h;
    const double fv = f[0] + s * (f[1] + s * f[2]);
    const double phi1 = kGaussX[g];
    const double phi0 = 1.0 - phi1;
    const double w = kGaussW[g] * h * fv;
    m[0] += w * phi0 * phi0;
    m[1] += w * phi0 * phi1;
    m[2] += w * phi1 * phi1;
  }
  return m;
}

void add_density(SymBandMatrix& m, const PiecewiseQuadratic& density, const Mesh& mesh) {
  for (std::size_t e = 0; e + 1 < mesh.size(); ++e) {
    const double x0 = mesh.nodes[e];
    const double h = mesh.nodes[e + 1] - x0;
    const auto em = element_mass(density.local_at(x0), h);
    m.add(e, e, em[0]);
    m.add(e, e + 1, em[1]);
    m.add(e + 1, e + 1, em[2]);
  }
}

void add_atoms(SymBandMatrix& m, const std::vector<Atom>& atoms, const Mesh& mesh) {
  for (const auto& atom : atoms) {
    const auto i = mesh.index_of(atom.location);
    m.add(i, i, atom.weight);
  }
}

}  // namespace

bool Mesh::contains(double x) const { return std::binary_search(nodes.begin(), nodes.end(), x); }

std::size_t Mesh::index_of(double x) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
  if (it == nodes.end() || *it != x)
    throw Error(ErrorKind::MeshMismatch, "x = " + std::to_string(x) + " is not a mesh node");
  return static_cast<std::size_t>(it - nodes.begin());
}

Mesh Mesh::with_node(double x) const {
  Mesh out = *this;
  if (!contains(x)) out.nodes.insert(std::upper_bound(out.nodes.begin(), out.nodes.end(), x), x);
  return out;
}

Mesh build_mesh(const Problem& problem, int n) {
  if (n < 2) throw std::invalid_argument("build_mesh: need n >= 2");
  const auto grid = coefficient_grid(problem);
  const double h = 1.0 / (n + 1);
  Mesh mesh;
  mesh.nodes.push_back(grid.front());
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = grid[i];
    const double b = grid[i + 1];
    const auto parts = static_cast<int>(std::ceil((b - a) / h - 1e-12));
    for (int k = 1; k < parts; ++k) mesh.nodes.push_back(a + (b - a) * k / parts);
    mesh.nodes.push_back(b);
  }
  return mesh;
}

FormSet assemble(const Problem& problem, const Mesh& mesh) {
  const std::size_t n = mesh.size();
  FormSet f;
  f.mesh = mesh;
  f.stiffness = SymBandMatrix(n, 1);
  f.mass = SymBandMatrix(n, 1);
  f.potential = SymBandMatrix(n, 1);
  f.boundary = SymBandMatrix(n, 1);
  f.weight = SymBandMatrix(n, 1);

  for (std::size_t e = 0; e + 1 < n; ++e) {
    const double h = mesh.nodes[e + 1] - mesh.nodes[e];
    const double k = problem.p(0.5 * (mesh.nodes[e] + mesh.nodes[e + 1])) / h;
    f.stiffness.add(e, e, k);
    f.stiffness.add(e, e + 1, -k);
    f.stiffness.add(e + 1, e + 1, k);
  }
  add_density(f.mass, PiecewiseQuadratic::constant(1.0), mesh);
  add_density(f.potential, problem.q.density, mesh);
  add_atoms(f.potential, problem.q.atoms, mesh);
  add_density(f.weight, problem.r.density, mesh);
  add_atoms(f.weight, problem.r.atoms, mesh);
  f.boundary.add(0, 0, problem.bc.v11());
  f.boundary.add(n - 1, n - 1, problem.bc.v22());

  f.first = problem.bc.dirichlet_left() ? 1 : 0;
  f.last = problem.bc.dirichlet_right() ? n - 1 : n;
  return f;
}

SymBandMatrix FormSet::p_form() const { return stiffness.plus_scaled(mass, 1.0).principal(first, last); }

SymBandMatrix FormSet::q_form() const {
  return potential.plus_scaled(mass, -1.0).plus_scaled(boundary, 1.0).principal(first, last);
}

SymBandMatrix FormSet::r_form() const { return weight.principal(first, last); }

SymBandMatrix pencil_matrix(const FormSet& forms, double lambda) {
  return forms.stiffness.plus_scaled(forms.potential, 1.0)
      .plus_scaled(forms.boundary, 1.0)
      .plus_scaled(forms.weight, -lambda)
      .principal(forms.first, forms.last);
}

SymBandMatrix restricted_pencil(const FormSet& forms, double lambda, double x) {
  const std::size_t k = forms.mesh.index_of(x);
  // Dirichlet at x: keep the active nodes strictly left of x.
  return forms.stiffness.plus_scaled(forms.potential, 1.0)
      .plus_scaled(forms.boundary, 1.0)
      .plus_scaled(forms.weight, -lambda)
      .principal(forms.first, std::max(forms.first, k));
}

Inertia restricted_inertia(const FormSet& forms, double lambda, double x, double tol) {
  if (!(x > 0.0 && x <= 1.0)) throw Error(ErrorKind::OutOfDomain, "restricted_inertia: x must lie in (0, 1]");
  return inertia(restricted_pencil(forms, lambda, x), tol);
}

Inertia restricted_inertia(const Problem& problem, const Mesh& mesh, double lambda, double x, double tol) {
  const Mesh m = mesh.contains(x) ? mesh : mesh.with_node(x);
  return restricted_inertia(assemble(problem, m), lambda, x, tol);
}

int negative_count(const FormSet& forms, double lambda) { return count_below(pencil_matrix(forms, lambda), 0.0); }

double eigencurve(const FormSet& forms, double lambda, int n) {
  const auto a = pencil_matrix(forms, lambda);
  const auto b = forms.p_form();
  if (n < 1 || static_cast<std::size_t>(n) > a.size())
    throw std::invalid_argument("eigencurve: index outside 1..dimension");
  auto below = [&](double t) { return count_below(a.plus_scaled(b, -t), 0.0); };
  double hi = 1.0;
  while (below(hi) < n) hi *= 2.0;
  double lo = -1.0;
  while (below(lo) >= n) lo *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (below(mid) >= n) hi = mid;
    else lo = mid;
    if (hi - lo <= 1e-15 * std::max(std::abs(lo), std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

double eigencurve(const Problem& problem, const Mesh& mesh, double lambda, int n) {
  return eigencurve(assemble(problem, mesh), lambda, n);
}

}  // namespace slosc
