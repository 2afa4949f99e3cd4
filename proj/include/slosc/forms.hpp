#pragma once

// Galerkin discretization of the pencil form
//
//   a_lambda(y, y) = int p |y'|^2 + int (q - lambda r) |y|^2 + <V y^, y^>
//
// in the piecewise-linear hat basis, plus inertia-based counting on it.

#include <cstddef>
#include <vector>

#include "slosc/band_matrix.hpp"
#include "slosc/problem.hpp"

namespace slosc {

struct Mesh {
  std::vector<double> nodes;

  std::size_t size() const { return nodes.size(); }
  bool contains(double x) const;
  /// Index of the node equal to x; throws MeshMismatch if x is not a node.
  std::size_t index_of(double x) const;
  Mesh with_node(double x) const;
};

/// Refines the coefficient grid so that every spacing is at most 1/(n+1).
Mesh build_mesh(const Problem& problem, int n);

/// All matrices are over every mesh node; essential endpoints are dropped
/// only when a pencil is formed, so [first, last) is the active range.
struct FormSet {
  Mesh mesh;
  SymBandMatrix stiffness;  // int p y' y'
  SymBandMatrix mass;       // int y y
  SymBandMatrix potential;  // int q y y, density and atoms
  SymBandMatrix boundary;   // <V y^, y^>: V11 at node 0, V22 at the last node
  SymBandMatrix weight;     // int r y y, density and atoms
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t dimension() const { return last - first; }
  // The three forms below are already restricted to the active range.
  /// Uniformly positive form: stiffness + mass.
  SymBandMatrix p_form() const;
  /// potential - mass + boundary. Its -mass cancels the +mass of p_form.
  SymBandMatrix q_form() const;
  SymBandMatrix r_form() const;
};

FormSet assemble(const Problem& problem, const Mesh& mesh);

/// A(lambda) = stiffness + potential + boundary - lambda * weight on the active range.
SymBandMatrix pencil_matrix(const FormSet& forms, double lambda);

/// Pencil restricted to functions supported on [0, x] with y(x) = 0; x must be a mesh node.
SymBandMatrix restricted_pencil(const FormSet& forms, double lambda, double x);

Inertia restricted_inertia(const FormSet& forms, double lambda, double x, double tol = 1e-9);
/// Convenience overload; inserts x into the mesh when it is not a node.
Inertia restricted_inertia(const Problem& problem, const Mesh& mesh, double lambda, double x,
                           double tol = 1e-9);

/// Number of negative squares of A(lambda) (no zero band).
int negative_count(const FormSet& forms, double lambda);

/// n-th smallest Lambda (n >= 1) with A(lambda) v = Lambda * p_form v, by bisection
/// on the inertia of A(lambda) - Lambda * p_form.
double eigencurve(const FormSet& forms, double lambda, int n);
double eigencurve(const Problem& problem, const Mesh& mesh, double lambda, int n);

}  // namespace slosc
