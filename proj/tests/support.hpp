#pragma once

// Test problems and oracles that do not share code paths with the library.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "slosc/band_matrix.hpp"
#include "slosc/problem.hpp"

namespace slosc::test {

inline constexpr double kPi = std::numbers::pi;

inline Problem classical() { return validate_problem(Problem{}); }

inline Problem with_bc(Problem p, double theta0, double theta1) {
  p.bc = {theta0, theta1};
  return validate_problem(p);
}

inline Problem neumann() { return with_bc(classical(), kPi, kPi); }
inline Problem robin() { return with_bc(classical(), 0.0, kPi / 2.0); }

inline Problem delta_well() {
  Problem p = classical();
  p.q.atoms = {{0.5, -10.0}};
  return validate_problem(p);
}

inline Problem indefinite() {
  Problem p = classical();
  p.r.density = {{0.0, 0.5, 1.0}, {LocalQuadratic{1.0, 0.0, 0.0}, LocalQuadratic{-1.0, 0.0, 0.0}}};
  return validate_problem(p);
}

/// Random piecewise problem: piecewise-constant p in [0.5, 2], quadratic q pieces,
/// positive r pieces, a couple of atoms.
inline Problem random_problem(std::mt19937& rng, bool with_atoms = true, double theta0 = 0.0, double theta1 = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto grid = [&](int pieces) {
    std::vector<double> b{0.0};
    for (int i = 1; i < pieces; ++i) b.push_back(static_cast<double>(i) / pieces + 0.2 * (u(rng) - 0.5) / pieces);
    b.push_back(1.0);
    return b;
  };
  Problem p;
  p.p.breakpoints = grid(3);
  p.p.values = {0.5 + 1.5 * u(rng), 0.5 + 1.5 * u(rng), 0.5 + 1.5 * u(rng)};
  p.q.density.breakpoints = grid(2);
  p.q.density.polys = {LocalQuadratic{10 * (u(rng) - 0.5), 10 * (u(rng) - 0.5), 10 * (u(rng) - 0.5)},
                       LocalQuadratic{10 * (u(rng) - 0.5), 10 * (u(rng) - 0.5), 0.0}};
  p.r.density.breakpoints = grid(2);
  p.r.density.polys = {LocalQuadratic{0.5 + u(rng), 0.0, 0.0}, LocalQuadratic{0.5 + u(rng), 0.2 * u(rng), 0.0}};
  if (with_atoms) p.q.atoms = {{0.2 + 0.6 * u(rng), 8.0 * (u(rng) - 0.5)}};
  p.bc = {theta0, theta1};
  return validate_problem(p);
}

/// Composite Simpson rule.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Five-point Gauss-Legendre rule, exact for polynomials up to degree 9.
inline double gauss(const std::function<double(double)>& f, double a, double b) {
  static constexpr double node[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                     0.9061798459386640};
  static constexpr double weight[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                       0.4786286704993665, 0.2369268850561891};
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += weight[i] * f(c + h * node[i]);
  return s * h;
}

/// Bisection root of a continuous scalar function with a sign change on [a, b].
inline double root(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
    if (b - a <= 1e-16 * std::max(1.0, std::abs(a))) break;
  }
  return 0.5 * (a + b);
}

/// Ground state of -y'' - 10 delta_{1/2} y = lambda y with Dirichlet ends:
/// even solution sinh(kappa x) matched at 1/2 gives kappa = 5 tanh(kappa / 2).
inline double delta_ground_state() {
  const double kappa = root([](double k) { return k - 5.0 * std::tanh(k / 2.0); }, 1.0, 10.0);
  return -kappa * kappa;
}

/// Fixed-step RK4 on the classical pair (y, p y') with (p y') jumping by w y at atoms.
/// Returns y at the requested points (sorted, in [0, 1]); each point is hit exactly.
inline std::vector<double> reference_solution(const Problem& prob, double lambda, double y0, double py0,
                                              const std::vector<double>& at, int steps_per_unit = 20000) {
  auto grid = coefficient_grid(prob);
  std::vector<double> out;
  std::size_t next = 0;
  double y = y0;
  double py = py0;
  for (std::size_t s = 0; s + 1 < grid.size(); ++s) {
    const double a = grid[s];
    const double b = grid[s + 1];
    for (const auto& atom : prob.q.atoms)
      if (atom.location == a) py += atom.weight * y;
    for (const auto& atom : prob.r.atoms)
      if (atom.location == a) py -= lambda * atom.weight * y;
    const double pv = prob.p(0.5 * (a + b));
    auto f = [&](double x, double yy, double pp, double& dy, double& dp) {
      dy = pp / pv;
      dp = (prob.q.density(x) - lambda * prob.r.density(x)) * yy;
    };
    auto advance = [&](double from, double to) {
      const int n = std::max(4, static_cast<int>(std::ceil((to - from) * steps_per_unit)));
      const double h = (to - from) / n;
      for (int i = 0; i < n; ++i) {
        const double x = from + i * h;
        double k1y, k1p, k2y, k2p, k3y, k3p, k4y, k4p;
        f(x, y, py, k1y, k1p);
        f(x + h / 2, y + h / 2 * k1y, py + h / 2 * k1p, k2y, k2p);
        f(x + h / 2, y + h / 2 * k2y, py + h / 2 * k2p, k3y, k3p);
        f(x + h, y + h * k3y, py + h * k3p, k4y, k4p);
        y += h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
        py += h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
      }
    };
    double x = a;
    while (next < at.size() && at[next] < b) {
      if (at[next] > x) advance(x, at[next]);
      x = std::max(x, at[next]);
      out.push_back(y);
      ++next;
    }
    if (b > x) advance(x, b);
  }
  while (next < at.size()) {
    out.push_back(y);
    ++next;
  }
  return out;
}

inline Eigen::MatrixXd to_eigen(const SymBandMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return a;
}

/// Negative eigenvalue count from a dense symmetric eigensolver.
inline int dense_negatives(const SymBandMatrix& m, double below = 0.0) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m), Eigen::EigenvaluesOnly);
  int c = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) c += es.eigenvalues()(i) < below;
  return c;
}

/// Sorted generalized eigenvalues of (A, B), B positive definite.
inline std::vector<double> dense_generalized(const SymBandMatrix& a, const SymBandMatrix& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(a), to_eigen(b), Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return v;
}

}  // namespace slosc::test
