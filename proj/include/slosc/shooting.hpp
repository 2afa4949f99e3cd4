#pragma once

// Shooting for the regularized first-order system
//
//   Y1' = (omega Y1 + Y2) / p,     Y2' = -omega (omega Y1 + Y2) / p,
//
// where omega is the antiderivative of q - lambda r, Y1 = y and
// Y2 = p y' - omega y is the quasi-derivative. Both components are continuous
// across point masses; only omega (and hence p y') jumps there.

#include <cstdint>
#include <utility>
#include <vector>

#include "slosc/problem.hpp"

namespace slosc {

struct ShootOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double zero_tol = 1e-10;        // bisection width for zero locations
  double endpoint_tol = 1e-8;     // |Y1| <= endpoint_tol * |Y| counts as a zero at the far end
  double renormalize_above = 1e6;
  double monotone_tol = 1e-8;     // admissible per-step decrease of the Pruefer angle (roundoff)
  std::int64_t max_steps = 20'000'000;
};

enum class Direction { Forward, Backward };

struct InteriorZero {
  double location;
  bool sign_change;
  double quasi_derivative_ratio;  // |Y2| / |Y| at the zero; 1 for a simple zero
};

struct ShootResult {
  Direction direction = Direction::Forward;
  double lambda = 0.0;
  // Accepted integration nodes in the order of integration.
  std::vector<double> t;
  std::vector<double> y1;
  std::vector<double> y2;
  std::vector<double> theta;      // continuous Pruefer angle, nondecreasing along the path
  std::vector<double> log_scale;  // true state = (y1, y2) * exp(log_scale)
  std::vector<InteriorZero> zeros;  // zeros of Y1 strictly inside (0, 1), sorted by t
  bool end_zero = false;          // Y1 vanishes at the terminal endpoint
  double omega1 = 0.0;
  double boundary_angle = 0.0;    // angle in (0, pi] encoding the terminal boundary condition
  double residual = 0.0;          // terminal boundary mismatch on the unit-norm state

  double theta_end() const { return theta.back(); }
  std::pair<double, double> end_state() const { return {y1.back(), y2.back()}; }
};

/// Unit-scale starting vector satisfying the condition at x = 0.
std::pair<double, double> initial_state(const BoundaryAngles& bc);

/// Starting vector at x = 1 for backward shooting; depends on omega(1).
std::pair<double, double> terminal_state(const BoundaryAngles& bc, double omega1);

ShootResult integrate(const Problem& problem, double lambda, const ShootOptions& options = {});
ShootResult integrate_backward(const Problem& problem, double lambda, const ShootOptions& options = {});

/// Interior zeros of Y1 in (0, 1), from crossings of the Pruefer angle through multiples of pi.
int prufer_count(const ShootResult& result);

/// Boundary mismatch at x = 1 for a forward trajectory; zero exactly at eigenvalues.
double boundary_residual(const ShootResult& result, double omega1, const BoundaryAngles& bc);

/// Number of negative squares of the pencil form at the trajectory's lambda,
/// read off from the terminal Pruefer angle against the boundary angle.
int oscillation_index(const ShootResult& result);

/// Zeros of the left-condition solution on (0, 1]; the point 1 is included
/// when Y1(1) vanishes.
std::vector<double> conjugate_points(const Problem& problem, double lambda, const ShootOptions& options = {});

/// Zeros of the right-condition solution on [0, 1), shooting backward from 1.
std::vector<double> right_conjugate_points(const Problem& problem, double lambda,
                                           const ShootOptions& options = {});

/// Copy with a single common scale so that max |Y1| = 1 and the first
/// non-negligible value of Y1 is positive.
ShootResult normalized(const ShootResult& result);

struct InvariantCounters {
  std::int64_t steps_checked = 0;
  std::int64_t zeros_checked = 0;
  std::int64_t monotonicity_violations = 0;
  std::int64_t simplicity_violations = 0;
};

/// Process-wide tallies of the per-step checks made by the integrator.
InvariantCounters invariant_counters();
void reset_invariant_counters();

}  // namespace slosc
