#pragma once

// Coefficients, boundary data and the antiderivative regularization of the
// Sturm-Liouville problem  -(p y')' + (q - lambda r) y = 0  on [0, 1].

#include <array>
#include <span>
#include <vector>

namespace slosc {

/// Piecewise-constant function on [0, 1]. Used for the leading coefficient p.
struct PiecewiseConstant {
  std::vector<double> breakpoints;  // 0 = b_0 < b_1 < ... < b_m = 1
  std::vector<double> values;       // one per subinterval

  static PiecewiseConstant constant(double value);

  /// Right-continuous evaluation; x = 1 returns the last value.
  double operator()(double x) const;
  double min_value() const;
};

/// Quadratic on one subinterval in the local variable s = x - left breakpoint:
/// c[0] + c[1] s + c[2] s^2.
using LocalQuadratic = std::array<double, 3>;

/// Piecewise polynomial of degree <= 2 with local coefficients per piece.
struct PiecewiseQuadratic {
  std::vector<double> breakpoints;
  std::vector<LocalQuadratic> polys;

  static PiecewiseQuadratic constant(double value);
  static PiecewiseQuadratic zero() { return constant(0.0); }

  std::size_t piece_index(double x) const;
  double operator()(double x) const;
  /// Coefficients of the piece containing [a, b], re-expanded around a.
  LocalQuadratic local_at(double a) const;
  bool is_zero() const;
};

struct Atom {
  double location;
  double weight;
};

/// Element of W_2^{-1}[0,1] realized as an L2 density plus point masses.
struct DistributionalCoefficient {
  PiecewiseQuadratic density = PiecewiseQuadratic::zero();
  std::vector<Atom> atoms;

  static DistributionalCoefficient constant(double value);
  static DistributionalCoefficient zero() { return constant(0.0); }

  bool is_zero() const;
  /// Integral of the density over [0, 1] plus the sum of atom weights.
  double total_mass() const;

  DistributionalCoefficient scaled(double c) const;
  /// Sum on the merged grid; coincident atoms are combined.
  DistributionalCoefficient plus(const DistributionalCoefficient& other) const;
  /// Pullback under x -> 1 - x.
  DistributionalCoefficient reflected() const;
};

/// Diagonal unitary boundary matrix U = diag(exp(i theta0), exp(i theta1)).
/// theta = 0 is the essential (Dirichlet) condition at that endpoint.
struct BoundaryAngles {
  double theta0 = 0.0;
  double theta1 = 0.0;

  bool dirichlet_left() const { return theta0 == 0.0; }
  bool dirichlet_right() const { return theta1 == 0.0; }
  double v11() const;
  double v22() const;
};

/// Diagonal entry of the boundary matrix V: -cot(theta/2), or 0 for theta = 0.
double boundary_v(double theta);

struct Problem {
  PiecewiseConstant p = PiecewiseConstant::constant(1.0);
  DistributionalCoefficient q = DistributionalCoefficient::zero();
  DistributionalCoefficient r = DistributionalCoefficient::constant(1.0);
  BoundaryAngles bc;
};

/// Normalizes a raw problem (merges duplicate breakpoints, sorts and combines
/// atoms, wraps angles into (-pi, pi]) and rejects invalid input.
Problem validate_problem(const Problem& raw);

/// Union of all coefficient breakpoints and atom locations, sorted, 0 and 1 included.
std::vector<double> coefficient_grid(const Problem& problem);

// Metamorphic transforms used by verification code.
/// Multiplies the whole pencil form by c > 0: p, q, r and the boundary entries V.
Problem scaled_problem(const Problem& problem, double c);
Problem shifted_problem(const Problem& problem, double c);  // q -> q + c r
Problem mirrored_problem(const Problem& problem);           // x -> 1 - x

enum class Side { Left, Right };

/// Antiderivative omega of q - lambda r with omega(0) = 0, stored as local
/// cubics on the union grid of both coefficients and all atoms. Right-continuous
/// at jumps.
class OmegaFunction {
 public:
  struct Piece {
    double a;
    double b;
    std::array<double, 4> c;  // omega(a+) + c1 s + c2 s^2 + c3 s^3, s = x - a
  };
  struct Jump {
    double location;
    double size;
  };

  OmegaFunction(std::vector<Piece> pieces, std::vector<Jump> jumps);

  double operator()(double x, Side side = Side::Right) const;
  double omega1() const { return omega1_; }
  std::span<const Piece> pieces() const { return pieces_; }
  std::span<const Jump> jumps() const { return jumps_; }
  /// Piece whose closed interval contains x; prefers the piece to the right.
  const Piece& piece_at(double x, Side side = Side::Right) const;

 private:
  std::vector<Piece> pieces_;
  std::vector<Jump> jumps_;
  double omega1_ = 0.0;
};

OmegaFunction build_omega(const DistributionalCoefficient& q, const DistributionalCoefficient& r,
                          double lambda);

/// Checked one-sided evaluation; throws OutOfDomain outside [0, 1].
double eval_omega(const OmegaFunction& w, double x, Side side);

}  // namespace slosc
