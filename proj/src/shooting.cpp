#include "slosc/shooting.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>

#include "slosc/error.hpp"

namespace slosc {

namespace {

constexpr double kPi = std::numbers::pi;

std::atomic<std::int64_t> g_steps{0};
std::atomic<std::int64_t> g_zeros{0};
std::atomic<std::int64_t> g_monotone{0};
std::atomic<std::int64_t> g_simple{0};

using State = std::array<double, 2>;

double norm(const State& y) { return std::hypot(y[0], y[1]); }

// Coefficients of the system on one segment between consecutive grid nodes:
// p is constant and omega is a cubic in s = t - origin.
struct Segment {
  double a;
  double b;
  double p;
  double origin;
  std::array<double, 4> c;

  double omega(double t) const {
    const double s = t - origin;
    return c[0] + s * (c[1] + s * (c[2] + s * c[3]));
  }
  State rhs(double t, const State& y) const {
    const double w = omega(t);
    const double flux = (w * y[0] + y[1]) / p;  // = y'
    return {flux, -w * flux};
  }
  // Rate of the forward-oriented Pruefer angle, (p y')^2 / (p |Y|^2).
  double angle_rate(double t, const State& y) const {
    const double w = omega(t);
    const double py = w * y[0] + y[1];
    return py * py / (p * (y[0] * y[0] + y[1] * y[1]));
  }
};

std::vector<Segment> make_segments(const Problem& problem, const OmegaFunction& omega) {
  const auto grid = coefficient_grid(problem);
  std::vector<Segment> segments;
  segments.reserve(grid.size());
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = grid[i];
    const double b = grid[i + 1];
    const double mid = 0.5 * (a + b);
    const auto& piece = omega.piece_at(mid);
    segments.push_back({a, b, problem.p(mid), piece.a, piece.c});
  }
  return segments;
}

// Dormand-Prince 5(4).
struct StepOutput {
  State y;
  State err;
};

StepOutput dp_step(const Segment& seg, double t, const State& y, double h) {
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                          a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                          a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                          b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                          e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

  auto at = [&](std::initializer_list<std::pair<double, const State*>> terms) {
    State out = y;
    for (const auto& [coef, k] : terms) {
      out[0] += h * coef * (*k)[0];
      out[1] += h * coef * (*k)[1];
    }
    return out;
  };
  const State k1 = seg.rhs(t, y);
  const State k2 = seg.rhs(t + h / 5.0, at({{a21, &k1}}));
  const State k3 = seg.rhs(t + 3.0 * h / 10.0, at({{a31, &k1}, {a32, &k2}}));
  const State k4 = seg.rhs(t + 4.0 * h / 5.0, at({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
  const State k5 = seg.rhs(t + 8.0 * h / 9.0, at({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
  const State k6 = seg.rhs(t + h, at({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
  const State y5 = at({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
  const State k7 = seg.rhs(t + h, y5);
  State err;
  for (int i = 0; i < 2; ++i)
    err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
  return {y5, err};
}

double terminal_boundary_angle(const BoundaryAngles& bc, double omega1, Direction dir) {
  if (dir == Direction::Forward) {
    if (bc.dirichlet_right()) return kPi;
    return std::atan2(1.0, -(bc.v22() + omega1));
  }
  if (bc.dirichlet_left()) return kPi;
  return std::atan2(1.0, -bc.v11());
}

double terminal_residual(const BoundaryAngles& bc, double omega1, Direction dir, const State& y) {
  if (dir == Direction::Forward) {
    if (bc.dirichlet_right()) return y[0];
    return y[1] + omega1 * y[0] + bc.v22() * y[0];
  }
  if (bc.dirichlet_left()) return y[0];
  return y[1] - bc.v11() * y[0];
}

struct ZeroRecord {
  InteriorZero zero;
  long k;
};

ShootResult run(const Problem& problem, double lambda, Direction dir, const ShootOptions& opt) {
  const auto omega = build_omega(problem.q, problem.r, lambda);
  auto segments = make_segments(problem, omega);
  const double sigma = dir == Direction::Forward ? 1.0 : -1.0;
  if (dir == Direction::Backward) std::reverse(segments.begin(), segments.end());

  ShootResult out;
  out.direction = dir;
  out.lambda = lambda;
  out.omega1 = omega.omega1();

  State y;
  {
    const auto [a, b] = dir == Direction::Forward ? initial_state(problem.bc)
                                                  : terminal_state(problem.bc, omega.omega1());
    y = {a, b};
  }
  double t = dir == Direction::Forward ? 0.0 : 1.0;
  double log_scale = 0.0;
  auto raw_angle = [sigma](const State& s) { return std::atan2(s[0], sigma * s[1]); };
  double theta = raw_angle(y);
  double raw_prev = theta;

  auto record = [&] {
    out.t.push_back(t);
    out.y1.push_back(y[0]);
    out.y2.push_back(y[1]);
    out.theta.push_back(theta);
    out.log_scale.push_back(log_scale);
  };
  record();

  std::vector<ZeroRecord> zeros;
  std::int64_t steps = 0;
  std::int64_t zero_checks = 0;
  double h_try = 1e-2;

  for (const auto& seg : segments) {
    const double t_end = dir == Direction::Forward ? seg.b : seg.a;
    while (sigma * (t_end - t) > 0.0) {
      const double remaining = std::abs(t_end - t);
      const bool last = h_try >= remaining;
      const double h_abs = last ? remaining : h_try;
      if (h_abs < 1e-15 * std::max(1.0, std::abs(t)))
        throw Error(ErrorKind::StepFailure, "step size underflow at t = " + std::to_string(t) +
                                                ", lambda = " + std::to_string(lambda));
      if (++steps > opt.max_steps) throw Error(ErrorKind::StepFailure, "step budget exhausted");

      const double h = sigma * h_abs;
      const auto step = dp_step(seg, t, y, h);
      const double scale = opt.atol + opt.rtol * std::max(norm(y), norm(step.y));
      const double err = std::max(std::abs(step.err[0]), std::abs(step.err[1])) / scale;
      const double t_new = last ? t_end : t + h;
      const double rotation =
          h_abs * std::max(seg.angle_rate(t, y), seg.angle_rate(t_new, step.y));
      if (!(err <= 1.0) || rotation > 1.0) {
        double factor = std::isfinite(err) && err > 0.0 ? std::max(0.1, 0.9 * std::pow(err, -0.25)) : 0.1;
        if (rotation > 1.0) factor = std::min(factor, 0.5);
        h_try = h_abs * std::min(factor, 0.9);
        continue;
      }

      // Accepted: Pruefer bookkeeping.
      const double raw_new = raw_angle(step.y);
      double delta = std::remainder(raw_new - raw_prev, 2.0 * kPi);
      if (delta < -opt.monotone_tol) {
        g_monotone.fetch_add(1);
        throw Error(ErrorKind::InvariantViolation,
                    "Pruefer angle decreased by " + std::to_string(-delta) + " at t = " + std::to_string(t_new));
      }
      delta = std::max(delta, 0.0);
      const double theta_new = theta + delta;
      if (!(norm(step.y) > 0.0)) {
        g_simple.fetch_add(1);
        throw Error(ErrorKind::InvariantViolation, "trivial state reached at t = " + std::to_string(t_new));
      }

      // Zero crossings: multiples of pi in (theta, theta_new].
      for (long k = static_cast<long>(std::floor(theta / kPi)) + 1; k * kPi <= theta_new; ++k) {
        if (k < 1) continue;
        const double sign0 = std::copysign(1.0, y[0]);
        double lo = 0.0;
        double hi = h_abs;
        State y_lo = y;
        State y_hi = step.y;
        while (hi - lo > opt.zero_tol) {
          const double mid = 0.5 * (lo + hi);
          const State ym = dp_step(seg, t, y, sigma * mid).y;
          if (ym[0] != 0.0 && std::copysign(1.0, ym[0]) == sign0) {
            lo = mid;
            y_lo = ym;
          } else {
            hi = mid;
            y_hi = ym;
          }
        }
        InteriorZero z;
        z.location = t + sigma * 0.5 * (lo + hi);
        z.quasi_derivative_ratio = std::abs(y_hi[1]) / norm(y_hi);
        // A step can end on the zero itself, leaving Y1 at rounding level with the
        // old sign. There Y1' = Y2 / p is nonzero, so Y1 still changes sign.
        const bool on_zero = std::abs(y_hi[0]) <= 1e-12 * norm(y_hi);
        z.sign_change = (y_lo[0] * y_hi[0] < 0.0) || (on_zero && y_hi[1] != 0.0);
        ++zero_checks;
        if (!z.sign_change || z.quasi_derivative_ratio < 0.5) {
          g_simple.fetch_add(1);
          throw Error(ErrorKind::InvariantViolation,
                      "degenerate zero of Y1 at t = " + std::to_string(z.location));
        }
        zeros.push_back({z, k});
      }

      t = t_new;
      y = step.y;
      theta = theta_new;
      raw_prev = raw_new;
      const double n = norm(y);
      if (n > opt.renormalize_above || n < 1.0 / opt.renormalize_above) {
        y[0] /= n;
        y[1] /= n;
        log_scale += std::log(n);
      }
      record();

      const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      const double next = h_abs * std::clamp(grow, 0.2, 5.0);
      h_try = last ? std::max(h_try, next) : next;
    }
  }

  out.boundary_angle = terminal_boundary_angle(problem.bc, out.omega1, dir);
  out.residual = terminal_residual(problem.bc, out.omega1, dir, y);
  out.end_zero = std::abs(y[0]) <= opt.endpoint_tol * norm(y);
  const long k_end = std::lround(theta / kPi);
  for (const auto& z : zeros) {
    if (out.end_zero && z.k == k_end) continue;
    out.zeros.push_back(z.zero);
  }
  if (dir == Direction::Backward) std::reverse(out.zeros.begin(), out.zeros.end());

  g_steps.fetch_add(steps);
  g_zeros.fetch_add(zero_checks);
  return out;
}

}  // namespace

std::pair<double, double> initial_state(const BoundaryAngles& bc) {
  if (bc.dirichlet_left()) return {0.0, 1.0};
  return {1.0, bc.v11()};
}

std::pair<double, double> terminal_state(const BoundaryAngles& bc, double omega1) {
  if (bc.dirichlet_right()) return {0.0, -1.0};
  return {1.0, -(bc.v22() + omega1)};
}

ShootResult integrate(const Problem& problem, double lambda, const ShootOptions& options) {
  return run(problem, lambda, Direction::Forward, options);
}

ShootResult integrate_backward(const Problem& problem, double lambda, const ShootOptions& options) {
  return run(problem, lambda, Direction::Backward, options);
}

int prufer_count(const ShootResult& result) {
  const double theta = result.theta_end();
  // multiples k >= 1 with k pi < theta
  long count = theta > 0.0 ? static_cast<long>(std::ceil(theta / kPi)) - 1 : 0;
  if (result.end_zero) {
    const long k_end = std::lround(theta / kPi);
    if (k_end >= 1 && k_end * kPi < theta) --count;
  }
  return static_cast<int>(std::max(0L, count));
}

double boundary_residual(const ShootResult& result, double omega1, const BoundaryAngles& bc) {
  const auto [y1, y2] = result.end_state();
  return terminal_residual(bc, omega1, Direction::Forward, {y1, y2});
}

int oscillation_index(const ShootResult& result) {
  const double excess = result.theta_end() - result.boundary_angle;
  if (excess <= 0.0) return 0;
  return static_cast<int>(std::ceil(excess / kPi));
}

std::vector<double> conjugate_points(const Problem& problem, double lambda, const ShootOptions& options) {
  const auto result = integrate(problem, lambda, options);
  std::vector<double> points;
  for (const auto& z : result.zeros) points.push_back(z.location);
  if (result.end_zero) points.push_back(1.0);
  return points;
}

std::vector<double> right_conjugate_points(const Problem& problem, double lambda,
                                           const ShootOptions& options) {
  const auto result = integrate_backward(problem, lambda, options);
  std::vector<double> points;
  if (result.end_zero) points.push_back(0.0);
  for (const auto& z : result.zeros) points.push_back(z.location);
  return points;
}

ShootResult normalized(const ShootResult& result) {
  ShootResult out = result;
  const double ref = *std::max_element(result.log_scale.begin(), result.log_scale.end());
  double peak = 0.0;
  for (std::size_t i = 0; i < out.t.size(); ++i) {
    const double f = std::exp(result.log_scale[i] - ref);
    out.y1[i] *= f;
    out.y2[i] *= f;
    out.log_scale[i] = 0.0;
    peak = std::max(peak, std::abs(out.y1[i]));
  }
  double sign = 1.0;
  for (double v : out.y1) {
    if (std::abs(v) > 1e-8 * peak) {
      sign = v > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  const double s = sign / peak;
  for (std::size_t i = 0; i < out.t.size(); ++i) {
    out.y1[i] *= s;
    out.y2[i] *= s;
  }
  out.residual *= s * std::exp(result.log_scale.back() - ref);
  return out;
}

InvariantCounters invariant_counters() {
  return {g_steps.load(), g_zeros.load(), g_monotone.load(), g_simple.load()};
}

void reset_invariant_counters() {
  g_steps = 0;
  g_zeros = 0;
  g_monotone = 0;
  g_simple = 0;
}

}  // namespace slosc
