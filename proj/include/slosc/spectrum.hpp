#pragma once

// Eigenvalues indexed outward from a positivity point xi: lambda_1 < lambda_2 < ...
// to the right of xi and lambda_{-1} > lambda_{-2} > ... to the left, with the
// oscillation and index checks that tie them to zero counts.

#include <optional>
#include <string>
#include <vector>

#include "slosc/band_matrix.hpp"
#include "slosc/forms.hpp"
#include "slosc/problem.hpp"
#include "slosc/shooting.hpp"

namespace slosc {

struct SpectrumOptions {
  ShootOptions shoot;
  double eig_rtol = 1e-10;         // bisection width relative to max(1, |lambda|)
  int mesh_n = 2000;               // FEM mesh for certificates, index checks and agreement
  double inertia_tol = 1e-9;
  double agreement_rtol = 1e-3;    // shooting vs FEM eigenvalue
  double scan_horizon = 1e6;       // largest |lambda - xi| scanned per side
  double xi_cap = 1e9;             // find_positivity_shift gives up beyond |xi| > xi_cap
};

struct PositivityCertificate {
  double xi = 0.0;
  bool positive = false;
  Inertia fem;
  int shooting_zeros = 0;
  int shooting_index = 0;
  double theta_end = 0.0;
  double boundary_angle = 0.0;
};

PositivityCertificate check_positivity(const Problem& problem, double xi, const SpectrumOptions& options = {});

/// Scans xi = -1, -2, -4, ... until check_positivity passes.
double find_positivity_shift(const Problem& problem, const SpectrumOptions& options = {});

struct Bracket {
  int n;  // signed index; lo < hi always
  double lo;
  double hi;
  std::optional<double> xi;  // positivity point the scan started from, when known
};

struct SequenceStatus {
  int found = 0;
  bool terminated = false;  // fewer than requested eigenvalues on this side
  std::string reason;
};

struct BracketSet {
  std::vector<Bracket> brackets;  // ascending in lambda
  SequenceStatus positive;
  SequenceStatus negative;
};

/// Shooting count of eigenvalues strictly between xi and lambda.
int eigenvalue_count(const Problem& problem, double lambda, const ShootOptions& options = {});

BracketSet bracket_eigenvalues(const Problem& problem, double xi, int n_max, const SpectrumOptions& options = {});

struct EigenvalueRecord {
  int index = 0;
  double lambda = 0.0;
  ShootResult eigenfunction;  // normalized: max |y| = 1, first lobe positive
  int zero_count = 0;
  int inertia_at_lambda = 0;  // negative squares of the FEM pencil at lambda
  double fem_lambda = 0.0;
  bool methods_agree = false;
};

EigenvalueRecord refine_eigenvalue(const Problem& problem, const FormSet& forms, const Bracket& bracket,
                                   const SpectrumOptions& options = {});
EigenvalueRecord refine_eigenvalue(const Problem& problem, const Bracket& bracket,
                                   const SpectrumOptions& options = {});

/// FEM eigenvalue with index n: the root of the eigencurve Lambda_|n| on the side of xi
/// given by sign(n), located by bisection on the pencil's inertia near `guess`.
double fem_eigenvalue(const FormSet& forms, int n, double guess, double xi);

struct SpectrumReport {
  double xi = 0.0;
  PositivityCertificate certificate;
  std::vector<EigenvalueRecord> records;  // ascending in lambda
  SequenceStatus positive;
  SequenceStatus negative;

  bool all_methods_agree() const;
  const EigenvalueRecord* find(int n) const;
};

/// Full pipeline. With no xi, find_positivity_shift picks one; a given xi is
/// certified first and NotPositive is thrown if it fails.
SpectrumReport solve_spectrum(const Problem& problem, std::optional<double> xi, int n_max,
                              const SpectrumOptions& options = {});

struct VerificationCheck {
  std::string name;
  int n = 0;
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<VerificationCheck> checks;
  bool passed() const;
};

/// Oscillation checks per record: |n|-1 zeros, sign changes, the index formula,
/// side of xi, and strict interlacing of consecutive eigenfunctions.
VerificationReport verify_oscillation(const Problem& problem, const SpectrumReport& report);

/// True when zeros of the next eigenfunction strictly alternate with {0} u zeros u {1}.
/// On failure `where` names the first interval that lacks exactly one zero.
bool zeros_interlace(const std::vector<double>& inner, const std::vector<double>& outer, std::string* where = nullptr);

}  // namespace slosc
