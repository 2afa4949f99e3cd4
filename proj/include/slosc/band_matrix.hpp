#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace slosc {

/// Symmetric matrix stored by its lower band: entry (i, j) with
/// 0 <= i - j <= bandwidth lives at lower_[i - j][j].
class SymBandMatrix {
 public:
  SymBandMatrix() = default;
  SymBandMatrix(std::size_t n, std::size_t bandwidth);

  std::size_t size() const { return n_; }
  std::size_t bandwidth() const { return w_; }

  double operator()(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double value);
  void add(std::size_t i, std::size_t j, double value);

  /// Principal submatrix on the contiguous index range [first, last).
  SymBandMatrix principal(std::size_t first, std::size_t last) const;
  /// this + c * other; bandwidths may differ.
  SymBandMatrix plus_scaled(const SymBandMatrix& other, double c) const;
  double max_abs() const;

  /// Row-major dense copy (tests and debugging).
  std::vector<double> dense() const;
  static SymBandMatrix from_dense(std::size_t n, const std::vector<double>& a);

  /// Coordinate dump: one "row col value" line per stored nonzero of the
  /// upper triangle including the diagonal.
  void write_coordinates(std::ostream& os) const;

 private:
  std::size_t n_ = 0;
  std::size_t w_ = 0;
  std::vector<std::vector<double>> lower_;
};

struct Inertia {
  int negative = 0;
  int zero = 0;
  int positive = 0;
  int breakdowns = 0;  // pivots replaced by a tiny negative value

  int dimension() const { return negative + zero + positive; }
  bool operator==(const Inertia&) const = default;
};

/// Number of eigenvalues strictly below `shift`: negative pivots of the
/// unpivoted band LDL^T factorization of A - shift I. Exactly vanishing pivots
/// are replaced by -pivmin (Sturm-count convention), counted in `breakdowns`.
int count_below(const SymBandMatrix& a, double shift, int* breakdowns = nullptr);

/// Sylvester inertia. Eigenvalues within eps = tol * max|a_ij| of zero are
/// reported as zero, from the two shifted factorizations of A -/+ eps I.
Inertia inertia(const SymBandMatrix& a, double tol = 1e-9);

}  // namespace slosc
