#include "slosc/band_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "slosc/csv.hpp"

namespace slosc {

SymBandMatrix::SymBandMatrix(std::size_t n, std::size_t bandwidth)
    : n_(n), w_(std::min(bandwidth, n == 0 ? 0 : n - 1)), lower_(w_ + 1, std::vector<double>(n, 0.0)) {}

double SymBandMatrix::operator()(std::size_t i, std::size_t j) const {
  if (i < j) std::swap(i, j);
  const std::size_t d = i - j;
  return d > w_ ? 0.0 : lower_[d][j];
}

void SymBandMatrix::set(std::size_t i, std::size_t j, double value) {
  if (i < j) std::swap(i, j);
  const std::size_t d = i - j;
  if (d > w_) throw std::out_of_range("SymBandMatrix: entry outside band");
  lower_[d][j] = value;
}

void SymBandMatrix::add(std::size_t i, std::size_t j, double value) {
  if (i < j) std::swap(i, j);
  const std::size_t d = i - j;
  if (d > w_) throw std::out_of_range("SymBandMatrix: entry outside band");
  lower_[d][j] += value;
}

SymBandMatrix SymBandMatrix::principal(std::size_t first, std::size_t last) const {
  last = std::min(last, n_);
  if (last <= first) return SymBandMatrix(0, 0);
  SymBandMatrix out(last - first, w_);
  for (std::size_t d = 0; d <= out.w_; ++d)
    for (std::size_t j = 0; j + d < out.n_; ++j) out.lower_[d][j] = lower_[d][first + j];
  return out;
}

SymBandMatrix SymBandMatrix::plus_scaled(const SymBandMatrix& other, double c) const {
  if (other.n_ != n_) throw std::invalid_argument("SymBandMatrix: size mismatch");
  SymBandMatrix out(n_, std::max(w_, other.w_));
  for (std::size_t d = 0; d <= w_; ++d)
    for (std::size_t j = 0; j + d < n_; ++j) out.lower_[d][j] += lower_[d][j];
  for (std::size_t d = 0; d <= other.w_; ++d)
    for (std::size_t j = 0; j + d < n_; ++j) out.lower_[d][j] += c * other.lower_[d][j];
  return out;
}

double SymBandMatrix::max_abs() const {
  double m = 0.0;
  for (std::size_t d = 0; d <= w_ && n_ > 0; ++d)
    for (std::size_t j = 0; j + d < n_; ++j) m = std::max(m, std::abs(lower_[d][j]));
  return m;
}

std::vector<double> SymBandMatrix::dense() const {
  std::vector<double> a(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) a[i * n_ + j] = (*this)(i, j);
  return a;
}

SymBandMatrix SymBandMatrix::from_dense(std::size_t n, const std::vector<double>& a) {
  SymBandMatrix out(n, n == 0 ? 0 : n - 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) out.set(i, j, 0.5 * (a[i * n + j] + a[j * n + i]));
  return out;
}

void SymBandMatrix::write_coordinates(std::ostream& os) const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j <= std::min(n_ - 1, i + w_); ++j) {
      const double v = (*this)(i, j);
      if (v != 0.0) os << i << ' ' << j << ' ' << format_double(v) << '\n';
    }
}

int count_below(const SymBandMatrix& a, double shift, int* breakdowns) {
  const std::size_t n = a.size();
  const std::size_t w = a.bandwidth();
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, a.max_abs() * a.max_abs());
  // l[i][k]: multiplier L(i, i-k-1) for the w previous columns, rolling window.
  std::vector<double> d(n);
  std::vector<std::vector<double>> L(n, std::vector<double>(w, 0.0));
  int negatives = 0;
  int replaced = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k0 = j > w ? j - w : 0;
    double djj = a(j, j) - shift;
    for (std::size_t k = k0; k < j; ++k) {
      const double ljk = L[j][j - k - 1];
      djj -= ljk * ljk * d[k];
    }
    if (std::abs(djj) < pivmin) {
      djj = -pivmin;
      ++replaced;
    }
    d[j] = djj;
    if (djj < 0.0) ++negatives;
    for (std::size_t i = j + 1; i <= std::min(n - 1, j + w); ++i) {
      double v = a(i, j);
      const std::size_t m0 = i > w ? i - w : 0;
      for (std::size_t k = std::max(m0, k0); k < j; ++k) v -= L[i][i - k - 1] * L[j][j - k - 1] * d[k];
      L[i][i - j - 1] = v / djj;
    }
  }
  if (breakdowns) *breakdowns += replaced;
  return negatives;
}

Inertia inertia(const SymBandMatrix& a, double tol) {
  const int n = static_cast<int>(a.size());
  const double scale = a.max_abs();
  if (scale == 0.0) return {0, n, 0, 0};
  const double eps = tol * scale;
  Inertia out;
  const int below_minus = count_below(a, -eps, &out.breakdowns);
  const int below_plus = eps > 0.0 ? count_below(a, eps, &out.breakdowns) : below_minus;
  out.negative = below_minus;
  out.zero = below_plus - below_minus;
  out.positive = n - below_plus;
  return out;
}

}  // namespace slosc
