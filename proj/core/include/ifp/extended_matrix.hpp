#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace ifp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Product on [0, +inf] with the convention 0 * inf = 0.
inline double mul_ext(double a, double b) noexcept {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

/// Dense square matrix with entries in [0, +inf]. Row-major.
class ExtendedMatrix {
 public:
  ExtendedMatrix() = default;
  explicit ExtendedMatrix(std::size_t dim, double fill = 0.0)
      : dim_(dim), data_(dim * dim, fill) {}

  static ExtendedMatrix identity(std::size_t dim) {
    ExtendedMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }

  double& operator()(std::size_t i, std::size_t j) {
    assert(i < dim_ && j < dim_);
    return data_[i * dim_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    assert(i < dim_ && j < dim_);
    return data_[i * dim_ + j];
  }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<const double> data() const noexcept { return data_; }

  bool all_finite() const noexcept {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  double max_entry() const noexcept {
    double m = 0.0;
    for (double v : data_) m = v > m ? v : m;
    return m;
  }

  /// (M x)_i under 0 * inf = 0. Both M and x may hold +inf.
  std::vector<double> apply(std::span<const double> x) const {
    assert(x.size() == dim_);
    std::vector<double> y(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) acc += mul_ext((*this)(i, j), x[j]);
      y[i] = acc;
    }
    return y;
  }

  ExtendedMatrix scaled(double c) const {
    ExtendedMatrix out(*this);
    for (double& v : out.data_) v = mul_ext(v, c);
    return out;
  }

  /// Entrywise (Hadamard) product under 0 * inf = 0.
  ExtendedMatrix hadamard(const ExtendedMatrix& other) const {
    assert(other.dim_ == dim_);
    ExtendedMatrix out(dim_);
    for (std::size_t k = 0; k < data_.size(); ++k)
      out.data_[k] = mul_ext(data_[k], other.data_[k]);
    return out;
  }

  /// Principal submatrix on the given index set (in the given order).
  ExtendedMatrix submatrix(std::span<const std::size_t> idx) const {
    ExtendedMatrix out(idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) out(a, b) = (*this)(idx[a], idx[b]);
    return out;
  }

  friend bool operator==(const ExtendedMatrix&, const ExtendedMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

}  // namespace ifp
