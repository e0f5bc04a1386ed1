#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tenlog/error.hpp"

namespace tenlog {

using Shape = std::vector<std::size_t>;

/// Absolute tolerance used wherever floating-point results are compared.
inline constexpr double kTolerance = 1e-12;

/// Largest tensor (in elements) the logic layers will construct.
inline constexpr std::size_t kDefaultElementCap = 10'000'000;

/// Product of the shape entries; throws TooLarge on size_t overflow.
inline std::size_t element_count(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) {
    if (d != 0 && n > std::numeric_limits<std::size_t>::max() / d) {
      throw Error(ErrorCode::kTooLarge, "tensor element count overflows");
    }
    n *= d;
  }
  return n;
}

inline std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

/// Dense rank-k array of reals in row-major order. Index 0 is the leftmost
/// (outermost) index. Rank is always at least 1; scalars are carried as
/// rank-1 tensors of dimension 1.
///
/// Tensors are immutable once constructed.
class Tensor {
 public:
  Tensor(Shape shape, std::vector<double> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    if (shape_.empty()) {
      throw Error(ErrorCode::kInvalidShape, "rank-0 tensors are not allowed");
    }
    for (std::size_t d : shape_) {
      if (d == 0) {
        throw Error(ErrorCode::kInvalidShape,
                    "dimension sizes must be positive, got " + shape_string(shape_));
      }
    }
    if (element_count(shape_) != data_.size()) {
      throw Error(ErrorCode::kInvalidShape,
                  "data length " + std::to_string(data_.size()) +
                      " does not match shape " + shape_string(shape_));
    }
  }

  static Tensor filled(Shape shape, double value) {
    const std::size_t n = element_count(shape);
    return Tensor(std::move(shape), std::vector<double>(n, value));
  }
  static Tensor zeros(Shape shape) { return filled(std::move(shape), 0.0); }
  static Tensor ones(std::size_t n) { return filled({n}, 1.0); }

  static Tensor vector(std::initializer_list<double> values) {
    return Tensor({values.size()}, std::vector<double>(values));
  }
  static Tensor vector(std::vector<double> values) {
    const std::size_t n = values.size();
    return Tensor({n}, std::move(values));
  }

  /// Row-major matrix from nested rows; all rows must have equal length.
  static Tensor matrix(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    std::vector<double> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
      if (row.size() != c) {
        throw Error(ErrorCode::kInvalidShape, "ragged matrix rows");
      }
      data.insert(data.end(), row.begin(), row.end());
    }
    return Tensor({r, c}, std::move(data));
  }

  static Tensor identity(std::size_t n) {
    std::vector<double> data(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) data[i * n + i] = 1.0;
    return Tensor({n, n}, std::move(data));
  }

  /// One-hot vector of length n with a 1 at position i.
  static Tensor basis(std::size_t n, std::size_t i) {
    if (i >= n) {
      throw Error(ErrorCode::kDimensionMismatch, "basis index out of range");
    }
    std::vector<double> data(n, 0.0);
    data[i] = 1.0;
    return Tensor({n}, std::move(data));
  }

  std::size_t rank() const noexcept { return shape_.size(); }
  const Shape& shape() const noexcept { return shape_; }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const noexcept { return data_.size(); }
  std::span<const double> data() const noexcept { return data_; }

  double operator[](std::size_t flat) const { return data_[flat]; }

  double at(std::span<const std::size_t> index) const {
    return data_[offset(index)];
  }
  double at(std::initializer_list<std::size_t> index) const {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }

  std::size_t offset(std::span<const std::size_t> index) const {
    if (index.size() != shape_.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "index rank differs from tensor rank");
    }
    std::size_t flat = 0;
    for (std::size_t i = 0; i < index.size(); ++i) {
      if (index[i] >= shape_[i]) {
        throw Error(ErrorCode::kDimensionMismatch, "index out of range");
      }
      flat = flat * shape_[i] + index[i];
    }
    return flat;
  }

  Tensor scaled(double alpha) const {
    std::vector<double> out(data_);
    for (double& x : out) x *= alpha;
    return Tensor(shape_, std::move(out));
  }

  friend Tensor operator+(const Tensor& a, const Tensor& b) {
    if (a.shape_ != b.shape_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  shape_string(a.shape_) + " + " + shape_string(b.shape_));
    }
    std::vector<double> out(a.data_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.data_[i];
    return Tensor(a.shape_, std::move(out));
  }

  /// Exact equality of shape and every entry.
  friend bool operator==(const Tensor&, const Tensor&) = default;

  bool approx_equal(const Tensor& other, double tol = kTolerance) const {
    if (shape_ != other.shape_) return false;
    for (std::size_t i = 0; i < data_.size(); ++i) {
      if (std::fabs(data_[i] - other.data_[i]) > tol) return false;
    }
    return true;
  }

 private:
  Shape shape_;
  std::vector<double> data_;
};

/// T x U: sums the rightmost index of `left` against the leftmost index of
/// `right`. The result has rank k+m-2, except that two vectors reduce to the
/// dimension-1 scalar carrier.
inline Tensor contract(const Tensor& left, const Tensor& right) {
  const std::size_t joined = left.shape().back();
  if (joined != right.shape().front()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cannot contract " + shape_string(left.shape()) + " with " +
                    shape_string(right.shape()));
  }
  Shape out_shape(left.shape().begin(), left.shape().end() - 1);
  out_shape.insert(out_shape.end(), right.shape().begin() + 1, right.shape().end());
  const bool scalar_carrier = out_shape.empty();
  if (scalar_carrier) out_shape.push_back(1);

  const std::size_t outer = left.size() / joined;
  const std::size_t inner = right.size() / joined;
  const auto lhs = left.data();
  const auto rhs = right.data();
  std::vector<double> out(outer * inner, 0.0);
  for (std::size_t i = 0; i < outer; ++i) {
    const double* lrow = lhs.data() + i * joined;
    double* orow = out.data() + i * inner;
    for (std::size_t s = 0; s < joined; ++s) {
      const double w = lrow[s];
      const double* rrow = rhs.data() + s * inner;
      for (std::size_t j = 0; j < inner; ++j) orow[j] += w * rrow[j];
    }
  }
  if (!scalar_carrier && out_shape.size() + 2 != left.rank() + right.rank()) {
    throw Error(ErrorCode::kInternal, "contraction rank arithmetic violated");
  }
  return Tensor(std::move(out_shape), std::move(out));
}

namespace detail {

template <class Op>
Tensor zip(const Tensor& a, const Tensor& b, Op op, const char* what) {
  if (a.shape() != b.shape()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + " of " + shape_string(a.shape()) + " and " +
                    shape_string(b.shape()));
  }
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a[i], b[i]);
  return Tensor(a.shape(), std::move(out));
}

}  // namespace detail

inline Tensor elementwise_min(const Tensor& a, const Tensor& b) {
  return detail::zip(a, b, [](double x, double y) { return std::min(x, y); }, "min");
}

inline Tensor elementwise_max(const Tensor& a, const Tensor& b) {
  return detail::zip(a, b, [](double x, double y) { return std::max(x, y); }, "max");
}

inline bool is_square(const Tensor& m) {
  return m.rank() == 2 && m.dim(0) == m.dim(1);
}

/// Direct read of the diagonal of a square matrix.
inline Tensor diag_extract(const Tensor& m) {
  if (!is_square(m)) {
    throw Error(ErrorCode::kNotSquare, "diagonal of " + shape_string(m.shape()));
  }
  const std::size_t n = m.dim(0);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = m[i * n + i];
  return Tensor::vector(std::move(out));
}

/// Square matrix with `v` on the diagonal and zeros elsewhere.
inline Tensor diag_build(const Tensor& v) {
  if (v.rank() != 1) {
    throw Error(ErrorCode::kInvalidShape, "diag_build expects a vector");
  }
  const std::size_t n = v.size();
  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) out[i * n + i] = v[i];
  return Tensor({n, n}, std::move(out));
}

inline bool is_diagonal(const Tensor& m) {
  if (!is_square(m)) return false;
  const std::size_t n = m.dim(0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && m[i * n + j] != 0.0) return false;
    }
  }
  return true;
}

inline bool near(double x, double target, double tol = kTolerance) {
  return std::fabs(x - target) <= tol;
}

/// True when every entry is within tolerance of 0 or 1.
inline bool is_characteristic(const Tensor& v, double tol = kTolerance) {
  return std::all_of(v.data().begin(), v.data().end(),
                     [tol](double x) { return near(x, 0.0, tol) || near(x, 1.0, tol); });
}

/// True for a rank-1 vector with exactly one entry equal to 1 and the rest 0.
inline bool is_one_hot(const Tensor& v, double tol = kTolerance) {
  if (v.rank() != 1 || !is_characteristic(v, tol)) return false;
  std::size_t ones = 0;
  for (double x : v.data()) ones += near(x, 1.0, tol) ? 1 : 0;
  return ones == 1;
}

inline std::string format_number(double x) {
  if (x == 0.0) return "0";  // folds -0
  std::ostringstream os;
  os << x;
  return os.str();
}

/// Human-readable rendering: vectors on one line, matrices row by row,
/// higher ranks as a list of row-major matrix slices over the leading indices.
inline std::string format_tensor(const Tensor& t) {
  std::ostringstream os;
  auto row = [&](std::size_t start, std::size_t len) {
    os << '[';
    for (std::size_t j = 0; j < len; ++j) {
      if (j) os << ' ';
      os << format_number(t[start + j]);
    }
    os << ']';
  };
  if (t.rank() == 1) {
    row(0, t.size());
    return os.str();
  }
  const std::size_t cols = t.shape().back();
  const std::size_t rows = t.shape()[t.rank() - 2];
  const std::size_t slices = t.size() / (rows * cols);
  for (std::size_t s = 0; s < slices; ++s) {
    if (t.rank() > 2) {
      os << "slice";
      std::size_t rem = s;
      std::vector<std::size_t> lead(t.rank() - 2);
      for (std::size_t k = lead.size(); k-- > 0;) {
        lead[k] = rem % t.dim(k);
        rem /= t.dim(k);
      }
      for (std::size_t k : lead) os << '[' << k << ']';
      os << ":\n";
    }
    for (std::size_t r = 0; r < rows; ++r) {
      row((s * rows + r) * cols, cols);
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace tenlog
