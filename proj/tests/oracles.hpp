// Reference implementations used only by the tests. None of them touch the
// library's contraction or set code.
#pragma once

#include <cstddef>
#include <random>
#include <set>
#include <vector>

#include "tenlog/tensor.hpp"

namespace oracle {

using tenlog::Shape;
using tenlog::Tensor;

inline std::vector<std::size_t> unravel(std::size_t flat, const Shape& shape) {
  std::vector<std::size_t> idx(shape.size());
  for (std::size_t d = shape.size(); d-- > 0;) {
    idx[d] = flat % shape[d];
    flat /= shape[d];
  }
  return idx;
}

inline std::size_t ravel(const std::vector<std::size_t>& idx, const Shape& shape) {
  std::size_t flat = 0;
  for (std::size_t d = 0; d < shape.size(); ++d) flat = flat * shape[d] + idx[d];
  return flat;
}

// Einsum over explicit multi-indices:
//   out[a..., b...] = sum_s left[a..., s] * right[s, b...]
// Rank-1 by rank-1 gives the [1] scalar carrier.
inline Tensor einsum(const Tensor& left, const Tensor& right) {
  const Shape& ls = left.shape();
  const Shape& rs = right.shape();
  Shape out_shape(ls.begin(), ls.end() - 1);
  out_shape.insert(out_shape.end(), rs.begin() + 1, rs.end());
  if (out_shape.empty()) out_shape = {1};
  std::size_t total = 1;
  for (std::size_t d : out_shape) total *= d;
  const std::size_t shared = ls.back();
  const std::size_t left_free = ls.size() - 1;

  std::vector<double> out(total, 0.0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::vector<std::size_t> oi = unravel(flat, out_shape);
    if (left_free + rs.size() - 1 == 0) oi.clear();
    double acc = 0.0;
    for (std::size_t s = 0; s < shared; ++s) {
      std::vector<std::size_t> li(oi.begin(), oi.begin() + left_free);
      li.push_back(s);
      std::vector<std::size_t> ri{s};
      ri.insert(ri.end(), oi.begin() + left_free, oi.end());
      acc += left[ravel(li, ls)] * right[ravel(ri, rs)];
    }
    out[flat] = acc;
  }
  return Tensor(out_shape, std::move(out));
}

inline Tensor random_tensor(std::mt19937_64& rng, Shape shape) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  std::vector<double> data(n);
  for (double& x : data) x = u(rng);
  return Tensor(std::move(shape), std::move(data));
}

inline std::vector<double> bits(unsigned mask, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = (mask >> i & 1u) ? 1.0 : 0.0;
  return v;
}

inline bool subset(unsigned x, unsigned y) { return (x & ~y) == 0; }

inline bool nonempty(unsigned x) { return x != 0; }

// Crisp truth tables written out by hand.
inline bool truth_and(bool a, bool b) { return a && b; }
inline bool truth_or(bool a, bool b) { return a || b; }
inline bool truth_implies(bool a, bool b) { return !a || b; }

}  // namespace oracle
