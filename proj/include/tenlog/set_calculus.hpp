#pragma once

#include <cstddef>
#include <sstream>
#include <string>
#include <utility>

#include "tenlog/error.hpp"
#include "tenlog/model.hpp"
#include "tenlog/tensor.hpp"
#include "tenlog/truth_calculus.hpp"

namespace tenlog {

/// A predicate as the map X -> X intersect M_P: a diagonal 0/1 matrix in
/// D (x) D with (i,i) = 1 iff atom i is in the extension.
class SetPredicateMatrix {
 public:
  explicit SetPredicateMatrix(Tensor t) : tensor_(std::move(t)) {
    if (!is_square(tensor_)) {
      throw Error(ErrorCode::kInvalidSetPredicate,
                  "expected a square matrix, got " + shape_string(tensor_.shape()));
    }
    if (!is_diagonal(tensor_)) {
      throw Error(ErrorCode::kInvalidSetPredicate, "matrix is not diagonal");
    }
    for (double x : tensor_.data()) {
      if (x != 0.0 && x != 1.0) {
        throw Error(ErrorCode::kInvalidSetPredicate,
                    "diagonal entry " + format_number(x) + " is not 0 or 1");
      }
    }
  }

  const Tensor& tensor() const noexcept { return tensor_; }
  std::size_t domain_size() const { return tensor_.dim(0); }

  friend bool operator==(const SetPredicateMatrix&, const SetPredicateMatrix&) = default;

 private:
  Tensor tensor_;
};

/// A subset of the domain as its 0/1 characteristic vector.
class SetVector {
 public:
  explicit SetVector(Tensor t) : tensor_(std::move(t)) {
    if (tensor_.rank() != 1) {
      throw Error(ErrorCode::kNonCharacteristic,
                  "a set vector has rank 1, got " + shape_string(tensor_.shape()));
    }
    // Snap tolerance noise so later comparisons can be exact.
    std::vector<double> snapped(tensor_.size());
    for (std::size_t i = 0; i < tensor_.size(); ++i) {
      const double x = tensor_[i];
      if (near(x, 0.0)) {
        snapped[i] = 0.0;
      } else if (near(x, 1.0)) {
        snapped[i] = 1.0;
      } else {
        throw Error(ErrorCode::kNonCharacteristic,
                    "entry " + std::to_string(i) + " is " + format_number(x));
      }
    }
    tensor_ = Tensor::vector(std::move(snapped));
  }

  const Tensor& tensor() const noexcept { return tensor_; }
  std::size_t size() const { return tensor_.size(); }

  friend bool operator==(const SetVector&, const SetVector&) = default;

 private:
  Tensor tensor_;
};

inline SetPredicateMatrix build_set_predicate(const Model& m, const std::string& name) {
  const PredicateDecl& p = m.require_predicate(name);
  return SetPredicateMatrix(diag_build(characteristic_vector(m.domain_size(), p.extension)));
}

inline SetVector apply_set_predicate(const SetPredicateMatrix& p, const SetVector& x) {
  return SetVector(contract(p.tensor(), x.tensor()));
}

/// Binds the variable to the whole domain: p x 1, i.e. the diagonal.
inline SetVector predicate_vector(const SetPredicateMatrix& p) {
  return SetVector(contract(p.tensor(), Tensor::ones(p.domain_size())));
}

inline SetVector set_intersect(const SetVector& a, const SetVector& b) {
  return SetVector(elementwise_min(a.tensor(), b.tensor()));
}

inline SetVector set_union(const SetVector& a, const SetVector& b) {
  return SetVector(elementwise_max(a.tensor(), b.tensor()));
}

/// "All X are Y": true iff X == min(X, Y).
inline TruthVec forall(const SetVector& x, const SetVector& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "forall over sets of different domains");
  }
  return TruthVec::of(x.tensor() == elementwise_min(x.tensor(), y.tensor()));
}

inline TruthVec forall(const Tensor& x, const Tensor& y) {
  return forall(SetVector(x), SetVector(y));
}

/// "There exists X": true iff X has a nonzero entry.
inline TruthVec exists(const SetVector& x) {
  for (double v : x.tensor().data()) {
    if (v > 0.0) return truth_top();
  }
  return truth_bot();
}

inline TruthVec exists(const Tensor& x) { return exists(SetVector(x)); }

// ---------------------------------------------------------------------------
// Bridge between the two predicate formulations

/// diag(p M) with p the covector [1 0], which selects the true row of M.
inline SetPredicateMatrix convert_truth_to_set(const PredicateMatrix& p) {
  // Re-validate: trusted matrices from partial application are fine, but a
  // hand-built one must still be a predicate matrix.
  const PredicateMatrix checked(p.tensor());
  const Tensor selector = Tensor::vector({1.0, 0.0});
  return SetPredicateMatrix(diag_build(contract(selector, checked.tensor())));
}

/// Rebuilds the truth formulation: first row is the diagonal, second row is
/// its complement.
inline PredicateMatrix convert_set_to_truth(const SetPredicateMatrix& p) {
  const Tensor d = diag_extract(p.tensor());
  const std::size_t n = d.size();
  std::vector<double> data(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    data[i] = d[i];
    data[n + i] = 1.0 - d[i];
  }
  return PredicateMatrix(Tensor({2, n}, std::move(data)));
}

// ---------------------------------------------------------------------------
// Non-linearity of the quantifiers

struct NonlinearityWitness {
  std::string quantifier;
  double alpha = 0.0;
  double beta = 1.0;
  /// The quantifier applied to the scaled empty set(s).
  TruthVec scaled_result{0.0, 0.0};
  /// The quantifier applied to the unscaled empty set(s).
  TruthVec base_result{0.0, 0.0};
  /// What multilinearity would require: the base result times the scale.
  TruthVec linear_prediction{0.0, 0.0};
  /// Scale invariance holds and the linear prediction is violated.
  bool confirmed = false;
  std::string report;
};

namespace detail {

inline std::string truth_string(const TruthVec& v) {
  return "[" + format_number(v.t()) + ", " + format_number(v.f()) + "]";
}

}  // namespace detail

/// forall(aX, bY) == forall(X, Y) == true for empty X, Y, while a multilinear
/// map would give a*b*true.
inline NonlinearityWitness nonlinearity_witness_forall(double alpha = 2.0, double beta = 2.0,
                                                       std::size_t domain = 3) {
  const Tensor empty = Tensor::zeros({domain});
  NonlinearityWitness w;
  w.quantifier = "forall";
  w.alpha = alpha;
  w.beta = beta;
  w.scaled_result = forall(empty.scaled(alpha), empty.scaled(beta));
  w.base_result = forall(empty, empty);
  w.linear_prediction = {alpha * beta * w.base_result.t(), alpha * beta * w.base_result.f()};
  w.confirmed = w.scaled_result == w.base_result && w.base_result.is_top() &&
                !w.scaled_result.approx_equal(w.linear_prediction);
  std::ostringstream os;
  os << "forall(" << format_number(alpha) << "*0, " << format_number(beta)
     << "*0) = " << detail::truth_string(w.scaled_result) << " = forall(0, 0); "
     << format_number(alpha * beta) << "*T = " << detail::truth_string(w.linear_prediction)
     << (w.confirmed ? " differs: forall is not multilinear" : " -- witness NOT confirmed");
  w.report = os.str();
  return w;
}

/// exists(aX) == exists(X) == false for empty X, while a multilinear map
/// would give a*false.
inline NonlinearityWitness nonlinearity_witness_exists(double alpha = 2.0,
                                                       std::size_t domain = 3) {
  const Tensor empty = Tensor::zeros({domain});
  NonlinearityWitness w;
  w.quantifier = "exists";
  w.alpha = alpha;
  w.scaled_result = exists(empty.scaled(alpha));
  w.base_result = exists(empty);
  w.linear_prediction = {alpha * w.base_result.t(), alpha * w.base_result.f()};
  w.confirmed = w.scaled_result == w.base_result && w.base_result.is_bot() &&
                !w.scaled_result.approx_equal(w.linear_prediction);
  std::ostringstream os;
  os << "exists(" << format_number(alpha) << "*0) = " << detail::truth_string(w.scaled_result)
     << " = exists(0); " << format_number(alpha) << "*F = "
     << detail::truth_string(w.linear_prediction)
     << (w.confirmed ? " differs: exists is not multilinear" : " -- witness NOT confirmed");
  w.report = os.str();
  return w;
}

}  // namespace tenlog
