#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "tenlog/error.hpp"
#include "tenlog/model.hpp"
#include "tenlog/tensor.hpp"

namespace tenlog {

/// A unary predicate as a 2 x |D| matrix in B (x) D. Column i is true=[1 0]
/// when atom i is in the extension and false=[0 1] otherwise.
class PredicateMatrix {
 public:
  explicit PredicateMatrix(Tensor t) : tensor_(std::move(t)) {
    if (tensor_.rank() != 2 || tensor_.dim(0) != 2) {
      throw Error(ErrorCode::kInvalidPredicateMatrix,
                  "expected shape [2x|D|], got " + shape_string(tensor_.shape()));
    }
    const std::size_t n = tensor_.dim(1);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = tensor_[i];
      const double f = tensor_[n + i];
      if (!((t == 1.0 && f == 0.0) || (t == 0.0 && f == 1.0))) {
        throw Error(ErrorCode::kInvalidPredicateMatrix,
                    "column " + std::to_string(i) + " is neither true nor false");
      }
    }
  }

  /// Skips validation; only for tensors derived from already-valid ones.
  static PredicateMatrix trusted(Tensor t) { return PredicateMatrix(std::move(t), Trusted{}); }

  const Tensor& tensor() const noexcept { return tensor_; }
  std::size_t domain_size() const { return tensor_.dim(1); }

  /// First row: the characteristic vector of the extension.
  Tensor true_row() const {
    const auto d = tensor_.data();
    return Tensor::vector(std::vector<double>(d.begin(), d.begin() + domain_size()));
  }

  friend bool operator==(const PredicateMatrix&, const PredicateMatrix&) = default;

 private:
  struct Trusted {};
  PredicateMatrix(Tensor t, Trusted) : tensor_(std::move(t)) {}
  Tensor tensor_;
};

/// An n-ary relation as a tensor in B (x) D (x) ... (x) D. The rightmost
/// domain index is the first argument, so contracting argument vectors in
/// surface order (subject first) consumes them correctly.
class RelationTensor {
 public:
  RelationTensor(std::size_t arity, Tensor t) : arity_(arity), tensor_(std::move(t)) {
    if (arity_ == 0 || tensor_.rank() != arity_ + 1 || tensor_.dim(0) != 2) {
      throw Error(ErrorCode::kInvalidRelationTensor,
                  "arity " + std::to_string(arity_) + " does not fit shape " +
                      shape_string(tensor_.shape()));
    }
    for (std::size_t k = 2; k < tensor_.rank(); ++k) {
      if (tensor_.dim(k) != tensor_.dim(1)) {
        throw Error(ErrorCode::kInvalidRelationTensor,
                    "domain indices differ in size: " + shape_string(tensor_.shape()));
      }
    }
    const std::size_t cells = tensor_.size() / 2;
    for (std::size_t c = 0; c < cells; ++c) {
      const double t = tensor_[c];
      const double f = tensor_[cells + c];
      if (!((t == 1.0 && f == 0.0) || (t == 0.0 && f == 1.0))) {
        throw Error(ErrorCode::kInvalidRelationTensor,
                    "cell " + std::to_string(c) + " is neither true nor false");
      }
    }
  }

  static RelationTensor trusted(std::size_t arity, Tensor t) {
    return RelationTensor(arity, std::move(t), Trusted{});
  }

  std::size_t arity() const noexcept { return arity_; }
  const Tensor& tensor() const noexcept { return tensor_; }
  std::size_t domain_size() const { return tensor_.dim(1); }

  friend bool operator==(const RelationTensor&, const RelationTensor&) = default;

 private:
  struct Trusted {};
  RelationTensor(std::size_t arity, Tensor t, Trusted) : arity_(arity), tensor_(std::move(t)) {}
  std::size_t arity_;
  Tensor tensor_;
};

enum class Connective { kNot, kAnd, kOr, kImplies };

constexpr std::string_view connective_name(Connective c) {
  switch (c) {
    case Connective::kNot: return "not";
    case Connective::kAnd: return "and";
    case Connective::kOr: return "or";
    case Connective::kImplies: return "implies";
  }
  return "?";
}

constexpr std::string_view connective_symbol(Connective c) {
  switch (c) {
    case Connective::kNot: return "~";
    case Connective::kAnd: return "&";
    case Connective::kOr: return "|";
    case Connective::kImplies: return "->";
  }
  return "?";
}

inline Connective parse_connective(std::string_view name) {
  for (Connective c : {Connective::kNot, Connective::kAnd, Connective::kOr, Connective::kImplies}) {
    if (name == connective_name(c) || name == connective_symbol(c)) return c;
  }
  throw Error(ErrorCode::kUnknownConnective, "'" + std::string(name) + "'");
}

/// Connective as a tensor over B: [2x2] for negation, [2x2x2] for the binary
/// ones. For a binary tensor T[i][j][k], k selects the block (first
/// argument), j the column within it (second argument) and i the output.
class ConnectiveTensor {
 public:
  ConnectiveTensor(Connective kind, Tensor t) : kind_(kind), tensor_(std::move(t)) {
    const Shape expected = kind_ == Connective::kNot ? Shape{2, 2} : Shape{2, 2, 2};
    if (tensor_.shape() != expected) {
      throw Error(ErrorCode::kInvalidConnective,
                  std::string(connective_name(kind_)) + " needs shape " +
                      shape_string(expected));
    }
    // Every column of every 2x2 block sums to one.
    const std::size_t blocks = tensor_.rank() == 2 ? 1 : 2;
    for (std::size_t k = 0; k < blocks; ++k) {
      for (std::size_t j = 0; j < 2; ++j) {
        const double top = tensor_[(0 * 2 + j) * blocks + k];
        const double bot = tensor_[(1 * 2 + j) * blocks + k];
        if (top < 0.0 || bot < 0.0 || !near(top + bot, 1.0)) {
          throw Error(ErrorCode::kInvalidConnective,
                      std::string(connective_name(kind_)) + " block " + std::to_string(k) +
                          " column " + std::to_string(j) + " is not normalized");
        }
      }
    }
  }

  Connective kind() const noexcept { return kind_; }
  const Tensor& tensor() const noexcept { return tensor_; }

  /// Entry of block `block` at (row, col); negation has a single block.
  double block_entry(std::size_t block, std::size_t row, std::size_t col) const {
    if (kind_ == Connective::kNot) return tensor_.at({row, col});
    return tensor_.at({row, col, block});
  }

  /// The block-matrix layout  [a1 b1 | a2 b2 ; c1 d1 | c2 d2].
  std::string block_layout() const {
    const std::size_t blocks = kind_ == Connective::kNot ? 1 : 2;
    std::string out;
    for (std::size_t row = 0; row < 2; ++row) {
      out += "[ ";
      for (std::size_t b = 0; b < blocks; ++b) {
        if (b) out += "| ";
        for (std::size_t col = 0; col < 2; ++col) {
          out += format_number(block_entry(b, row, col));
          out += ' ';
        }
      }
      out += "]\n";
    }
    return out;
  }

 private:
  Connective kind_;
  Tensor tensor_;
};

namespace detail {

/// Builds T[i][j][k] from the two blocks written row-major as {a b ; c d}.
inline Tensor binary_connective(std::array<double, 4> block_top_arg,
                                std::array<double, 4> block_bot_arg) {
  std::vector<double> data(8);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      data[(i * 2 + j) * 2 + 0] = block_top_arg[i * 2 + j];
      data[(i * 2 + j) * 2 + 1] = block_bot_arg[i * 2 + j];
    }
  }
  return Tensor({2, 2, 2}, std::move(data));
}

}  // namespace detail

/// Process-wide constant tensors for the four connectives.
inline const ConnectiveTensor& connective_tensor(Connective kind) {
  static const ConnectiveTensor kNot(Connective::kNot, Tensor::matrix({{0, 1}, {1, 0}}));
  static const ConnectiveTensor kOr(Connective::kOr,
                                    detail::binary_connective({1, 1, 0, 0}, {1, 0, 0, 1}));
  static const ConnectiveTensor kAnd(Connective::kAnd,
                                     detail::binary_connective({1, 0, 0, 1}, {0, 0, 1, 1}));
  static const ConnectiveTensor kImplies(Connective::kImplies,
                                         detail::binary_connective({1, 0, 0, 1}, {1, 1, 0, 0}));
  switch (kind) {
    case Connective::kNot: return kNot;
    case Connective::kAnd: return kAnd;
    case Connective::kOr: return kOr;
    case Connective::kImplies: return kImplies;
  }
  throw Error(ErrorCode::kUnknownConnective, "bad connective value");
}

// ---------------------------------------------------------------------------
// Construction from models

inline PredicateMatrix build_predicate(const Model& m, const std::string& name) {
  const PredicateDecl& p = m.require_predicate(name);
  const std::size_t n = m.domain_size();
  std::vector<double> data(2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const bool member = p.extension.contains(i);
    data[member ? i : n + i] = 1.0;
  }
  return PredicateMatrix(Tensor({2, n}, std::move(data)));
}

/// Number of elements of the tensor for an arity-n relation over |D| atoms.
inline std::size_t relation_element_count(std::size_t domain, std::size_t arity) {
  Shape shape(arity + 1, domain);
  shape[0] = 2;
  return element_count(shape);
}

inline RelationTensor build_relation(const Model& m, const std::string& name,
                                     std::size_t cap = kDefaultElementCap) {
  const RelationDecl& r = m.require_relation(name);
  const std::size_t n = m.domain_size();
  const std::size_t total = relation_element_count(n, r.arity);
  if (total > cap) {
    throw Error(ErrorCode::kTooLarge, "relation '" + name + "' needs " + std::to_string(total) +
                                          " elements, cap is " + std::to_string(cap));
  }
  const std::size_t cells = total / 2;
  std::vector<double> data(total, 0.0);
  Tuple tuple(r.arity);
  for (std::size_t c = 0; c < cells; ++c) {
    // c is the row-major offset of (a_1 .. a_n); the tuple reads them reversed.
    std::size_t rem = c;
    for (std::size_t k = 0; k < r.arity; ++k) {
      tuple[k] = rem % n;
      rem /= n;
    }
    data[r.extension.contains(tuple) ? c : cells + c] = 1.0;
  }
  Shape shape(r.arity + 1, n);
  shape[0] = 2;
  return RelationTensor(r.arity, Tensor(std::move(shape), std::move(data)));
}

// ---------------------------------------------------------------------------
// Application

namespace detail {

inline void require_argument(const Tensor& arg, std::size_t domain) {
  if (arg.rank() != 1 || arg.size() != domain) {
    throw Error(ErrorCode::kDimensionMismatch, "argument " + shape_string(arg.shape()) +
                                                   " is not a vector over |D|=" +
                                                   std::to_string(domain));
  }
  if (!is_one_hot(arg)) {
    throw Error(ErrorCode::kNonOneHot, "argument " + format_tensor(arg) + " is not an atom");
  }
}

}  // namespace detail

/// Crisp predicate application: the argument must be a one-hot atom vector.
inline TruthVec apply_predicate(const PredicateMatrix& p, const Tensor& arg) {
  detail::require_argument(arg, p.domain_size());
  return TruthVec::from_tensor(contract(p.tensor(), arg));
}

struct LinearApplication {
  TruthVec value;
  /// Set when the argument was not a convex combination of atoms, so the
  /// value is a linear extension with no logical reading.
  bool extrapolated = false;
};

/// Probabilistic-mode application: accepts any vector over D.
inline LinearApplication apply_predicate_linear(const PredicateMatrix& p, const Tensor& arg) {
  if (arg.rank() != 1 || arg.size() != p.domain_size()) {
    throw Error(ErrorCode::kDimensionMismatch, "argument " + shape_string(arg.shape()));
  }
  double sum = 0.0;
  bool nonnegative = true;
  for (double x : arg.data()) {
    sum += x;
    nonnegative = nonnegative && x >= -kTolerance;
  }
  const bool convex = nonnegative && near(sum, 1.0);
  return {TruthVec::from_tensor(contract(p.tensor(), arg)), !convex};
}

using PartialResult = std::variant<RelationTensor, PredicateMatrix>;

/// Contracts a prefix of the arguments (first argument first). Leaving one
/// open slot yields a predicate.
inline PartialResult partial_apply(const RelationTensor& r, std::span<const Tensor> prefix) {
  if (prefix.size() >= r.arity()) {
    throw Error(ErrorCode::kArityMismatch,
                std::to_string(prefix.size()) + " arguments leave no open slot of arity " +
                    std::to_string(r.arity()));
  }
  Tensor acc = r.tensor();
  for (const Tensor& arg : prefix) {
    detail::require_argument(arg, r.domain_size());
    acc = contract(acc, arg);
  }
  const std::size_t rest = r.arity() - prefix.size();
  if (rest == 1) return PredicateMatrix::trusted(std::move(acc));
  return RelationTensor::trusted(rest, std::move(acc));
}

inline TruthVec apply_relation(const RelationTensor& r, std::span<const Tensor> args) {
  if (args.size() != r.arity()) {
    throw Error(ErrorCode::kArityMismatch, "relation of arity " + std::to_string(r.arity()) +
                                               " given " + std::to_string(args.size()) +
                                               " arguments");
  }
  Tensor acc = r.tensor();
  for (const Tensor& arg : args) {
    detail::require_argument(arg, r.domain_size());
    acc = contract(acc, arg);
  }
  return TruthVec::from_tensor(acc);
}

inline TruthVec apply_relation(const RelationTensor& r, std::initializer_list<Tensor> args) {
  return apply_relation(r, std::span<const Tensor>(args.begin(), args.size()));
}

// ---------------------------------------------------------------------------
// Connectives

inline TruthVec connective_not(const TruthVec& v) {
  return TruthVec::from_tensor(contract(connective_tensor(Connective::kNot).tensor(), v.to_tensor()));
}

/// (T x first) x second. The first argument selects the block, which makes
/// it the antecedent of implication.
inline TruthVec connective_binary(Connective kind, const TruthVec& first, const TruthVec& second) {
  if (kind == Connective::kNot) {
    throw Error(ErrorCode::kUnknownConnective, "negation is unary");
  }
  const Tensor& t = connective_tensor(kind).tensor();
  return TruthVec::from_tensor(contract(contract(t, first.to_tensor()), second.to_tensor()));
}

}  // namespace tenlog
