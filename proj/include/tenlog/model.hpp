#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tenlog/error.hpp"
#include "tenlog/tensor.hpp"

namespace tenlog {

// ---------------------------------------------------------------------------
// Truth values

/// A vector in the two-dimensional boolean space B, written (t, f) for the
/// weights on the basis vectors true = [1 0] and false = [0 1].
///
/// Crisp values are exactly (1,0) or (0,1). Probabilistic values satisfy
/// t, f >= 0 and t + f = 1. Results of linear extrapolation may be neither;
/// they are still representable so callers can inspect them.
class TruthVec {
 public:
  constexpr TruthVec(double t, double f) : t_(t), f_(f) {}

  static constexpr TruthVec top() { return {1.0, 0.0}; }
  static constexpr TruthVec bot() { return {0.0, 1.0}; }
  static constexpr TruthVec of(bool value) { return value ? top() : bot(); }

  /// Validating constructor for normalized probabilistic values.
  static TruthVec probabilistic(double t, double f) {
    TruthVec v(t, f);
    if (!v.is_normalized()) {
      throw Error(ErrorCode::kInvalidTruthVec,
                  "truth vector [" + format_number(t) + ", " + format_number(f) +
                      "] is not normalized");
    }
    return v;
  }

  static TruthVec from_tensor(const Tensor& v) {
    if (v.shape() != Shape{2}) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "truth vector must have shape [2], got " + shape_string(v.shape()));
    }
    return {v[0], v[1]};
  }

  Tensor to_tensor() const { return Tensor::vector({t_, f_}); }

  constexpr double t() const { return t_; }
  constexpr double f() const { return f_; }

  bool is_top(double tol = kTolerance) const { return near(t_, 1.0, tol) && near(f_, 0.0, tol); }
  bool is_bot(double tol = kTolerance) const { return near(t_, 0.0, tol) && near(f_, 1.0, tol); }
  bool is_crisp(double tol = kTolerance) const { return is_top(tol) || is_bot(tol); }

  bool is_normalized(double tol = kTolerance) const {
    return std::isfinite(t_) && std::isfinite(f_) && t_ >= -tol && f_ >= -tol &&
           near(t_ + f_, 1.0, tol);
  }

  bool approx_equal(const TruthVec& o, double tol = kTolerance) const {
    return near(t_, o.t_, tol) && near(f_, o.f_, tol);
  }

  friend constexpr bool operator==(const TruthVec&, const TruthVec&) = default;

 private:
  double t_;
  double f_;
};

inline constexpr TruthVec truth_top() { return TruthVec::top(); }
inline constexpr TruthVec truth_bot() { return TruthVec::bot(); }

// ---------------------------------------------------------------------------
// Models

struct DomainAtom {
  std::string name;
  std::size_t index = 0;

  friend bool operator==(const DomainAtom&, const DomainAtom&) = default;
};

using Tuple = std::vector<std::size_t>;

struct PredicateDecl {
  std::string name;
  std::set<std::size_t> extension;

  friend bool operator==(const PredicateDecl&, const PredicateDecl&) = default;
};

struct RelationDecl {
  std::string name;
  std::size_t arity = 0;
  std::set<Tuple> extension;

  friend bool operator==(const RelationDecl&, const RelationDecl&) = default;
};

/// A finite logical structure. Domain order is declaration order, and every
/// tensor index over D inherits it. Predicates and relations keep their
/// declaration order too, so printing is canonical.
class Model {
 public:
  Model(std::vector<std::string> atom_names, std::vector<PredicateDecl> predicates,
        std::vector<RelationDecl> relations)
      : predicates_(std::move(predicates)), relations_(std::move(relations)) {
    if (atom_names.empty()) {
      throw Error(ErrorCode::kEmptyDomain, "a model needs at least one atom");
    }
    for (std::size_t i = 0; i < atom_names.size(); ++i) {
      claim(atom_names[i], "atom");
      atom_index_.emplace(atom_names[i], i);
      atoms_.push_back({std::move(atom_names[i]), i});
    }
    for (std::size_t i = 0; i < predicates_.size(); ++i) {
      const PredicateDecl& p = predicates_[i];
      claim(p.name, "predicate");
      predicate_index_.emplace(p.name, i);
      for (std::size_t a : p.extension) {
        if (a >= atoms_.size()) {
          throw Error(ErrorCode::kUnknownAtomInExtension,
                      "predicate '" + p.name + "' refers to atom index " + std::to_string(a));
        }
      }
    }
    for (std::size_t i = 0; i < relations_.size(); ++i) {
      const RelationDecl& r = relations_[i];
      claim(r.name, "relation");
      relation_index_.emplace(r.name, i);
      if (r.arity == 0) {
        throw Error(ErrorCode::kArityError, "relation '" + r.name + "' has arity 0");
      }
      for (const Tuple& t : r.extension) {
        if (t.size() != r.arity) {
          throw Error(ErrorCode::kArityError,
                      "relation '" + r.name + "' has arity " + std::to_string(r.arity) +
                          " but a tuple of length " + std::to_string(t.size()));
        }
        for (std::size_t a : t) {
          if (a >= atoms_.size()) {
            throw Error(ErrorCode::kUnknownAtomInExtension,
                        "relation '" + r.name + "' refers to atom index " + std::to_string(a));
          }
        }
      }
    }
  }

  std::size_t domain_size() const noexcept { return atoms_.size(); }
  const std::vector<DomainAtom>& atoms() const noexcept { return atoms_; }
  const std::vector<PredicateDecl>& predicates() const noexcept { return predicates_; }
  const std::vector<RelationDecl>& relations() const noexcept { return relations_; }

  std::optional<std::size_t> atom_index(const std::string& name) const {
    auto it = atom_index_.find(name);
    if (it == atom_index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t require_atom(const std::string& name) const {
    if (auto i = atom_index(name)) return *i;
    throw Error(ErrorCode::kUnknownAtom, "'" + name + "' is not a domain atom");
  }

  const PredicateDecl* find_predicate(const std::string& name) const {
    auto it = predicate_index_.find(name);
    return it == predicate_index_.end() ? nullptr : &predicates_[it->second];
  }

  const RelationDecl* find_relation(const std::string& name) const {
    auto it = relation_index_.find(name);
    return it == relation_index_.end() ? nullptr : &relations_[it->second];
  }

  const PredicateDecl& require_predicate(const std::string& name) const {
    if (const auto* p = find_predicate(name)) return *p;
    throw Error(ErrorCode::kUnknownPredicate, "'" + name + "' is not a predicate");
  }

  const RelationDecl& require_relation(const std::string& name) const {
    if (const auto* r = find_relation(name)) return *r;
    throw Error(ErrorCode::kUnknownRelation, "'" + name + "' is not a relation");
  }

  friend bool operator==(const Model& a, const Model& b) {
    return a.atoms_ == b.atoms_ && a.predicates_ == b.predicates_ &&
           a.relations_ == b.relations_;
  }

 private:
  void claim(const std::string& name, const char* kind) {
    if (name.empty()) {
      throw Error(ErrorCode::kSyntaxError, std::string("empty ") + kind + " name");
    }
    if (!names_.insert(name).second) {
      throw Error(ErrorCode::kDuplicateName,
                  std::string(kind) + " name '" + name + "' is already declared");
    }
  }

  std::vector<DomainAtom> atoms_;
  std::vector<PredicateDecl> predicates_;
  std::vector<RelationDecl> relations_;
  std::set<std::string> names_;
  std::unordered_map<std::string, std::size_t> atom_index_;
  std::unordered_map<std::string, std::size_t> predicate_index_;
  std::unordered_map<std::string, std::size_t> relation_index_;
};

/// Name-based construction of models, mostly for tests and embedding code.
class ModelBuilder {
 public:
  ModelBuilder& atoms(std::vector<std::string> names) {
    for (auto& n : names) atoms_.push_back(std::move(n));
    return *this;
  }

  ModelBuilder& predicate(std::string name, std::vector<std::string> members) {
    preds_.push_back({std::move(name), std::move(members)});
    return *this;
  }

  ModelBuilder& relation(std::string name, std::size_t arity,
                         std::vector<std::vector<std::string>> tuples) {
    rels_.push_back({std::move(name), arity, std::move(tuples)});
    return *this;
  }

  Model build() const {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < atoms_.size(); ++i) index.emplace(atoms_[i], i);
    auto lookup = [&](const std::string& owner, const std::string& atom) {
      auto it = index.find(atom);
      if (it == index.end()) {
        throw Error(ErrorCode::kUnknownAtomInExtension,
                    "'" + owner + "' mentions undeclared atom '" + atom + "'");
      }
      return it->second;
    };
    std::vector<PredicateDecl> preds;
    for (const auto& p : preds_) {
      PredicateDecl d{p.name, {}};
      for (const auto& a : p.members) d.extension.insert(lookup(p.name, a));
      preds.push_back(std::move(d));
    }
    std::vector<RelationDecl> rels;
    for (const auto& r : rels_) {
      RelationDecl d{r.name, r.arity, {}};
      for (const auto& t : r.tuples) {
        Tuple idx;
        for (const auto& a : t) idx.push_back(lookup(r.name, a));
        d.extension.insert(std::move(idx));
      }
      rels.push_back(std::move(d));
    }
    return Model(atoms_, std::move(preds), std::move(rels));
  }

 private:
  struct Pred {
    std::string name;
    std::vector<std::string> members;
  };
  struct Rel {
    std::string name;
    std::size_t arity;
    std::vector<std::vector<std::string>> tuples;
  };
  std::vector<std::string> atoms_;
  std::vector<Pred> preds_;
  std::vector<Rel> rels_;
};

// ---------------------------------------------------------------------------
// Encodings into D

/// 0/1 vector of length n with ones at the given indices.
inline Tensor characteristic_vector(std::size_t n, const std::set<std::size_t>& members) {
  std::vector<double> v(n, 0.0);
  for (std::size_t i : members) {
    if (i >= n) throw Error(ErrorCode::kDimensionMismatch, "member index out of range");
    v[i] = 1.0;
  }
  return Tensor::vector(std::move(v));
}

/// Indices of the ones in a characteristic vector.
inline std::set<std::size_t> members_of(const Tensor& v) {
  if (v.rank() != 1) {
    throw Error(ErrorCode::kNonCharacteristic, "expected a vector, got " + shape_string(v.shape()));
  }
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (near(v[i], 1.0)) {
      out.insert(i);
    } else if (!near(v[i], 0.0)) {
      throw Error(ErrorCode::kNonCharacteristic,
                  "entry " + std::to_string(i) + " is " + format_number(v[i]));
    }
  }
  return out;
}

inline Tensor encode_atom(const Model& m, const std::string& name) {
  return Tensor::basis(m.domain_size(), m.require_atom(name));
}

inline Tensor encode_set(const Model& m, const std::set<std::string>& names) {
  std::set<std::size_t> idx;
  for (const auto& n : names) idx.insert(m.require_atom(n));
  return characteristic_vector(m.domain_size(), idx);
}

inline std::set<std::string> decode_set(const Model& m, const Tensor& v) {
  if (v.rank() != 1 || v.size() != m.domain_size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "vector " + shape_string(v.shape()) + " is not over a domain of size " +
                    std::to_string(m.domain_size()));
  }
  std::set<std::string> out;
  for (std::size_t i : members_of(v)) out.insert(m.atoms()[i].name);
  return out;
}

}  // namespace tenlog
