#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tenlog/error.hpp"
#include "tenlog/model.hpp"
#include "tenlog/truth_calculus.hpp"

namespace tenlog {

struct SetExpr;
struct Formula;
using SetExprPtr = std::shared_ptr<const SetExpr>;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Set-layer expressions: they denote subsets of the domain.
struct SetExpr {
  struct Pred {
    std::string name;
  };
  /// `rel(a, b, _)`: the set of x with rel(a, b, x). The prefix binds every
  /// slot but the last.
  struct PartialRel {
    std::string relation;
    std::vector<std::string> prefix;
  };
  struct Intersect {
    SetExprPtr lhs, rhs;
  };
  struct Union {
    SetExprPtr lhs, rhs;
  };

  std::variant<Pred, PartialRel, Intersect, Union> node;
};

/// Truth-layer formulas. Quantifiers may only appear at the root.
struct Formula {
  struct Const {
    TruthVec value;
  };
  struct Atom {
    std::string predicate;
    std::string atom;
  };
  struct RelAtom {
    std::string relation;
    std::vector<std::string> args;
  };
  struct Not {
    FormulaPtr operand;
  };
  struct Binary {
    Connective op;
    FormulaPtr lhs, rhs;
  };
  struct ForAll {
    SetExprPtr restrictor, scope;
  };
  struct Exists {
    SetExprPtr body;
  };

  std::variant<Const, Atom, RelAtom, Not, Binary, ForAll, Exists> node;
};

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

// ---------------------------------------------------------------------------
// Construction helpers

inline SetExprPtr set_pred(std::string name) {
  return std::make_shared<const SetExpr>(SetExpr{SetExpr::Pred{std::move(name)}});
}
inline SetExprPtr set_partial(std::string rel, std::vector<std::string> prefix) {
  return std::make_shared<const SetExpr>(
      SetExpr{SetExpr::PartialRel{std::move(rel), std::move(prefix)}});
}
inline SetExprPtr set_and(SetExprPtr a, SetExprPtr b) {
  return std::make_shared<const SetExpr>(SetExpr{SetExpr::Intersect{std::move(a), std::move(b)}});
}
inline SetExprPtr set_or(SetExprPtr a, SetExprPtr b) {
  return std::make_shared<const SetExpr>(SetExpr{SetExpr::Union{std::move(a), std::move(b)}});
}

inline FormulaPtr constant(TruthVec v) {
  return std::make_shared<const Formula>(Formula{Formula::Const{v}});
}
inline FormulaPtr atom(std::string predicate, std::string arg) {
  return std::make_shared<const Formula>(Formula{Formula::Atom{std::move(predicate), std::move(arg)}});
}
inline FormulaPtr rel_atom(std::string relation, std::vector<std::string> args) {
  return std::make_shared<const Formula>(
      Formula{Formula::RelAtom{std::move(relation), std::move(args)}});
}
inline FormulaPtr negate(FormulaPtr f) {
  return std::make_shared<const Formula>(Formula{Formula::Not{std::move(f)}});
}
inline FormulaPtr binary(Connective op, FormulaPtr a, FormulaPtr b) {
  if (op == Connective::kNot) throw Error(ErrorCode::kUnknownConnective, "negation is unary");
  return std::make_shared<const Formula>(Formula{Formula::Binary{op, std::move(a), std::move(b)}});
}
inline FormulaPtr conj(FormulaPtr a, FormulaPtr b) { return binary(Connective::kAnd, a, b); }
inline FormulaPtr disj(FormulaPtr a, FormulaPtr b) { return binary(Connective::kOr, a, b); }
inline FormulaPtr implies(FormulaPtr a, FormulaPtr b) { return binary(Connective::kImplies, a, b); }
inline FormulaPtr for_all(SetExprPtr restrictor, SetExprPtr scope) {
  return std::make_shared<const Formula>(Formula{Formula::ForAll{std::move(restrictor), std::move(scope)}});
}
inline FormulaPtr there_exists(SetExprPtr body) {
  return std::make_shared<const Formula>(Formula{Formula::Exists{std::move(body)}});
}

// ---------------------------------------------------------------------------
// Structural equality and depth

bool operator==(const SetExpr& a, const SetExpr& b);
bool operator==(const Formula& a, const Formula& b);

inline bool same(const SetExprPtr& a, const SetExprPtr& b) {
  return a == b || (a && b && *a == *b);
}
inline bool same(const FormulaPtr& a, const FormulaPtr& b) {
  return a == b || (a && b && *a == *b);
}

inline bool operator==(const SetExpr& a, const SetExpr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      Overloaded{
          [&](const SetExpr::Pred& x) { return x.name == std::get<SetExpr::Pred>(b.node).name; },
          [&](const SetExpr::PartialRel& x) {
            const auto& y = std::get<SetExpr::PartialRel>(b.node);
            return x.relation == y.relation && x.prefix == y.prefix;
          },
          [&](const SetExpr::Intersect& x) {
            const auto& y = std::get<SetExpr::Intersect>(b.node);
            return same(x.lhs, y.lhs) && same(x.rhs, y.rhs);
          },
          [&](const SetExpr::Union& x) {
            const auto& y = std::get<SetExpr::Union>(b.node);
            return same(x.lhs, y.lhs) && same(x.rhs, y.rhs);
          },
      },
      a.node);
}

inline bool operator==(const Formula& a, const Formula& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      Overloaded{
          [&](const Formula::Const& x) { return x.value == std::get<Formula::Const>(b.node).value; },
          [&](const Formula::Atom& x) {
            const auto& y = std::get<Formula::Atom>(b.node);
            return x.predicate == y.predicate && x.atom == y.atom;
          },
          [&](const Formula::RelAtom& x) {
            const auto& y = std::get<Formula::RelAtom>(b.node);
            return x.relation == y.relation && x.args == y.args;
          },
          [&](const Formula::Not& x) { return same(x.operand, std::get<Formula::Not>(b.node).operand); },
          [&](const Formula::Binary& x) {
            const auto& y = std::get<Formula::Binary>(b.node);
            return x.op == y.op && same(x.lhs, y.lhs) && same(x.rhs, y.rhs);
          },
          [&](const Formula::ForAll& x) {
            const auto& y = std::get<Formula::ForAll>(b.node);
            return same(x.restrictor, y.restrictor) && same(x.scope, y.scope);
          },
          [&](const Formula::Exists& x) { return same(x.body, std::get<Formula::Exists>(b.node).body); },
      },
      a.node);
}

/// Leaves have depth 1.
inline std::size_t depth(const SetExpr& s) {
  return std::visit(Overloaded{
                        [](const SetExpr::Pred&) -> std::size_t { return 1; },
                        [](const SetExpr::PartialRel&) -> std::size_t { return 1; },
                        [](const SetExpr::Intersect& x) { return 1 + std::max(depth(*x.lhs), depth(*x.rhs)); },
                        [](const SetExpr::Union& x) { return 1 + std::max(depth(*x.lhs), depth(*x.rhs)); },
                    },
                    s.node);
}

inline std::size_t depth(const Formula& f) {
  return std::visit(Overloaded{
                        [](const Formula::Const&) -> std::size_t { return 1; },
                        [](const Formula::Atom&) -> std::size_t { return 1; },
                        [](const Formula::RelAtom&) -> std::size_t { return 1; },
                        [](const Formula::Not& x) { return 1 + depth(*x.operand); },
                        [](const Formula::Binary& x) { return 1 + std::max(depth(*x.lhs), depth(*x.rhs)); },
                        [](const Formula::ForAll& x) {
                          return 1 + std::max(depth(*x.restrictor), depth(*x.scope));
                        },
                        [](const Formula::Exists& x) { return 1 + depth(*x.body); },
                    },
                    f.node);
}

inline bool is_quantified(const Formula& f) {
  return std::holds_alternative<Formula::ForAll>(f.node) ||
         std::holds_alternative<Formula::Exists>(f.node);
}

// ---------------------------------------------------------------------------
// Printing
//
// Precedence from loosest to tightest: ->, |, &, ~. `&` and `|` associate
// to the left, `->` to the right. The printer emits only the parentheses
// needed to re-parse the same tree.

namespace detail {

inline std::string shortest_double(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw Error(ErrorCode::kInternal, "cannot format number");
  return std::string(buf, end);
}

inline int precedence(Connective c) {
  switch (c) {
    case Connective::kImplies: return 1;
    case Connective::kOr: return 2;
    case Connective::kAnd: return 3;
    case Connective::kNot: return 4;
  }
  return 0;
}

inline std::string join_args(const std::vector<std::string>& args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += args[i];
  }
  return out;
}

inline void print_set(const SetExpr& s, int context, std::string& out);

inline void print_set_binary(const SetExprPtr& lhs, const SetExprPtr& rhs, int prec,
                             std::string_view sym, int context, std::string& out) {
  const bool paren = prec < context;
  if (paren) out += '(';
  print_set(*lhs, prec, out);
  out += ' ';
  out += sym;
  out += ' ';
  print_set(*rhs, prec + 1, out);
  if (paren) out += ')';
}

inline void print_set(const SetExpr& s, int context, std::string& out) {
  std::visit(Overloaded{
                 [&](const SetExpr::Pred& x) { out += x.name; },
                 [&](const SetExpr::PartialRel& x) {
                   out += x.relation;
                   out += '(';
                   for (const auto& a : x.prefix) {
                     out += a;
                     out += ", ";
                   }
                   out += "_)";
                 },
                 [&](const SetExpr::Intersect& x) { print_set_binary(x.lhs, x.rhs, 3, "&", context, out); },
                 [&](const SetExpr::Union& x) { print_set_binary(x.lhs, x.rhs, 2, "|", context, out); },
             },
             s.node);
}

inline void print_formula(const Formula& f, int context, std::string& out) {
  std::visit(
      Overloaded{
          [&](const Formula::Const& x) {
            if (x.value == truth_top()) {
              out += 'T';
            } else if (x.value == truth_bot()) {
              out += 'F';
            } else {
              out += '[' + shortest_double(x.value.t()) + ", " + shortest_double(x.value.f()) + ']';
            }
          },
          [&](const Formula::Atom& x) { out += x.predicate + '(' + x.atom + ')'; },
          [&](const Formula::RelAtom& x) { out += x.relation + '(' + join_args(x.args) + ')'; },
          [&](const Formula::Not& x) {
            out += '~';
            print_formula(*x.operand, precedence(Connective::kNot), out);
          },
          [&](const Formula::Binary& x) {
            const int prec = precedence(x.op);
            const bool right_assoc = x.op == Connective::kImplies;
            const bool paren = prec < context;
            if (paren) out += '(';
            print_formula(*x.lhs, right_assoc ? prec + 1 : prec, out);
            out += ' ';
            out += connective_symbol(x.op);
            out += ' ';
            print_formula(*x.rhs, right_assoc ? prec : prec + 1, out);
            if (paren) out += ')';
          },
          [&](const Formula::ForAll& x) {
            out += "all ";
            // The restrictor is parenthesized whenever it is compound so the
            // boundary with the scope stays visible.
            print_set(*x.restrictor, 4, out);
            out += ' ';
            print_set(*x.scope, 4, out);
          },
          [&](const Formula::Exists& x) {
            out += "exists ";
            print_set(*x.body, 0, out);
          },
      },
      f.node);
}

}  // namespace detail

inline std::string print_set_expr(const SetExpr& s) {
  std::string out;
  detail::print_set(s, 0, out);
  return out;
}

inline std::string print_formula(const Formula& f) {
  std::string out;
  detail::print_formula(f, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Binding against a model

namespace detail {

inline void bind_atom(const Model& m, const std::string& name) {
  if (!m.atom_index(name)) {
    throw Error(ErrorCode::kUnknownName, "'" + name + "' is not a domain atom");
  }
}

inline void bind_set(const SetExpr& s, const Model& m) {
  std::visit(Overloaded{
                 [&](const SetExpr::Pred& x) {
                   if (!m.find_predicate(x.name)) {
                     throw Error(ErrorCode::kUnknownName, "'" + x.name + "' is not a predicate");
                   }
                 },
                 [&](const SetExpr::PartialRel& x) {
                   const RelationDecl* r = m.find_relation(x.relation);
                   if (!r) throw Error(ErrorCode::kUnknownName, "'" + x.relation + "' is not a relation");
                   if (x.prefix.size() + 1 != r->arity) {
                     throw Error(ErrorCode::kArityError,
                                 "'" + x.relation + "' has arity " + std::to_string(r->arity) +
                                     "; a set needs exactly one open slot");
                   }
                   for (const auto& a : x.prefix) bind_atom(m, a);
                 },
                 [&](const SetExpr::Intersect& x) {
                   bind_set(*x.lhs, m);
                   bind_set(*x.rhs, m);
                 },
                 [&](const SetExpr::Union& x) {
                   bind_set(*x.lhs, m);
                   bind_set(*x.rhs, m);
                 },
             },
             s.node);
}

inline void bind_formula(const Formula& f, const Model& m, bool at_root) {
  std::visit(Overloaded{
                 [&](const Formula::Const& x) {
                   if (!x.value.is_normalized()) {
                     throw Error(ErrorCode::kInvalidTruthVec, "truth literal is not normalized");
                   }
                 },
                 [&](const Formula::Atom& x) {
                   if (!m.find_predicate(x.predicate)) {
                     throw Error(ErrorCode::kUnknownName, "'" + x.predicate + "' is not a predicate");
                   }
                   bind_atom(m, x.atom);
                 },
                 [&](const Formula::RelAtom& x) {
                   const RelationDecl* r = m.find_relation(x.relation);
                   if (!r) throw Error(ErrorCode::kUnknownName, "'" + x.relation + "' is not a relation");
                   if (x.args.size() != r->arity) {
                     throw Error(ErrorCode::kArityError,
                                 "'" + x.relation + "' has arity " + std::to_string(r->arity) +
                                     ", given " + std::to_string(x.args.size()));
                   }
                   for (const auto& a : x.args) bind_atom(m, a);
                 },
                 [&](const Formula::Not& x) { bind_formula(*x.operand, m, false); },
                 [&](const Formula::Binary& x) {
                   bind_formula(*x.lhs, m, false);
                   bind_formula(*x.rhs, m, false);
                 },
                 [&](const Formula::ForAll& x) {
                   if (!at_root) throw Error(ErrorCode::kEmbeddedQuantifier, "'all' below the root");
                   bind_set(*x.restrictor, m);
                   bind_set(*x.scope, m);
                 },
                 [&](const Formula::Exists& x) {
                   if (!at_root) throw Error(ErrorCode::kEmbeddedQuantifier, "'exists' below the root");
                   bind_set(*x.body, m);
                 },
             },
             f.node);
}

}  // namespace detail

/// Checks that every name resolves in `m`, arities match, and quantifiers
/// sit only at the root.
inline void bind(const Formula& f, const Model& m) { detail::bind_formula(f, m, true); }

}  // namespace tenlog
