#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tenlog/dsl.hpp"
#include "tenlog/error.hpp"
#include "tenlog/formula.hpp"
#include "tenlog/model.hpp"
#include "tenlog/set_calculus.hpp"
#include "tenlog/tensor.hpp"
#include "tenlog/truth_calculus.hpp"

namespace tenlog {

// ---------------------------------------------------------------------------
// Contraction plans
//
// A plan is a straight-line program over a register file of tensors. Every
// register is written exactly once, in step order.

namespace step {

struct Load {
  std::size_t dst;
  std::string label;
  Tensor value;
  friend bool operator==(const Load&, const Load&) = default;
};
struct Contract {
  std::size_t dst, lhs, rhs;
  friend bool operator==(const Contract&, const Contract&) = default;
};
struct Min {
  std::size_t dst, lhs, rhs;
  friend bool operator==(const Min&, const Min&) = default;
};
struct Max {
  std::size_t dst, lhs, rhs;
  friend bool operator==(const Max&, const Max&) = default;
};
struct DiagBuild {
  std::size_t dst, src;
  friend bool operator==(const DiagBuild&, const DiagBuild&) = default;
};
struct ForAllTest {
  std::size_t dst, restrictor, scope;
  friend bool operator==(const ForAllTest&, const ForAllTest&) = default;
};
struct ExistsTest {
  std::size_t dst, body;
  friend bool operator==(const ExistsTest&, const ExistsTest&) = default;
};

}  // namespace step

using PlanStep = std::variant<step::Load, step::Contract, step::Min, step::Max, step::DiagBuild,
                              step::ForAllTest, step::ExistsTest>;

struct ContractionPlan {
  std::vector<PlanStep> steps;
  /// Statically inferred shape of each register.
  std::vector<Shape> registers;
  std::size_t result = 0;

  friend bool operator==(const ContractionPlan&, const ContractionPlan&) = default;

  std::string to_string() const {
    std::ostringstream os;
    auto r = [](std::size_t i) { return "r" + std::to_string(i); };
    for (const PlanStep& s : steps) {
      std::visit(Overloaded{
                     [&](const step::Load& x) {
                       os << r(x.dst) << " = load " << x.label << ' ' << shape_string(x.value.shape());
                     },
                     [&](const step::Contract& x) {
                       os << r(x.dst) << " = " << r(x.lhs) << " x " << r(x.rhs);
                     },
                     [&](const step::Min& x) {
                       os << r(x.dst) << " = min(" << r(x.lhs) << ", " << r(x.rhs) << ')';
                     },
                     [&](const step::Max& x) {
                       os << r(x.dst) << " = max(" << r(x.lhs) << ", " << r(x.rhs) << ')';
                     },
                     [&](const step::DiagBuild& x) { os << r(x.dst) << " = diag(" << r(x.src) << ')'; },
                     [&](const step::ForAllTest& x) {
                       os << r(x.dst) << " = forall(" << r(x.restrictor) << ", " << r(x.scope) << ')';
                     },
                     [&](const step::ExistsTest& x) { os << r(x.dst) << " = exists(" << r(x.body) << ')'; },
                 },
                 s);
      os << '\n';
    }
    os << "result " << r(result) << '\n';
    return os.str();
  }
};

struct CompileOptions {
  /// Largest tensor a plan may load.
  std::size_t element_cap = kDefaultElementCap;
};

namespace detail {

class PlanCompiler {
 public:
  PlanCompiler(const Model& m, CompileOptions opts) : m_(m), opts_(opts) {}

  ContractionPlan run(const Formula& f) {
    bind(f, m_);
    plan_.result = formula(f);
    if (plan_.registers[plan_.result] != Shape{2}) {
      throw Error(ErrorCode::kInternal, "plan result is not a truth vector");
    }
    return std::move(plan_);
  }

 private:
  std::size_t fresh(Shape shape) {
    plan_.registers.push_back(std::move(shape));
    return plan_.registers.size() - 1;
  }

  std::size_t load(std::string label, Tensor value) {
    if (value.size() > opts_.element_cap) {
      throw Error(ErrorCode::kPlanTooLarge, label + " needs " + std::to_string(value.size()) +
                                                " elements, cap is " +
                                                std::to_string(opts_.element_cap));
    }
    const std::size_t dst = fresh(value.shape());
    plan_.steps.push_back(step::Load{dst, std::move(label), std::move(value)});
    return dst;
  }

  std::size_t contract_regs(std::size_t lhs, std::size_t rhs) {
    const Shape& a = plan_.registers[lhs];
    const Shape& b = plan_.registers[rhs];
    if (a.back() != b.front()) {
      throw Error(ErrorCode::kInternal, "ill-typed contraction " + shape_string(a) + " x " +
                                            shape_string(b));
    }
    Shape out(a.begin(), a.end() - 1);
    out.insert(out.end(), b.begin() + 1, b.end());
    if (out.empty()) out.push_back(1);
    const std::size_t dst = fresh(std::move(out));
    plan_.steps.push_back(step::Contract{dst, lhs, rhs});
    return dst;
  }

  std::size_t atom_vector(const std::string& name) {
    return load(name, encode_atom(m_, name));
  }

  std::size_t relation(const std::string& name) {
    const RelationDecl& r = m_.require_relation(name);
    const std::size_t n = relation_element_count(m_.domain_size(), r.arity);
    if (n > opts_.element_cap) {
      throw Error(ErrorCode::kPlanTooLarge, "relation '" + name + "' needs " + std::to_string(n) +
                                                " elements, cap is " +
                                                std::to_string(opts_.element_cap));
    }
    return load("T^" + name, build_relation(m_, name, opts_.element_cap).tensor());
  }

  std::size_t formula(const Formula& f) {
    return std::visit(
        Overloaded{
            [&](const Formula::Const& x) { return load("const", x.value.to_tensor()); },
            [&](const Formula::Atom& x) {
              const std::size_t p = load("M^" + x.predicate, build_predicate(m_, x.predicate).tensor());
              return contract_regs(p, atom_vector(x.atom));
            },
            [&](const Formula::RelAtom& x) {
              std::size_t acc = relation(x.relation);
              for (const auto& a : x.args) acc = contract_regs(acc, atom_vector(a));
              return acc;
            },
            [&](const Formula::Not& x) {
              const std::size_t arg = formula(*x.operand);
              const std::size_t t = load("T^not", connective_tensor(Connective::kNot).tensor());
              return contract_regs(t, arg);
            },
            [&](const Formula::Binary& x) {
              const std::size_t a = formula(*x.lhs);
              const std::size_t b = formula(*x.rhs);
              const std::size_t t = load("T^" + std::string(connective_name(x.op)),
                                         connective_tensor(x.op).tensor());
              return contract_regs(contract_regs(t, a), b);
            },
            [&](const Formula::ForAll& x) {
              const std::size_t a = set(*x.restrictor);
              const std::size_t b = set(*x.scope);
              const std::size_t dst = fresh({2});
              plan_.steps.push_back(step::ForAllTest{dst, a, b});
              return dst;
            },
            [&](const Formula::Exists& x) {
              const std::size_t a = set(*x.body);
              const std::size_t dst = fresh({2});
              plan_.steps.push_back(step::ExistsTest{dst, a});
              return dst;
            },
        },
        f.node);
  }

  std::size_t ones() { return load("1", Tensor::ones(m_.domain_size())); }

  std::size_t set(const SetExpr& s) {
    return std::visit(
        Overloaded{
            [&](const SetExpr::Pred& x) {
              const std::size_t p =
                  load("M'^" + x.name, build_set_predicate(m_, x.name).tensor());
              return contract_regs(p, ones());
            },
            [&](const SetExpr::PartialRel& x) {
              // Truth-formulation predicate by partial application, converted
              // with diag(p M), then bound to the whole domain.
              std::size_t acc = relation(x.relation);
              for (const auto& a : x.prefix) acc = contract_regs(acc, atom_vector(a));
              const std::size_t row = contract_regs(load("p", Tensor::vector({1.0, 0.0})), acc);
              const std::size_t diag = fresh({m_.domain_size(), m_.domain_size()});
              plan_.steps.push_back(step::DiagBuild{diag, row});
              return contract_regs(diag, ones());
            },
            [&](const SetExpr::Intersect& x) {
              const std::size_t a = set(*x.lhs);
              const std::size_t b = set(*x.rhs);
              const std::size_t dst = fresh({m_.domain_size()});
              plan_.steps.push_back(step::Min{dst, a, b});
              return dst;
            },
            [&](const SetExpr::Union& x) {
              const std::size_t a = set(*x.lhs);
              const std::size_t b = set(*x.rhs);
              const std::size_t dst = fresh({m_.domain_size()});
              plan_.steps.push_back(step::Max{dst, a, b});
              return dst;
            },
        },
        s.node);
  }

  const Model& m_;
  CompileOptions opts_;
  ContractionPlan plan_;
};

}  // namespace detail

/// Lowers a formula to a contraction plan: application becomes chained
/// contraction, connectives contract with their tensors, and quantifiers use
/// the set formulation. Evaluation is bottom-up with no sharing.
inline ContractionPlan compile(const Formula& f, const Model& m, CompileOptions opts = {}) {
  return detail::PlanCompiler(m, opts).run(f);
}

inline TruthVec execute(const ContractionPlan& plan) {
  // Loads alias the plan's tensors; computed registers live in `owned`.
  std::vector<std::optional<Tensor>> owned(plan.registers.size());
  std::vector<const Tensor*> reg(plan.registers.size(), nullptr);
  auto get = [&](std::size_t i) -> const Tensor& {
    if (i >= reg.size() || !reg[i]) throw Error(ErrorCode::kInternal, "read of unset register");
    return *reg[i];
  };
  auto put = [&](std::size_t i, Tensor t) {
    owned[i] = std::move(t);
    reg[i] = &*owned[i];
  };
  for (const PlanStep& s : plan.steps) {
    std::visit(Overloaded{
                   [&](const step::Load& x) { reg[x.dst] = &x.value; },
                   [&](const step::Contract& x) { put(x.dst, contract(get(x.lhs), get(x.rhs))); },
                   [&](const step::Min& x) { put(x.dst, elementwise_min(get(x.lhs), get(x.rhs))); },
                   [&](const step::Max& x) { put(x.dst, elementwise_max(get(x.lhs), get(x.rhs))); },
                   [&](const step::DiagBuild& x) { put(x.dst, diag_build(get(x.src))); },
                   [&](const step::ForAllTest& x) {
                     put(x.dst, forall(get(x.restrictor), get(x.scope)).to_tensor());
                   },
                   [&](const step::ExistsTest& x) { put(x.dst, exists(get(x.body)).to_tensor()); },
               },
               s);
  }
  return TruthVec::from_tensor(get(plan.result));
}

inline TruthVec evaluate(const Formula& f, const Model& m, CompileOptions opts = {}) {
  return execute(compile(f, m, opts));
}

// ---------------------------------------------------------------------------
// Set-theoretic oracle. Works on the model's extensions directly; no tensors.

namespace detail {

inline std::set<std::size_t> oracle_set(const SetExpr& s, const Model& m) {
  return std::visit(
      Overloaded{
          [&](const SetExpr::Pred& x) { return m.require_predicate(x.name).extension; },
          [&](const SetExpr::PartialRel& x) {
            const RelationDecl& r = m.require_relation(x.relation);
            Tuple prefix;
            for (const auto& a : x.prefix) prefix.push_back(m.require_atom(a));
            std::set<std::size_t> out;
            for (const Tuple& t : r.extension) {
              if (std::equal(prefix.begin(), prefix.end(), t.begin())) out.insert(t.back());
            }
            return out;
          },
          [&](const SetExpr::Intersect& x) {
            const auto a = oracle_set(*x.lhs, m);
            const auto b = oracle_set(*x.rhs, m);
            std::set<std::size_t> out;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                  std::inserter(out, out.end()));
            return out;
          },
          [&](const SetExpr::Union& x) {
            auto a = oracle_set(*x.lhs, m);
            const auto b = oracle_set(*x.rhs, m);
            a.insert(b.begin(), b.end());
            return a;
          },
      },
      s.node);
}

}  // namespace detail

inline bool oracle_eval(const Formula& f, const Model& m) {
  return std::visit(
      Overloaded{
          [&](const Formula::Const& x) {
            if (x.value == truth_top()) return true;
            if (x.value == truth_bot()) return false;
            throw Error(ErrorCode::kInvalidTruthVec, "the oracle is two-valued");
          },
          [&](const Formula::Atom& x) {
            return m.require_predicate(x.predicate).extension.contains(m.require_atom(x.atom));
          },
          [&](const Formula::RelAtom& x) {
            Tuple t;
            for (const auto& a : x.args) t.push_back(m.require_atom(a));
            return m.require_relation(x.relation).extension.contains(t);
          },
          [&](const Formula::Not& x) { return !oracle_eval(*x.operand, m); },
          [&](const Formula::Binary& x) {
            const bool a = oracle_eval(*x.lhs, m);
            const bool b = oracle_eval(*x.rhs, m);
            switch (x.op) {
              case Connective::kAnd: return a && b;
              case Connective::kOr: return a || b;
              case Connective::kImplies: return !a || b;
              case Connective::kNot: break;
            }
            throw Error(ErrorCode::kInternal, "negation stored as binary");
          },
          [&](const Formula::ForAll& x) {
            const auto a = detail::oracle_set(*x.restrictor, m);
            const auto b = detail::oracle_set(*x.scope, m);
            return std::includes(b.begin(), b.end(), a.begin(), a.end());
          },
          [&](const Formula::Exists& x) { return !detail::oracle_set(*x.body, m).empty(); },
      },
      f.node);
}

struct OracleVerdict {
  std::string formula;
  TruthVec tensor_result{0.0, 0.0};
  bool oracle_result = false;
  bool agree = false;
};

/// Runs both evaluation paths. Agreement means the tensor result is exactly
/// true when the oracle says true and exactly false otherwise.
/// check() without the printed formula, for hot loops.
inline bool agrees(const Formula& f, const Model& m, CompileOptions opts = {}) {
  return evaluate(f, m, opts) == TruthVec::of(oracle_eval(f, m));
}

inline OracleVerdict check(const Formula& f, const Model& m, CompileOptions opts = {}) {
  OracleVerdict v;
  v.formula = print_formula(f);
  v.tensor_result = evaluate(f, m, opts);
  v.oracle_result = oracle_eval(f, m);
  v.agree = v.tensor_result == TruthVec::of(v.oracle_result);
  return v;
}

}  // namespace tenlog
