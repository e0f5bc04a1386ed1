#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tenlog/tenlog.hpp"

using namespace tenlog;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

Model random_model(std::mt19937_64& rng, std::size_t n, std::size_t arity) {
  std::vector<std::string> atoms;
  for (std::size_t i = 0; i < n; ++i) atoms.push_back("a" + std::to_string(i));
  PredicateDecl p{"p", {}};
  for (std::size_t i = 0; i < n; ++i) {
    if (rng() & 1) p.extension.insert(i);
  }
  RelationDecl r{"r", arity, {}};
  std::size_t tuples = 1;
  for (std::size_t k = 0; k < arity; ++k) tuples *= n;
  for (std::size_t code = 0; code < tuples; ++code) {
    if (!(rng() & 1)) continue;
    Tuple t(arity);
    std::size_t c = code;
    for (std::size_t k = 0; k < arity; ++k, c /= n) t[k] = c % n;
    r.extension.insert(t);
  }
  return Model(std::move(atoms), {std::move(p)}, {std::move(r)});
}

TruthVec random_normalized(std::mt19937_64& rng) {
  const double a = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return TruthVec::probabilistic(a, 1.0 - a);
}

}  // namespace

TEST(Predicate, MatchesExtension) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    const Model m = random_model(rng, n, 2);
    const PredicateMatrix pm = build_predicate(m, "p");
    const auto& ext = m.require_predicate("p").extension;
    for (std::size_t i = 0; i < n; ++i) {
      const bool member = ext.count(i) != 0;
      EXPECT_EQ(apply_predicate(pm, Tensor::basis(n, i)), TruthVec::of(member));
      EXPECT_EQ(pm.tensor().at({0, i}) + pm.tensor().at({1, i}), 1.0);
    }
  }
}

TEST(Relation, MatchesExtensionSubjectFirst) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    const std::size_t arity = 1 + rng() % 3;
    const Model m = random_model(rng, n, arity);
    const RelationTensor rt = build_relation(m, "r");
    EXPECT_EQ(rt.tensor().rank(), arity + 1);
    const auto& ext = m.require_relation("r").extension;
    std::size_t tuples = 1;
    for (std::size_t k = 0; k < arity; ++k) tuples *= n;
    for (std::size_t code = 0; code < tuples; ++code) {
      Tuple t(arity);
      std::vector<Tensor> args;
      std::size_t c = code;
      for (std::size_t k = 0; k < arity; ++k, c /= n) {
        t[k] = c % n;
        args.push_back(Tensor::basis(n, t[k]));
      }
      EXPECT_EQ(apply_relation(rt, args), TruthVec::of(ext.count(t) != 0));
    }
  }
}

TEST(Relation, StorageReversesTuple) {
  // Entry (alpha_1..alpha_n) of the true slice holds the tuple (alpha_n..alpha_1).
  const Model m({"x", "y", "z"}, {}, {{"r", 3, {{0, 1, 2}}}});
  const RelationTensor rt = build_relation(m, "r");
  EXPECT_EQ(rt.tensor().at({0, 2, 1, 0}), 1.0);
  EXPECT_EQ(rt.tensor().at({0, 0, 1, 2}), 0.0);
  EXPECT_EQ(rt.tensor().at({1, 0, 1, 2}), 1.0);
}

TEST(Relation, PartialApplication) {
  const Model m({"j", "m"}, {}, {{"loves", 2, {{0, 0}, {1, 1}, {1, 0}}}});
  const RelationTensor rt = build_relation(m, "loves");
  const Tensor j = encode_atom(m, "j");
  const auto partial = partial_apply(rt, std::vector<Tensor>{j});
  ASSERT_TRUE(std::holds_alternative<PredicateMatrix>(partial));
  EXPECT_EQ(std::get<PredicateMatrix>(partial).tensor(), Tensor::matrix({{1, 0}, {0, 1}}));
  EXPECT_EQ(code_of([&] { partial_apply(rt, std::vector<Tensor>{j, j}); }),
            ErrorCode::kArityMismatch);
  EXPECT_EQ(code_of([&] { apply_relation(rt, {j}); }), ErrorCode::kArityMismatch);
}

TEST(Relation, Cap) {
  const Model m({"a", "b"}, {}, {{"r", 3, {}}});
  EXPECT_EQ(code_of([&] { build_relation(m, "r", 8); }), ErrorCode::kTooLarge);
  EXPECT_NO_THROW(build_relation(m, "r", 16));
}

TEST(Predicate, ValidationErrors) {
  EXPECT_EQ(code_of([] { PredicateMatrix(Tensor::matrix({{1, 1}, {1, 0}})); }),
            ErrorCode::kInvalidPredicateMatrix);
  EXPECT_EQ(code_of([] { PredicateMatrix(Tensor::zeros({3, 2})); }),
            ErrorCode::kInvalidPredicateMatrix);
  EXPECT_EQ(code_of([] { RelationTensor(2, Tensor::zeros({2, 2})); }),
            ErrorCode::kInvalidRelationTensor);
  const PredicateMatrix p(Tensor::matrix({{1, 0}, {0, 1}}));
  EXPECT_EQ(code_of([&] { apply_predicate(p, Tensor::vector({1, 0, 0})); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code_of([&] { apply_predicate(p, Tensor::vector({1, 1})); }), ErrorCode::kNonOneHot);
}

TEST(Predicate, LinearExtrapolation) {
  const PredicateMatrix p(Tensor::matrix({{1, 0, 1}, {0, 1, 0}}));
  const LinearApplication one = apply_predicate_linear(p, Tensor::basis(3, 0));
  EXPECT_FALSE(one.extrapolated);
  EXPECT_TRUE(one.value.is_top());
  const LinearApplication sum = apply_predicate_linear(p, Tensor::vector({1, 1, 0}));
  EXPECT_TRUE(sum.extrapolated);
  EXPECT_EQ(sum.value.t(), 1.0);
  EXPECT_EQ(sum.value.f(), 1.0);
}

TEST(Connective, CrispTruthTables) {
  for (bool a : {true, false}) {
    EXPECT_EQ(connective_not(TruthVec::of(a)), TruthVec::of(!a));
    for (bool b : {true, false}) {
      const TruthVec va = TruthVec::of(a), vb = TruthVec::of(b);
      EXPECT_EQ(connective_binary(Connective::kAnd, va, vb), TruthVec::of(oracle::truth_and(a, b)));
      EXPECT_EQ(connective_binary(Connective::kOr, va, vb), TruthVec::of(oracle::truth_or(a, b)));
      EXPECT_EQ(connective_binary(Connective::kImplies, va, vb),
                TruthVec::of(oracle::truth_implies(a, b)));
    }
  }
}

TEST(Connective, ArgumentOrderForImplication) {
  // T -> F is false but F -> T is true, so the operand order is observable.
  EXPECT_TRUE(connective_binary(Connective::kImplies, truth_top(), truth_bot()).is_bot());
  EXPECT_TRUE(connective_binary(Connective::kImplies, truth_bot(), truth_top()).is_top());
}

TEST(Connective, PreservesNormalization) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const TruthVec v = random_normalized(rng), w = random_normalized(rng);
    for (Connective c : {Connective::kAnd, Connective::kOr, Connective::kImplies}) {
      const TruthVec r = connective_binary(c, v, w);
      EXPECT_NEAR(r.t() + r.f(), 1.0, 1e-12);
      EXPECT_GE(r.t(), -1e-12);
      EXPECT_GE(r.f(), -1e-12);
    }
    const TruthVec n = connective_not(v);
    EXPECT_EQ(n.t(), v.f());
    EXPECT_EQ(n.f(), v.t());
  }
}

TEST(Connective, NegationIsInvolution) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const TruthVec v = random_normalized(rng);
    EXPECT_EQ(connective_not(connective_not(v)), v);
  }
}

TEST(Connective, Validation) {
  EXPECT_EQ(code_of([] { ConnectiveTensor(Connective::kNot, Tensor::matrix({{1, 1}, {1, 0}})); }),
            ErrorCode::kInvalidConnective);
  EXPECT_EQ(code_of([] { ConnectiveTensor(Connective::kAnd, Tensor::zeros({2, 2})); }),
            ErrorCode::kInvalidConnective);
  EXPECT_EQ(parse_connective("or"), Connective::kOr);
  EXPECT_EQ(code_of([] { parse_connective("xor"); }), ErrorCode::kUnknownConnective);
}
