#include <gtest/gtest.h>

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

}  // namespace

TEST(TruthVec, Constants) {
  EXPECT_EQ(truth_top().to_tensor(), Tensor::vector({1, 0}));
  EXPECT_EQ(truth_bot().to_tensor(), Tensor::vector({0, 1}));
  EXPECT_TRUE(TruthVec::of(true).is_top());
  EXPECT_TRUE(TruthVec::of(false).is_bot());
  EXPECT_TRUE(truth_top().is_crisp());
}

TEST(TruthVec, Probabilistic) {
  const TruthVec v = TruthVec::probabilistic(0.3, 0.7);
  EXPECT_FALSE(v.is_crisp());
  EXPECT_TRUE(v.is_normalized());
  EXPECT_EQ(code_of([] { TruthVec::probabilistic(0.5, 0.6); }), ErrorCode::kInvalidTruthVec);
  EXPECT_EQ(code_of([] { TruthVec::probabilistic(-0.5, 1.5); }), ErrorCode::kInvalidTruthVec);
  EXPECT_EQ(code_of([] { TruthVec::from_tensor(Tensor::zeros({3})); }),
            ErrorCode::kDimensionMismatch);
}

TEST(Model, Builder) {
  const Model m = ModelBuilder()
                      .atoms({"a", "b", "c"})
                      .predicate("p", {"c", "a"})
                      .relation("r", 2, {{"a", "b"}})
                      .build();
  EXPECT_EQ(m.domain_size(), 3u);
  EXPECT_EQ(m.require_atom("b"), 1u);
  EXPECT_EQ(m.require_predicate("p").extension, (std::set<std::size_t>{0, 2}));
  EXPECT_EQ(m.require_relation("r").extension.count(Tuple{0, 1}), 1u);
  EXPECT_FALSE(m.atom_index("z"));
}

TEST(Model, Errors) {
  EXPECT_EQ(code_of([] { Model({}, {}, {}); }), ErrorCode::kEmptyDomain);
  EXPECT_EQ(code_of([] { Model({"a", "a"}, {}, {}); }), ErrorCode::kDuplicateName);
  EXPECT_EQ(code_of([] { Model({"a"}, {{"a", {}}}, {}); }), ErrorCode::kDuplicateName);
  EXPECT_EQ(code_of([] { Model({"a"}, {{"p", {3}}}, {}); }), ErrorCode::kUnknownAtomInExtension);
  EXPECT_EQ(code_of([] { Model({"a"}, {}, {{"r", 0, {}}}); }), ErrorCode::kArityError);
  EXPECT_EQ(code_of([] { Model({"a"}, {}, {{"r", 2, {{0}}}}); }), ErrorCode::kArityError);
  const Model m({"a"}, {}, {});
  EXPECT_EQ(code_of([&] { m.require_atom("b"); }), ErrorCode::kUnknownAtom);
  EXPECT_EQ(code_of([&] { m.require_predicate("p"); }), ErrorCode::kUnknownPredicate);
  EXPECT_EQ(code_of([&] { m.require_relation("r"); }), ErrorCode::kUnknownRelation);
}

TEST(Model, SetEncoding) {
  const Model m({"a", "b", "c"}, {}, {});
  EXPECT_EQ(encode_atom(m, "c"), Tensor::vector({0, 0, 1}));
  const Tensor s = encode_set(m, {"a", "c"});
  EXPECT_EQ(s, Tensor::vector({1, 0, 1}));
  EXPECT_EQ(decode_set(m, s), (std::set<std::string>{"a", "c"}));
  EXPECT_EQ(code_of([&] { decode_set(m, Tensor::vector({1, 0})); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code_of([&] { decode_set(m, Tensor::vector({1, 0.5, 0})); }),
            ErrorCode::kNonCharacteristic);
  EXPECT_EQ(code_of([&] { encode_atom(m, "d"); }), ErrorCode::kUnknownAtom);
}

TEST(Model, EncodeDecodeAllSubsets) {
  const Model m({"a", "b", "c", "d"}, {}, {});
  for (unsigned mask = 0; mask < 16; ++mask) {
    std::set<std::string> names;
    for (std::size_t i = 0; i < 4; ++i) {
      if (mask >> i & 1u) names.insert(m.atoms()[i].name);
    }
    EXPECT_EQ(decode_set(m, encode_set(m, names)), names);
  }
}
