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

const char* kModel =
    "# people\n"
    "domain a b c\n"
    "pred p: a c\n"
    "pred q: b\n"
    "rel r/2: (a, b) (c, c)\n";

}  // namespace

TEST(ModelDsl, ParsesDeclarations) {
  const Model m = parse_model(kModel);
  EXPECT_EQ(m.domain_size(), 3u);
  EXPECT_EQ(m.require_predicate("p").extension, (std::set<std::size_t>{0, 2}));
  EXPECT_EQ(m.require_relation("r").arity, 2u);
  EXPECT_EQ(m.require_relation("r").extension, (std::set<Tuple>{{0, 1}, {2, 2}}));
}

TEST(ModelDsl, PrintIsCanonical) {
  const Model m = parse_model(kModel);
  EXPECT_EQ(print_model(m),
            "domain a b c\n"
            "pred p: a c\n"
            "pred q: b\n"
            "rel r/2: (a, b) (c, c)\n");
  EXPECT_EQ(parse_model(print_model(m)), m);
}

TEST(ModelDsl, Errors) {
  EXPECT_EQ(code_of([] { parse_model("pred p: a\ndomain a\n"); }), ErrorCode::kSyntaxError);
  EXPECT_EQ(code_of([] { parse_model("domain a\ndomain b\n"); }), ErrorCode::kSyntaxError);
  EXPECT_EQ(code_of([] { parse_model("domain a a\n"); }), ErrorCode::kDuplicateName);
  EXPECT_EQ(code_of([] { parse_model("domain a\npred a: a\n"); }), ErrorCode::kDuplicateName);
  EXPECT_EQ(code_of([] { parse_model("domain a\npred p: z\n"); }),
            ErrorCode::kUnknownAtomInExtension);
  EXPECT_EQ(code_of([] { parse_model("domain a\nrel r/2: (a)\n"); }), ErrorCode::kArityError);
  EXPECT_EQ(code_of([] { parse_model("domain a\nrel r/0:\n"); }), ErrorCode::kArityError);
  EXPECT_EQ(code_of([] { parse_model("domain all\n"); }), ErrorCode::kSyntaxError);
  EXPECT_EQ(code_of([] { parse_model(""); }), ErrorCode::kSyntaxError);
}

TEST(ModelDsl, ErrorsCarryPosition) {
  try {
    parse_model("domain a\npred p: $\n");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(FormulaDsl, Precedence) {
  const Model m = parse_model(kModel);
  const FormulaPtr f = parse_formula("p(a) & q(b) | ~p(c) -> r(a, b)", m);
  const FormulaPtr want =
      implies(disj(conj(atom("p", "a"), atom("q", "b")), negate(atom("p", "c"))),
              rel_atom("r", {"a", "b"}));
  EXPECT_EQ(*f, *want);
}

TEST(FormulaDsl, Associativity) {
  const Model m = parse_model(kModel);
  EXPECT_EQ(*parse_formula("T -> F -> T", m),
            *implies(constant(truth_top()), implies(constant(truth_bot()), constant(truth_top()))));
  EXPECT_EQ(*parse_formula("T & F & T", m),
            *conj(conj(constant(truth_top()), constant(truth_bot())), constant(truth_top())));
}

TEST(FormulaDsl, MinimalParentheses) {
  const Model m = parse_model(kModel);
  for (const char* text : {"p(a) & (q(b) | p(c))", "(T -> F) -> T", "T -> F -> T", "~(p(a) & q(b))",
                           "T & F & T", "T & (F & T)", "[0.25, 0.75] | F",
                           "all (p & q) r(a, _)", "all (p | q) p", "exists p & (q | r(c, _))"}) {
    EXPECT_EQ(print_formula(*parse_formula(text, m)), text);
  }
}

TEST(FormulaDsl, Quantifiers) {
  const Model m = parse_model(kModel);
  EXPECT_EQ(*parse_formula("all p & q r(a, _)", m),
            *for_all(set_and(set_pred("p"), set_pred("q")), set_partial("r", {"a"})));
  EXPECT_EQ(*parse_formula("all p q", m), *for_all(set_pred("p"), set_pred("q")));
  EXPECT_EQ(*parse_formula("exists r(a, _)", m), *there_exists(set_partial("r", {"a"})));
}

TEST(FormulaDsl, Errors) {
  const Model m = parse_model(kModel);
  EXPECT_EQ(code_of([&] { parse_formula("p(z)", m); }), ErrorCode::kUnknownName);
  EXPECT_EQ(code_of([&] { parse_formula("s(a)", m); }), ErrorCode::kUnknownName);
  EXPECT_EQ(code_of([&] { parse_formula("p(a, b)", m); }), ErrorCode::kArityError);
  EXPECT_EQ(code_of([&] { parse_formula("r(a)", m); }), ErrorCode::kArityError);
  EXPECT_EQ(code_of([&] { parse_formula("p(a) &", m); }), ErrorCode::kSyntaxError);
  EXPECT_EQ(code_of([&] { parse_formula("p(a) q(b)", m); }), ErrorCode::kSyntaxError);
  EXPECT_EQ(code_of([&] { parse_formula("[0.5, 0.6]", m); }), ErrorCode::kInvalidTruthVec);
  EXPECT_EQ(code_of([&] { parse_formula("p(a) & exists p", m); }),
            ErrorCode::kEmbeddedQuantifier);
  EXPECT_EQ(code_of([&] { parse_formula("exists p & q -> T", m); }),
            ErrorCode::kEmbeddedQuantifier);
  EXPECT_EQ(code_of([&] { parse_formula("~(all p q)", m); }), ErrorCode::kEmbeddedQuantifier);
  EXPECT_EQ(code_of([&] { parse_formula("exists r(_, a)", m); }), ErrorCode::kSyntaxError);
}

TEST(FormulaDsl, BindCatchesBuiltFormulas) {
  const Model m = parse_model(kModel);
  EXPECT_EQ(code_of([&] { bind(*atom("p", "z"), m); }), ErrorCode::kUnknownName);
  EXPECT_EQ(code_of([&] { bind(*conj(there_exists(set_pred("p")), constant(truth_top())), m); }),
            ErrorCode::kEmbeddedQuantifier);
  EXPECT_NO_THROW(bind(*for_all(set_pred("p"), set_partial("r", {"a"})), m));
}

TEST(RoundTrip, GeneratedModels) {
  const ModelGenConfig cfg;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng(instance_seed(42, i));
    const Model m = random_model(rng, cfg);
    const std::string text = print_model(m);
    const Model back = parse_model(text);
    EXPECT_EQ(back, m) << text;
    EXPECT_EQ(print_model(back), text);
  }
}

TEST(RoundTrip, GeneratedFormulas) {
  const ModelGenConfig cfg;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rng rng(instance_seed(43, i));
    const Model m = random_model(rng, cfg);
    const FormulaPtr f = random_formula(rng, m, 1 + i % 5);
    const std::string text = print_formula(*f);
    const FormulaPtr back = parse_formula(text, m);
    EXPECT_EQ(*back, *f) << text;
    EXPECT_EQ(print_formula(*back), text);
  }
}

TEST(RoundTrip, ProbabilisticLiterals) {
  const Model m = parse_model(kModel);
  for (double t : {0.1, 0.3, 1.0 / 3.0, 0.7, 0.123456789}) {
    const FormulaPtr f = constant(TruthVec::probabilistic(t, 1.0 - t));
    EXPECT_EQ(*parse_formula(print_formula(*f), m), *f) << print_formula(*f);
  }
}
