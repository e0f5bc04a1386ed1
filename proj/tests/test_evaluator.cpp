#include <gtest/gtest.h>

#include <sstream>

#include "json.hpp"
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
    "domain a b c\n"
    "pred p: a c\n"
    "pred q: b c\n"
    "rel r/2: (a, b) (c, c) (b, a)\n";

TruthVec eval(const char* text, const Model& m) { return evaluate(*parse_formula(text, m), m); }

}  // namespace

TEST(Evaluator, GroundFormulas) {
  const Model m = parse_model(kModel);
  EXPECT_TRUE(eval("p(a)", m).is_top());
  EXPECT_TRUE(eval("p(b)", m).is_bot());
  EXPECT_TRUE(eval("r(a, b)", m).is_top());
  EXPECT_TRUE(eval("r(b, c)", m).is_bot());
  EXPECT_TRUE(eval("~p(b) & q(b)", m).is_top());
  EXPECT_TRUE(eval("p(b) -> F", m).is_top());
  EXPECT_TRUE(eval("T -> p(b)", m).is_bot());
}

TEST(Evaluator, Quantified) {
  const Model m = parse_model(kModel);
  EXPECT_TRUE(eval("all p q", m).is_bot());
  EXPECT_TRUE(eval("all p & q q", m).is_top());
  EXPECT_TRUE(eval("exists p & q", m).is_top());
  EXPECT_TRUE(eval("exists r(a, _) & p", m).is_bot());
  EXPECT_TRUE(eval("exists r(a, _)", m).is_top());
  EXPECT_TRUE(eval("all r(c, _) p", m).is_top());
}

TEST(Evaluator, ProbabilisticConstants) {
  const Model m = parse_model(kModel);
  const TruthVec v = eval("[0.25, 0.75] & T", m);
  EXPECT_NEAR(v.t(), 0.25, 1e-12);
  EXPECT_NEAR(v.f(), 0.75, 1e-12);
  EXPECT_EQ(code_of([&] { oracle_eval(*parse_formula("[0.25, 0.75]", m), m); }),
            ErrorCode::kInvalidTruthVec);
}

TEST(Evaluator, NegationIsCompositional) {
  const ModelGenConfig cfg;
  for (std::uint64_t i = 0; i < 300; ++i) {
    Rng rng(instance_seed(5, i));
    const Model m = random_model(rng, cfg);
    const FormulaPtr f = random_formula(rng, m, 3);
    if (is_quantified(*f)) continue;
    EXPECT_EQ(evaluate(*negate(f), m), connective_not(evaluate(*f, m))) << print_formula(*f);
  }
}

TEST(Plan, ShapeOfAtomPlan) {
  const Model m = parse_model(kModel);
  const ContractionPlan plan = compile(*parse_formula("r(a, b)", m), m);
  ASSERT_EQ(plan.steps.size(), 5u);
  EXPECT_TRUE(std::holds_alternative<step::Load>(plan.steps[0]));
  EXPECT_EQ(plan.registers[plan.result], Shape{2});
  EXPECT_EQ(std::get<step::Load>(plan.steps[0]).value.shape(), (Shape{2, 3, 3}));
}

TEST(Plan, QuantifierLowering) {
  const Model m = parse_model(kModel);
  const ContractionPlan plan = compile(*parse_formula("all p & q r(a, _)", m), m);
  bool has_min = false, has_diag = false, has_forall = false;
  for (const PlanStep& s : plan.steps) {
    has_min |= std::holds_alternative<step::Min>(s);
    has_diag |= std::holds_alternative<step::DiagBuild>(s);
    has_forall |= std::holds_alternative<step::ForAllTest>(s);
  }
  EXPECT_TRUE(has_min);
  EXPECT_TRUE(has_diag);
  EXPECT_TRUE(has_forall);
  EXPECT_TRUE(std::holds_alternative<step::ForAllTest>(plan.steps.back()));
}

TEST(Plan, Deterministic) {
  const ModelGenConfig cfg;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng(instance_seed(9, i));
    const Model m = random_model(rng, cfg);
    const FormulaPtr f = random_formula(rng, m, 4);
    const ContractionPlan a = compile(*f, m);
    const ContractionPlan b = compile(*parse_formula(print_formula(*f), m), m);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.to_string(), b.to_string());
    EXPECT_EQ(execute(a), execute(b));
  }
}

TEST(Plan, RegistersWrittenOnce) {
  const Model m = parse_model(kModel);
  const ContractionPlan plan =
      compile(*parse_formula("(p(a) -> q(b)) & ~r(c, c) | r(a, b)", m), m);
  std::vector<int> writes(plan.registers.size(), 0);
  for (const PlanStep& s : plan.steps) {
    std::visit([&](const auto& x) { ++writes[x.dst]; }, s);
  }
  for (int w : writes) EXPECT_EQ(w, 1);
}

TEST(Plan, ElementCap) {
  const Model m = parse_model("domain a b c\nrel r/3: (a, b, c)\n");
  const FormulaPtr f = parse_formula("r(a, b, c)", m);
  EXPECT_EQ(code_of([&] { compile(*f, m, CompileOptions{10}); }), ErrorCode::kPlanTooLarge);
  EXPECT_TRUE(evaluate(*f, m, CompileOptions{54}).is_top());
  EXPECT_TRUE(evaluate(*parse_formula("r(c, b, a)", m), m).is_bot());
}

TEST(Oracle, AgreesOnAllSmallModels) {
  // Every model with |D| <= 2 of the exhaustive signature, every formula
  // the exhaustive scheme builds for it.
  std::size_t checked = 0;
  for (std::size_t n = 1; n <= 2; ++n) {
    for (std::size_t code = 0; code < exhaustive_model_count(n); ++code) {
      const Model m = exhaustive_model(n, code);
      for (const FormulaPtr& f : exhaustive_formulas(m, 3, code)) {
        const OracleVerdict v = check(*f, m);
        ASSERT_TRUE(v.agree) << v.formula << "\n" << print_model(m);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 10000u);
}

TEST(Oracle, EnumerationCounts) {
  EXPECT_EQ(exhaustive_model_count(1), 8u);
  EXPECT_EQ(exhaustive_model_count(2), 256u);
  EXPECT_EQ(exhaustive_model_count(3), 32768u);
  const auto models = exhaustive_models(3, 5000, 0);
  EXPECT_EQ(models.size(), 5000u);
  EXPECT_EQ(models.front().domain_size(), 1u);
  EXPECT_EQ(models.back().domain_size(), 3u);
  // Two leaves, depth <= 2: 2 leaves, 2 negations, 3 * 2 * 2 binaries.
  const std::vector<FormulaPtr> leaves{constant(truth_top()), constant(truth_bot())};
  EXPECT_EQ(enumerate_formulas(leaves, 2).size(), 2u + 2u + 12u);
}

TEST(Sweep, RandomIsReproducible) {
  SweepConfig cfg;
  cfg.seed = 77;
  cfg.count = 300;
  cfg.max_domain = 4;
  cfg.workers = 1;
  const SweepReport a = equivalence_sweep(cfg);
  cfg.workers = 3;
  const SweepReport b = equivalence_sweep(cfg);
  EXPECT_TRUE(a.ok());
  EXPECT_EQ(a.instances, 300u);
  EXPECT_EQ(to_records(a), to_records(b));
}

TEST(Sweep, ZeroCount) {
  SweepConfig cfg;
  cfg.count = 0;
  const SweepReport r = equivalence_sweep(cfg);
  EXPECT_EQ(r.instances, 0u);
  EXPECT_TRUE(r.ok());
  std::istringstream lines(to_records(r));
  std::string line;
  ASSERT_TRUE(std::getline(lines, line));
  const auto summary = nlohmann::json::parse(line);
  EXPECT_TRUE(summary["summary"].get<bool>());
  EXPECT_EQ(summary["disagreements"].get<std::size_t>(), 0u);
}

TEST(Sweep, RecordsAreJsonLines) {
  SweepConfig cfg;
  cfg.count = 20;
  cfg.seed = 3;
  const SweepReport r = equivalence_sweep(cfg);
  std::istringstream lines(to_records(r));
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    if (!j.contains("summary")) {
      EXPECT_TRUE(j["agree"].get<bool>());
      EXPECT_EQ(j["tensor"], j["oracle"]);
    }
    ++n;
  }
  EXPECT_EQ(n, 21u);
}
