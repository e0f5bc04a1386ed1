// Walks through the worked examples: predicates and relations applied by
// contraction, the connective tensors, set-valued predicates with the two
// quantifiers, and the bridge between the two predicate formulations.
//
// Exits non-zero if any step gives an unexpected value.

#include <iostream>
#include <string>

#include "tenlog/tenlog.hpp"

using namespace tenlog;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  std::cout << (ok ? "  ok   " : "  FAIL ") << what << '\n';
  if (!ok) ++failures;
}

std::string show(const TruthVec& v) {
  if (v.is_top()) return "⊤";
  if (v.is_bot()) return "⊥";
  return "[" + format_number(v.t()) + ", " + format_number(v.f()) + "]";
}

}  // namespace

int main() {
  std::cout << "Predicates as B x D matrices\n";
  const Model people = parse_model(
      "domain john chris tom\n"
      "pred mathematician: chris john\n");
  const PredicateMatrix mathematician = build_predicate(people, "mathematician");
  std::cout << format_tensor(mathematician.tensor());
  const TruthVec john = apply_predicate(mathematician, encode_atom(people, "john"));
  const TruthVec tom = apply_predicate(mathematician, encode_atom(people, "tom"));
  expect(john.is_top(), "mathematician x john = " + show(john));
  expect(tom.is_bot(), "mathematician x tom = " + show(tom));

  std::cout << "\nRelations as B x D x D tensors\n";
  const Model lovers = parse_model("domain j m\nrel loves/2: (j, j) (m, m) (m, j)\n");
  const RelationTensor loves = build_relation(lovers, "loves");
  const Tensor j = encode_atom(lovers, "j");
  const Tensor m = encode_atom(lovers, "m");
  expect(apply_relation(loves, {m, j}).is_top(), "(loves x m) x j = ⊤   Mary loves John");
  expect(apply_relation(loves, {j, m}).is_bot(), "(loves x j) x m = ⊥   John loves Mary");

  std::cout << "\nConnectives\n";
  for (Connective c : {Connective::kAnd, Connective::kOr, Connective::kImplies}) {
    std::cout << "T^" << connective_name(c) << ":\n" << connective_tensor(c).block_layout();
  }
  const TruthVec soft = connective_binary(Connective::kAnd, TruthVec::probabilistic(0.7, 0.3),
                                          TruthVec::probabilistic(0.4, 0.6));
  expect(soft.is_normalized(), "[0.7, 0.3] and [0.4, 0.6] = " + show(soft) + " (still normalized)");

  std::cout << "\nSets and quantifiers\n";
  const Model pets = parse_model("domain a b c\npred dog: a b\npred brown: b c\n");
  const SetPredicateMatrix brown = build_set_predicate(pets, "brown");
  const SetVector dogs(encode_set(pets, {"a", "b"}));
  const SetVector brown_dogs = apply_set_predicate(brown, dogs);
  expect(decode_set(pets, brown_dogs.tensor()) == std::set<std::string>{"b"},
         "brown x [1 1 0] = " + format_tensor(brown_dogs.tensor()));
  const SetVector dog_vec = predicate_vector(build_set_predicate(pets, "dog"));
  expect(exists(set_intersect(predicate_vector(brown), dog_vec)).is_top(),
         "there exists a brown dog");
  expect(evaluate(*parse_formula("all dog brown", pets), pets).is_bot(), "not all dogs are brown");

  std::cout << "\nNon-linearity of the quantifiers\n";
  const auto fa = nonlinearity_witness_forall(2.0, 3.0);
  const auto ex = nonlinearity_witness_exists(5.0);
  expect(fa.confirmed, fa.report);
  expect(ex.confirmed, ex.report);

  std::cout << "\nFrom truth predicates to set predicates\n";
  expect(convert_truth_to_set(mathematician) == build_set_predicate(people, "mathematician"),
         "diag(p M) = M' for mathematician");
  const auto john_loves = partial_apply(loves, std::vector<Tensor>{j});
  const auto& loved_by_john = std::get<PredicateMatrix>(john_loves);
  expect(exists(predicate_vector(convert_truth_to_set(loved_by_john))).is_top(),
         "there exists someone who John loves");

  std::cout << '\n' << (failures ? "FAILED" : "all steps as expected") << '\n';
  return failures ? 1 : 0;
}
