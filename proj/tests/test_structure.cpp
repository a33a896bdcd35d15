#include <doctest.h>

#include "wsum/errors.hpp"
#include "wsum/structure.hpp"

using namespace wsum;

namespace {

WeightedStructure sample() {
  Vocabulary v;
  v.add("E", SymbolKind::Relation, 2);
  v.add("Ans", SymbolKind::Relation, 0);
  v.add("f", SymbolKind::WeightFunction, 1);
  WeightedStructure s({"a", "b", "c"}, v);
  s.rel_insert("E", {0, 1});
  s.rel_insert("E", {1, 2});
  s.set_weight("f", {0}, LiftedRational(1, 2));
  return s;
}

}  // namespace

TEST_CASE("vocabulary rejects clashes and negative arities") {
  Vocabulary v;
  v.add("R", SymbolKind::Relation, 2);
  CHECK_THROWS_AS(v.add("R", SymbolKind::WeightFunction, 1), ValidationError);
  CHECK_THROWS_AS(v.add("S", SymbolKind::Relation, -1), ValidationError);
  Vocabulary w;
  w.add("R", SymbolKind::Relation, 2);
  w.add("T", SymbolKind::Relation, 0);
  v.merge(w);
  CHECK(v.contains("T"));
  Vocabulary clash;
  clash.add("R", SymbolKind::Relation, 3);
  CHECK_THROWS_AS(v.merge(clash), ValidationError);
}

TEST_CASE("weight functions read as total with bottom defaults") {
  WeightedStructure s = sample();
  CHECK(s.weight("f", {0}) == LiftedRational(1, 2));
  CHECK(s.weight("f", {1}).is_bottom());
  CHECK(s.weight("f", {2}).is_bottom());
  // setting to bottom erases, keeping the sparse map canonical
  s.set_weight("f", {0}, LiftedRational::bottom());
  CHECK(s.weight("f", {0}).is_bottom());
  CHECK(s.weight_table("f").empty());
}

TEST_CASE("duplicate universe elements are rejected") {
  Vocabulary v;
  CHECK_THROWS_AS(WeightedStructure({"a", "a"}, v), ValidationError);
}

TEST_CASE("json round-trip preserves the structure") {
  WeightedStructure s = sample();
  std::string text = structure_to_json(s);
  WeightedStructure back = structure_from_json(text);
  CHECK(back.universe() == s.universe());
  CHECK(back.relation("E") == s.relation("E"));
  CHECK(back.weight_table("f") == s.weight_table("f"));
  CHECK(back.rel_contains("E", {0, 1}));
  CHECK_FALSE(back.rel_contains("E", {1, 0}));
  // serialization is deterministic
  CHECK(structure_to_json(back) == text);
}

TEST_CASE("json loader validates tuples") {
  CHECK_THROWS_AS(structure_from_json(R"({"universe":["a"],
    "relations":{"E":{"arity":2,"tuples":[["a"]]}}})"),
                  ValidationError);
  CHECK_THROWS_AS(structure_from_json(R"({"universe":["a"],
    "relations":{"E":{"arity":2,"tuples":[["a","z"]]}}})"),
                  ValidationError);
  // omitted weight entries read as bottom
  WeightedStructure s = structure_from_json(R"({"universe":["a","b"],
    "weights":{"f":{"arity":1,"entries":[{"tuple":["a"],"value":"bot"}]}}})");
  CHECK(s.weight("f", {0}).is_bottom());
  CHECK(s.weight("f", {1}).is_bottom());
}
