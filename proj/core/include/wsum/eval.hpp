#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "wsum/ast.hpp"
#include "wsum/structure.hpp"

namespace wsum {

enum class Mode { Functional, Loose };

struct EvalResult {
  bool is_bool;
  bool bool_value = false;
  LiftedRational weight_value;

  static EvalResult boolean(bool b) { return {true, b, {}}; }
  static EvalResult weight(LiftedRational w) { return {false, false, std::move(w)}; }
};

// Evaluates a formula or weight term under an assignment that covers all
// its free variables. Quantifiers and binders range over the universe;
// summation ranges over exactly the guard-satisfying tuples (empty sum is
// 0, a bottom body on a satisfying tuple makes the whole sum bottom);
// avg of an empty range is bottom; ifp computes the functional fixpoint
// chain of its bound function.
EvalResult eval_expression(const Expr& e, const WeightedStructure& s, const Assignment& a);

struct RoundDelta {
  std::size_t relation_tuples_added = 0;
  std::size_t weights_defined = 0;     // bottom -> value
  std::size_t weights_overwritten = 0; // value -> different value (loose only)
};

struct FixpointTrace {
  std::size_t rounds = 0;
  std::vector<RoundDelta> per_round;
  Mode termination_kind = Mode::Functional;
};

// One simultaneous application of all rules against the pre-round
// structure. Functional mode sets weight entries only where currently
// bottom; loose mode overwrites weight functions wholesale. Relations
// grow inflationarily in both modes.
WeightedStructure immediate_consequence(const Stratum& st, const WeightedStructure& s, Mode mode);

// Expands s with the stratum's intensional symbols (empty / all-bottom)
// and iterates to the fixpoint: full stability under functional
// semantics, intensional-relation stability (the loose termination index)
// under loose semantics. Throws IterationBoundExceeded past the a-priori
// round bound.
std::pair<WeightedStructure, FixpointTrace> run_stratum(const Stratum& st,
                                                        const WeightedStructure& s, Mode mode);

struct AnswerView {
  enum class Kind { Boolean, Relation, Weight };
  Kind kind;
  std::string symbol;
  int arity = 0;
  bool bool_value = false;
  std::vector<Tuple> tuples;                                   // sorted
  std::vector<std::pair<Tuple, LiftedRational>> weights;       // sorted, non-bottom
};

AnswerView answer_view(const WeightedStructure& s, const std::string& symbol);

struct ProgramResult {
  WeightedStructure structure;
  AnswerView answer;
  std::vector<FixpointTrace> traces;
};

// Sequential composition of the strata; each stratum sees all earlier
// intensional symbols as extensional. answer overrides the program's
// designated answer symbol when nonempty.
ProgramResult run_program(const Program& p, const WeightedStructure& s, Mode mode,
                          const std::string& answer = "");

}  // namespace wsum
