#pragma once

#include <set>
#include <string>
#include <vector>

#include "wsum/ast.hpp"

namespace wsum {

enum class ScalarViolationKind { MulOfTwoIntensional, DivByIntensional };

struct ScalarViolation {
  std::string path;  // innermost offending node, as a / separated trail
  ScalarViolationKind reason;
};

struct ScalarReport {
  bool is_scalar = true;
  std::vector<ScalarViolation> violations;
};

// Membership in the scalar fragment: no multiplication of two terms that
// both contain intensional function symbols, and no division (explicit,
// or implicit through avg/uniq) by a term containing one. "Contains" is
// decided syntactically on free function symbols. An expression is scalar
// iff every subexpression passes against the expression's own intensional
// set; a program iff every stratum passes against that stratum's
// intensional weight functions.
ScalarReport check_scalar_expression(const Expr& e);
ScalarReport check_scalar_program(const Program& p);

// The inductive F-scalar predicate itself, exposed for property tests.
bool is_scalar_wrt(const Expr& e, const std::set<std::string>& fns);

std::string to_string(ScalarViolationKind k);

}  // namespace wsum
