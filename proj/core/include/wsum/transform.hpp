#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wsum/ast.hpp"

namespace wsum {

struct TransformResult {
  std::optional<Program> program;  // stratum-to-stratum transforms
  std::optional<Expr> expr;        // simultaneous induction
  std::set<std::string> preserved_symbols;
  enum class Precondition { None, AtLeastTwoElements } domain_precondition = Precondition::None;
  std::vector<std::string> warnings;
};

// Rewrites a stratum so that its loose-semantics run agrees with the
// input's functional-semantics run on the original symbols: weight rules
// become self-guarding (if F(x) = bot then body else F(x)) and a fresh
// definedness relation per weight function drives termination.
TransformResult functional_to_loose(const Stratum& st);

// Rewrites a stratum so that its functional-semantics run agrees with the
// input's loose-semantics run on the original symbols, on all structures.
// Uses stage timestamping over a relation of concatenated prefix-padded
// tuples for domains with at least two elements, combined with unrolled
// finite iterates for domains of size at most one. Refuses when the
// timestamp width would push an intensional arity above arity_cap.
TransformResult loose_to_functional(const Stratum& st, std::size_t arity_cap = 12);

// Collapses a stratum into a single ifp term over one fresh function that
// encodes all intensional symbols (relations via characteristic
// functions), wrapped for the answer symbol: an existential selection for
// relation answers, an avg selection for weight answers. Valid on
// structures with at least two elements.
TransformResult simultaneous_induction(const Stratum& st, const std::string& answer);

}  // namespace wsum
