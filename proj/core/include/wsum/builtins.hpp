#pragma once

#include <map>
#include <string>
#include <variant>

#include "wsum/ast.hpp"

namespace wsum {

// The catalog of example programs and terms shipped with the engine:
//   eval_recursive          one-stratum program computing the network
//                           value function at every node (answer eval)
//   eval_depth_bounded      the unrolled term family for nodes up to a
//                           given depth; params: {"depth": l}, free var u
//   floyd_warshall          all-pairs shortest distances over (ord, W),
//                           intended for the loose semantics (answer D)
//   floyd_warshall_functional
//                           the timestamp-free functional simulation of
//                           floyd_warshall over a total order (answer D)
//   squaring                the ifp term with doubly exponential values
//                           on paths, free var x
// Throws UnknownBuiltin for other names.
std::variant<Program, Expr> builtin_program(const std::string& name,
                                            const std::map<std::string, long>& params = {});

// Input vocabularies the builtins expect.
Vocabulary floyd_warshall_vocabulary();  // ord/2, W/2
Vocabulary squaring_vocabulary();        // E/2

}  // namespace wsum
