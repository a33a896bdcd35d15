#pragma once

#include <gmpxx.h>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wsum/ast.hpp"
#include "wsum/structure.hpp"

namespace wsum {

struct FnnEdge {
  std::string from, to;
  mpq_class weight;
};

// A feedforward ReLU network: directed acyclic graph whose sources are
// exactly the ordered inputs and sinks exactly the ordered outputs,
// rational edge weights, and a rational bias on every non-input node.
// Hidden nodes apply ReLU; output nodes are linear.
struct Fnn {
  std::vector<std::string> nodes;  // stable declaration order
  std::vector<std::string> input_order, output_order;
  std::map<std::string, mpq_class> biases;  // exactly the non-input nodes
  std::vector<FnnEdge> edges;
};

// Checks all structural invariants; throws ValidationError.
void validate_fnn(const Fnn& net);

// Exact forward pass; DimensionMismatch unless |x| equals the input count.
std::vector<mpq_class> forward(const Fnn& net, const std::vector<mpq_class>& x);

// Longest-path depth from the inputs; inputs have depth 0.
std::map<std::string, int> node_depth(const Fnn& net);

// The network as a weighted structure over (E, In, Out, b, w) with
// optional input values as a unary function val. In and Out are the
// reflexive-transitive chains over the input/output orders; b is bottom
// on inputs and w bottom off-edges.
WeightedStructure to_weighted_structure(const Fnn& net,
                                        const std::optional<std::vector<mpq_class>>& val = {});

// Vocabulary of the encoding, used when parsing queries over networks.
Vocabulary fnn_vocabulary(bool with_val);

// The formula selecting the ordered p-tuple of input (output) nodes from
// the In (Out) chain; free variables x1..xp.
FormulaPtr input_tuple_formula(int p);
FormulaPtr output_tuple_formula(int p);

struct Reduction {
  Fnn net;                                      // the reduced network
  std::map<std::string, std::string> node_class;  // original node -> class node
};

// Quotient by the depth-wise equivalence: inputs and outputs are only
// equivalent to themselves; hidden nodes of equal depth merge when they
// share bias and per-class incoming weight sums. Represents the same
// function as the input network.
Reduction reduce(const Fnn& net);

// The canonical quasi-order: inputs first in input order, hidden classes
// by (depth, bias, lexicographic weights to earlier classes), outputs
// last in output order. Restricted to a reduced network this is a strict
// total order.
std::vector<std::vector<std::string>> canonical_order(const Fnn& net);

struct BoundCheck {
  bool ok = true;
  std::string witness_location;  // "bias(u)" or "w(u,v)" when !ok
  mpq_class witness;
};

// True iff every bias and edge weight r/q of the network (of its
// reduction when reduced is set) satisfies |r|, q <= P(n) with n the node
// count of the checked network. poly lists P's coefficients from the
// highest degree down.
BoundCheck check_p_bounded(const Fnn& net, const std::vector<unsigned long>& poly, bool reduced);

// Replaces every edge of positive natural weight a by a parallel unit
// weight internal nodes with zero bias. Function-preserving on inputs
// where every split point's pre-activation is nonnegative; throws
// UnsupportedWeight on non-natural weights.
Fnn split_edges(const Fnn& net);

// The bit-extraction network in K(1, n): on x = (0.a1...an)_2 output i is
// the bit a_i exactly, and every output lies in [0, 1] for all inputs.
Fnn gen_split_network(int n);

struct CnfFormula {
  int num_vars = 0;
  std::vector<std::array<int, 3>> clauses;  // signed 1-based variable indices
};

void validate_cnf(const CnfFormula& cnf);
// DIMACS CNF; clauses of width 1 or 2 are padded by literal repetition,
// wider clauses are rejected.
CnfFormula parse_dimacs(const std::string& text);

// The satisfiability gadget in K(1, 1): composes the bit splitter, a
// min/max network for the clauses, and a final thresholding ReLU so the
// represented function is identically zero iff the formula is
// unsatisfiable, and reaches 1 on satisfying assignment encodings.
Fnn gen_3sat_network(const CnfFormula& cnf);

std::string rational_str(const mpq_class& q);
mpq_class rational_parse(const std::string& text);

Fnn fnn_from_json(const std::string& json_text);
std::string fnn_to_json(const Fnn& net);

}  // namespace wsum
