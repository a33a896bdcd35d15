#include "wsum/fnn.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wsum/errors.hpp"

namespace wsum {

namespace {

struct Adjacency {
  std::map<std::string, std::vector<const FnnEdge*>> in, out;
};

Adjacency adjacency(const Fnn& net) {
  Adjacency adj;
  for (const auto& n : net.nodes) {
    adj.in[n];
    adj.out[n];
  }
  for (const auto& e : net.edges) {
    adj.in[e.to].push_back(&e);
    adj.out[e.from].push_back(&e);
  }
  return adj;
}

// Kahn topological order; throws on a cycle.
std::vector<std::string> topo_order(const Fnn& net, const Adjacency& adj) {
  std::map<std::string, int> indeg;
  for (const auto& n : net.nodes) indeg[n] = static_cast<int>(adj.in.at(n).size());
  std::vector<std::string> queue, order;
  for (const auto& n : net.nodes)
    if (indeg[n] == 0) queue.push_back(n);
  while (!queue.empty()) {
    std::string n = queue.front();
    queue.erase(queue.begin());
    order.push_back(n);
    for (const FnnEdge* e : adj.out.at(n))
      if (--indeg[e->to] == 0) queue.push_back(e->to);
  }
  if (order.size() != net.nodes.size()) throw ValidationError("network graph has a cycle");
  return order;
}

mpq_class relu(const mpq_class& v) { return v < 0 ? mpq_class(0) : v; }

}  // namespace

void validate_fnn(const Fnn& net) {
  std::set<std::string> names(net.nodes.begin(), net.nodes.end());
  if (names.size() != net.nodes.size()) throw ValidationError("duplicate node names");
  if (net.input_order.empty() || net.output_order.empty())
    throw ValidationError("a network needs at least one input and one output node");

  std::set<std::string> inputs(net.input_order.begin(), net.input_order.end());
  std::set<std::string> outputs(net.output_order.begin(), net.output_order.end());
  if (inputs.size() != net.input_order.size() || outputs.size() != net.output_order.size())
    throw ValidationError("repeated node in the input or output order");
  for (const auto& n : net.input_order)
    if (!names.count(n)) throw ValidationError("unknown input node " + n);
  for (const auto& n : net.output_order)
    if (!names.count(n)) throw ValidationError("unknown output node " + n);
  for (const auto& n : inputs)
    if (outputs.count(n)) throw ValidationError("node " + n + " is both input and output");

  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& e : net.edges) {
    if (!names.count(e.from) || !names.count(e.to))
      throw ValidationError("edge endpoint not a node: " + e.from + " -> " + e.to);
    if (!seen.emplace(e.from, e.to).second)
      throw ValidationError("duplicate edge " + e.from + " -> " + e.to);
  }

  Adjacency adj = adjacency(net);
  topo_order(net, adj);
  for (const auto& n : net.nodes) {
    bool source = adj.in.at(n).empty();
    bool sink = adj.out.at(n).empty();
    if (source != (inputs.count(n) > 0))
      throw ValidationError("node " + n + (source ? " has no incoming edges but is not an input"
                                                  : " is an input with incoming edges"));
    if (inputs.count(n)) {
      if (net.biases.count(n)) throw ValidationError("input node " + n + " must not have a bias");
    } else {
      if (!net.biases.count(n)) throw ValidationError("non-input node " + n + " needs a bias");
    }
    if (sink && !outputs.count(n))
      throw ValidationError("node " + n + " has no outgoing edges but is not an output");
    if (!sink && outputs.count(n))
      throw ValidationError("output node " + n + " has outgoing edges");
  }
}

std::vector<mpq_class> forward(const Fnn& net, const std::vector<mpq_class>& x) {
  if (x.size() != net.input_order.size())
    throw DimensionMismatch("forward pass got " + std::to_string(x.size()) + " inputs, network has " +
                            std::to_string(net.input_order.size()));
  Adjacency adj = adjacency(net);
  std::map<std::string, mpq_class> value;
  for (std::size_t i = 0; i < x.size(); ++i) value[net.input_order[i]] = x[i];

  std::set<std::string> outputs(net.output_order.begin(), net.output_order.end());
  for (const auto& n : topo_order(net, adj)) {
    if (value.count(n)) continue;  // input
    mpq_class acc = net.biases.at(n);
    for (const FnnEdge* e : adj.in.at(n)) acc += e->weight * value.at(e->from);
    value[n] = outputs.count(n) ? acc : relu(acc);
  }

  std::vector<mpq_class> out;
  for (const auto& n : net.output_order) out.push_back(value.at(n));
  return out;
}

std::map<std::string, int> node_depth(const Fnn& net) {
  Adjacency adj = adjacency(net);
  std::map<std::string, int> depth;
  for (const auto& n : topo_order(net, adj)) {
    int d = 0;
    for (const FnnEdge* e : adj.in.at(n)) d = std::max(d, depth.at(e->from) + 1);
    depth[n] = d;
  }
  return depth;
}

Vocabulary fnn_vocabulary(bool with_val) {
  Vocabulary v;
  v.add("E", SymbolKind::Relation, 2);
  v.add("In", SymbolKind::Relation, 2);
  v.add("Out", SymbolKind::Relation, 2);
  v.add("b", SymbolKind::WeightFunction, 1);
  v.add("w", SymbolKind::WeightFunction, 2);
  if (with_val) v.add("val", SymbolKind::WeightFunction, 1);
  return v;
}

WeightedStructure to_weighted_structure(const Fnn& net,
                                        const std::optional<std::vector<mpq_class>>& val) {
  if (val && val->size() != net.input_order.size())
    throw DimensionMismatch("val vector has " + std::to_string(val->size()) +
                            " entries, network has " + std::to_string(net.input_order.size()) +
                            " inputs");
  WeightedStructure s(net.nodes, fnn_vocabulary(val.has_value()));
  for (const auto& e : net.edges) {
    Tuple t{s.element_index(e.from), s.element_index(e.to)};
    s.rel_insert("E", t);
    s.set_weight("w", t, LiftedRational(e.weight));
  }
  auto chain = [&s](const char* rel, const std::vector<std::string>& order) {
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t j = i; j < order.size(); ++j)
        s.rel_insert(rel, {s.element_index(order[i]), s.element_index(order[j])});
  };
  chain("In", net.input_order);
  chain("Out", net.output_order);
  for (const auto& [node, bias] : net.biases)
    s.set_weight("b", {s.element_index(node)}, LiftedRational(bias));
  if (val)
    for (std::size_t i = 0; i < val->size(); ++i)
      s.set_weight("val", {s.element_index(net.input_order[i])}, LiftedRational((*val)[i]));
  return s;
}

namespace {

FormulaPtr tuple_formula(const char* rel, int p) {
  if (p < 1) throw ValidationError("tuple formula needs arity >= 1");
  std::vector<std::string> xs;
  for (int i = 1; i <= p; ++i) xs.push_back("x" + std::to_string(i));
  std::vector<FormulaPtr> parts;
  for (int i = 0; i + 1 < p; ++i)
    parts.push_back(f_and(f_rel(rel, {xs[i], xs[i + 1]}), f_not(f_vareq(xs[i], xs[i + 1]))));
  FormulaPtr any = f_vareq("y", xs[0]);
  for (int i = 1; i < p; ++i) any = f_or(any, f_vareq("y", xs[i]));
  parts.push_back(f_forall("y", f_implies(f_rel(rel, {"y", "y"}), any)));
  FormulaPtr out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = f_and(out, parts[i]);
  return out;
}

}  // namespace

FormulaPtr input_tuple_formula(int p) { return tuple_formula("In", p); }
FormulaPtr output_tuple_formula(int p) { return tuple_formula("Out", p); }

// ---------------------------------------------------------------------------
// reduction and canonical order
// ---------------------------------------------------------------------------

namespace {

struct Classes {
  std::vector<std::vector<std::string>> members;  // class id -> members
  std::map<std::string, int> of;                  // node -> class id
  std::map<std::string, int> depth;               // node depths
};

// Depth-stratified partition: inputs and outputs stay singletons, hidden
// nodes merge on equal (bias, per-class incoming weight sums).
Classes compute_classes(const Fnn& net) {
  Classes c;
  c.depth = node_depth(net);
  Adjacency adj = adjacency(net);
  std::set<std::string> inputs(net.input_order.begin(), net.input_order.end());
  std::set<std::string> outputs(net.output_order.begin(), net.output_order.end());

  int max_depth = 0;
  for (const auto& [n, d] : c.depth) max_depth = std::max(max_depth, d);

  auto new_class = [&](const std::string& node) {
    c.of[node] = static_cast<int>(c.members.size());
    c.members.push_back({node});
  };

  for (int d = 0; d <= max_depth; ++d) {
    // Signature: bias plus incoming weight totals per already-formed class.
    using Signature = std::pair<mpq_class, std::vector<std::pair<int, mpq_class>>>;
    std::vector<std::pair<Signature, std::string>> hidden;
    for (const auto& n : net.nodes) {
      if (c.depth.at(n) != d) continue;
      if (inputs.count(n) || outputs.count(n)) {
        new_class(n);
        continue;
      }
      std::map<int, mpq_class> sums;
      for (const FnnEdge* e : adj.in.at(n)) sums[c.of.at(e->from)] += e->weight;
      std::vector<std::pair<int, mpq_class>> sig;
      for (auto& [cls, sum] : sums)
        if (sum != 0) sig.emplace_back(cls, sum);
      hidden.push_back({{net.biases.at(n), std::move(sig)}, n});
    }
    // Group equal signatures, keeping first-seen order for determinism.
    std::vector<std::pair<Signature, int>> groups;
    for (auto& [sig, node] : hidden) {
      int found = -1;
      for (auto& [gsig, gid] : groups) {
        if (gsig == sig) {
          found = gid;
          break;
        }
      }
      if (found >= 0) {
        c.of[node] = found;
        c.members[found].push_back(node);
      } else {
        groups.push_back({sig, static_cast<int>(c.members.size())});
        new_class(node);
      }
    }
  }
  return c;
}

}  // namespace

Reduction reduce(const Fnn& net) {
  validate_fnn(net);
  Classes c = compute_classes(net);

  // Class node names: the first member in declaration order (inputs and
  // outputs keep their own names, their classes being singletons).
  std::vector<std::string> class_name(c.members.size());
  for (std::size_t i = 0; i < c.members.size(); ++i) class_name[i] = c.members[i].front();

  Reduction red;
  for (const auto& [node, cls] : c.of) red.node_class[node] = class_name[cls];

  std::set<int> emitted;
  for (const auto& n : net.nodes) {
    int cls = c.of.at(n);
    if (emitted.insert(cls).second) red.net.nodes.push_back(class_name[cls]);
  }
  for (const auto& n : net.input_order) red.net.input_order.push_back(class_name[c.of.at(n)]);
  for (const auto& n : net.output_order) red.net.output_order.push_back(class_name[c.of.at(n)]);

  // Edge weight between classes: sum of the source-class weights into one
  // representative target; equal across targets by construction.
  Adjacency adj = adjacency(net);
  std::map<std::pair<int, int>, mpq_class> weights;
  std::set<std::pair<int, int>> present;
  for (const auto& e : net.edges) present.emplace(c.of.at(e.from), c.of.at(e.to));
  for (const auto& pair : present) {
    const std::string& target_rep = class_name[pair.second];
    mpq_class sum = 0;
    for (const FnnEdge* e : adj.in.at(target_rep))
      if (c.of.at(e->from) == pair.first) sum += e->weight;
    weights[pair] = sum;
  }
  for (const auto& n : red.net.nodes) {
    // biases carry over from any member; members share the bias by definition
    auto it = net.biases.find(n);
    if (it != net.biases.end()) red.net.biases[n] = it->second;
  }
  for (const auto& [pair, wsum] : weights)
    red.net.edges.push_back({class_name[pair.first], class_name[pair.second], wsum});

  validate_fnn(red.net);
  return red;
}

std::vector<std::vector<std::string>> canonical_order(const Fnn& net) {
  validate_fnn(net);
  Classes c = compute_classes(net);
  Adjacency adj = adjacency(net);

  // wt(class V, node u): total incoming weight into u from members of V.
  auto class_weight_into = [&](int cls, const std::string& u) {
    mpq_class sum = 0;
    for (const FnnEdge* e : adj.in.at(u))
      if (c.of.at(e->from) == cls) sum += e->weight;
    return sum;
  };

  std::vector<int> placed;  // class ids in canonical order so far
  std::vector<std::vector<std::string>> order;
  for (const auto& n : net.input_order) {
    placed.push_back(c.of.at(n));
    order.push_back(c.members[c.of.at(n)]);
  }

  std::set<std::string> inputs(net.input_order.begin(), net.input_order.end());
  std::set<std::string> outputs(net.output_order.begin(), net.output_order.end());
  int max_depth = 0;
  for (const auto& [n, d] : c.depth) max_depth = std::max(max_depth, d);

  for (int d = 1; d <= max_depth; ++d) {
    std::vector<int> level;
    for (std::size_t cls = 0; cls < c.members.size(); ++cls) {
      const std::string& rep = c.members[cls].front();
      if (c.depth.at(rep) == d && !inputs.count(rep) && !outputs.count(rep))
        level.push_back(static_cast<int>(cls));
    }
    std::sort(level.begin(), level.end(), [&](int a, int b) {
      const std::string& ua = c.members[a].front();
      const std::string& ub = c.members[b].front();
      int bias_cmp = cmp(net.biases.at(ua), net.biases.at(ub));
      if (bias_cmp != 0) return bias_cmp < 0;
      for (int v : placed) {
        // Only classes of smaller depth discriminate; outputs contribute 0.
        int wcmp = cmp(class_weight_into(v, ua), class_weight_into(v, ub));
        if (wcmp != 0) return wcmp < 0;
      }
      assert(a == b && "distinct same-depth classes must differ in bias or weights");
      return false;
    });
    for (int cls : level) {
      placed.push_back(cls);
      order.push_back(c.members[cls]);
    }
  }
  for (const auto& n : net.output_order) order.push_back(c.members[c.of.at(n)]);
  return order;
}

// ---------------------------------------------------------------------------
// weight bounds and edge splitting
// ---------------------------------------------------------------------------

BoundCheck check_p_bounded(const Fnn& net, const std::vector<unsigned long>& poly, bool reduced) {
  const Fnn* checked = &net;
  Fnn reduced_net;
  if (reduced) {
    reduced_net = reduce(net).net;
    checked = &reduced_net;
  }
  mpz_class n(static_cast<unsigned long>(checked->nodes.size()));
  mpz_class bound = 0;
  for (unsigned long coeff : poly) bound = bound * n + coeff;

  BoundCheck result;
  auto check = [&](const mpq_class& q, std::string where) {
    if (!result.ok) return;
    if (abs(q.get_num()) > bound || q.get_den() > bound) {
      result.ok = false;
      result.witness_location = std::move(where);
      result.witness = q;
    }
  };
  for (const auto& [node, bias] : checked->biases) check(bias, "bias(" + node + ")");
  for (const auto& e : checked->edges) check(e.weight, "w(" + e.from + "," + e.to + ")");
  return result;
}

Fnn split_edges(const Fnn& net) {
  validate_fnn(net);
  for (const auto& e : net.edges) {
    if (e.weight.get_den() != 1 || e.weight.get_num() < 1)
      throw UnsupportedWeight("edge " + e.from + " -> " + e.to + " has weight " +
                              rational_str(e.weight) + "; splitting needs positive naturals");
  }
  mpz_class total = 0;
  for (const auto& e : net.edges) total += e.weight.get_num();
  if (total > 1000000)
    throw UnsupportedWeight("splitting would create " + total.get_str() + " nodes");

  std::set<std::string> used(net.nodes.begin(), net.nodes.end());
  Fnn out;
  out.nodes = net.nodes;
  out.input_order = net.input_order;
  out.output_order = net.output_order;
  out.biases = net.biases;
  for (const auto& e : net.edges) {
    unsigned long a = e.weight.get_num().get_ui();
    for (unsigned long i = 1; i <= a; ++i) {
      std::string name = e.from + "_" + e.to + "_s" + std::to_string(i);
      while (used.count(name)) name += "_";
      used.insert(name);
      out.nodes.push_back(name);
      out.biases[name] = 0;
      out.edges.push_back({e.from, name, 1});
      out.edges.push_back({name, e.to, 1});
    }
  }
  validate_fnn(out);
  return out;
}

// ---------------------------------------------------------------------------
// hardness gadgets
// ---------------------------------------------------------------------------

namespace {

mpq_class pow2(long e) {
  mpq_class q;
  if (e >= 0) {
    mpz_class z = 1;
    z <<= static_cast<unsigned long>(e);
    q = z;
  } else {
    mpz_class z = 1;
    z <<= static_cast<unsigned long>(-e);
    q = mpq_class(1, z);
  }
  return q;
}

// A linear combination of node outputs plus a constant; foldable into the
// bias and incoming edges of any consumer.
struct Affine {
  mpq_class constant = 0;
  std::map<std::string, mpq_class> coeffs;

  Affine& add(const std::string& node, const mpq_class& c) {
    coeffs[node] += c;
    return *this;
  }
  friend Affine operator+(Affine a, const Affine& b) {
    a.constant += b.constant;
    for (const auto& [n, c] : b.coeffs) a.coeffs[n] += c;
    return a;
  }
  friend Affine operator-(Affine a, const Affine& b) {
    a.constant -= b.constant;
    for (const auto& [n, c] : b.coeffs) a.coeffs[n] -= c;
    return a;
  }
  static Affine node(const std::string& n) {
    Affine a;
    a.coeffs[n] = 1;
    return a;
  }
};

struct GadgetBuilder {
  Fnn net;

  std::string hidden(const std::string& name, const Affine& pre) {
    net.nodes.push_back(name);
    net.biases[name] = pre.constant;
    for (const auto& [src, c] : pre.coeffs)
      if (c != 0) net.edges.push_back({src, name, c});
    return name;
  }

  void output(const std::string& name, const Affine& pre) {
    net.nodes.push_back(name);
    net.output_order.push_back(name);
    net.biases[name] = pre.constant;
    for (const auto& [src, c] : pre.coeffs)
      if (c != 0) net.edges.push_back({src, name, c});
  }

  // lsig(z) = ReLU(z) - ReLU(z - 1) via two hidden nodes.
  Affine lsig(const std::string& stem, const Affine& z) {
    Affine z1 = z;
    z1.constant -= 1;
    std::string a = hidden(stem + "a", z);
    std::string b = hidden(stem + "b", z1);
    Affine out;
    out.add(a, 1).add(b, -1);
    return out;
  }
};

// Shared split-layer construction: bit i of the binary expansion of the
// input, as an affine form over two hidden nodes per bit.
std::vector<Affine> build_split_bits(GadgetBuilder& g, const std::string& input, int n) {
  std::vector<Affine> bits;
  for (int i = 1; i <= n; ++i) {
    Affine z;
    z.constant = 1 - pow2(n - i);
    z.add(input, pow2(n));
    for (int j = 1; j < i; ++j) {
      Affine scaled = bits[j - 1];
      for (auto& [node, c] : scaled.coeffs) c *= -pow2(n - j);
      scaled.constant *= -pow2(n - j);
      z = z + scaled;
    }
    bits.push_back(g.lsig("s" + std::to_string(i), z));
  }
  return bits;
}

}  // namespace

Fnn gen_split_network(int n) {
  if (n < 1) throw ValidationError("bit splitter needs n >= 1");
  GadgetBuilder g;
  g.net.nodes.push_back("x");
  g.net.input_order.push_back("x");
  std::vector<Affine> bits = build_split_bits(g, "x", n);
  for (int i = 1; i <= n; ++i) g.output("o" + std::to_string(i), bits[i - 1]);
  validate_fnn(g.net);
  return g.net;
}

void validate_cnf(const CnfFormula& cnf) {
  if (cnf.num_vars < 1) throw ValidationError("CNF needs at least one variable");
  if (cnf.clauses.empty()) throw ValidationError("CNF needs at least one clause");
  for (const auto& clause : cnf.clauses) {
    for (int lit : clause) {
      if (lit == 0 || std::abs(lit) > cnf.num_vars)
        throw ValidationError("literal " + std::to_string(lit) + " out of range");
    }
  }
}

CnfFormula parse_dimacs(const std::string& text) {
  CnfFormula cnf;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  std::vector<int> pending;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      int m = 0;
      ls >> p >> fmt >> cnf.num_vars >> m;
      if (fmt != "cnf") throw ValidationError("DIMACS header must be 'p cnf <vars> <clauses>'");
      have_header = true;
      continue;
    }
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        if (pending.empty()) throw ValidationError("empty clause in DIMACS input");
        if (pending.size() > 3)
          throw ValidationError("clause wider than 3 literals; this tool handles 3-CNF");
        while (pending.size() < 3) pending.push_back(pending.back());
        cnf.clauses.push_back({pending[0], pending[1], pending[2]});
        pending.clear();
      } else {
        pending.push_back(lit);
      }
    }
  }
  if (!pending.empty()) throw ValidationError("unterminated clause in DIMACS input");
  if (!have_header) throw ValidationError("missing DIMACS 'p cnf' header");
  validate_cnf(cnf);
  return cnf;
}

Fnn gen_3sat_network(const CnfFormula& cnf) {
  validate_cnf(cnf);
  int n = cnf.num_vars;
  GadgetBuilder g;
  g.net.nodes.push_back("x");
  g.net.input_order.push_back("x");
  std::vector<Affine> bits = build_split_bits(g, "x", n);

  auto literal = [&](int lit) {
    Affine v = bits[std::abs(lit) - 1];
    if (lit < 0) {
      for (auto& [node, c] : v.coeffs) c = -c;
      v.constant = 1 - v.constant;
    }
    return v;
  };
  // max(a, b) = a + ReLU(b - a); rematerialized through an identity ReLU,
  // valid since clause values stay in [0, 1].
  auto max_of = [&](const std::string& stem, const Affine& a, const Affine& b) {
    std::string d = g.hidden(stem + "d", b - a);
    Affine m = a + Affine::node(d);
    return Affine::node(g.hidden(stem, m));
  };
  // min(a, b) = a - ReLU(a - b), same rematerialization.
  auto min_of = [&](const std::string& stem, const Affine& a, const Affine& b) {
    std::string d = g.hidden(stem + "d", a - b);
    Affine m = a - Affine::node(d);
    return Affine::node(g.hidden(stem, m));
  };

  Affine value;
  for (std::size_t i = 0; i < cnf.clauses.size(); ++i) {
    const auto& cl = cnf.clauses[i];
    std::string stem = "c" + std::to_string(i + 1);
    Affine m12 = max_of(stem + "m1", literal(cl[0]), literal(cl[1]));
    Affine clause = max_of(stem + "m2", m12, literal(cl[2]));
    value = i == 0 ? clause : min_of("min" + std::to_string(i + 1), value, clause);
  }

  Affine gate_pre;
  gate_pre.constant = -1 + 2 * value.constant;
  for (const auto& [node, c] : value.coeffs) gate_pre.coeffs[node] = 2 * c;
  std::string gate = g.hidden("gate", gate_pre);
  g.output("out", Affine::node(gate));
  validate_fnn(g.net);
  return g.net;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

std::string rational_str(const mpq_class& q) { return q.get_str(); }

mpq_class rational_parse(const std::string& text) {
  LiftedRational r = LiftedRational::parse(text);
  if (r.is_bottom()) throw ValidationError("expected a rational, got bot");
  return r.value();
}

Fnn fnn_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  Fnn net;
  for (const auto& n : j.at("nodes")) net.nodes.push_back(n.get<std::string>());
  for (const auto& n : j.at("inputs")) net.input_order.push_back(n.get<std::string>());
  for (const auto& n : j.at("outputs")) net.output_order.push_back(n.get<std::string>());
  if (j.contains("biases"))
    for (const auto& [name, v] : j["biases"].items())
      net.biases[name] = rational_parse(v.get<std::string>());
  if (j.contains("edges"))
    for (const auto& e : j["edges"])
      net.edges.push_back({e.at("from").get<std::string>(), e.at("to").get<std::string>(),
                           rational_parse(e.at("weight").get<std::string>())});
  validate_fnn(net);
  return net;
}

std::string fnn_to_json(const Fnn& net) {
  nlohmann::json j;
  j["nodes"] = net.nodes;
  j["inputs"] = net.input_order;
  j["outputs"] = net.output_order;
  nlohmann::json biases = nlohmann::json::object();
  for (const auto& [name, v] : net.biases) biases[name] = rational_str(v);
  j["biases"] = biases;
  std::vector<FnnEdge> edges = net.edges;
  std::sort(edges.begin(), edges.end(), [](const FnnEdge& a, const FnnEdge& b) {
    return std::tie(a.from, a.to) < std::tie(b.from, b.to);
  });
  nlohmann::json earr = nlohmann::json::array();
  for (const auto& e : edges)
    earr.push_back({{"from", e.from}, {"to", e.to}, {"weight", rational_str(e.weight)}});
  j["edges"] = earr;
  return j.dump(2) + "\n";
}

}  // namespace wsum
