#pragma once

// Shared test utilities: deterministic random generators for networks,
// structures, strata and expressions, plus the independent oracles the
// tests check the engine against.

#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "wsum/ast.hpp"
#include "wsum/eval.hpp"
#include "wsum/fnn.hpp"
#include "wsum/structure.hpp"

namespace wsum::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return rng() % n; }
inline bool chance(Rng& rng, unsigned percent) { return rng() % 100 < percent; }

// -- rational pools ----------------------------------------------------------

inline mpq_class random_weight(Rng& rng) {
  static const mpq_class pool[] = {-2, -1, {-1, 2}, 0, {1, 2}, 1, 2};
  return pool[pick(rng, 7)];
}

inline mpq_class random_rational(Rng& rng, long num_range = 40, long den_range = 12) {
  long num = static_cast<long>(rng() % (2 * num_range + 1)) - num_range;
  long den = 1 + static_cast<long>(rng() % den_range);
  return mpq_class(num, den);
}

inline LiftedRational random_lifted(Rng& rng, unsigned bottom_percent = 20) {
  if (chance(rng, bottom_percent)) return LiftedRational::bottom();
  return LiftedRational(random_weight(rng));
}

// -- random feedforward networks ---------------------------------------------

// Layered DAG with <= 12 nodes and depth <= 4; sources are exactly the
// inputs and sinks exactly the outputs, weights and biases drawn from the
// small pool.
inline Fnn random_fnn(Rng& rng) {
  int m = 1 + static_cast<int>(pick(rng, 3));
  int p = 1 + static_cast<int>(pick(rng, 2));
  int layers = static_cast<int>(pick(rng, 4));  // hidden layers, depth <= 4
  Fnn net;
  std::vector<std::vector<std::string>> levels;
  std::vector<std::string> inputs;
  for (int i = 0; i < m; ++i) inputs.push_back("in" + std::to_string(i + 1));
  levels.push_back(inputs);
  int budget = 12 - m - p;
  for (int l = 0; l < layers && budget > 0; ++l) {
    int width = 1 + static_cast<int>(pick(rng, std::min(3, budget)));
    budget -= width;
    std::vector<std::string> level;
    for (int i = 0; i < width; ++i)
      level.push_back("h" + std::to_string(l + 1) + "_" + std::to_string(i + 1));
    levels.push_back(level);
  }
  std::vector<std::string> outputs;
  for (int i = 0; i < p; ++i) outputs.push_back("out" + std::to_string(i + 1));
  levels.push_back(outputs);

  net.input_order = inputs;
  net.output_order = outputs;
  for (const auto& level : levels)
    for (const auto& n : level) net.nodes.push_back(n);
  for (std::size_t l = 1; l < levels.size(); ++l)
    for (const auto& n : levels[l]) net.biases[n] = random_weight(rng);

  std::set<std::pair<std::string, std::string>> present;
  auto connect = [&](const std::string& from, const std::string& to) {
    if (present.emplace(from, to).second) net.edges.push_back({from, to, random_weight(rng)});
  };
  // Every non-input needs an incoming edge; sprinkle extras.
  for (std::size_t l = 1; l < levels.size(); ++l) {
    for (const auto& n : levels[l]) {
      std::size_t src_level = pick(rng, l);
      connect(levels[src_level][pick(rng, levels[src_level].size())], n);
      for (std::size_t s = 0; s < l; ++s)
        for (const auto& from : levels[s])
          if (chance(rng, 35)) connect(from, n);
    }
  }
  // Every non-output needs an outgoing edge.
  for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
    for (const auto& n : levels[l]) {
      bool has_out = false;
      for (const auto& e : net.edges) has_out = has_out || e.from == n;
      if (!has_out) {
        std::size_t dst_level = l + 1 + pick(rng, levels.size() - l - 1);
        connect(n, levels[dst_level][pick(rng, levels[dst_level].size())]);
      }
    }
  }
  validate_fnn(net);
  return net;
}

// -- brute-force oracles ------------------------------------------------------

// All-pairs shortest distances by enumerating paths with distinct
// intermediate vertices; the independent oracle for the relaxation-based
// program.
inline std::vector<std::vector<mpq_class>> brute_force_shortest(
    const std::vector<std::vector<mpq_class>>& w) {
  std::size_t n = w.size();
  std::vector<std::vector<mpq_class>> best = w;
  std::vector<bool> used(n, false);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // DFS over sequences of distinct intermediate vertices.
      std::fill(used.begin(), used.end(), false);
      std::function<void(std::size_t, mpq_class)> extend = [&](std::size_t last, mpq_class cost) {
        mpq_class total = cost + w[last][j];
        if (total < best[i][j]) best[i][j] = total;
        for (std::size_t k = 0; k < n; ++k) {
          if (used[k] || k == i || k == j) continue;
          used[k] = true;
          extend(k, cost + w[last][k]);
          used[k] = false;
        }
      };
      extend(i, 0);
    }
  }
  return best;
}

// One relaxation through the first element of the order, which is what
// the functional semantics freezes at.
inline std::vector<std::vector<mpq_class>> one_round_relaxation(
    const std::vector<std::vector<mpq_class>>& w) {
  std::size_t n = w.size();
  auto out = w;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      mpq_class via = w[i][0] + w[0][j];
      if (via < out[i][j]) out[i][j] = via;
    }
  return out;
}

inline bool brute_force_satisfiable(const CnfFormula& cnf, std::vector<bool>* witness = nullptr) {
  for (unsigned bits = 0; bits < (1u << cnf.num_vars); ++bits) {
    bool ok = true;
    for (const auto& clause : cnf.clauses) {
      bool clause_ok = false;
      for (int lit : clause) {
        bool v = (bits >> (std::abs(lit) - 1)) & 1;
        clause_ok = clause_ok || (lit > 0 ? v : !v);
      }
      if (!clause_ok) {
        ok = false;
        break;
      }
    }
    if (ok) {
      if (witness) {
        witness->clear();
        for (int i = 0; i < cnf.num_vars; ++i) witness->push_back((bits >> i) & 1);
      }
      return true;
    }
  }
  return false;
}

// -- structure builders -------------------------------------------------------

inline WeightedStructure distance_structure(const std::vector<std::vector<mpq_class>>& w) {
  std::size_t n = w.size();
  std::vector<std::string> universe;
  for (std::size_t i = 0; i < n; ++i) universe.push_back("n" + std::to_string(i));
  Vocabulary vocab;
  vocab.add("ord", SymbolKind::Relation, 2);
  vocab.add("W", SymbolKind::WeightFunction, 2);
  WeightedStructure s(universe, vocab);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      if (i < j) s.rel_insert("ord", {i, j});
      s.set_weight("W", {i, j}, LiftedRational(w[i][j]));
    }
  return s;
}

inline WeightedStructure path_structure(int edges) {
  std::vector<std::string> universe;
  for (int i = 0; i <= edges; ++i) universe.push_back("v" + std::to_string(i));
  Vocabulary vocab;
  vocab.add("E", SymbolKind::Relation, 2);
  WeightedStructure s(universe, vocab);
  for (int i = 0; i < edges; ++i)
    s.rel_insert("E", {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i + 1)});
  return s;
}

inline std::vector<std::vector<mpq_class>> random_distance_matrix(Rng& rng, std::size_t n) {
  std::vector<std::vector<mpq_class>> w(n, std::vector<mpq_class>(n));
  for (auto& row : w)
    for (auto& cell : row) {
      long num = static_cast<long>(rng() % 41);
      long den = 1 + static_cast<long>(rng() % 4);
      cell = mpq_class(num, den);
    }
  return w;
}

// -- random strata over a small fixed extensional vocabulary ------------------

inline Vocabulary stratum_input_vocabulary() {
  Vocabulary v;
  v.add("P", SymbolKind::Relation, 1);
  v.add("Q", SymbolKind::Relation, 2);
  v.add("g", SymbolKind::WeightFunction, 1);
  v.add("h", SymbolKind::WeightFunction, 2);
  return v;
}

inline WeightedStructure random_input_structure(Rng& rng, std::size_t universe_size) {
  std::vector<std::string> universe;
  for (std::size_t i = 0; i < universe_size; ++i) universe.push_back("e" + std::to_string(i));
  WeightedStructure s(universe, stratum_input_vocabulary());
  for (std::uint32_t i = 0; i < universe_size; ++i) {
    if (chance(rng, 50)) s.rel_insert("P", {i});
    s.set_weight("g", {i}, random_lifted(rng));
    for (std::uint32_t j = 0; j < universe_size; ++j) {
      if (chance(rng, 40)) s.rel_insert("Q", {i, j});
      s.set_weight("h", {i, j}, random_lifted(rng));
    }
  }
  return s;
}

// Random FO(SUM) expression generator over a scope of element variables.
class ExprGen {
 public:
  ExprGen(Rng& rng, const Vocabulary& vocab) : rng_(rng), vocab_(vocab) {
    for (const auto& [name, info] : vocab.symbols())
      (info.kind == SymbolKind::Relation ? relations_ : functions_).push_back({name, info.arity});
  }

  FormulaPtr formula(std::vector<std::string> scope, int depth) {
    return gen_formula(scope, depth);
  }
  TermPtr term(std::vector<std::string> scope, int depth) { return gen_term(scope, depth); }

 private:
  Rng& rng_;
  const Vocabulary& vocab_;
  std::vector<std::pair<std::string, int>> relations_, functions_;
  int fresh_counter_ = 0;

  std::string fresh_var() { return "q" + std::to_string(fresh_counter_++); }

  std::vector<std::string> args_from(const std::vector<std::string>& scope, int arity) {
    std::vector<std::string> args;
    for (int i = 0; i < arity; ++i) args.push_back(scope[pick(rng_, scope.size())]);
    return args;
  }

  FormulaPtr gen_atom(const std::vector<std::string>& scope, int depth) {
    // Relation atoms need scope variables unless nullary.
    for (int attempt = 0; attempt < 4; ++attempt) {
      switch (pick(rng_, 3)) {
        case 0: {
          auto [name, arity] = relations_[pick(rng_, relations_.size())];
          if (arity > 0 && scope.empty()) continue;
          return f_rel(name, args_from(scope, arity));
        }
        case 1:
          if (scope.size() < 1) continue;
          return f_vareq(scope[pick(rng_, scope.size())], scope[pick(rng_, scope.size())]);
        default:
          return f_leq(gen_term(scope, depth > 0 ? 1 : 0), gen_term(scope, depth > 0 ? 1 : 0));
      }
    }
    return f_leq(t_int(0), t_int(1));
  }

  FormulaPtr gen_formula(std::vector<std::string> scope, int depth) {
    if (depth <= 0 || chance(rng_, 25)) return gen_atom(scope, depth);
    switch (pick(rng_, 4)) {
      case 0:
        return f_not(gen_formula(scope, depth - 1));
      case 1: {
        BoolOpKind op = static_cast<BoolOpKind>(pick(rng_, 3));
        return f_bool(op, gen_formula(scope, depth - 1), gen_formula(scope, depth - 1));
      }
      case 2: {
        std::string v = fresh_var();
        auto inner = scope;
        inner.push_back(v);
        return f_quant(chance(rng_, 50) ? QuantKind::Exists : QuantKind::Forall, v,
                       gen_formula(inner, depth - 1));
      }
      default:
        return gen_atom(scope, depth);
    }
  }

  TermPtr gen_leaf(const std::vector<std::string>& scope) {
    for (int attempt = 0; attempt < 4; ++attempt) {
      if (chance(rng_, 45)) return t_const(random_lifted(rng_, 15));
      auto [name, arity] = functions_[pick(rng_, functions_.size())];
      if (arity > 0 && scope.empty()) continue;
      return t_fun(name, args_from(scope, arity));
    }
    return t_int(1);
  }

  TermPtr gen_term(std::vector<std::string> scope, int depth) {
    if (depth <= 0 || chance(rng_, 30)) return gen_leaf(scope);
    switch (pick(rng_, 5)) {
      case 0: {
        ArithKind op = static_cast<ArithKind>(pick(rng_, 4));
        return t_arith(op, gen_term(scope, depth - 1), gen_term(scope, depth - 1));
      }
      case 1:
        return t_ite(gen_formula(scope, depth - 1), gen_term(scope, depth - 1),
                     gen_term(scope, depth - 1));
      case 2: {
        std::size_t k = 1 + pick(rng_, 2);
        std::vector<std::string> bound;
        auto inner = scope;
        for (std::size_t i = 0; i < k; ++i) {
          bound.push_back(fresh_var());
          inner.push_back(bound.back());
        }
        return t_sum(bound, gen_formula(inner, depth - 1), gen_term(inner, depth - 1));
      }
      case 3: {
        std::string v = fresh_var();
        auto inner = scope;
        inner.push_back(v);
        if (chance(rng_, 50))
          return t_avg({v}, gen_formula(inner, depth - 1), gen_term(inner, depth - 1));
        return t_uniq(v, gen_formula(inner, depth - 1), gen_term(inner, depth - 1));
      }
      default:
        return gen_leaf(scope);
    }
  }
};

// Random stratum over the fixed input vocabulary: one or two intensional
// symbols of arity <= 2, bodies of bounded depth over the extensional and
// intensional symbols together.
inline Stratum random_stratum(Rng& rng) {
  Stratum st;
  st.extensional = stratum_input_vocabulary();
  std::size_t count = 1 + pick(rng, 2);
  std::vector<std::pair<std::string, SymbolInfo>> symbols;
  for (std::size_t i = 0; i < count; ++i) {
    SymbolKind kind = chance(rng, 50) ? SymbolKind::Relation : SymbolKind::WeightFunction;
    int arity = static_cast<int>(pick(rng, 3));  // 0..2
    std::string name = (kind == SymbolKind::Relation ? "R" : "F") + std::to_string(i);
    st.intensional.add(name, kind, arity);
    symbols.push_back({name, {kind, arity}});
  }

  Vocabulary all = st.extensional;
  all.merge(st.intensional);
  ExprGen gen(rng, all);
  for (const auto& [name, info] : symbols) {
    Rule r;
    r.head = name;
    for (int i = 0; i < info.arity; ++i) r.head_vars.push_back("a" + std::to_string(i));
    if (info.kind == SymbolKind::Relation)
      r.body_formula = gen.formula(r.head_vars, 2);
    else
      r.body_term = gen.term(r.head_vars, 2);
    st.rules.push_back(std::move(r));
  }
  validate_stratum(st);
  return st;
}

// -- comparison helpers -------------------------------------------------------

// Equality of two structures on the named symbols, reported with a
// human-readable mismatch description.
inline bool agree_on(const WeightedStructure& a, const WeightedStructure& b,
                     const std::vector<std::string>& symbols, std::string* why = nullptr) {
  for (const auto& name : symbols) {
    const SymbolInfo& info = a.vocabulary().at(name);
    if (info.kind == SymbolKind::Relation) {
      if (a.relation(name) != b.relation(name)) {
        if (why) *why = "relation " + name + " differs";
        return false;
      }
    } else {
      if (a.weight_table(name) != b.weight_table(name)) {
        if (why) *why = "weight function " + name + " differs";
        return false;
      }
    }
  }
  return true;
}

}  // namespace wsum::testing
