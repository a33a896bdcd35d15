#include "wsum/eval.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <unordered_map>

#include "wsum/errors.hpp"

namespace wsum {

namespace {

// Enumerates all k-tuples over [0, n); k = 0 yields the single empty tuple.
template <typename Fn>
void for_each_tuple(std::size_t n, std::size_t k, Fn&& fn) {
  Tuple t(k, 0);
  if (k == 0) {
    fn(t);
    return;
  }
  if (n == 0) return;
  while (true) {
    fn(t);
    std::size_t i = k;
    while (i > 0) {
      if (++t[i - 1] < n) break;
      t[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
}

std::size_t saturating_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::size_t>::max() / base)
      return std::numeric_limits<std::size_t>::max();
    r *= base;
  }
  return r;
}

std::size_t saturating_add(std::size_t a, std::size_t b) {
  return a > std::numeric_limits<std::size_t>::max() - b
             ? std::numeric_limits<std::size_t>::max()
             : a + b;
}

struct Env {
  std::vector<std::pair<std::string, std::uint32_t>> stack;

  std::uint32_t lookup(const std::string& name) const {
    for (auto it = stack.rbegin(); it != stack.rend(); ++it)
      if (it->first == name) return it->second;
    throw UnboundVariable(name);
  }
  void push(const std::string& name, std::uint32_t val) { stack.emplace_back(name, val); }
  void push_tuple(const std::vector<std::string>& names, const Tuple& vals) {
    for (std::size_t i = 0; i < names.size(); ++i) push(names[i], vals[i]);
  }
  void pop(std::size_t n) { stack.resize(stack.size() - n); }
};

class Evaluator {
 public:
  using Overlay = std::vector<std::pair<std::string, const WeightTable*>>;

  Evaluator(const WeightedStructure& s, Overlay overlays = {})
      : s_(s), overlays_(std::move(overlays)) {}

  bool formula(const FormulaPtr& f, Env& env) {
    switch (f->kind) {
      case Formula::Kind::VarEq:
        return env.lookup(f->vars[0]) == env.lookup(f->vars[1]);
      case Formula::Kind::RelAtom: {
        Tuple t(f->vars.size());
        for (std::size_t i = 0; i < f->vars.size(); ++i) t[i] = env.lookup(f->vars[i]);
        return s_.rel_contains(f->name, t);
      }
      case Formula::Kind::Leq:
        return term(f->t1, env).leq(term(f->t2, env));
      case Formula::Kind::Not:
        return !formula(f->f1, env);
      case Formula::Kind::BoolOp: {
        bool a = formula(f->f1, env);
        switch (f->bool_op) {
          case BoolOpKind::And:
            return a && formula(f->f2, env);
          case BoolOpKind::Or:
            return a || formula(f->f2, env);
          case BoolOpKind::Implies:
            return !a || formula(f->f2, env);
        }
        return false;
      }
      case Formula::Kind::Quant: {
        bool exists = f->quant == QuantKind::Exists;
        for (std::uint32_t a = 0; a < s_.universe_size(); ++a) {
          env.push(f->vars[0], a);
          bool b = formula(f->f1, env);
          env.pop(1);
          if (b == exists) return exists;
        }
        return !exists;
      }
    }
    throw Error("unreachable formula kind");
  }

  LiftedRational term(const TermPtr& t, Env& env) {
    switch (t->kind) {
      case Term::Kind::Const:
        return t->value;
      case Term::Kind::FunApp: {
        Tuple args(t->vars.size());
        for (std::size_t i = 0; i < t->vars.size(); ++i) args[i] = env.lookup(t->vars[i]);
        for (auto it = overlays_.rbegin(); it != overlays_.rend(); ++it) {
          if (it->first == t->name) {
            auto jt = it->second->find(args);
            return jt == it->second->end() ? LiftedRational::bottom() : jt->second;
          }
        }
        return s_.weight(t->name, args);
      }
      case Term::Kind::ArithOp: {
        LiftedRational a = term(t->t1, env);
        LiftedRational b = term(t->t2, env);
        switch (t->arith) {
          case ArithKind::Add: return a + b;
          case ArithKind::Sub: return a - b;
          case ArithKind::Mul: return a * b;
          case ArithKind::Div: return a / b;
        }
        return LiftedRational::bottom();
      }
      case Term::Kind::IfThenElse:
        return formula(t->guard, env) ? term(t->t1, env) : term(t->t2, env);
      case Term::Kind::Sum: {
        LiftedRational acc(0);
        bool poisoned = false;
        enumerate_guard(t, env, [&](Env& inner) {
          LiftedRational v = term(t->t1, inner);
          if (v.is_bottom()) {
            poisoned = true;
            return false;
          }
          acc = acc + v;
          return true;
        });
        return poisoned ? LiftedRational::bottom() : acc;
      }
      case Term::Kind::Avg: {
        LiftedRational acc(0);
        long count = 0;
        bool poisoned = false;
        enumerate_guard(t, env, [&](Env& inner) {
          LiftedRational v = term(t->t1, inner);
          if (v.is_bottom()) {
            poisoned = true;
            return false;
          }
          acc = acc + v;
          ++count;
          return true;
        });
        if (poisoned || count == 0) return LiftedRational::bottom();
        return acc / LiftedRational(count);
      }
      case Term::Kind::Uniq: {
        bool any = false, mixed = false;
        LiftedRational value;
        enumerate_guard(t, env, [&](Env& inner) {
          LiftedRational v = term(t->t1, inner);
          if (!any) {
            any = true;
            value = std::move(v);
            return true;
          }
          if (v != value) {
            mixed = true;
            return false;
          }
          return true;
        });
        if (!any || mixed) return LiftedRational::bottom();
        return value;
      }
      case Term::Kind::Ifp:
        return eval_ifp(t, env);
    }
    throw Error("unreachable term kind");
  }

 private:
  // Calls fn for each guard-satisfying binding; fn returns false to stop.
  template <typename Fn>
  void enumerate_guard(const TermPtr& t, Env& env, Fn&& fn) {
    std::size_t k = t->vars.size();
    if (guard_cacheable(t)) {
      const std::vector<Tuple>& tuples = cached_guard_set(t, env);
      for (const Tuple& tup : tuples) {
        env.push_tuple(t->vars, tup);
        bool keep = fn(env);
        env.pop(k);
        if (!keep) return;
      }
      return;
    }
    bool stop = false;
    for_each_tuple(s_.universe_size(), k, [&](const Tuple& tup) {
      if (stop) return;
      env.push_tuple(t->vars, tup);
      if (formula(t->guard, env)) stop = !fn(env);
      env.pop(k);
    });
  }

  bool guard_cacheable(const TermPtr& t) {
    auto it = cacheable_.find(t.get());
    if (it != cacheable_.end()) return it->second;
    std::set<std::string> fv = free_vars(t->guard);
    bool ok = true;
    for (const auto& v : fv) {
      if (std::find(t->vars.begin(), t->vars.end(), v) == t->vars.end()) {
        ok = false;
        break;
      }
    }
    cacheable_[t.get()] = ok;
    return ok;
  }

  const std::vector<Tuple>& cached_guard_set(const TermPtr& t, Env& env) {
    auto it = guard_sets_.find(t.get());
    if (it != guard_sets_.end()) return it->second;
    std::vector<Tuple> tuples;
    std::size_t k = t->vars.size();
    for_each_tuple(s_.universe_size(), k, [&](const Tuple& tup) {
      env.push_tuple(t->vars, tup);
      if (formula(t->guard, env)) tuples.push_back(tup);
      env.pop(k);
    });
    return guard_sets_.emplace(t.get(), std::move(tuples)).first->second;
  }

  LiftedRational eval_ifp(const TermPtr& t, Env& env) {
    std::size_t ar = t->vars.size();
    std::size_t n = s_.universe_size();
    std::size_t bound = saturating_add(saturating_pow(n, ar), 2);

    WeightTable cur;
    for (std::size_t round = 0;; ++round) {
      if (round > bound)
        throw IterationBoundExceeded("ifp for " + t->name + " exceeded its round bound");
      Overlay child_overlays = overlays_;
      child_overlays.emplace_back(t->name, &cur);
      Evaluator child(s_, std::move(child_overlays));
      WeightTable next = cur;
      bool changed = false;
      for_each_tuple(n, ar, [&](const Tuple& tup) {
        if (cur.count(tup)) return;  // already defined, frozen
        env.push_tuple(t->vars, tup);
        LiftedRational v = child.term(t->t1, env);
        env.pop(ar);
        if (!v.is_bottom()) {
          next.emplace(tup, std::move(v));
          changed = true;
        }
      });
      if (!changed) break;
      cur = std::move(next);
    }

    Tuple applied(t->applied.size());
    for (std::size_t i = 0; i < t->applied.size(); ++i) applied[i] = env.lookup(t->applied[i]);
    auto it = cur.find(applied);
    return it == cur.end() ? LiftedRational::bottom() : it->second;
  }

  const WeightedStructure& s_;
  Overlay overlays_;
  std::unordered_map<const Term*, bool> cacheable_;
  std::unordered_map<const Term*, std::vector<Tuple>> guard_sets_;
};

}  // namespace

EvalResult eval_expression(const Expr& e, const WeightedStructure& s, const Assignment& a) {
  for (const auto& v : free_vars(e)) {
    if (!a.bindings.count(v)) throw UnboundVariable(v);
  }
  for (const auto& sym : ext_symbols(e)) {
    if (!s.vocabulary().contains(sym)) throw UnknownSymbol(sym);
  }
  Env env;
  for (const auto& [var, elem] : a.bindings) env.push(var, s.element_index(elem));

  Evaluator ev(s);
  if (std::holds_alternative<FormulaPtr>(e))
    return EvalResult::boolean(ev.formula(std::get<FormulaPtr>(e), env));
  return EvalResult::weight(ev.term(std::get<TermPtr>(e), env));
}

WeightedStructure immediate_consequence(const Stratum& st, const WeightedStructure& s, Mode mode) {
  WeightedStructure out = s;
  Evaluator ev(s);
  Env env;
  std::size_t n = s.universe_size();

  for (const Rule& rule : st.rules) {
    std::size_t ar = rule.head_vars.size();
    if (rule.is_relational()) {
      for_each_tuple(n, ar, [&](const Tuple& tup) {
        if (s.rel_contains(rule.head, tup)) return;  // inflationary, already in
        env.push_tuple(rule.head_vars, tup);
        bool holds = ev.formula(rule.body_formula, env);
        env.pop(ar);
        if (holds) out.rel_insert(rule.head, tup);
      });
    } else {
      for_each_tuple(n, ar, [&](const Tuple& tup) {
        if (mode == Mode::Functional && !s.weight(rule.head, tup).is_bottom()) return;
        env.push_tuple(rule.head_vars, tup);
        LiftedRational v = ev.term(rule.body_term, env);
        env.pop(ar);
        out.set_weight(rule.head, tup, v);
      });
    }
  }
  return out;
}

namespace {

RoundDelta compute_delta(const Stratum& st, const WeightedStructure& before,
                         const WeightedStructure& after) {
  RoundDelta d;
  for (const auto& [name, info] : st.intensional.symbols()) {
    if (info.kind == SymbolKind::Relation) {
      d.relation_tuples_added += after.relation(name).size() - before.relation(name).size();
    } else {
      const auto& old_table = before.weight_table(name);
      for (const auto& [tup, v] : after.weight_table(name)) {
        auto it = old_table.find(tup);
        if (it == old_table.end())
          ++d.weights_defined;
        else if (!(it->second == v))
          ++d.weights_overwritten;
      }
      // Entries erased by a loose overwrite to bottom also count as overwrites.
      for (const auto& [tup, v] : old_table) {
        if (!after.weight_table(name).count(tup)) ++d.weights_overwritten;
      }
    }
  }
  return d;
}

std::vector<std::string> intensional_names(const Stratum& st, bool relations_only) {
  std::vector<std::string> names;
  for (const auto& [name, info] : st.intensional.symbols()) {
    if (!relations_only || info.kind == SymbolKind::Relation) names.push_back(name);
  }
  return names;
}

}  // namespace

std::pair<WeightedStructure, FixpointTrace> run_stratum(const Stratum& st,
                                                        const WeightedStructure& s, Mode mode) {
  for (const auto& [name, info] : st.extensional.symbols()) {
    const SymbolInfo* have = s.vocabulary().find(name);
    if (!have || !(*have == info))
      throw ValidationError("structure does not interpret extensional symbol " + name);
  }

  WeightedStructure cur = s;
  for (const auto& [name, info] : st.intensional.symbols()) {
    if (s.vocabulary().contains(name))
      throw ValidationError("intensional symbol " + name + " already present in the structure");
    cur.declare(name, info.kind, info.arity);
  }

  std::size_t n = cur.universe_size();
  std::size_t bound = 1;
  for (const auto& [name, info] : st.intensional.symbols()) {
    if (mode == Mode::Loose && info.kind != SymbolKind::Relation) continue;
    bound = saturating_add(bound, saturating_pow(n, info.arity));
  }

  std::vector<std::string> stability_symbols = intensional_names(st, mode == Mode::Loose);
  std::vector<std::string> all_intensional = intensional_names(st, false);

  FixpointTrace trace;
  trace.termination_kind = mode;
  for (std::size_t round = 1;; ++round) {
    if (round > bound + 1)
      throw IterationBoundExceeded("stratum fixpoint exceeded its round bound of " +
                                   std::to_string(bound));
    WeightedStructure next = immediate_consequence(st, cur, mode);
    RoundDelta delta = compute_delta(st, cur, next);
    if (mode == Mode::Functional) {
      assert(delta.weights_overwritten == 0);
      bool stable = delta.relation_tuples_added == 0 && delta.weights_defined == 0;
      if (stable && next.symbols_equal(cur, all_intensional)) break;
    } else {
      if (next.symbols_equal(cur, stability_symbols)) break;
    }
    trace.per_round.push_back(delta);
    ++trace.rounds;
    cur = std::move(next);
  }
  return {std::move(cur), std::move(trace)};
}

AnswerView answer_view(const WeightedStructure& s, const std::string& symbol) {
  const SymbolInfo& info = s.vocabulary().at(symbol);
  AnswerView view;
  view.symbol = symbol;
  view.arity = info.arity;
  if (info.kind == SymbolKind::Relation) {
    if (info.arity == 0) {
      view.kind = AnswerView::Kind::Boolean;
      view.bool_value = s.rel_contains(symbol, {});
    } else {
      view.kind = AnswerView::Kind::Relation;
      view.tuples = s.sorted_tuples(symbol);
    }
  } else {
    view.kind = AnswerView::Kind::Weight;
    view.weights = s.sorted_weights(symbol);
  }
  return view;
}

ProgramResult run_program(const Program& p, const WeightedStructure& s, Mode mode,
                          const std::string& answer) {
  std::string answer_symbol = answer.empty() ? p.answer_symbol : answer;
  ProgramResult result;
  result.structure = s;
  for (const Stratum& st : p.strata) {
    auto [next, trace] = run_stratum(st, result.structure, mode);
    result.structure = std::move(next);
    result.traces.push_back(std::move(trace));
  }
  if (answer_symbol.empty())
    throw ValidationError("no answer symbol designated for the program run");
  result.answer = answer_view(result.structure, answer_symbol);
  return result;
}

}  // namespace wsum
