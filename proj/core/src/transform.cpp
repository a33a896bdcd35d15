#include "wsum/transform.hpp"

#include <algorithm>

#include "wsum/errors.hpp"

namespace wsum {

namespace {

std::string fresh_symbol(std::string base, const Vocabulary& a, const Vocabulary& b) {
  std::string name = std::move(base);
  while (a.contains(name) || b.contains(name)) name += "_";
  return name;
}

std::vector<std::string> numbered_vars(const std::string& stem, std::size_t count) {
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

FormulaPtr conj(std::vector<FormulaPtr> parts) {
  if (parts.empty()) return f_true();
  FormulaPtr f = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) f = f_and(f, parts[i]);
  return f;
}

FormulaPtr disj(std::vector<FormulaPtr> parts) {
  if (parts.empty()) return f_false();
  FormulaPtr f = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) f = f_or(f, parts[i]);
  return f;
}

FormulaPtr exists_all(const std::vector<std::string>& vars, FormulaPtr f) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) f = f_exists(*it, f);
  return f;
}

// exists y1 y2 (y1 != y2): the domain-size split for the combined
// big/small constructions.
FormulaPtr at_least_two(NameGen& gen) {
  std::string a = gen.fresh(), b = gen.fresh();
  return f_exists(a, f_exists(b, f_not(f_vareq(a, b))));
}

struct SplitRules {
  std::vector<const Rule*> relational;
  std::vector<const Rule*> weight;
};

SplitRules split_rules(const Stratum& st) {
  SplitRules s;
  for (const auto& r : st.rules)
    (r.is_relational() ? s.relational : s.weight).push_back(&r);
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// functional -> loose
// ---------------------------------------------------------------------------

TransformResult functional_to_loose(const Stratum& st) {
  validate_stratum(st);
  Stratum out;
  out.extensional = st.extensional;
  out.intensional = st.intensional;

  for (const auto& rule : st.rules) {
    if (rule.is_relational()) {
      out.rules.push_back(rule);
      continue;
    }
    // F(x) <- if F(x) = bot then body else F(x)
    Rule guarded = rule;
    TermPtr self = t_fun(rule.head, rule.head_vars);
    guarded.body_term = t_ite(f_eq(self, t_bot()), rule.body_term, self);
    out.rules.push_back(std::move(guarded));

    // R_F(x) <- body != bot, tracking where F has become defined.
    std::string tracker = fresh_symbol("__def_" + rule.head, st.extensional, out.intensional);
    out.intensional.add(tracker, SymbolKind::Relation, static_cast<int>(rule.head_vars.size()));
    Rule track;
    track.head = tracker;
    track.head_vars = rule.head_vars;
    track.body_formula = f_neq(rule.body_term, t_bot());
    out.rules.push_back(std::move(track));
  }

  TransformResult result;
  result.program = Program{{std::move(out)}, ""};
  for (const auto& [name, info] : st.intensional.symbols()) result.preserved_symbols.insert(name);
  validate_stratum(result.program->strata[0]);
  return result;
}

// ---------------------------------------------------------------------------
// loose -> functional
// ---------------------------------------------------------------------------

namespace {

// Unrolled iterates of the loose operator as plain FO(SUM) expressions,
// used on domains of size <= 1 where the loose termination index is
// bounded by the number of intensional relations.
struct SmallDomainUnrolling {
  std::map<std::string, FormulaPtr> relation_result;  // final formula per relation
  std::map<std::string, TermPtr> weight_result;       // final term per weight function
};

SmallDomainUnrolling unroll_small_domain(const Stratum& st, NameGen& gen) {
  SplitRules rules = split_rules(st);
  std::size_t bound = rules.relational.size();  // loose index <= #relations when |A| <= 1

  // iterate t: for each intensional symbol, the FO expression denoting its
  // value after t loose rounds (head variables are the rule's own).
  std::map<std::string, FormulaPtr> rel_iter;
  std::map<std::string, TermPtr> wt_iter;
  for (const Rule* r : rules.relational) rel_iter[r->head] = f_false();
  for (const Rule* r : rules.weight) wt_iter[r->head] = t_bot();

  std::vector<std::map<std::string, FormulaPtr>> rel_iters{rel_iter};
  std::vector<std::map<std::string, TermPtr>> wt_iters{wt_iter};

  auto substitute = [&](const auto& node, const std::map<std::string, FormulaPtr>& rels,
                        const std::map<std::string, TermPtr>& wts, const Stratum& stratum) {
    RelAtomHook rel_hook = [&](const std::string& name,
                               const std::vector<std::string>& args) -> FormulaPtr {
      auto it = rels.find(name);
      if (it == rels.end()) return nullptr;
      const Rule* rule = stratum.rule_for(name);
      FormulaPtr body = alpha_rename(it->second, gen);
      std::map<std::string, std::string> sub;
      for (std::size_t i = 0; i < args.size(); ++i) sub[rule->head_vars[i]] = args[i];
      return rename_free_vars(body, sub);
    };
    FunAppHook fun_hook = [&](const std::string& name,
                              const std::vector<std::string>& args) -> TermPtr {
      auto it = wts.find(name);
      if (it == wts.end()) return nullptr;
      const Rule* rule = stratum.rule_for(name);
      TermPtr body = alpha_rename(it->second, gen);
      std::map<std::string, std::string> sub;
      for (std::size_t i = 0; i < args.size(); ++i) sub[rule->head_vars[i]] = args[i];
      return rename_free_vars(body, sub);
    };
    return replace_atoms(node, rel_hook, fun_hook);
  };

  // Need relation iterates up to bound+1 (for the index detector) and
  // weight iterates up to bound.
  for (std::size_t t = 1; t <= bound + 1; ++t) {
    std::map<std::string, FormulaPtr> next_rel;
    std::map<std::string, TermPtr> next_wt;
    for (const Rule* r : rules.relational) {
      FormulaPtr stepped = substitute(r->body_formula, rel_iters.back(), wt_iters.back(), st);
      // Inflationary union with the previous iterate.
      next_rel[r->head] = f_or(rel_iters.back().at(r->head), stepped);
    }
    for (const Rule* r : rules.weight)
      next_wt[r->head] = substitute(r->body_term, rel_iters.back(), wt_iters.back(), st);
    rel_iters.push_back(std::move(next_rel));
    wt_iters.push_back(std::move(next_wt));
  }

  // index_is[t]: the loose termination index equals t. The index is t iff
  // rounds t and t+1 agree on every intensional relation and no earlier
  // round already agreed.
  std::vector<FormulaPtr> index_is(bound + 1);
  for (std::size_t t = 0; t <= bound; ++t) {
    std::vector<FormulaPtr> stable_parts;
    for (const Rule* r : rules.relational) {
      std::vector<std::string> vars = numbered_vars(gen.fresh() + "_", r->head_vars.size());
      std::map<std::string, std::string> sub;
      for (std::size_t i = 0; i < vars.size(); ++i) sub[r->head_vars[i]] = vars[i];
      FormulaPtr later = rename_free_vars(alpha_rename(rel_iters[t + 1].at(r->head), gen), sub);
      FormulaPtr earlier = rename_free_vars(alpha_rename(rel_iters[t].at(r->head), gen), sub);
      stable_parts.push_back(f_not(exists_all(vars, f_and(later, f_not(earlier)))));
    }
    FormulaPtr stable = conj(std::move(stable_parts));
    std::vector<FormulaPtr> parts{stable};
    for (std::size_t s = 0; s < t; ++s) parts.push_back(f_not(index_is[s]));
    index_is[t] = conj(std::move(parts));
  }

  SmallDomainUnrolling out;
  for (const Rule* r : rules.relational) {
    std::vector<FormulaPtr> cases;
    for (std::size_t t = 0; t <= bound; ++t)
      cases.push_back(f_and(index_is[t], rel_iters[t].at(r->head)));
    out.relation_result[r->head] = disj(std::move(cases));
  }
  for (const Rule* r : rules.weight) {
    TermPtr cascade = t_bot();
    for (std::size_t t = bound + 1; t-- > 0;)
      cascade = t_ite(index_is[t], wt_iters[t].at(r->head), cascade);
    out.weight_result[r->head] = cascade;
  }
  return out;
}

}  // namespace

TransformResult loose_to_functional(const Stratum& st, std::size_t arity_cap) {
  validate_stratum(st);
  SplitRules rules = split_rules(st);
  NameGen gen("__v");

  // Timestamp layout: one block of (2 + arity) positions per intensional
  // relation; an equal prefix pair encodes "no tuple chosen".
  std::vector<std::size_t> block_start;  // s_i offsets
  std::size_t width = 0;
  for (const Rule* r : rules.relational) {
    block_start.push_back(width);
    width += 2 + r->head_vars.size();
  }

  std::size_t max_arity = width;
  for (const Rule* r : rules.weight)
    max_arity = std::max(max_arity, width + r->head_vars.size());

  TransformResult result;
  result.warnings.push_back("timestamp width " + std::to_string(width) +
                            ", widest transformed symbol arity " + std::to_string(max_arity));
  if (max_arity > arity_cap)
    throw ValidationError("loose_to_functional would create arity " + std::to_string(max_arity) +
                          " symbols, above the cap of " + std::to_string(arity_cap) +
                          " (raise --arity-cap to force)");

  Stratum out;
  out.extensional = st.extensional;
  out.intensional = st.intensional;

  int w = static_cast<int>(width);
  std::string all = fresh_symbol("__ts_all", st.extensional, out.intensional);
  out.intensional.add(all, SymbolKind::Relation, w);
  std::vector<std::string> hist;  // four history copies of the stamp relation
  for (int i = 1; i <= 4; ++i) {
    hist.push_back(fresh_symbol("__ts_old" + std::to_string(i), st.extensional, out.intensional));
    out.intensional.add(hist.back(), SymbolKind::Relation, w);
  }
  std::map<std::string, std::string> primed;  // w_i -> timestamped copy
  for (const Rule* r : rules.weight) {
    std::string name = fresh_symbol("__ts_" + r->head, st.extensional, out.intensional);
    primed[r->head] = name;
    out.intensional.add(name, SymbolKind::WeightFunction,
                        w + static_cast<int>(r->head_vars.size()));
  }

  // phi_all over the given stamp variables.
  auto make_phi_all = [&](const std::vector<std::string>& v) {
    std::vector<FormulaPtr> blocks;
    for (std::size_t i = 0; i < rules.relational.size(); ++i) {
      std::size_t s = block_start[i];
      const Rule* r = rules.relational[i];
      std::vector<std::string> args(v.begin() + s + 2, v.begin() + s + 2 + r->head_vars.size());
      blocks.push_back(f_or(f_vareq(v[s], v[s + 1]),
                            f_and(f_not(f_vareq(v[s], v[s + 1])), f_rel(r->head, args))));
    }
    return conj(std::move(blocks));
  };

  // Stamp-generation selectors: the difference between consecutive history
  // layers isolates the stamps added g stages ago.
  auto sel_new = [&](const std::vector<std::string>& v) {
    return f_and(make_phi_all(v), f_not(f_rel(all, v)));
  };
  auto sel_gap = [&](const std::string& newer, const std::string& older,
                     const std::vector<std::string>& v) {
    return f_and(f_rel(newer, v), f_not(f_rel(older, v)));
  };

  auto closed_over_fresh = [&](auto&& make) {
    std::vector<std::string> v = numbered_vars(gen.fresh() + "_", width);
    return exists_all(v, make(v));
  };
  FormulaPtr weight_update_stage = closed_over_fresh(sel_new);
  FormulaPtr stop = f_not(f_or(
      closed_over_fresh(sel_new),
      closed_over_fresh([&](const std::vector<std::string>& v) { return sel_gap(all, hist[0], v); })));

  // avg over a stamp-generation selector reads one timestamped function
  // uniformly; an empty selector reads bottom.
  auto stamped_read = [&](const std::string& fn, const std::vector<std::string>& args,
                          auto&& selector) {
    std::vector<std::string> p = numbered_vars(gen.fresh() + "_", width);
    std::vector<std::string> all_args = p;
    all_args.insert(all_args.end(), args.begin(), args.end());
    return t_avg(p, selector(p), t_fun(primed.at(fn), all_args));
  };

  auto replace_weight_reads = [&](auto&& node, auto&& selector) {
    FunAppHook fun_hook = [&](const std::string& name,
                              const std::vector<std::string>& args) -> TermPtr {
      if (!primed.count(name)) return nullptr;
      return stamped_read(name, args, selector);
    };
    return replace_atoms(node, nullptr, fun_hook);
  };

  auto sel_d12 = [&](const std::vector<std::string>& v) { return sel_gap(hist[0], hist[1], v); };
  auto sel_d23 = [&](const std::vector<std::string>& v) { return sel_gap(hist[1], hist[2], v); };
  auto sel_d24 = [&](const std::vector<std::string>& v) { return sel_gap(hist[1], hist[3], v); };

  // Small-domain unrolled bodies and the domain-size split.
  SmallDomainUnrolling small = unroll_small_domain(st, gen);
  FormulaPtr big_domain = at_least_two(gen);

  // Stamp relation and its history copies; the copies freeze once the
  // stop condition holds so the final extraction stays stable.
  {
    std::vector<std::string> v = numbered_vars("t", width);
    Rule r_all;
    r_all.head = all;
    r_all.head_vars = v;
    r_all.body_formula = make_phi_all(v);
    out.rules.push_back(std::move(r_all));

    std::vector<std::string> prev{all};
    prev.insert(prev.end(), hist.begin(), hist.end());
    for (std::size_t i = 0; i < hist.size(); ++i) {
      Rule r;
      r.head = hist[i];
      r.head_vars = v;
      r.body_formula = f_and(f_not(stop), f_rel(prev[i], v));
      out.rules.push_back(std::move(r));
    }
  }

  // Timestamped weight functions: defined only on fresh stamps, reading
  // the previous generation's values and the current relations. Stamp
  // variable names must not collide with the rule's own head variables.
  for (const Rule* r : rules.weight) {
    std::vector<std::string> stamp = numbered_vars(gen.fresh() + "_", width);
    Rule w_rule;
    w_rule.head = primed.at(r->head);
    w_rule.head_vars = stamp;
    w_rule.head_vars.insert(w_rule.head_vars.end(), r->head_vars.begin(), r->head_vars.end());
    TermPtr stepped = replace_weight_reads(r->body_term, sel_d12);
    w_rule.body_term = t_ite(sel_new(stamp), stepped, t_bot());
    out.rules.push_back(std::move(w_rule));
  }

  // Original relations: advance only outside weight-update stages, reading
  // weights from the generation matching the loose round, with the
  // unrolled FO form on domains of size <= 1.
  for (const Rule* r : rules.relational) {
    Rule rel;
    rel.head = r->head;
    rel.head_vars = r->head_vars;
    FormulaPtr stepped = std::get<FormulaPtr>(
        Expr(replace_weight_reads(r->body_formula, sel_d23)));
    FormulaPtr big = f_and(f_not(weight_update_stage), f_and(f_not(stop), stepped));
    rel.body_formula = f_or(f_and(big_domain, big),
                            f_and(f_not(big_domain), small.relation_result.at(r->head)));
    out.rules.push_back(std::move(rel));
  }

  // Original weight functions: extracted once the intensional relations
  // have stabilized, from the generation recorded two stages before the
  // stop condition became true.
  for (const Rule* r : rules.weight) {
    Rule wr;
    wr.head = r->head;
    wr.head_vars = r->head_vars;
    TermPtr extraction = t_ite(stop, stamped_read(r->head, r->head_vars, sel_d24), t_bot());
    wr.body_term = t_ite(big_domain, extraction, small.weight_result.at(r->head));
    out.rules.push_back(std::move(wr));
  }

  validate_stratum(out);
  result.program = Program{{std::move(out)}, ""};
  for (const auto& [name, info] : st.intensional.symbols()) result.preserved_symbols.insert(name);
  return result;
}

// ---------------------------------------------------------------------------
// simultaneous induction
// ---------------------------------------------------------------------------

TransformResult simultaneous_induction(const Stratum& st, const std::string& answer) {
  validate_stratum(st);
  if (st.intensional.empty())
    throw PreconditionUnsatisfiable("stratum has no intensional symbols");
  if (!st.intensional.contains(answer))
    throw ValidationError("answer symbol " + answer + " is not intensional in the stratum");

  NameGen gen("__b");
  Stratum padded = st;

  // The unified-function construction needs at least one rule of each
  // kind, and at least three rules overall: with only two positions the
  // index formulas chi_1 and chi_2 both collapse to z1 != z2 and the
  // encoding cannot keep the symbols apart. Pad with dummy rules on
  // fresh symbols.
  {
    auto add_dummy_relation = [&padded] {
      std::string name = fresh_symbol("__dummyR", padded.extensional, padded.intensional);
      padded.intensional.add(name, SymbolKind::Relation, 1);
      Rule r;
      r.head = name;
      r.head_vars = {"x"};
      r.body_formula = f_false();
      padded.rules.push_back(std::move(r));
    };
    SplitRules s = split_rules(padded);
    if (s.relational.empty()) add_dummy_relation();
    if (s.weight.empty()) {
      std::string name = fresh_symbol("__dummyF", padded.extensional, padded.intensional);
      padded.intensional.add(name, SymbolKind::WeightFunction, 1);
      Rule r;
      r.head = name;
      r.head_vars = {"x"};
      r.body_term = t_bot();
      padded.rules.push_back(std::move(r));
    }
    while (padded.rules.size() < 3) add_dummy_relation();
  }

  SplitRules rules = split_rules(padded);
  std::size_t k = rules.relational.size();
  std::size_t ell = rules.weight.size();
  std::size_t r_max = 0;
  for (const Rule& r : padded.rules) r_max = std::max(r_max, r.head_vars.size());

  // Position i in [1, k+ell] indexes R_1..R_k then F_1..F_ell; a (k+ell)
  // index tuple c satisfies chi_i iff entry i differs from all others and
  // the rest are equal.
  auto chi = [&](std::size_t i, const std::vector<std::string>& z) {
    std::size_t ref = (i == 1) ? 2 : 1;
    std::vector<FormulaPtr> parts{f_not(f_vareq(z[i - 1], z[ref - 1]))};
    for (std::size_t j = 1; j <= k + ell; ++j) {
      if (j == i) continue;
      parts.push_back(f_vareq(z[j - 1], z[ref - 1]));
    }
    return conj(std::move(parts));
  };

  std::string unified = fresh_symbol("__si_F", padded.extensional, padded.intensional);

  // rho_p / tau_q decode the unified function back into the original
  // symbols; fresh padding and index variables per occurrence.
  auto decode_relation = [&](std::size_t p, const std::vector<std::string>& args) {
    std::vector<std::string> pad = numbered_vars(gen.fresh() + "_", r_max - args.size());
    std::vector<std::string> z = numbered_vars(gen.fresh() + "_", k + ell);
    std::vector<std::string> all_args = args;
    all_args.insert(all_args.end(), pad.begin(), pad.end());
    all_args.insert(all_args.end(), z.begin(), z.end());
    std::vector<std::string> bound = pad;
    bound.insert(bound.end(), z.begin(), z.end());
    // Relational positions of the unified function hold 1 or bottom, so
    // one inequality decides membership without duplicating the atom.
    return exists_all(bound, f_and(chi(p, z), f_leq(t_int(1), t_fun(unified, all_args))));
  };
  auto decode_weight = [&](std::size_t q, const std::vector<std::string>& args) {
    std::vector<std::string> pad = numbered_vars(gen.fresh() + "_", r_max - args.size());
    std::vector<std::string> z = numbered_vars(gen.fresh() + "_", k + ell);
    std::vector<std::string> all_args = args;
    all_args.insert(all_args.end(), pad.begin(), pad.end());
    all_args.insert(all_args.end(), z.begin(), z.end());
    std::vector<std::string> bound = pad;
    bound.insert(bound.end(), z.begin(), z.end());
    return t_avg(bound, chi(k + q, z), t_fun(unified, all_args));
  };

  RelAtomHook rel_hook = [&](const std::string& name,
                             const std::vector<std::string>& args) -> FormulaPtr {
    for (std::size_t p = 0; p < k; ++p)
      if (rules.relational[p]->head == name) return decode_relation(p + 1, args);
    return nullptr;
  };
  FunAppHook fun_hook = [&](const std::string& name,
                            const std::vector<std::string>& args) -> TermPtr {
    for (std::size_t q = 0; q < ell; ++q)
      if (rules.weight[q]->head == name) return decode_weight(q + 1, args);
    return nullptr;
  };

  std::vector<std::string> xs = numbered_vars("x", r_max);
  std::vector<std::string> zs = numbered_vars("z", k + ell);

  // Rule bodies over canonical argument variables with decoded symbol
  // reads; alpha-renaming first keeps the substitutions capture-free.
  auto prepared_formula = [&](const Rule* r) {
    FormulaPtr body = alpha_rename(r->body_formula, gen);
    std::map<std::string, std::string> sub;
    for (std::size_t i = 0; i < r->head_vars.size(); ++i) sub[r->head_vars[i]] = xs[i];
    return replace_atoms(rename_free_vars(body, sub), rel_hook, fun_hook);
  };
  auto prepared_term = [&](const Rule* r) {
    TermPtr body = alpha_rename(r->body_term, gen);
    std::map<std::string, std::string> sub;
    for (std::size_t i = 0; i < r->head_vars.size(); ++i) sub[r->head_vars[i]] = xs[i];
    return replace_atoms(rename_free_vars(body, sub), rel_hook, fun_hook);
  };

  // Cascaded body: relational positions set the characteristic value 1,
  // weight positions compute their rule body, anything else stays bottom.
  TermPtr theta = t_ite(chi(k + ell, zs), prepared_term(rules.weight[ell - 1]), t_bot());
  for (std::size_t j = ell - 1; j-- > 0;)
    theta = t_ite(chi(k + 1 + j, zs), prepared_term(rules.weight[j]), theta);
  for (std::size_t i = k; i-- > 0;)
    theta = t_ite(f_and(chi(i + 1, zs), prepared_formula(rules.relational[i])), t_int(1), theta);

  std::vector<std::string> binder = xs;
  binder.insert(binder.end(), zs.begin(), zs.end());
  TermPtr zeta = t_ifp(unified, binder, theta, binder);

  TransformResult result;
  result.domain_precondition = TransformResult::Precondition::AtLeastTwoElements;
  result.preserved_symbols = {answer};

  const SymbolInfo& info = padded.intensional.at(answer);
  if (info.kind == SymbolKind::Relation) {
    std::size_t p = 0;
    while (rules.relational[p]->head != answer) ++p;
    std::vector<std::string> bound(xs.begin() + info.arity, xs.end());
    bound.insert(bound.end(), zs.begin(), zs.end());
    // 1 <= zeta rather than zeta = 1: equality would duplicate the ifp
    // term and break the one-binder-per-symbol invariant.
    result.expr = Expr(exists_all(bound, f_and(chi(p + 1, zs), f_leq(t_int(1), zeta))));
  } else {
    std::size_t q = 0;
    while (rules.weight[q]->head != answer) ++q;
    std::vector<std::string> bound(xs.begin() + info.arity, xs.end());
    bound.insert(bound.end(), zs.begin(), zs.end());
    result.expr = Expr(t_avg(bound, chi(k + q + 1, zs), zeta));
  }
  return result;
}

}  // namespace wsum
