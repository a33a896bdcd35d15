#include "wsum/ast.hpp"

#include <algorithm>
#include <sstream>

#include "wsum/errors.hpp"

namespace wsum {

namespace {

std::shared_ptr<Formula> make_f(Formula::Kind k) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  return f;
}

std::shared_ptr<Term> make_t(Term::Kind k) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  return t;
}

}  // namespace

FormulaPtr f_vareq(std::string x, std::string y) {
  auto f = make_f(Formula::Kind::VarEq);
  f->vars = {std::move(x), std::move(y)};
  return f;
}

FormulaPtr f_rel(std::string name, std::vector<std::string> args) {
  auto f = make_f(Formula::Kind::RelAtom);
  f->name = std::move(name);
  f->vars = std::move(args);
  return f;
}

FormulaPtr f_leq(TermPtr a, TermPtr b) {
  auto f = make_f(Formula::Kind::Leq);
  f->t1 = std::move(a);
  f->t2 = std::move(b);
  return f;
}

FormulaPtr f_not(FormulaPtr f) {
  auto n = make_f(Formula::Kind::Not);
  n->f1 = std::move(f);
  return n;
}

FormulaPtr f_bool(BoolOpKind op, FormulaPtr a, FormulaPtr b) {
  auto f = make_f(Formula::Kind::BoolOp);
  f->bool_op = op;
  f->f1 = std::move(a);
  f->f2 = std::move(b);
  return f;
}

FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return f_bool(BoolOpKind::And, std::move(a), std::move(b)); }
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return f_bool(BoolOpKind::Or, std::move(a), std::move(b)); }
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
  return f_bool(BoolOpKind::Implies, std::move(a), std::move(b));
}

FormulaPtr f_quant(QuantKind q, std::string var, FormulaPtr f) {
  auto n = make_f(Formula::Kind::Quant);
  n->quant = q;
  n->vars = {std::move(var)};
  n->f1 = std::move(f);
  return n;
}

FormulaPtr f_exists(std::string var, FormulaPtr f) {
  return f_quant(QuantKind::Exists, std::move(var), std::move(f));
}
FormulaPtr f_forall(std::string var, FormulaPtr f) {
  return f_quant(QuantKind::Forall, std::move(var), std::move(f));
}

TermPtr t_const(LiftedRational v) {
  auto t = make_t(Term::Kind::Const);
  t->value = std::move(v);
  return t;
}

TermPtr t_int(long v) { return t_const(LiftedRational(v)); }
TermPtr t_bot() { return t_const(LiftedRational::bottom()); }

TermPtr t_fun(std::string name, std::vector<std::string> args) {
  auto t = make_t(Term::Kind::FunApp);
  t->name = std::move(name);
  t->vars = std::move(args);
  return t;
}

TermPtr t_arith(ArithKind op, TermPtr a, TermPtr b) {
  auto t = make_t(Term::Kind::ArithOp);
  t->arith = op;
  t->t1 = std::move(a);
  t->t2 = std::move(b);
  return t;
}

TermPtr t_add(TermPtr a, TermPtr b) { return t_arith(ArithKind::Add, std::move(a), std::move(b)); }
TermPtr t_sub(TermPtr a, TermPtr b) { return t_arith(ArithKind::Sub, std::move(a), std::move(b)); }
TermPtr t_mul(TermPtr a, TermPtr b) { return t_arith(ArithKind::Mul, std::move(a), std::move(b)); }
TermPtr t_div(TermPtr a, TermPtr b) { return t_arith(ArithKind::Div, std::move(a), std::move(b)); }

TermPtr t_ite(FormulaPtr cond, TermPtr then_t, TermPtr else_t) {
  auto t = make_t(Term::Kind::IfThenElse);
  t->guard = std::move(cond);
  t->t1 = std::move(then_t);
  t->t2 = std::move(else_t);
  return t;
}

TermPtr t_sum(std::vector<std::string> bound, FormulaPtr guard, TermPtr body) {
  auto t = make_t(Term::Kind::Sum);
  t->vars = std::move(bound);
  t->guard = std::move(guard);
  t->t1 = std::move(body);
  return t;
}

TermPtr t_avg(std::vector<std::string> bound, FormulaPtr guard, TermPtr body) {
  auto t = make_t(Term::Kind::Avg);
  t->vars = std::move(bound);
  t->guard = std::move(guard);
  t->t1 = std::move(body);
  return t;
}

TermPtr t_uniq(std::string bound, FormulaPtr guard, TermPtr body) {
  auto t = make_t(Term::Kind::Uniq);
  t->vars = {std::move(bound)};
  t->guard = std::move(guard);
  t->t1 = std::move(body);
  return t;
}

TermPtr t_ifp(std::string fn, std::vector<std::string> bound, TermPtr body,
              std::vector<std::string> applied) {
  if (bound.size() != applied.size())
    throw ValidationError("ifp for " + fn + ": bound and applied tuples differ in length");
  auto t = make_t(Term::Kind::Ifp);
  t->name = std::move(fn);
  t->vars = std::move(bound);
  t->applied = std::move(applied);
  t->t1 = std::move(body);
  return t;
}

FormulaPtr f_true() { return f_leq(t_int(0), t_int(0)); }
FormulaPtr f_false() { return f_not(f_true()); }

FormulaPtr f_eq(TermPtr a, TermPtr b) { return f_and(f_leq(a, b), f_leq(b, a)); }
FormulaPtr f_neq(TermPtr a, TermPtr b) { return f_not(f_eq(std::move(a), std::move(b))); }
FormulaPtr f_lt(TermPtr a, TermPtr b) { return f_not(f_leq(std::move(b), std::move(a))); }
FormulaPtr f_geq(TermPtr a, TermPtr b) { return f_leq(std::move(b), std::move(a)); }
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) {
  return f_and(f_implies(a, b), f_implies(b, a));
}

TermPtr t_relu(TermPtr t) {
  return t_ite(f_leq(t_int(0), t), t, t_ite(f_leq(t, t_bot()), t_bot(), t_int(0)));
}

// -- structural equality ----------------------------------------------------

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Formula::Kind::VarEq:
      return a->vars == b->vars;
    case Formula::Kind::RelAtom:
      return a->name == b->name && a->vars == b->vars;
    case Formula::Kind::Leq:
      return equal(a->t1, b->t1) && equal(a->t2, b->t2);
    case Formula::Kind::Not:
      return equal(a->f1, b->f1);
    case Formula::Kind::BoolOp:
      return a->bool_op == b->bool_op && equal(a->f1, b->f1) && equal(a->f2, b->f2);
    case Formula::Kind::Quant:
      return a->quant == b->quant && a->vars == b->vars && equal(a->f1, b->f1);
  }
  return false;
}

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Const:
      return a->value == b->value;
    case Term::Kind::FunApp:
      return a->name == b->name && a->vars == b->vars;
    case Term::Kind::ArithOp:
      return a->arith == b->arith && equal(a->t1, b->t1) && equal(a->t2, b->t2);
    case Term::Kind::IfThenElse:
      return equal(a->guard, b->guard) && equal(a->t1, b->t1) && equal(a->t2, b->t2);
    case Term::Kind::Sum:
    case Term::Kind::Avg:
    case Term::Kind::Uniq:
      return a->vars == b->vars && equal(a->guard, b->guard) && equal(a->t1, b->t1);
    case Term::Kind::Ifp:
      return a->name == b->name && a->vars == b->vars && a->applied == b->applied &&
             equal(a->t1, b->t1);
  }
  return false;
}

bool equal(const Expr& a, const Expr& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<FormulaPtr>(a))
    return equal(std::get<FormulaPtr>(a), std::get<FormulaPtr>(b));
  return equal(std::get<TermPtr>(a), std::get<TermPtr>(b));
}

// -- free variables ---------------------------------------------------------

namespace {

void collect_free(const FormulaPtr& f, std::set<std::string>& bound, std::set<std::string>& out);
void collect_free(const TermPtr& t, std::set<std::string>& bound, std::set<std::string>& out);

void add_var(const std::string& v, const std::set<std::string>& bound,
             std::set<std::string>& out) {
  if (!bound.count(v)) out.insert(v);
}

// Runs fn with vars temporarily added to the bound set.
template <typename Fn>
void with_bound(std::set<std::string>& bound, const std::vector<std::string>& vars, Fn&& fn) {
  std::vector<std::string> added;
  for (const auto& v : vars)
    if (bound.insert(v).second) added.push_back(v);
  fn();
  for (const auto& v : added) bound.erase(v);
}

void collect_free(const FormulaPtr& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f->kind) {
    case Formula::Kind::VarEq:
    case Formula::Kind::RelAtom:
      for (const auto& v : f->vars) add_var(v, bound, out);
      return;
    case Formula::Kind::Leq:
      collect_free(f->t1, bound, out);
      collect_free(f->t2, bound, out);
      return;
    case Formula::Kind::Not:
      collect_free(f->f1, bound, out);
      return;
    case Formula::Kind::BoolOp:
      collect_free(f->f1, bound, out);
      collect_free(f->f2, bound, out);
      return;
    case Formula::Kind::Quant:
      with_bound(bound, f->vars, [&] { collect_free(f->f1, bound, out); });
      return;
  }
}

void collect_free(const TermPtr& t, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (t->kind) {
    case Term::Kind::Const:
      return;
    case Term::Kind::FunApp:
      for (const auto& v : t->vars) add_var(v, bound, out);
      return;
    case Term::Kind::ArithOp:
      collect_free(t->t1, bound, out);
      collect_free(t->t2, bound, out);
      return;
    case Term::Kind::IfThenElse:
      collect_free(t->guard, bound, out);
      collect_free(t->t1, bound, out);
      collect_free(t->t2, bound, out);
      return;
    case Term::Kind::Sum:
    case Term::Kind::Avg:
    case Term::Kind::Uniq:
      with_bound(bound, t->vars, [&] {
        collect_free(t->guard, bound, out);
        collect_free(t->t1, bound, out);
      });
      return;
    case Term::Kind::Ifp:
      with_bound(bound, t->vars, [&] { collect_free(t->t1, bound, out); });
      for (const auto& v : t->applied) add_var(v, bound, out);
      return;
  }
}

}  // namespace

std::set<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> bound, out;
  collect_free(t, bound, out);
  return out;
}

std::set<std::string> free_vars(const Expr& e) {
  if (std::holds_alternative<FormulaPtr>(e)) return free_vars(std::get<FormulaPtr>(e));
  return free_vars(std::get<TermPtr>(e));
}

// -- symbol collection ------------------------------------------------------

namespace {

struct SymbolCollector {
  bool relations = true;
  std::set<std::string> bound_fns;
  std::set<std::string> out;

  void walk(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::VarEq:
        return;
      case Formula::Kind::RelAtom:
        if (relations) out.insert(f->name);
        return;
      case Formula::Kind::Leq:
        walk(f->t1);
        walk(f->t2);
        return;
      case Formula::Kind::Not:
        walk(f->f1);
        return;
      case Formula::Kind::BoolOp:
        walk(f->f1);
        walk(f->f2);
        return;
      case Formula::Kind::Quant:
        walk(f->f1);
        return;
    }
  }

  void walk(const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Const:
        return;
      case Term::Kind::FunApp:
        if (!bound_fns.count(t->name)) out.insert(t->name);
        return;
      case Term::Kind::ArithOp:
        walk(t->t1);
        walk(t->t2);
        return;
      case Term::Kind::IfThenElse:
        walk(t->guard);
        walk(t->t1);
        walk(t->t2);
        return;
      case Term::Kind::Sum:
      case Term::Kind::Avg:
      case Term::Kind::Uniq:
        walk(t->guard);
        walk(t->t1);
        return;
      case Term::Kind::Ifp: {
        bool added = bound_fns.insert(t->name).second;
        walk(t->t1);
        if (added) bound_fns.erase(t->name);
        return;
      }
    }
  }
};

void collect_ifp_binders(const FormulaPtr& f, std::map<std::string, int>& count);

void collect_ifp_binders(const TermPtr& t, std::map<std::string, int>& count) {
  switch (t->kind) {
    case Term::Kind::Const:
    case Term::Kind::FunApp:
      return;
    case Term::Kind::ArithOp:
      collect_ifp_binders(t->t1, count);
      collect_ifp_binders(t->t2, count);
      return;
    case Term::Kind::IfThenElse:
      collect_ifp_binders(t->guard, count);
      collect_ifp_binders(t->t1, count);
      collect_ifp_binders(t->t2, count);
      return;
    case Term::Kind::Sum:
    case Term::Kind::Avg:
    case Term::Kind::Uniq:
      collect_ifp_binders(t->guard, count);
      collect_ifp_binders(t->t1, count);
      return;
    case Term::Kind::Ifp:
      ++count[t->name];
      collect_ifp_binders(t->t1, count);
      return;
  }
}

void collect_ifp_binders(const FormulaPtr& f, std::map<std::string, int>& count) {
  switch (f->kind) {
    case Formula::Kind::VarEq:
    case Formula::Kind::RelAtom:
      return;
    case Formula::Kind::Leq:
      collect_ifp_binders(f->t1, count);
      collect_ifp_binders(f->t2, count);
      return;
    case Formula::Kind::Not:
      collect_ifp_binders(f->f1, count);
      return;
    case Formula::Kind::BoolOp:
      collect_ifp_binders(f->f1, count);
      collect_ifp_binders(f->f2, count);
      return;
    case Formula::Kind::Quant:
      collect_ifp_binders(f->f1, count);
      return;
  }
}

}  // namespace

std::set<std::string> ext_symbols(const Expr& e) {
  SymbolCollector c;
  if (std::holds_alternative<FormulaPtr>(e))
    c.walk(std::get<FormulaPtr>(e));
  else
    c.walk(std::get<TermPtr>(e));
  return std::move(c.out);
}

std::set<std::string> ext_fun_symbols(const Expr& e) {
  SymbolCollector c;
  c.relations = false;
  if (std::holds_alternative<FormulaPtr>(e))
    c.walk(std::get<FormulaPtr>(e));
  else
    c.walk(std::get<TermPtr>(e));
  return std::move(c.out);
}

std::set<std::string> ifp_bound_symbols(const Expr& e) {
  std::map<std::string, int> count;
  if (std::holds_alternative<FormulaPtr>(e))
    collect_ifp_binders(std::get<FormulaPtr>(e), count);
  else
    collect_ifp_binders(std::get<TermPtr>(e), count);
  std::set<std::string> out;
  for (const auto& [name, n] : count) out.insert(name);
  return out;
}

SymbolPartition symbol_partition(const Expr& e) {
  std::map<std::string, int> binders;
  if (std::holds_alternative<FormulaPtr>(e))
    collect_ifp_binders(std::get<FormulaPtr>(e), binders);
  else
    collect_ifp_binders(std::get<TermPtr>(e), binders);

  SymbolPartition p;
  for (const auto& [name, n] : binders) {
    if (n > 1)
      throw ValidationError("intensional symbol " + name + " bound by " + std::to_string(n) +
                            " ifp operators");
    p.intensional.insert(name);
  }
  p.extensional = ext_symbols(e);
  for (const auto& name : p.intensional) {
    if (p.extensional.count(name))
      throw ValidationError("symbol " + name + " is both intensional and extensional");
  }
  return p;
}

// -- renaming ---------------------------------------------------------------

namespace {

using Sub = std::map<std::string, std::string>;

std::string apply_sub(const std::string& v, const Sub& sub) {
  auto it = sub.find(v);
  return it == sub.end() ? v : it->second;
}

std::vector<std::string> apply_sub(const std::vector<std::string>& vs, const Sub& sub) {
  std::vector<std::string> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(apply_sub(v, sub));
  return out;
}

// Removes bindings for binder variables and rejects replacements that a
// binder would capture.
Sub shadow(const Sub& sub, const std::vector<std::string>& binder_vars) {
  Sub inner = sub;
  for (const auto& v : binder_vars) inner.erase(v);
  for (const auto& [from, to] : inner) {
    for (const auto& v : binder_vars) {
      if (to == v)
        throw ValidationError("variable rename " + from + " -> " + to +
                              " would be captured by a binder");
    }
  }
  return inner;
}

FormulaPtr rename_f(const FormulaPtr& f, const Sub& sub);
TermPtr rename_t(const TermPtr& t, const Sub& sub);

FormulaPtr rename_f(const FormulaPtr& f, const Sub& sub) {
  if (sub.empty()) return f;
  switch (f->kind) {
    case Formula::Kind::VarEq:
      return f_vareq(apply_sub(f->vars[0], sub), apply_sub(f->vars[1], sub));
    case Formula::Kind::RelAtom:
      return f_rel(f->name, apply_sub(f->vars, sub));
    case Formula::Kind::Leq:
      return f_leq(rename_t(f->t1, sub), rename_t(f->t2, sub));
    case Formula::Kind::Not:
      return f_not(rename_f(f->f1, sub));
    case Formula::Kind::BoolOp:
      return f_bool(f->bool_op, rename_f(f->f1, sub), rename_f(f->f2, sub));
    case Formula::Kind::Quant: {
      Sub inner = shadow(sub, f->vars);
      return f_quant(f->quant, f->vars[0], rename_f(f->f1, inner));
    }
  }
  return f;
}

TermPtr rename_t(const TermPtr& t, const Sub& sub) {
  if (sub.empty()) return t;
  switch (t->kind) {
    case Term::Kind::Const:
      return t;
    case Term::Kind::FunApp:
      return t_fun(t->name, apply_sub(t->vars, sub));
    case Term::Kind::ArithOp:
      return t_arith(t->arith, rename_t(t->t1, sub), rename_t(t->t2, sub));
    case Term::Kind::IfThenElse:
      return t_ite(rename_f(t->guard, sub), rename_t(t->t1, sub), rename_t(t->t2, sub));
    case Term::Kind::Sum:
    case Term::Kind::Avg: {
      Sub inner = shadow(sub, t->vars);
      auto guard = rename_f(t->guard, inner);
      auto body = rename_t(t->t1, inner);
      return t->kind == Term::Kind::Sum ? t_sum(t->vars, guard, body) : t_avg(t->vars, guard, body);
    }
    case Term::Kind::Uniq: {
      Sub inner = shadow(sub, t->vars);
      return t_uniq(t->vars[0], rename_f(t->guard, inner), rename_t(t->t1, inner));
    }
    case Term::Kind::Ifp: {
      Sub inner = shadow(sub, t->vars);
      return t_ifp(t->name, t->vars, rename_t(t->t1, inner), apply_sub(t->applied, sub));
    }
  }
  return t;
}

}  // namespace

FormulaPtr rename_free_vars(const FormulaPtr& f, const Sub& sub) { return rename_f(f, sub); }
TermPtr rename_free_vars(const TermPtr& t, const Sub& sub) { return rename_t(t, sub); }

namespace {

FormulaPtr alpha_f(const FormulaPtr& f, Sub& active, NameGen& gen);
TermPtr alpha_t(const TermPtr& t, Sub& active, NameGen& gen);

std::vector<std::string> alpha_bind(const std::vector<std::string>& vars, Sub& active,
                                    NameGen& gen, std::vector<std::pair<std::string, bool>>& saved,
                                    std::vector<std::string>& old_values) {
  std::vector<std::string> fresh;
  for (const auto& v : vars) {
    std::string nv = gen.fresh();
    auto it = active.find(v);
    saved.emplace_back(v, it != active.end());
    old_values.push_back(it != active.end() ? it->second : "");
    active[v] = nv;
    fresh.push_back(std::move(nv));
  }
  return fresh;
}

void alpha_unbind(Sub& active, const std::vector<std::pair<std::string, bool>>& saved,
                  const std::vector<std::string>& old_values) {
  for (std::size_t i = saved.size(); i-- > 0;) {
    if (saved[i].second)
      active[saved[i].first] = old_values[i];
    else
      active.erase(saved[i].first);
  }
}

FormulaPtr alpha_f(const FormulaPtr& f, Sub& active, NameGen& gen) {
  switch (f->kind) {
    case Formula::Kind::VarEq:
      return f_vareq(apply_sub(f->vars[0], active), apply_sub(f->vars[1], active));
    case Formula::Kind::RelAtom:
      return f_rel(f->name, apply_sub(f->vars, active));
    case Formula::Kind::Leq:
      return f_leq(alpha_t(f->t1, active, gen), alpha_t(f->t2, active, gen));
    case Formula::Kind::Not:
      return f_not(alpha_f(f->f1, active, gen));
    case Formula::Kind::BoolOp:
      return f_bool(f->bool_op, alpha_f(f->f1, active, gen), alpha_f(f->f2, active, gen));
    case Formula::Kind::Quant: {
      std::vector<std::pair<std::string, bool>> saved;
      std::vector<std::string> old_values;
      auto fresh = alpha_bind(f->vars, active, gen, saved, old_values);
      auto body = alpha_f(f->f1, active, gen);
      alpha_unbind(active, saved, old_values);
      return f_quant(f->quant, fresh[0], body);
    }
  }
  return f;
}

TermPtr alpha_t(const TermPtr& t, Sub& active, NameGen& gen) {
  switch (t->kind) {
    case Term::Kind::Const:
      return t;
    case Term::Kind::FunApp:
      return t_fun(t->name, apply_sub(t->vars, active));
    case Term::Kind::ArithOp:
      return t_arith(t->arith, alpha_t(t->t1, active, gen), alpha_t(t->t2, active, gen));
    case Term::Kind::IfThenElse:
      return t_ite(alpha_f(t->guard, active, gen), alpha_t(t->t1, active, gen),
                   alpha_t(t->t2, active, gen));
    case Term::Kind::Sum:
    case Term::Kind::Avg:
    case Term::Kind::Uniq: {
      std::vector<std::pair<std::string, bool>> saved;
      std::vector<std::string> old_values;
      auto fresh = alpha_bind(t->vars, active, gen, saved, old_values);
      auto guard = alpha_f(t->guard, active, gen);
      auto body = alpha_t(t->t1, active, gen);
      alpha_unbind(active, saved, old_values);
      if (t->kind == Term::Kind::Sum) return t_sum(fresh, guard, body);
      if (t->kind == Term::Kind::Avg) return t_avg(fresh, guard, body);
      return t_uniq(fresh[0], guard, body);
    }
    case Term::Kind::Ifp: {
      std::vector<std::pair<std::string, bool>> saved;
      std::vector<std::string> old_values;
      auto fresh = alpha_bind(t->vars, active, gen, saved, old_values);
      auto body = alpha_t(t->t1, active, gen);
      alpha_unbind(active, saved, old_values);
      return t_ifp(t->name, fresh, body, apply_sub(t->applied, active));
    }
  }
  return t;
}

}  // namespace

FormulaPtr alpha_rename(const FormulaPtr& f, NameGen& gen) {
  Sub active;
  return alpha_f(f, active, gen);
}

TermPtr alpha_rename(const TermPtr& t, NameGen& gen) {
  Sub active;
  return alpha_t(t, active, gen);
}

// -- atom replacement -------------------------------------------------------

FormulaPtr replace_atoms(const FormulaPtr& f, const RelAtomHook& rel_hook,
                         const FunAppHook& fun_hook) {
  switch (f->kind) {
    case Formula::Kind::VarEq:
      return f;
    case Formula::Kind::RelAtom: {
      if (rel_hook) {
        if (auto repl = rel_hook(f->name, f->vars)) return repl;
      }
      return f;
    }
    case Formula::Kind::Leq:
      return f_leq(replace_atoms(f->t1, rel_hook, fun_hook),
                   replace_atoms(f->t2, rel_hook, fun_hook));
    case Formula::Kind::Not:
      return f_not(replace_atoms(f->f1, rel_hook, fun_hook));
    case Formula::Kind::BoolOp:
      return f_bool(f->bool_op, replace_atoms(f->f1, rel_hook, fun_hook),
                    replace_atoms(f->f2, rel_hook, fun_hook));
    case Formula::Kind::Quant:
      return f_quant(f->quant, f->vars[0], replace_atoms(f->f1, rel_hook, fun_hook));
  }
  return f;
}

TermPtr replace_atoms(const TermPtr& t, const RelAtomHook& rel_hook, const FunAppHook& fun_hook) {
  switch (t->kind) {
    case Term::Kind::Const:
      return t;
    case Term::Kind::FunApp: {
      if (fun_hook) {
        if (auto repl = fun_hook(t->name, t->vars)) return repl;
      }
      return t;
    }
    case Term::Kind::ArithOp:
      return t_arith(t->arith, replace_atoms(t->t1, rel_hook, fun_hook),
                     replace_atoms(t->t2, rel_hook, fun_hook));
    case Term::Kind::IfThenElse:
      return t_ite(replace_atoms(t->guard, rel_hook, fun_hook),
                   replace_atoms(t->t1, rel_hook, fun_hook),
                   replace_atoms(t->t2, rel_hook, fun_hook));
    case Term::Kind::Sum:
      return t_sum(t->vars, replace_atoms(t->guard, rel_hook, fun_hook),
                   replace_atoms(t->t1, rel_hook, fun_hook));
    case Term::Kind::Avg:
      return t_avg(t->vars, replace_atoms(t->guard, rel_hook, fun_hook),
                   replace_atoms(t->t1, rel_hook, fun_hook));
    case Term::Kind::Uniq:
      return t_uniq(t->vars[0], replace_atoms(t->guard, rel_hook, fun_hook),
                    replace_atoms(t->t1, rel_hook, fun_hook));
    case Term::Kind::Ifp:
      return t_ifp(t->name, t->vars, replace_atoms(t->t1, rel_hook, fun_hook), t->applied);
  }
  return t;
}

// -- program validation -----------------------------------------------------

namespace {

bool contains_ifp(const FormulaPtr& f);

bool contains_ifp(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Const:
    case Term::Kind::FunApp:
      return false;
    case Term::Kind::ArithOp:
      return contains_ifp(t->t1) || contains_ifp(t->t2);
    case Term::Kind::IfThenElse:
      return contains_ifp(t->guard) || contains_ifp(t->t1) || contains_ifp(t->t2);
    case Term::Kind::Sum:
    case Term::Kind::Avg:
    case Term::Kind::Uniq:
      return contains_ifp(t->guard) || contains_ifp(t->t1);
    case Term::Kind::Ifp:
      return true;
  }
  return false;
}

bool contains_ifp(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::VarEq:
    case Formula::Kind::RelAtom:
      return false;
    case Formula::Kind::Leq:
      return contains_ifp(f->t1) || contains_ifp(f->t2);
    case Formula::Kind::Not:
      return contains_ifp(f->f1);
    case Formula::Kind::BoolOp:
      return contains_ifp(f->f1) || contains_ifp(f->f2);
    case Formula::Kind::Quant:
      return contains_ifp(f->f1);
  }
  return false;
}

// Checks relation/function usage against a vocabulary, tracking ifp-bound
// function symbols as scoped declarations.
struct SymbolUseChecker {
  const Vocabulary& vocab;
  std::map<std::string, int> ifp_bound;  // name -> arity

  void check(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::VarEq:
        return;
      case Formula::Kind::RelAtom: {
        const SymbolInfo* info = vocab.find(f->name);
        if (!info || ifp_bound.count(f->name)) {
          if (!info) throw UnknownSymbol(f->name);
          throw ValidationError("ifp-bound symbol " + f->name + " used as a relation");
        }
        if (info->kind != SymbolKind::Relation)
          throw ValidationError("weight function " + f->name + " used as a relation");
        if (static_cast<int>(f->vars.size()) != info->arity)
          throw ValidationError("relation " + f->name + " used with arity " +
                                std::to_string(f->vars.size()) + ", declared " +
                                std::to_string(info->arity));
        return;
      }
      case Formula::Kind::Leq:
        check(f->t1);
        check(f->t2);
        return;
      case Formula::Kind::Not:
        check(f->f1);
        return;
      case Formula::Kind::BoolOp:
        check(f->f1);
        check(f->f2);
        return;
      case Formula::Kind::Quant:
        check(f->f1);
        return;
    }
  }

  void check(const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Const:
        return;
      case Term::Kind::FunApp: {
        auto it = ifp_bound.find(t->name);
        if (it != ifp_bound.end()) {
          if (static_cast<int>(t->vars.size()) != it->second)
            throw ValidationError("ifp-bound function " + t->name + " used with arity " +
                                  std::to_string(t->vars.size()) + ", bound with " +
                                  std::to_string(it->second));
          return;
        }
        const SymbolInfo* info = vocab.find(t->name);
        if (!info) throw UnknownSymbol(t->name);
        if (info->kind != SymbolKind::WeightFunction)
          throw ValidationError("relation " + t->name + " used as a weight function");
        if (static_cast<int>(t->vars.size()) != info->arity)
          throw ValidationError("weight function " + t->name + " used with arity " +
                                std::to_string(t->vars.size()) + ", declared " +
                                std::to_string(info->arity));
        return;
      }
      case Term::Kind::ArithOp:
        check(t->t1);
        check(t->t2);
        return;
      case Term::Kind::IfThenElse:
        check(t->guard);
        check(t->t1);
        check(t->t2);
        return;
      case Term::Kind::Sum:
      case Term::Kind::Avg:
      case Term::Kind::Uniq:
        check(t->guard);
        check(t->t1);
        return;
      case Term::Kind::Ifp: {
        if (vocab.contains(t->name))
          throw ValidationError("ifp binds " + t->name + " which is already declared");
        if (ifp_bound.count(t->name))
          throw ValidationError("intensional symbol " + t->name + " bound twice");
        std::set<std::string> distinct(t->vars.begin(), t->vars.end());
        if (distinct.size() != t->vars.size())
          throw ValidationError("ifp for " + t->name + " has repeated bound variables");
        ifp_bound[t->name] = static_cast<int>(t->vars.size());
        check(t->t1);
        ifp_bound.erase(t->name);
        return;
      }
    }
  }
};

}  // namespace

const Rule* Stratum::rule_for(const std::string& symbol) const {
  for (const auto& r : rules)
    if (r.head == symbol) return &r;
  return nullptr;
}

void validate_stratum(const Stratum& st) {
  if (!st.extensional.disjoint_with(st.intensional))
    throw ValidationError("extensional and intensional vocabularies overlap");

  Vocabulary all = st.extensional;
  all.merge(st.intensional);

  std::set<std::string> seen;
  for (const auto& rule : st.rules) {
    const SymbolInfo* info = st.intensional.find(rule.head);
    if (!info) throw ValidationError("rule head " + rule.head + " is not intensional");
    if (!seen.insert(rule.head).second)
      throw ValidationError("duplicate rule for symbol " + rule.head);

    if (static_cast<int>(rule.head_vars.size()) != info->arity)
      throw ValidationError("rule head " + rule.head + " has " +
                            std::to_string(rule.head_vars.size()) + " variables, arity is " +
                            std::to_string(info->arity));
    std::set<std::string> distinct(rule.head_vars.begin(), rule.head_vars.end());
    if (distinct.size() != rule.head_vars.size())
      throw ValidationError("rule head " + rule.head + " has repeated variables");

    bool relational = info->kind == SymbolKind::Relation;
    if (relational != rule.is_relational() || (!rule.body_formula && !rule.body_term))
      throw ValidationError("rule body kind does not match symbol kind for " + rule.head);

    Expr body = relational ? Expr(rule.body_formula) : Expr(rule.body_term);
    if (relational ? contains_ifp(rule.body_formula) : contains_ifp(rule.body_term))
      throw ValidationError("stratum rule for " + rule.head +
                            " contains an ifp term; stratum bodies are FO(SUM) only");

    for (const auto& v : free_vars(body)) {
      if (!distinct.count(v))
        throw ValidationError("free variable " + v + " in the body of " + rule.head +
                              " does not appear in the rule head");
    }

    SymbolUseChecker checker{all, {}};
    if (relational)
      checker.check(rule.body_formula);
    else
      checker.check(rule.body_term);
  }
  if (seen.size() != st.intensional.size())
    throw ValidationError("stratum must have exactly one rule per intensional symbol");
}

void validate_program(const Program& p, const Vocabulary& input_vocab) {
  if (p.strata.empty()) throw ValidationError("program has no strata");
  Vocabulary accumulated = input_vocab;
  for (std::size_t i = 0; i < p.strata.size(); ++i) {
    const Stratum& st = p.strata[i];
    if (!(st.extensional == accumulated))
      throw ValidationError("stratum " + std::to_string(i) +
                            " extensional vocabulary is not the input vocabulary plus all "
                            "earlier intensional symbols");
    validate_stratum(st);
    accumulated.merge(st.intensional);
  }
  if (!p.answer_symbol.empty()) {
    bool found = false;
    for (const auto& st : p.strata) found = found || st.intensional.contains(p.answer_symbol);
    if (!found)
      throw ValidationError("answer symbol " + p.answer_symbol + " is not intensional");
  }
}

// -- pretty printing --------------------------------------------------------

namespace {

void print_f(std::ostream& os, const FormulaPtr& f);
void print_t(std::ostream& os, const TermPtr& t);

void print_args(std::ostream& os, const std::vector<std::string>& vars) {
  os << "(";
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) os << ", ";
    os << vars[i];
  }
  os << ")";
}

void print_f(std::ostream& os, const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::VarEq:
      os << f->vars[0] << " = " << f->vars[1];
      return;
    case Formula::Kind::RelAtom:
      os << f->name;
      print_args(os, f->vars);
      return;
    case Formula::Kind::Leq:
      print_t(os, f->t1);
      os << " <= ";
      print_t(os, f->t2);
      return;
    case Formula::Kind::Not:
      os << "!(";
      print_f(os, f->f1);
      os << ")";
      return;
    case Formula::Kind::BoolOp: {
      const char* op = f->bool_op == BoolOpKind::And ? " & "
                       : f->bool_op == BoolOpKind::Or ? " | "
                                                      : " -> ";
      os << "(";
      print_f(os, f->f1);
      os << op;
      print_f(os, f->f2);
      os << ")";
      return;
    }
    case Formula::Kind::Quant:
      os << (f->quant == QuantKind::Exists ? "exists " : "forall ") << f->vars[0] << " (";
      print_f(os, f->f1);
      os << ")";
      return;
  }
}

void print_binder(std::ostream& os, const char* kw, const TermPtr& t) {
  os << kw << " ";
  print_args(os, t->vars);
  os << ": (";
  print_f(os, t->guard);
  os << ") (";
  print_t(os, t->t1);
  os << ")";
}

void print_t(std::ostream& os, const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Const:
      os << t->value.str();
      return;
    case Term::Kind::FunApp:
      os << t->name;
      print_args(os, t->vars);
      return;
    case Term::Kind::ArithOp: {
      const char* op = t->arith == ArithKind::Add   ? " + "
                       : t->arith == ArithKind::Sub ? " - "
                       : t->arith == ArithKind::Mul ? " * "
                                                    : " / ";
      os << "(";
      print_t(os, t->t1);
      os << op;
      print_t(os, t->t2);
      os << ")";
      return;
    }
    case Term::Kind::IfThenElse:
      os << "(if ";
      print_f(os, t->guard);
      os << " then ";
      print_t(os, t->t1);
      os << " else ";
      print_t(os, t->t2);
      os << ")";
      return;
    case Term::Kind::Sum:
      print_binder(os, "sum", t);
      return;
    case Term::Kind::Avg:
      print_binder(os, "avg", t);
      return;
    case Term::Kind::Uniq:
      print_binder(os, "uniq", t);
      return;
    case Term::Kind::Ifp:
      os << "ifp " << t->name;
      print_args(os, t->vars);
      os << " <- (";
      print_t(os, t->t1);
      os << ") at ";
      print_args(os, t->applied);
      return;
  }
}

void print_decls(std::ostream& os, const Vocabulary& vocab) {
  for (const auto& [name, info] : vocab.symbols()) {
    os << (info.kind == SymbolKind::Relation ? "rel " : "fun ") << name << "/" << info.arity
       << ";\n";
  }
}

}  // namespace

std::string pretty(const FormulaPtr& f) {
  std::ostringstream os;
  print_f(os, f);
  return os.str();
}

std::string pretty(const TermPtr& t) {
  std::ostringstream os;
  print_t(os, t);
  return os.str();
}

std::string pretty(const Expr& e) {
  if (std::holds_alternative<FormulaPtr>(e)) return pretty(std::get<FormulaPtr>(e));
  return pretty(std::get<TermPtr>(e));
}

std::string pretty(const Program& p) {
  std::ostringstream os;
  if (!p.strata.empty()) print_decls(os, p.strata.front().extensional);
  for (const auto& st : p.strata) print_decls(os, st.intensional);
  if (!p.answer_symbol.empty()) os << "answer " << p.answer_symbol << ";\n";
  for (std::size_t i = 0; i < p.strata.size(); ++i) {
    if (i) os << "---\n";
    os << "\n";
    for (const auto& rule : p.strata[i].rules) {
      os << rule.head;
      if (!rule.head_vars.empty()) print_args(os, rule.head_vars);
      os << " <- ";
      if (rule.is_relational())
        print_f(os, rule.body_formula);
      else
        print_t(os, rule.body_term);
      os << ";\n";
    }
  }
  return os.str();
}

}  // namespace wsum
