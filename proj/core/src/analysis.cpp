#include "wsum/analysis.hpp"

#include <algorithm>

namespace wsum {

namespace {

bool mentions(const std::set<std::string>& symbols, const std::set<std::string>& fns) {
  for (const auto& s : symbols)
    if (fns.count(s)) return true;
  return false;
}

bool term_mentions(const TermPtr& t, const std::set<std::string>& fns) {
  return mentions(ext_fun_symbols(Expr(t)), fns);
}

bool formula_mentions(const FormulaPtr& f, const std::set<std::string>& fns) {
  return mentions(ext_fun_symbols(Expr(f)), fns);
}

struct ScalarWalker {
  const std::set<std::string>& fns;
  std::vector<ScalarViolation>& out;
  std::vector<std::string> path;

  void report(ScalarViolationKind kind) {
    std::string p;
    for (const auto& seg : path) {
      if (!p.empty()) p += "/";
      p += seg;
    }
    out.push_back({p.empty() ? "top" : p, kind});
  }

  template <typename Fn>
  void at(const char* seg, Fn&& fn) {
    path.push_back(seg);
    fn();
    path.pop_back();
  }

  void walk(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::VarEq:
      case Formula::Kind::RelAtom:
        return;
      case Formula::Kind::Leq:
        at("leq.lhs", [&] { walk(f->t1); });
        at("leq.rhs", [&] { walk(f->t2); });
        return;
      case Formula::Kind::Not:
        at("not", [&] { walk(f->f1); });
        return;
      case Formula::Kind::BoolOp:
        at("bool.lhs", [&] { walk(f->f1); });
        at("bool.rhs", [&] { walk(f->f2); });
        return;
      case Formula::Kind::Quant:
        at("quant", [&] { walk(f->f1); });
        return;
    }
  }

  void walk(const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Const:
      case Term::Kind::FunApp:
        return;
      case Term::Kind::ArithOp: {
        if (t->arith == ArithKind::Mul) {
          if (term_mentions(t->t1, fns) && term_mentions(t->t2, fns))
            report(ScalarViolationKind::MulOfTwoIntensional);
        } else if (t->arith == ArithKind::Div) {
          if (term_mentions(t->t2, fns)) report(ScalarViolationKind::DivByIntensional);
        }
        at("arith.lhs", [&] { walk(t->t1); });
        at("arith.rhs", [&] { walk(t->t2); });
        return;
      }
      case Term::Kind::IfThenElse:
        at("ite.cond", [&] { walk(t->guard); });
        at("ite.then", [&] { walk(t->t1); });
        at("ite.else", [&] { walk(t->t2); });
        return;
      case Term::Kind::Sum:
        at("sum.guard", [&] { walk(t->guard); });
        at("sum.body", [&] { walk(t->t1); });
        return;
      case Term::Kind::Avg:
      case Term::Kind::Uniq: {
        // avg/uniq divide by the guard's tuple count, so an intensional
        // symbol in the guard is division by a recursively defined term.
        const char* label = t->kind == Term::Kind::Avg ? "avg" : "uniq";
        if (formula_mentions(t->guard, fns)) report(ScalarViolationKind::DivByIntensional);
        at((std::string(label) + ".guard").c_str(), [&] { walk(t->guard); });
        at((std::string(label) + ".body").c_str(), [&] { walk(t->t1); });
        return;
      }
      case Term::Kind::Ifp:
        at(("ifp(" + t->name + ")").c_str(), [&] { walk(t->t1); });
        return;
    }
  }
};

void check_expr_into(const Expr& e, const std::set<std::string>& fns,
                     std::vector<ScalarViolation>& out, const std::string& prefix) {
  ScalarWalker w{fns, out, {}};
  if (!prefix.empty()) w.path.push_back(prefix);
  if (std::holds_alternative<FormulaPtr>(e))
    w.walk(std::get<FormulaPtr>(e));
  else
    w.walk(std::get<TermPtr>(e));
}

}  // namespace

ScalarReport check_scalar_expression(const Expr& e) {
  symbol_partition(e);  // validates the standing single-binder assumption
  std::set<std::string> fns = ifp_bound_symbols(e);
  ScalarReport report;
  check_expr_into(e, fns, report.violations, "");
  report.is_scalar = report.violations.empty();
  return report;
}

ScalarReport check_scalar_program(const Program& p) {
  ScalarReport report;
  for (std::size_t i = 0; i < p.strata.size(); ++i) {
    const Stratum& st = p.strata[i];
    std::set<std::string> fns;
    for (const auto& [name, info] : st.intensional.symbols())
      if (info.kind == SymbolKind::WeightFunction) fns.insert(name);
    for (const Rule& rule : st.rules) {
      std::string prefix = "stratum" + std::to_string(i) + "/" + rule.head;
      Expr body = rule.is_relational() ? Expr(rule.body_formula) : Expr(rule.body_term);
      check_expr_into(body, fns, report.violations, prefix);
    }
  }
  report.is_scalar = report.violations.empty();
  return report;
}

bool is_scalar_wrt(const Expr& e, const std::set<std::string>& fns) {
  if (std::holds_alternative<FormulaPtr>(e)) {
    const FormulaPtr& f = std::get<FormulaPtr>(e);
    switch (f->kind) {
      case Formula::Kind::VarEq:
      case Formula::Kind::RelAtom:
        return true;
      case Formula::Kind::Leq:
        return is_scalar_wrt(Expr(f->t1), fns) && is_scalar_wrt(Expr(f->t2), fns);
      case Formula::Kind::Not:
        return is_scalar_wrt(Expr(f->f1), fns);
      case Formula::Kind::BoolOp:
        return is_scalar_wrt(Expr(f->f1), fns) && is_scalar_wrt(Expr(f->f2), fns);
      case Formula::Kind::Quant:
        return is_scalar_wrt(Expr(f->f1), fns);
    }
    return true;
  }
  const TermPtr& t = std::get<TermPtr>(e);
  switch (t->kind) {
    case Term::Kind::Const:
    case Term::Kind::FunApp:
      return true;
    case Term::Kind::ArithOp: {
      bool lhs = is_scalar_wrt(Expr(t->t1), fns);
      bool rhs = is_scalar_wrt(Expr(t->t2), fns);
      if (t->arith == ArithKind::Mul)
        return (lhs && !term_mentions(t->t2, fns) && rhs) ||
               (rhs && !term_mentions(t->t1, fns) && lhs);
      if (t->arith == ArithKind::Div) return lhs && rhs && !term_mentions(t->t2, fns);
      return lhs && rhs;
    }
    case Term::Kind::IfThenElse:
      return is_scalar_wrt(Expr(t->guard), fns) && is_scalar_wrt(Expr(t->t1), fns) &&
             is_scalar_wrt(Expr(t->t2), fns);
    case Term::Kind::Sum:
      return is_scalar_wrt(Expr(t->guard), fns) && is_scalar_wrt(Expr(t->t1), fns);
    case Term::Kind::Avg:
    case Term::Kind::Uniq:
      return is_scalar_wrt(Expr(t->guard), fns) && is_scalar_wrt(Expr(t->t1), fns) &&
             !formula_mentions(t->guard, fns);
    case Term::Kind::Ifp: {
      std::set<std::string> inner = fns;
      inner.erase(t->name);
      return is_scalar_wrt(Expr(t->t1), inner);
    }
  }
  return true;
}

std::string to_string(ScalarViolationKind k) {
  return k == ScalarViolationKind::MulOfTwoIntensional ? "mul-of-two-intensional"
                                                       : "div-by-intensional";
}

}  // namespace wsum
