#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "wsum/rational.hpp"
#include "wsum/structure.hpp"

namespace wsum {

struct Formula;
struct Term;
using FormulaPtr = std::shared_ptr<const Formula>;
using TermPtr = std::shared_ptr<const Term>;

enum class BoolOpKind { And, Or, Implies };
enum class QuantKind { Exists, Forall };
enum class ArithKind { Add, Sub, Mul, Div };

// Nodes are immutable after construction and shared via shared_ptr, so
// subtrees may be reused freely across expressions and threads.
struct Formula {
  enum class Kind { VarEq, RelAtom, Leq, Not, BoolOp, Quant };
  Kind kind;

  std::vector<std::string> vars;  // VarEq: {x, y}; RelAtom: args; Quant: {var}
  std::string name;               // RelAtom
  TermPtr t1, t2;                 // Leq
  FormulaPtr f1, f2;              // Not: f1; BoolOp: f1, f2; Quant: f1
  BoolOpKind bool_op{BoolOpKind::And};
  QuantKind quant{QuantKind::Exists};
};

struct Term {
  enum class Kind { Const, FunApp, ArithOp, IfThenElse, Sum, Avg, Uniq, Ifp };
  Kind kind;

  LiftedRational value;             // Const
  std::string name;                 // FunApp / Ifp function symbol
  std::vector<std::string> vars;    // FunApp: args; Sum/Avg: bound vars; Uniq: {var}; Ifp: bound vars
  std::vector<std::string> applied; // Ifp applied vars
  FormulaPtr guard;                 // Sum/Avg/Uniq guard; IfThenElse condition
  TermPtr t1, t2;                   // ArithOp: operands; IfThenElse: branches; Sum/Avg/Uniq/Ifp body: t1
  ArithKind arith{ArithKind::Add};
};

// An FO(SUM)/IFP(SUM) expression is either a formula or a weight term.
using Expr = std::variant<FormulaPtr, TermPtr>;

// -- node factories ---------------------------------------------------------

FormulaPtr f_vareq(std::string x, std::string y);
FormulaPtr f_rel(std::string name, std::vector<std::string> args);
FormulaPtr f_leq(TermPtr a, TermPtr b);
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_bool(BoolOpKind op, FormulaPtr a, FormulaPtr b);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_quant(QuantKind q, std::string var, FormulaPtr f);
FormulaPtr f_exists(std::string var, FormulaPtr f);
FormulaPtr f_forall(std::string var, FormulaPtr f);

TermPtr t_const(LiftedRational v);
TermPtr t_int(long v);
TermPtr t_bot();
TermPtr t_fun(std::string name, std::vector<std::string> args);
TermPtr t_arith(ArithKind op, TermPtr a, TermPtr b);
TermPtr t_add(TermPtr a, TermPtr b);
TermPtr t_sub(TermPtr a, TermPtr b);
TermPtr t_mul(TermPtr a, TermPtr b);
TermPtr t_div(TermPtr a, TermPtr b);
TermPtr t_ite(FormulaPtr cond, TermPtr then_t, TermPtr else_t);
TermPtr t_sum(std::vector<std::string> bound, FormulaPtr guard, TermPtr body);
TermPtr t_avg(std::vector<std::string> bound, FormulaPtr guard, TermPtr body);
TermPtr t_uniq(std::string bound, FormulaPtr guard, TermPtr body);
TermPtr t_ifp(std::string fn, std::vector<std::string> bound, TermPtr body,
              std::vector<std::string> applied);

// -- derived forms ----------------------------------------------------------

// true / false as 0 <= 0 and its negation (the grammar has no literals).
FormulaPtr f_true();
FormulaPtr f_false();
// Term equality a = b as (a <= b) & (b <= a); in particular bot = bot holds.
FormulaPtr f_eq(TermPtr a, TermPtr b);
FormulaPtr f_neq(TermPtr a, TermPtr b);
// a < b as !(b <= a); a >= b as b <= a.
FormulaPtr f_lt(TermPtr a, TermPtr b);
FormulaPtr f_geq(TermPtr a, TermPtr b);
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b);
// ReLU(t): bottom-preserving clamp, if 0 <= t then t else (if t <= bot
// then bot else 0). The naive "if t >= 0 then t else 0" would map bottom
// to 0 and break recursive evaluation over partially defined functions.
TermPtr t_relu(TermPtr t);

// -- structural operations --------------------------------------------------

bool equal(const FormulaPtr& a, const FormulaPtr& b);
bool equal(const TermPtr& a, const TermPtr& b);
bool equal(const Expr& a, const Expr& b);

std::set<std::string> free_vars(const Expr& e);
std::set<std::string> free_vars(const FormulaPtr& f);
std::set<std::string> free_vars(const TermPtr& t);

// Free (extensional) relation and weight-function symbols; an ifp term
// binds its function symbol, which does not count as free inside it.
std::set<std::string> ext_symbols(const Expr& e);
// Free weight-function symbols only (relations excluded).
std::set<std::string> ext_fun_symbols(const Expr& e);
// Symbols bound by some ifp operator in the expression.
std::set<std::string> ifp_bound_symbols(const Expr& e);

struct SymbolPartition {
  std::set<std::string> extensional;
  std::set<std::string> intensional;
};
// Validates the standing assumption: every intensional symbol is bound by
// exactly one ifp operator and intensional/extensional sets are disjoint.
SymbolPartition symbol_partition(const Expr& e);

// Fresh-name supply for generated variables and symbols.
class NameGen {
 public:
  explicit NameGen(std::string prefix) : prefix_(std::move(prefix)) {}
  std::string fresh() { return prefix_ + std::to_string(counter_++); }

 private:
  std::string prefix_;
  unsigned counter_ = 0;
};

// Renames free occurrences of variables. The caller must ensure the
// replacement names are not captured by binders in e; renaming into a
// bound name throws ValidationError.
FormulaPtr rename_free_vars(const FormulaPtr& f, const std::map<std::string, std::string>& sub);
TermPtr rename_free_vars(const TermPtr& t, const std::map<std::string, std::string>& sub);

// Renames every bound variable to a fresh name from gen, leaving free
// occurrences untouched. Makes subsequent substitutions capture-safe.
FormulaPtr alpha_rename(const FormulaPtr& f, NameGen& gen);
TermPtr alpha_rename(const TermPtr& t, NameGen& gen);

// Rewrites every relation atom / weight-function application for which the
// hook returns a replacement. Used by the program transformations; hooks
// see the original argument variables.
using RelAtomHook = std::function<FormulaPtr(const std::string&, const std::vector<std::string>&)>;
using FunAppHook = std::function<TermPtr(const std::string&, const std::vector<std::string>&)>;
FormulaPtr replace_atoms(const FormulaPtr& f, const RelAtomHook& rel_hook,
                         const FunAppHook& fun_hook);
TermPtr replace_atoms(const TermPtr& t, const RelAtomHook& rel_hook, const FunAppHook& fun_hook);

// -- programs ---------------------------------------------------------------

// One rule per intensional symbol; exactly one of body_formula/body_term
// is set, matching the head symbol's kind.
struct Rule {
  std::string head;
  std::vector<std::string> head_vars;
  FormulaPtr body_formula;
  TermPtr body_term;
  bool is_relational() const { return body_formula != nullptr; }
};

struct Stratum {
  Vocabulary extensional;
  Vocabulary intensional;
  std::vector<Rule> rules;  // declaration order, one per intensional symbol

  const Rule* rule_for(const std::string& symbol) const;
};

struct Program {
  std::vector<Stratum> strata;
  std::string answer_symbol;  // may be empty until designated
};

// Checks all structural invariants (arity agreement, distinct head
// variables, free variables contained in heads, FO-only stratum bodies,
// disjoint extensional/intensional, one rule per intensional symbol,
// stratified extensional growth). Throws ValidationError.
void validate_stratum(const Stratum& st);
void validate_program(const Program& p, const Vocabulary& input_vocab);

// -- pretty printing --------------------------------------------------------

// Canonical concrete syntax; parse(pretty(e)) reproduces e structurally.
std::string pretty(const FormulaPtr& f);
std::string pretty(const TermPtr& t);
std::string pretty(const Expr& e);
// Full program text with declarations, rules, and stratum separators.
std::string pretty(const Program& p);

}  // namespace wsum
