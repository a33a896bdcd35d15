#include <doctest.h>

#include "wsum/ast.hpp"
#include "wsum/builtins.hpp"
#include "wsum/errors.hpp"
#include "wsum/parser.hpp"

#include "helpers.hpp"

using namespace wsum;
using wsum::testing::Rng;

namespace {

// Independent free-variable recomputation: collects every occurrence with
// an explicit binder environment, structured differently from the
// implementation's traversal.
void fv2(const FormulaPtr& f, std::vector<std::string> bound, std::set<std::string>& out);

void fv2(const TermPtr& t, std::vector<std::string> bound, std::set<std::string>& out) {
  auto is_bound = [&bound](const std::string& v) {
    for (const auto& b : bound)
      if (b == v) return true;
    return false;
  };
  switch (t->kind) {
    case Term::Kind::Const:
      return;
    case Term::Kind::FunApp:
      for (const auto& v : t->vars)
        if (!is_bound(v)) out.insert(v);
      return;
    case Term::Kind::ArithOp:
      fv2(t->t1, bound, out);
      fv2(t->t2, bound, out);
      return;
    case Term::Kind::IfThenElse:
      fv2(t->guard, bound, out);
      fv2(t->t1, bound, out);
      fv2(t->t2, bound, out);
      return;
    case Term::Kind::Sum:
    case Term::Kind::Avg:
    case Term::Kind::Uniq: {
      auto inner = bound;
      inner.insert(inner.end(), t->vars.begin(), t->vars.end());
      fv2(t->guard, inner, out);
      fv2(t->t1, inner, out);
      return;
    }
    case Term::Kind::Ifp: {
      auto inner = bound;
      inner.insert(inner.end(), t->vars.begin(), t->vars.end());
      fv2(t->t1, inner, out);
      for (const auto& v : t->applied)
        if (!is_bound(v)) out.insert(v);
      return;
    }
  }
}

void fv2(const FormulaPtr& f, std::vector<std::string> bound, std::set<std::string>& out) {
  auto is_bound = [&bound](const std::string& v) {
    for (const auto& b : bound)
      if (b == v) return true;
    return false;
  };
  switch (f->kind) {
    case Formula::Kind::VarEq:
    case Formula::Kind::RelAtom:
      for (const auto& v : f->vars)
        if (!is_bound(v)) out.insert(v);
      return;
    case Formula::Kind::Leq:
      fv2(f->t1, bound, out);
      fv2(f->t2, bound, out);
      return;
    case Formula::Kind::Not:
      fv2(f->f1, bound, out);
      return;
    case Formula::Kind::BoolOp:
      fv2(f->f1, bound, out);
      fv2(f->f2, bound, out);
      return;
    case Formula::Kind::Quant: {
      auto inner = bound;
      inner.push_back(f->vars[0]);
      fv2(f->f1, inner, out);
      return;
    }
  }
}

std::set<std::string> free_vars_oracle(const Expr& e) {
  std::set<std::string> out;
  if (std::holds_alternative<FormulaPtr>(e))
    fv2(std::get<FormulaPtr>(e), {}, out);
  else
    fv2(std::get<TermPtr>(e), {}, out);
  return out;
}

}  // namespace

TEST_CASE("free variables of binders") {
  // sum over (x): E(y, x) of f(x) has the free variable y only
  TermPtr sum = t_sum({"x"}, f_rel("E", {"y", "x"}), t_fun("f", {"x"}));
  CHECK(free_vars(Expr(sum)) == std::set<std::string>{"y"});

  // ifp free variables are (free(body) - bound) plus the applied tuple
  TermPtr body = t_fun("F", {"x"});
  TermPtr ifp = t_ifp("F", {"x"}, body, {"xp"});
  CHECK(free_vars(Expr(ifp)) == std::set<std::string>{"xp"});

  auto sq = std::get<Expr>(builtin_program("squaring"));
  CHECK(free_vars(sq) == std::set<std::string>{"x"});
}

TEST_CASE("free variables agree with an independent recomputation") {
  Rng rng(8101);
  Vocabulary vocab = wsum::testing::stratum_input_vocabulary();
  wsum::testing::ExprGen gen(rng, vocab);
  for (int i = 0; i < 150; ++i) {
    Expr e = i % 2 == 0 ? Expr(gen.formula({"u", "v"}, 3)) : Expr(gen.term({"u", "v"}, 3));
    CHECK(free_vars(e) == free_vars_oracle(e));
  }
}

TEST_CASE("symbol partition separates extensional and intensional") {
  auto sq = std::get<Expr>(builtin_program("squaring"));
  SymbolPartition p = symbol_partition(sq);
  CHECK(p.intensional == std::set<std::string>{"F"});
  CHECK(p.extensional == std::set<std::string>{"E"});

  // a plain term has no intensional symbols
  Expr plain = Expr(t_add(t_fun("g", {"x"}), t_int(1)));
  CHECK(symbol_partition(plain).intensional.empty());

  // double binding of one symbol violates the standing assumption
  TermPtr one = t_ifp("G", {"x"}, t_int(1), {"x"});
  TermPtr twice = t_add(one, t_ifp("G", {"y"}, t_int(2), {"y"}));
  CHECK_THROWS_AS(symbol_partition(Expr(twice)), ValidationError);

  // intensional and extensional must not overlap
  TermPtr clash = t_add(t_fun("G", {"x"}), t_ifp("G", {"y"}, t_int(1), {"x"}));
  CHECK_THROWS_AS(symbol_partition(Expr(clash)), ValidationError);
}

TEST_CASE("pretty-printed expressions parse back to the same tree") {
  Rng rng(8102);
  Vocabulary vocab = wsum::testing::stratum_input_vocabulary();
  wsum::testing::ExprGen gen(rng, vocab);
  for (int i = 0; i < 200; ++i) {
    Expr e = i % 2 == 0 ? Expr(gen.formula({"u"}, 3)) : Expr(gen.term({"u"}, 3));
    std::string text = pretty(e);
    CAPTURE(text);
    Expr back = parse_expression(text, vocab);
    CHECK(equal(e, back));
  }
}

TEST_CASE("pretty-printed builtin programs parse back structurally") {
  for (const char* name : {"eval_recursive", "floyd_warshall", "floyd_warshall_functional"}) {
    Program p = std::get<Program>(builtin_program(name));
    Program back = parse_program(pretty(p), p.strata.front().extensional);
    REQUIRE(back.strata.size() == p.strata.size());
    CHECK(back.answer_symbol == p.answer_symbol);
    for (std::size_t i = 0; i < p.strata.size(); ++i) {
      const Stratum& a = p.strata[i];
      const Stratum& b = back.strata[i];
      CHECK(a.intensional == b.intensional);
      REQUIRE(a.rules.size() == b.rules.size());
      for (std::size_t r = 0; r < a.rules.size(); ++r) {
        CHECK(a.rules[r].head == b.rules[r].head);
        CHECK(a.rules[r].head_vars == b.rules[r].head_vars);
        if (a.rules[r].is_relational())
          CHECK(equal(a.rules[r].body_formula, b.rules[r].body_formula));
        else
          CHECK(equal(a.rules[r].body_term, b.rules[r].body_term));
      }
    }
  }
}

TEST_CASE("alpha renaming preserves free variables") {
  Rng rng(8103);
  Vocabulary vocab = wsum::testing::stratum_input_vocabulary();
  wsum::testing::ExprGen gen(rng, vocab);
  for (int i = 0; i < 80; ++i) {
    TermPtr t = gen.term({"u", "v"}, 3);
    NameGen names("fresh_");
    TermPtr renamed = alpha_rename(t, names);
    CHECK(free_vars(Expr(t)) == free_vars(Expr(renamed)));
  }
}

TEST_CASE("rename_free_vars only touches free occurrences") {
  // sum (x): (Q(x, y)) (g(x)) with y renamed to z; x stays bound
  TermPtr t = t_sum({"x"}, f_rel("Q", {"x", "y"}), t_fun("g", {"x"}));
  TermPtr renamed = rename_free_vars(t, {{"y", "z"}, {"x", "w"}});
  CHECK(free_vars(Expr(renamed)) == std::set<std::string>{"z"});
  // renaming into a binder variable is capture and must be rejected
  CHECK_THROWS_AS(rename_free_vars(t, {{"y", "x"}}), ValidationError);
}

TEST_CASE("stratum validation catches the documented error cases") {
  Vocabulary ext = wsum::testing::stratum_input_vocabulary();

  Stratum st;
  st.extensional = ext;
  st.intensional.add("R0", SymbolKind::Relation, 1);
  Rule r;
  r.head = "R0";
  r.head_vars = {"x"};
  r.body_formula = f_rel("P", {"y"});  // free variable y escapes the head
  st.rules.push_back(r);
  CHECK_THROWS_AS(validate_stratum(st), ValidationError);

  st.rules[0].body_formula = f_rel("P", {"x"});
  validate_stratum(st);  // now fine

  // duplicate rule for one symbol
  st.rules.push_back(st.rules[0]);
  CHECK_THROWS_AS(validate_stratum(st), ValidationError);
  st.rules.pop_back();

  // ifp inside a stratum body
  st.rules[0].body_formula =
      f_leq(t_ifp("G", {"x"}, t_int(1), {"x"}), t_int(1));
  CHECK_THROWS_AS(validate_stratum(st), ValidationError);
}
