#include "wsum/builtins.hpp"

#include "wsum/errors.hpp"
#include "wsum/fnn.hpp"

namespace wsum {

namespace {

// b(u) + sum (v): (E(v,u)) (w(v,u) * eval(v))
TermPtr incoming_sum(const std::string& u, const std::string& v) {
  return t_add(t_fun("b", {u}),
               t_sum({v}, f_rel("E", {v, u}), t_mul(t_fun("w", {v, u}), t_fun("eval", {v}))));
}

Program make_eval_recursive() {
  Rule rule;
  rule.head = "eval";
  rule.head_vars = {"u"};
  rule.body_term = t_ite(f_rel("In", {"u", "u"}), t_fun("val", {"u"}),
                         t_ite(f_rel("Out", {"u", "u"}), incoming_sum("u", "v"),
                               t_relu(incoming_sum("u", "v"))));

  Stratum st;
  st.extensional = fnn_vocabulary(true);
  st.intensional.add("eval", SymbolKind::WeightFunction, 1);
  st.rules.push_back(std::move(rule));

  Program p;
  p.strata.push_back(std::move(st));
  p.answer_symbol = "eval";
  validate_program(p, fnn_vocabulary(true));
  return p;
}

// Nodes of depth at most l, with per-level fresh quantified variables.
FormulaPtr depth_at_most(int l, const std::string& x) {
  if (l == 0) return f_not(f_exists("y0", f_rel("E", {"y0", x})));
  std::string y = "y" + std::to_string(l);
  return f_forall(y, f_implies(f_rel("E", {y, x}), depth_at_most(l - 1, y)));
}

TermPtr eval_bounded(int l, const std::string& x) {
  if (l == 0)
    return t_ite(f_rel("In", {x, x}), t_fun("val", {x}), t_bot());
  std::string v = "v" + std::to_string(l);
  TermPtr pre = t_add(t_fun("b", {x}), t_sum({v}, f_rel("E", {v, x}),
                                             t_mul(t_fun("w", {v, x}), eval_bounded(l - 1, v))));
  return t_ite(depth_at_most(l - 1, x), eval_bounded(l - 1, x),
               t_ite(depth_at_most(l, x),
                     t_ite(f_rel("Out", {x, x}), pre, t_relu(pre)), t_bot()));
}

// next(k): the node whose strict predecessors are exactly the chosen set.
FormulaPtr fw_next(const std::string& k) {
  return f_forall("x", f_iff(f_rel("ord", {"x", k}), f_rel("chosen", {"x"})));
}

FormulaPtr chosen_empty() { return f_not(f_exists("c", f_rel("chosen", {"c"}))); }

Program make_floyd_warshall() {
  Rule chosen;
  chosen.head = "chosen";
  chosen.head_vars = {"k"};
  chosen.body_formula = fw_next("k");

  auto w2 = [](const char* a, const char* b) { return t_fun("W", {a, b}); };
  auto d2 = [](const char* a, const char* b) { return t_fun("D", {a, b}); };

  TermPtr base = t_ite(
      f_exists("k", f_and(fw_next("k"), f_lt(t_add(w2("i", "k"), w2("k", "j")), w2("i", "j")))),
      t_sum({"k"}, fw_next("k"), t_add(w2("i", "k"), w2("k", "j"))), w2("i", "j"));
  TermPtr step = t_ite(
      f_exists("k", f_and(fw_next("k"), f_lt(t_add(d2("i", "k"), d2("k", "j")), d2("i", "j")))),
      t_sum({"k"}, fw_next("k"), t_add(d2("i", "k"), d2("k", "j"))), d2("i", "j"));

  Rule dist;
  dist.head = "D";
  dist.head_vars = {"i", "j"};
  dist.body_term = t_ite(chosen_empty(), base, step);

  Stratum st;
  st.extensional = floyd_warshall_vocabulary();
  st.intensional.add("chosen", SymbolKind::Relation, 1);
  st.intensional.add("D", SymbolKind::WeightFunction, 2);
  st.rules.push_back(std::move(chosen));
  st.rules.push_back(std::move(dist));

  Program p;
  p.strata.push_back(std::move(st));
  p.answer_symbol = "D";
  validate_program(p, floyd_warshall_vocabulary());
  return p;
}

// last(k): the most recently chosen node, i.e. the ord-maximum of chosen.
FormulaPtr fw_last(const std::string& k) {
  return f_and(f_rel("chosen", {k}),
               f_forall("x", f_implies(f_and(f_rel("chosen", {"x"}), f_not(f_vareq("x", k))),
                                       f_rel("ord", {"x", k}))));
}

Program make_floyd_warshall_functional() {
  Rule chosen;
  chosen.head = "chosen";
  chosen.head_vars = {"kp"};
  chosen.body_formula = fw_next("kp");

  auto w2 = [](const char* a, const char* b) { return t_fun("W", {a, b}); };
  auto dp = [](const char* a, const char* b, const char* c) { return t_fun("Dp", {a, b, c}); };

  TermPtr base = t_ite(f_lt(t_add(w2("i", "kp"), w2("kp", "j")), w2("i", "j")),
                       t_add(w2("i", "kp"), w2("kp", "j")), w2("i", "j"));
  TermPtr improved = t_sum({"k"}, fw_last("k"), t_add(dp("k", "i", "kp"), dp("k", "kp", "j")));
  TermPtr carried = t_sum({"k"}, fw_last("k"), dp("k", "i", "j"));
  TermPtr step =
      t_ite(f_exists("k", f_and(fw_last("k"), f_lt(t_add(dp("k", "i", "kp"), dp("k", "kp", "j")),
                                                   dp("k", "i", "j")))),
            improved, carried);

  Rule dist_stage;
  dist_stage.head = "Dp";
  dist_stage.head_vars = {"kp", "i", "j"};
  dist_stage.body_term =
      t_ite(f_not(fw_next("kp")), t_bot(), t_ite(chosen_empty(), base, step));

  Stratum first;
  first.extensional = floyd_warshall_vocabulary();
  first.intensional.add("chosen", SymbolKind::Relation, 1);
  first.intensional.add("Dp", SymbolKind::WeightFunction, 3);
  first.rules.push_back(std::move(chosen));
  first.rules.push_back(std::move(dist_stage));

  Rule project;
  project.head = "D";
  project.head_vars = {"i", "j"};
  project.body_term = t_sum({"k"}, fw_last("k"), t_fun("Dp", {"k", "i", "j"}));

  Stratum second;
  second.extensional = first.extensional;
  second.extensional.merge(first.intensional);
  second.intensional.add("D", SymbolKind::WeightFunction, 2);
  second.rules.push_back(std::move(project));

  Program p;
  p.strata.push_back(std::move(first));
  p.strata.push_back(std::move(second));
  p.answer_symbol = "D";
  validate_program(p, floyd_warshall_vocabulary());
  return p;
}

// ifp F(x) <- (if exists y E(y,x) then sum^2 of predecessors else 2) at (x)
TermPtr make_squaring() {
  TermPtr pred_sum = t_sum({"y"}, f_rel("E", {"y", "x"}), t_fun("F", {"y"}));
  TermPtr body =
      t_ite(f_exists("y", f_rel("E", {"y", "x"})), t_mul(pred_sum, pred_sum), t_int(2));
  return t_ifp("F", {"x"}, body, {"x"});
}

}  // namespace

Vocabulary floyd_warshall_vocabulary() {
  Vocabulary v;
  v.add("ord", SymbolKind::Relation, 2);
  v.add("W", SymbolKind::WeightFunction, 2);
  return v;
}

Vocabulary squaring_vocabulary() {
  Vocabulary v;
  v.add("E", SymbolKind::Relation, 2);
  return v;
}

std::variant<Program, Expr> builtin_program(const std::string& name,
                                            const std::map<std::string, long>& params) {
  if (name == "eval_recursive") return make_eval_recursive();
  if (name == "eval_depth_bounded") {
    auto it = params.find("depth");
    if (it == params.end() || it->second < 0)
      throw ValidationError("eval_depth_bounded needs a nonnegative \"depth\" parameter");
    return Expr(eval_bounded(static_cast<int>(it->second), "u"));
  }
  if (name == "floyd_warshall") return make_floyd_warshall();
  if (name == "floyd_warshall_functional") return make_floyd_warshall_functional();
  if (name == "squaring") return Expr(make_squaring());
  throw UnknownBuiltin(name);
}

}  // namespace wsum
