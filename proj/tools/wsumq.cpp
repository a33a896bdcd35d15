// wsumq: command-line front end for the weighted-structure query engine.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wsum/analysis.hpp"
#include "wsum/ast.hpp"
#include "wsum/builtins.hpp"
#include "wsum/errors.hpp"
#include "wsum/eval.hpp"
#include "wsum/fnn.hpp"
#include "wsum/parser.hpp"
#include "wsum/structure.hpp"
#include "wsum/transform.hpp"

namespace {

using nlohmann::json;
using namespace wsum;

struct RunConfig {
  Mode mode = Mode::Functional;
  bool trace_enabled = false;
  std::size_t arity_cap = 12;
  std::string output_format = "json";  // json | text
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
}

std::vector<mpq_class> parse_rational_list(const std::string& csv) {
  std::vector<mpq_class> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(rational_parse(item));
  }
  return out;
}

json tuple_json(const WeightedStructure& s, const Tuple& t) {
  json arr = json::array();
  for (auto idx : t) arr.push_back(s.element_name(idx));
  return arr;
}

// Answer rendering: nullary relations as booleans, relations as sorted
// tuple lists, weight functions as total tables over the universe.
json answer_json(const WeightedStructure& s, const AnswerView& view) {
  json j;
  j["symbol"] = view.symbol;
  switch (view.kind) {
    case AnswerView::Kind::Boolean:
      j["kind"] = "boolean";
      j["value"] = view.bool_value;
      break;
    case AnswerView::Kind::Relation: {
      j["kind"] = "relation";
      j["arity"] = view.arity;
      json tuples = json::array();
      for (const auto& t : view.tuples) tuples.push_back(tuple_json(s, t));
      j["tuples"] = tuples;
      break;
    }
    case AnswerView::Kind::Weight: {
      j["kind"] = "weight";
      j["arity"] = view.arity;
      json entries = json::array();
      std::size_t n = s.universe_size();
      std::vector<Tuple> all;
      if (view.arity == 0) {
        all.push_back({});
      } else if (n > 0) {
        Tuple t(view.arity, 0);
        while (true) {
          all.push_back(t);
          std::size_t i = t.size();
          while (i > 0) {
            if (++t[i - 1] < n) break;
            t[i - 1] = 0;
            --i;
          }
          if (i == 0) break;
        }
      }
      for (const auto& tup : all) {
        entries.push_back(
            {{"tuple", tuple_json(s, tup)}, {"value", s.weight(view.symbol, tup).str()}});
      }
      j["entries"] = entries;
      break;
    }
  }
  return j;
}

std::string answer_text(const WeightedStructure& s, const AnswerView& view) {
  std::ostringstream os;
  switch (view.kind) {
    case AnswerView::Kind::Boolean:
      os << view.symbol << " = " << (view.bool_value ? "true" : "false") << "\n";
      break;
    case AnswerView::Kind::Relation:
      for (const auto& t : view.tuples) {
        os << view.symbol << "(";
        for (std::size_t i = 0; i < t.size(); ++i)
          os << (i ? ", " : "") << s.element_name(t[i]);
        os << ")\n";
      }
      break;
    case AnswerView::Kind::Weight:
      for (const auto& [t, w] : view.weights) {
        os << view.symbol << "(";
        for (std::size_t i = 0; i < t.size(); ++i)
          os << (i ? ", " : "") << s.element_name(t[i]);
        os << ") = " << w.str() << "\n";
      }
      break;
  }
  return os.str();
}

void print_traces(const std::vector<FixpointTrace>& traces) {
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& tr = traces[i];
    std::cerr << "stratum " << i << ": " << tr.rounds << " round(s), "
              << (tr.termination_kind == Mode::Functional ? "functional fixpoint" : "loose index")
              << "\n";
    for (std::size_t r = 0; r < tr.per_round.size(); ++r) {
      const auto& d = tr.per_round[r];
      std::cerr << "  round " << (r + 1) << ": +" << d.relation_tuples_added << " tuple(s), "
                << d.weights_defined << " weight(s) defined, " << d.weights_overwritten
                << " overwritten\n";
    }
  }
}

Vocabulary vocab_of_optional_structure(const std::string& path) {
  if (path.empty()) return {};
  return structure_from_json(slurp(path)).vocabulary();
}

// Rebuilds the extensional chaining after strata gain fresh intensional
// symbols in a transformation.
Program rechain(std::vector<Stratum> strata, const Vocabulary& input, std::string answer) {
  Vocabulary accumulated = input;
  for (auto& st : strata) {
    st.extensional = accumulated;
    accumulated.merge(st.intensional);
  }
  Program p{std::move(strata), std::move(answer)};
  validate_program(p, input);
  return p;
}

int cmd_parse(const std::string& file, const std::string& structure_path) {
  std::string text = slurp(file);
  Vocabulary vocab = vocab_of_optional_structure(structure_path);
  if (looks_like_program(text)) {
    Program p = parse_program(text, vocab);
    std::cout << pretty(p);
  } else {
    Expr e = parse_expression(text, vocab);
    std::cout << pretty(e) << "\n";
  }
  return 0;
}

int cmd_check_scalar(const std::string& file, const std::string& structure_path) {
  std::string text = slurp(file);
  Vocabulary vocab = vocab_of_optional_structure(structure_path);
  ScalarReport report;
  if (looks_like_program(text))
    report = check_scalar_program(parse_program(text, vocab));
  else
    report = check_scalar_expression(parse_expression(text, vocab));
  for (const auto& v : report.violations)
    std::cout << v.path << ": " << to_string(v.reason) << "\n";
  return report.is_scalar ? 0 : 1;
}

int cmd_run(const std::string& program_path, const std::string& structure_path,
            const std::string& answer, const RunConfig& cfg) {
  WeightedStructure s = structure_from_json(slurp(structure_path));
  Program p = parse_program(slurp(program_path), s.vocabulary());
  ProgramResult result = run_program(p, s, cfg.mode, answer);
  if (cfg.trace_enabled) print_traces(result.traces);
  if (cfg.output_format == "text")
    std::cout << answer_text(result.structure, result.answer);
  else
    std::cout << answer_json(result.structure, result.answer).dump(2) << "\n";
  return 0;
}

int cmd_eval(const std::string& expr_path, const std::string& structure_path,
             const std::string& bind, const RunConfig& cfg) {
  WeightedStructure s = structure_from_json(slurp(structure_path));
  Expr e = parse_expression(slurp(expr_path), s.vocabulary());
  Assignment a;
  std::stringstream ss(bind);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("binding must look like x=element: " + item);
    a.bindings[item.substr(0, eq)] = item.substr(eq + 1);
  }
  EvalResult r = eval_expression(e, s, a);
  if (cfg.output_format == "text") {
    std::cout << (r.is_bool ? (r.bool_value ? "true" : "false") : r.weight_value.str()) << "\n";
  } else {
    json j;
    j["kind"] = r.is_bool ? "boolean" : "weight";
    if (r.is_bool)
      j["value"] = r.bool_value;
    else
      j["value"] = r.weight_value.str();
    std::cout << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_transform(const std::string& kind, const std::string& program_path,
                  const std::string& answer, const std::string& out_path, const RunConfig& cfg) {
  std::string text = slurp(program_path);
  Program p = parse_program(text, {});
  Vocabulary input = p.strata.front().extensional;

  if (kind == "simind") {
    if (p.strata.size() != 1)
      throw ValidationError("simind collapses a single stratum; got " +
                            std::to_string(p.strata.size()));
    std::string ans = answer.empty() ? p.answer_symbol : answer;
    if (ans.empty()) throw ValidationError("simind needs an answer symbol (--answer)");
    TransformResult r = simultaneous_induction(p.strata[0], ans);
    std::ostringstream os;
    for (const auto& [name, info] : input.symbols())
      os << (info.kind == SymbolKind::Relation ? "rel " : "fun ") << name << "/" << info.arity
         << ";\n";
    os << pretty(*r.expr) << "\n";
    spill(out_path, os.str());
    for (const auto& w : r.warnings) std::cerr << "note: " << w << "\n";
    return 0;
  }

  std::vector<Stratum> strata;
  std::vector<std::string> warnings;
  for (const Stratum& st : p.strata) {
    TransformResult r = kind == "func2loose" ? functional_to_loose(st)
                                             : loose_to_functional(st, cfg.arity_cap);
    strata.push_back(r.program->strata.at(0));
    warnings.insert(warnings.end(), r.warnings.begin(), r.warnings.end());
  }
  Program out = rechain(std::move(strata), input, p.answer_symbol);
  spill(out_path, pretty(out));
  for (const auto& w : warnings) std::cerr << "note: " << w << "\n";
  return 0;
}

int cmd_builtin(const std::string& name, long depth) {
  std::map<std::string, long> params;
  if (depth >= 0) params["depth"] = depth;
  auto result = builtin_program(name, params);
  if (std::holds_alternative<Program>(result)) {
    std::cout << pretty(std::get<Program>(result));
  } else {
    const Expr& e = std::get<Expr>(result);
    Vocabulary vocab = name == "squaring" ? squaring_vocabulary() : fnn_vocabulary(true);
    for (const auto& [sym, info] : vocab.symbols())
      std::cout << (info.kind == SymbolKind::Relation ? "rel " : "fun ") << sym << "/"
                << info.arity << ";\n";
    std::cout << pretty(e) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wsumq: recursive queries over weighted structures and ReLU networks"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--arity-cap", cfg.arity_cap,
                 "largest intensional arity a transformation may create")
      ->capture_default_str();
  app.add_option("--format", cfg.output_format, "output format: json or text")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  app.add_flag("--trace", cfg.trace_enabled, "print per-round fixpoint deltas to stderr");
  std::string mode_str = "functional";
  app.add_option("--mode", mode_str, "fixpoint semantics: functional or loose")
      ->check(CLI::IsMember({"functional", "loose"}));

  auto* parse_cmd = app.add_subcommand("parse", "parse and validate a .wsq file");
  std::string parse_file, parse_structure;
  parse_cmd->add_option("file", parse_file, "program or expression file")->required();
  parse_cmd->add_option("structure", parse_structure, "structure supplying the vocabulary");

  auto* check_cmd = app.add_subcommand("check", "static checks on a .wsq file");
  bool check_scalar = false;
  std::string check_file, check_structure;
  check_cmd->add_flag("--scalar", check_scalar, "scalar-fragment membership");
  check_cmd->add_option("file", check_file, "program or expression file")->required();
  check_cmd->add_option("structure", check_structure, "structure supplying the vocabulary");

  auto* run_cmd = app.add_subcommand("run", "run a program on a structure");
  std::string run_program_path, run_structure_path, run_answer;
  run_cmd->add_option("program", run_program_path, "program file")->required();
  run_cmd->add_option("structure", run_structure_path, "structure file")->required();
  run_cmd->add_option("--answer", run_answer, "answer symbol (overrides the file's)");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate an expression on a structure");
  std::string eval_expr_path, eval_structure_path, eval_bind;
  eval_cmd->add_option("expression", eval_expr_path, "expression file")->required();
  eval_cmd->add_option("structure", eval_structure_path, "structure file")->required();
  eval_cmd->add_option("--bind", eval_bind, "variable bindings x=elem,y=elem");

  auto* tf_cmd = app.add_subcommand("transform", "program transformations");
  std::string tf_kind, tf_program, tf_answer, tf_out;
  tf_cmd->add_option("--kind", tf_kind, "func2loose | loose2func | simind")
      ->required()
      ->check(CLI::IsMember({"func2loose", "loose2func", "simind"}));
  tf_cmd->add_option("program", tf_program, "program file")->required();
  tf_cmd->add_option("--answer", tf_answer, "answer symbol for simind");
  tf_cmd->add_option("-o,--output", tf_out, "output file (default stdout)");

  auto* builtin_cmd = app.add_subcommand("builtin", "print a builtin program or term");
  std::string builtin_name;
  long builtin_depth = -1;
  builtin_cmd->add_option("name", builtin_name, "builtin name")->required();
  builtin_cmd->add_option("--depth", builtin_depth, "depth for eval_depth_bounded");

  auto* fnn_cmd = app.add_subcommand("fnn", "feedforward network toolkit");
  fnn_cmd->require_subcommand(1);

  auto* fwd_cmd = fnn_cmd->add_subcommand("forward", "exact forward pass");
  std::string fwd_net, fwd_input;
  fwd_cmd->add_option("net", fwd_net, "network file")->required();
  fwd_cmd->add_option("--input", fwd_input, "comma-separated rational inputs")->required();

  auto* red_cmd = fnn_cmd->add_subcommand("reduce", "reduce a network");
  std::string red_net, red_out;
  red_cmd->add_option("net", red_net, "network file")->required();
  red_cmd->add_option("-o,--output", red_out, "output file (default stdout)");

  auto* enc_cmd = fnn_cmd->add_subcommand("encode", "encode as a weighted structure");
  std::string enc_net, enc_val, enc_out;
  enc_cmd->add_option("net", enc_net, "network file")->required();
  enc_cmd->add_option("--val", enc_val, "comma-separated input values");
  enc_cmd->add_option("-o,--output", enc_out, "output file (default stdout)");

  auto* ord_cmd = fnn_cmd->add_subcommand("order", "canonical node quasi-order");
  std::string ord_net;
  ord_cmd->add_option("net", ord_net, "network file")->required();

  auto* bnd_cmd = fnn_cmd->add_subcommand("bounded", "check P-bounded weights");
  std::string bnd_net, bnd_poly;
  bool bnd_reduced = false;
  bnd_cmd->add_option("net", bnd_net, "network file")->required();
  bnd_cmd->add_option("--poly", bnd_poly, "polynomial coefficients, highest degree first")
      ->required();
  bnd_cmd->add_flag("--reduced", bnd_reduced, "check the reduced network's weights");

  auto* spl_cmd = fnn_cmd->add_subcommand("split", "split natural-weight edges");
  std::string spl_net, spl_out;
  spl_cmd->add_option("net", spl_net, "network file")->required();
  spl_cmd->add_option("-o,--output", spl_out, "output file (default stdout)");

  auto* sat_cmd = fnn_cmd->add_subcommand("gadget-3sat", "satisfiability gadget from DIMACS CNF");
  std::string sat_cnf, sat_out;
  sat_cmd->add_option("cnf", sat_cnf, "DIMACS CNF file")->required();
  sat_cmd->add_option("-o,--output", sat_out, "output file (default stdout)");

  auto* bits_cmd = fnn_cmd->add_subcommand("gadget-split", "bit-extraction network");
  int bits_n = 0;
  std::string bits_out;
  bits_cmd->add_option("--bits", bits_n, "number of extracted bits")->required();
  bits_cmd->add_option("-o,--output", bits_out, "output file (default stdout)");

  for (CLI::App* sub : app.get_subcommands(nullptr)) {
    sub->fallthrough();
    for (CLI::App* nested : sub->get_subcommands(nullptr)) nested->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.mode = mode_str == "loose" ? Mode::Loose : Mode::Functional;

  try {
    if (*parse_cmd) return cmd_parse(parse_file, parse_structure);
    if (*check_cmd) {
      if (!check_scalar) throw Error("check: nothing to do (use --scalar)");
      return cmd_check_scalar(check_file, check_structure);
    }
    if (*run_cmd) return cmd_run(run_program_path, run_structure_path, run_answer, cfg);
    if (*eval_cmd) return cmd_eval(eval_expr_path, eval_structure_path, eval_bind, cfg);
    if (*tf_cmd) return cmd_transform(tf_kind, tf_program, tf_answer, tf_out, cfg);
    if (*builtin_cmd) return cmd_builtin(builtin_name, builtin_depth);
    if (*fwd_cmd) {
      Fnn net = fnn_from_json(slurp(fwd_net));
      auto outputs = forward(net, parse_rational_list(fwd_input));
      json arr = json::array();
      for (const auto& v : outputs) arr.push_back(rational_str(v));
      std::cout << json{{"outputs", arr}}.dump(2) << "\n";
      return 0;
    }
    if (*red_cmd) {
      Reduction r = reduce(fnn_from_json(slurp(red_net)));
      spill(red_out, fnn_to_json(r.net));
      return 0;
    }
    if (*enc_cmd) {
      Fnn net = fnn_from_json(slurp(enc_net));
      std::optional<std::vector<mpq_class>> val;
      if (!enc_val.empty()) val = parse_rational_list(enc_val);
      spill(enc_out, structure_to_json(to_weighted_structure(net, val)));
      return 0;
    }
    if (*ord_cmd) {
      auto order = canonical_order(fnn_from_json(slurp(ord_net)));
      json arr = json::array();
      for (const auto& cls : order) arr.push_back(cls);
      std::cout << json{{"order", arr}}.dump(2) << "\n";
      return 0;
    }
    if (*bnd_cmd) {
      std::vector<unsigned long> poly;
      std::stringstream ss(bnd_poly);
      std::string item;
      while (std::getline(ss, item, ',')) poly.push_back(std::stoul(item));
      BoundCheck r = check_p_bounded(fnn_from_json(slurp(bnd_net)), poly, bnd_reduced);
      json j;
      j["bounded"] = r.ok;
      if (!r.ok) {
        j["witness"] = r.witness_location;
        j["value"] = rational_str(r.witness);
      }
      std::cout << j.dump(2) << "\n";
      return r.ok ? 0 : 1;
    }
    if (*spl_cmd) {
      spill(spl_out, fnn_to_json(split_edges(fnn_from_json(slurp(spl_net)))));
      return 0;
    }
    if (*sat_cmd) {
      spill(sat_out, fnn_to_json(gen_3sat_network(parse_dimacs(slurp(sat_cnf)))));
      return 0;
    }
    if (*bits_cmd) {
      spill(bits_out, fnn_to_json(gen_split_network(bits_n)));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "wsumq: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
