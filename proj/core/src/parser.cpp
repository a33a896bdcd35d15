#include "wsum/parser.hpp"

#include <cctype>
#include <optional>

#include "wsum/errors.hpp"

namespace wsum {

namespace {

enum class Tok {
  Ident, Number, Rational,
  LParen, RParen, Comma, Colon, Semicolon, SlashSep,
  Arrow, Implies, Le, Lt, Ge, Gt, Eq, Neq, Bang, Amp, Pipe,
  Plus, Minus, Star, Slash, StratSep, End,
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string text) { out.push_back({k, std::move(text), line, col}); };

  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    int start_col = col;
    auto advance = [&](std::size_t n) {
      i += n;
      col += static_cast<int>(n);
    };
    auto tok = [&](Tok k, std::size_t n) {
      out.push_back({k, src.substr(i, n), line, start_col});
      advance(n);
    };

    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(src[j])) ++j;
      out.push_back({Tok::Ident, src.substr(i, j - i), line, start_col});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      // "p/q" with no spaces lexes as one rational literal
      if (j < src.size() && src[j] == '/' && j + 1 < src.size() &&
          std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        std::size_t k = j + 1;
        while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
        out.push_back({Tok::Rational, src.substr(i, k - i), line, start_col});
        advance(k - i);
      } else {
        out.push_back({Tok::Number, src.substr(i, j - i), line, start_col});
        advance(j - i);
      }
      continue;
    }
    switch (c) {
      case '(': tok(Tok::LParen, 1); break;
      case ')': tok(Tok::RParen, 1); break;
      case ',': tok(Tok::Comma, 1); break;
      case ':': tok(Tok::Colon, 1); break;
      case ';': tok(Tok::Semicolon, 1); break;
      case '&': tok(Tok::Amp, 1); break;
      case '|': tok(Tok::Pipe, 1); break;
      case '+': tok(Tok::Plus, 1); break;
      case '*': tok(Tok::Star, 1); break;
      case '/': tok(Tok::Slash, 1); break;
      case '=': tok(Tok::Eq, 1); break;
      case '!':
        if (i + 1 < src.size() && src[i + 1] == '=') tok(Tok::Neq, 2);
        else tok(Tok::Bang, 1);
        break;
      case '<':
        if (i + 1 < src.size() && src[i + 1] == '-') tok(Tok::Arrow, 2);
        else if (i + 1 < src.size() && src[i + 1] == '=') tok(Tok::Le, 2);
        else tok(Tok::Lt, 1);
        break;
      case '>':
        if (i + 1 < src.size() && src[i + 1] == '=') tok(Tok::Ge, 2);
        else tok(Tok::Gt, 1);
        break;
      case '-':
        if (i + 2 < src.size() && src[i + 1] == '-' && src[i + 2] == '-') tok(Tok::StratSep, 3);
        else if (i + 1 < src.size() && src[i + 1] == '>') tok(Tok::Implies, 2);
        else tok(Tok::Minus, 1);
        break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line, start_col);
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

const char* const kKeywords[] = {"if", "then", "else", "sum", "avg", "uniq", "ifp", "at",
                                 "exists", "forall", "rel", "fun", "answer", "bot", "relu"};

bool is_keyword(const std::string& s) {
  for (const char* k : kKeywords)
    if (s == k) return true;
  return false;
}

class Parser {
 public:
  Parser(std::string text, Vocabulary vocab)
      : tokens_(lex(text)), symbols_(std::move(vocab)) {}

  Program parse_program_text() {
    parse_header();
    std::vector<std::vector<Rule>> strata_rules;
    while (true) {
      std::vector<Rule> rules;
      while (peek().kind == Tok::Ident && !is_keyword(peek().text)) rules.push_back(parse_rule());
      if (rules.empty()) fail("a rule");
      strata_rules.push_back(std::move(rules));
      if (peek().kind == Tok::StratSep) {
        next();
        continue;
      }
      expect(Tok::End, "end of program");
      break;
    }
    for (const auto& rules : strata_rules)
      for (const auto& r : rules) rule_heads_.insert(r.head);

    Program p;
    p.answer_symbol = answer_;
    Vocabulary accumulated = effective_input_vocab();
    for (auto& rules : strata_rules) {
      Stratum st;
      for (const auto& r : rules) {
        if (accumulated.contains(r.head))
          throw ValidationError("symbol " + r.head +
                                " already defined in an earlier stratum or input");
        const SymbolInfo& info = symbols_.at(r.head);
        if (!st.intensional.contains(r.head)) st.intensional.add(r.head, info.kind, info.arity);
      }
      st.extensional = accumulated;
      st.rules = std::move(rules);
      accumulated.merge(st.intensional);
      p.strata.push_back(std::move(st));
    }
    validate_program(p, effective_input_vocab());
    return p;
  }

  Expr parse_expression_text() {
    parse_header();
    if (!answer_.empty()) throw ValidationError("answer declaration in an expression file");
    // A formula parse subsumes term comparisons; fall back to a bare term.
    std::size_t save = pos_;
    try {
      FormulaPtr f = parse_formula();
      expect(Tok::End, "end of expression");
      Expr e = f;
      symbol_partition(e);
      return e;
    } catch (const Error&) {
      pos_ = save;
    }
    TermPtr t = parse_term();
    expect(Tok::End, "end of expression");
    Expr e = t;
    symbol_partition(e);
    return e;
  }

  bool has_toplevel_rule() {
    parse_header();
    // A rule head is IDENT [ '(' vars ')' ] '<-' at the top level.
    if (peek().kind != Tok::Ident || is_keyword(peek().text)) return false;
    std::size_t j = pos_ + 1;
    if (tokens_[j].kind == Tok::Arrow) return true;
    if (tokens_[j].kind != Tok::LParen) return false;
    while (tokens_[j].kind != Tok::End && tokens_[j].kind != Tok::RParen) ++j;
    return tokens_[j].kind == Tok::RParen && tokens_[j + 1].kind == Tok::Arrow;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Vocabulary symbols_;                      // input vocab + header declarations
  std::set<std::string> header_decls_;      // names declared in this file's header
  std::set<std::string> rule_heads_;        // names used as rule heads so far
  std::map<std::string, int> ifp_scope_;    // ifp-bound function name -> arity
  std::string answer_;

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() { return tokens_[pos_++]; }
  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    throw ParseError("expected " + expected + ", found '" + (t.kind == Tok::End ? "<eof>" : t.text) + "'",
                     t.line, t.col);
  }
  const Token& expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) fail(what);
    return next();
  }
  bool accept(Tok kind) {
    if (peek().kind == kind) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool at_ident(const char* kw) const { return peek().kind == Tok::Ident && peek().text == kw; }
  bool accept_ident(const char* kw) {
    if (at_ident(kw)) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string parse_name(const char* what) {
    if (peek().kind != Tok::Ident) fail(what);
    if (is_keyword(peek().text))
      throw ParseError("keyword '" + peek().text + "' cannot be used as a name", peek().line,
                       peek().col);
    return next().text;
  }

  void parse_header() {
    while (true) {
      if (at_ident("rel") || at_ident("fun")) {
        bool is_rel = peek().text == "rel";
        next();
        std::string name = parse_name("symbol name");
        expect(Tok::Slash, "'/' and arity");
        const Token& n = expect(Tok::Number, "arity");
        int arity = std::stoi(n.text);
        SymbolKind kind = is_rel ? SymbolKind::Relation : SymbolKind::WeightFunction;
        if (const SymbolInfo* existing = symbols_.find(name)) {
          if (existing->kind != kind || existing->arity != arity)
            throw ValidationError("symbol " + name + " redeclared with a different signature");
        } else {
          symbols_.add(name, kind, arity);
        }
        header_decls_.insert(name);
        expect(Tok::Semicolon, "';'");
      } else if (at_ident("answer")) {
        next();
        answer_ = parse_name("answer symbol");
        expect(Tok::Semicolon, "';'");
      } else {
        break;
      }
    }
  }

  Vocabulary effective_input_vocab() const {
    // Input symbols plus header declarations that never become rule heads.
    Vocabulary v;
    for (const auto& [name, info] : symbols_.symbols())
      if (!rule_heads_.count(name)) v.add(name, info.kind, info.arity);
    return v;
  }

  Rule parse_rule() {
    Rule r;
    r.head = parse_name("rule head");
    const SymbolInfo* info = symbols_.find(r.head);
    if (!info)
      throw ValidationError("rule head " + r.head + " is not declared (add 'rel " + r.head +
                            "/k;' or 'fun " + r.head + "/k;')");
    if (peek().kind == Tok::LParen) {
      next();
      if (!accept(Tok::RParen)) {
        r.head_vars.push_back(parse_name("variable"));
        while (accept(Tok::Comma)) r.head_vars.push_back(parse_name("variable"));
        expect(Tok::RParen, "')'");
      }
    }
    expect(Tok::Arrow, "'<-'");
    if (info->kind == SymbolKind::Relation)
      r.body_formula = parse_formula();
    else
      r.body_term = parse_term();
    expect(Tok::Semicolon, "';' after rule body");
    return r;
  }

  bool is_relation_name(const std::string& name) const {
    const SymbolInfo* info = symbols_.find(name);
    return info && info->kind == SymbolKind::Relation && !ifp_scope_.count(name);
  }

  bool is_function_name(const std::string& name) const {
    if (ifp_scope_.count(name)) return true;
    const SymbolInfo* info = symbols_.find(name);
    return info && info->kind == SymbolKind::WeightFunction;
  }

  int function_arity(const std::string& name) const {
    auto it = ifp_scope_.find(name);
    if (it != ifp_scope_.end()) return it->second;
    return symbols_.at(name).arity;
  }

  // ---- formulas ----

  FormulaPtr parse_formula() { return parse_implies(); }

  FormulaPtr parse_implies() {
    FormulaPtr lhs = parse_or();
    if (accept(Tok::Implies)) return f_implies(lhs, parse_implies());
    return lhs;
  }

  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (accept(Tok::Pipe)) f = f_or(f, parse_and());
    return f;
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_unary_formula();
    while (accept(Tok::Amp)) f = f_and(f, parse_unary_formula());
    return f;
  }

  FormulaPtr parse_unary_formula() {
    if (accept(Tok::Bang)) return f_not(parse_unary_formula());
    if (at_ident("exists") || at_ident("forall")) {
      QuantKind q = peek().text == "exists" ? QuantKind::Exists : QuantKind::Forall;
      next();
      std::string var = parse_name("quantified variable");
      return f_quant(q, var, parse_implies());  // maximal scope
    }
    return parse_atom_formula();
  }

  static bool starts_term_continuation(Tok k) {
    switch (k) {
      case Tok::Le: case Tok::Lt: case Tok::Ge: case Tok::Gt: case Tok::Eq: case Tok::Neq:
      case Tok::Plus: case Tok::Minus: case Tok::Star: case Tok::Slash:
        return true;
      default:
        return false;
    }
  }

  FormulaPtr parse_atom_formula() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      // Could open a parenthesized formula or the left term of a comparison.
      std::size_t save = pos_;
      try {
        next();
        FormulaPtr f = parse_formula();
        expect(Tok::RParen, "')'");
        if (starts_term_continuation(peek().kind)) {
          pos_ = save;  // it was a parenthesized term after all
        } else {
          return f;
        }
      } catch (const ParseError&) {
        pos_ = save;
      }
      return parse_comparison();
    }
    if (t.kind == Tok::Ident && !is_keyword(t.text)) {
      if (is_relation_name(t.text)) {
        next();
        std::vector<std::string> args;
        if (peek().kind == Tok::LParen) {
          next();
          if (!accept(Tok::RParen)) {
            args.push_back(parse_name("variable"));
            while (accept(Tok::Comma)) args.push_back(parse_name("variable"));
            expect(Tok::RParen, "')'");
          }
        }
        const SymbolInfo& info = symbols_.at(t.text);
        if (static_cast<int>(args.size()) != info.arity)
          throw ValidationError("relation " + t.text + " used with arity " +
                                std::to_string(args.size()) + ", declared " +
                                std::to_string(info.arity));
        return f_rel(t.text, std::move(args));
      }
      if (!is_function_name(t.text)) {
        // A bare variable; only = and != apply to element variables.
        std::string x = parse_name("variable");
        if (accept(Tok::Eq)) return f_vareq(x, parse_name("variable"));
        if (accept(Tok::Neq)) return f_not(f_vareq(x, parse_name("variable")));
        fail("'=' or '!=' after variable");
      }
    }
    return parse_comparison();
  }

  FormulaPtr parse_comparison() {
    TermPtr lhs = parse_term();
    switch (next().kind) {
      case Tok::Le: return f_leq(lhs, parse_term());
      case Tok::Lt: return f_lt(lhs, parse_term());
      case Tok::Ge: return f_geq(lhs, parse_term());
      case Tok::Gt: return f_lt(parse_term(), lhs);
      case Tok::Eq: return f_eq(lhs, parse_term());
      case Tok::Neq: return f_neq(lhs, parse_term());
      default:
        --pos_;
        fail("a comparison operator");
    }
  }

  // ---- terms ----

  TermPtr parse_term() {
    TermPtr t = parse_muldiv();
    while (true) {
      if (accept(Tok::Plus)) t = t_add(t, parse_muldiv());
      else if (accept(Tok::Minus)) t = t_sub(t, parse_muldiv());
      else return t;
    }
  }

  TermPtr parse_muldiv() {
    TermPtr t = parse_primary_term();
    while (true) {
      if (accept(Tok::Star)) t = t_mul(t, parse_primary_term());
      else if (accept(Tok::Slash)) t = t_div(t, parse_primary_term());
      else return t;
    }
  }

  std::vector<std::string> parse_var_tuple() {
    expect(Tok::LParen, "'('");
    std::vector<std::string> vars;
    if (!accept(Tok::RParen)) {
      vars.push_back(parse_name("variable"));
      while (accept(Tok::Comma)) vars.push_back(parse_name("variable"));
      expect(Tok::RParen, "')'");
    }
    return vars;
  }

  TermPtr parse_primary_term() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number:
      case Tok::Rational:
        next();
        return t_const(LiftedRational::parse(t.text));
      case Tok::Minus: {
        next();
        if (peek().kind != Tok::Number && peek().kind != Tok::Rational)
          fail("a numeric literal after unary '-'");
        const Token& lit = next();
        return t_const(LiftedRational::parse("-" + lit.text));
      }
      case Tok::LParen: {
        next();
        TermPtr inner = parse_term();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident:
        break;
      default:
        fail("a term");
    }

    const std::string& word = t.text;
    if (word == "bot") {
      next();
      return t_bot();
    }
    if (word == "if") {
      next();
      FormulaPtr cond = parse_formula();
      if (!accept_ident("then")) fail("'then'");
      TermPtr then_t = parse_term();
      if (!accept_ident("else")) fail("'else'");
      return t_ite(cond, then_t, parse_term());
    }
    if (word == "sum" || word == "avg") {
      bool is_sum = word == "sum";
      next();
      auto vars = parse_var_tuple();
      expect(Tok::Colon, "':'");
      FormulaPtr guard = parse_formula();
      TermPtr body = parse_primary_term();
      return is_sum ? t_sum(std::move(vars), guard, body) : t_avg(std::move(vars), guard, body);
    }
    if (word == "uniq") {
      next();
      auto vars = parse_var_tuple();
      if (vars.size() != 1) throw ValidationError("uniq binds exactly one variable");
      expect(Tok::Colon, "':'");
      FormulaPtr guard = parse_formula();
      TermPtr body = parse_primary_term();
      return t_uniq(vars[0], guard, body);
    }
    if (word == "relu") {
      next();
      expect(Tok::LParen, "'('");
      TermPtr inner = parse_term();
      expect(Tok::RParen, "')'");
      return t_relu(inner);
    }
    if (word == "ifp") {
      next();
      std::string fn = parse_name("function symbol");
      if (symbols_.contains(fn))
        throw ValidationError("ifp binds " + fn + " which is already declared");
      if (ifp_scope_.count(fn))
        throw ValidationError("intensional symbol " + fn + " bound twice");
      auto bound = parse_var_tuple();
      std::set<std::string> distinct(bound.begin(), bound.end());
      if (distinct.size() != bound.size())
        throw ValidationError("ifp for " + fn + " has repeated bound variables");
      expect(Tok::Arrow, "'<-'");
      ifp_scope_[fn] = static_cast<int>(bound.size());
      TermPtr body = parse_term();
      ifp_scope_.erase(fn);
      if (!accept_ident("at")) fail("'at'");
      auto applied = parse_var_tuple();
      if (applied.size() != bound.size())
        throw ValidationError("ifp for " + fn + " applies " + std::to_string(applied.size()) +
                              " variables, bound " + std::to_string(bound.size()));
      return t_ifp(fn, std::move(bound), body, std::move(applied));
    }
    if (is_keyword(word)) fail("a term");

    // Weight-function application (or a bare nullary function).
    if (is_function_name(word)) {
      next();
      std::vector<std::string> args;
      if (peek().kind == Tok::LParen) {
        next();
        if (!accept(Tok::RParen)) {
          args.push_back(parse_name("variable"));
          while (accept(Tok::Comma)) args.push_back(parse_name("variable"));
          expect(Tok::RParen, "')'");
        }
      }
      int arity = function_arity(word);
      if (static_cast<int>(args.size()) != arity)
        throw ValidationError("weight function " + word + " used with arity " +
                              std::to_string(args.size()) + ", declared " + std::to_string(arity));
      return t_fun(word, std::move(args));
    }
    if (is_relation_name(word))
      throw ValidationError("relation " + word + " used as a weight function");
    throw ParseError("unknown symbol or misplaced variable '" + word + "' in a term", t.line,
                     t.col);
  }
};

}  // namespace

Program parse_program(const std::string& text, const Vocabulary& input_vocab) {
  Parser p(text, input_vocab);
  return p.parse_program_text();
}

Expr parse_expression(const std::string& text, const Vocabulary& vocab) {
  Parser p(text, vocab);
  return p.parse_expression_text();
}

bool looks_like_program(const std::string& text) {
  Parser p(text, Vocabulary{});
  try {
    return p.has_toplevel_rule();
  } catch (const Error&) {
    return false;
  }
}

}  // namespace wsum
