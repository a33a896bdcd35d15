#pragma once

#include <string>

#include "wsum/ast.hpp"
#include "wsum/structure.hpp"

namespace wsum {

// Concrete syntax (".wsq" files, UTF-8, '#' line comments):
//
//   header:    rel R/2;  fun F/1;  answer S;        (declarations)
//   rules:     Head(x, y) <- body;                  (body kind follows head)
//   strata:    separated by a line of ---
//   formulas:  x = y, R(x), t1 <= t2 (also < > >= = != on terms),
//              !f, f & f, f | f, f -> f, exists x f, forall x f
//   terms:     rationals (5, -5, 1/2), bot, F(x), t + t, t - t, t * t,
//              t / t, (if f then t else t), sum (x, y): (f) (t),
//              avg (...): (f) (t), uniq (x): (f) (t),
//              ifp F(x) <- (t) at (u), relu(t)
//
// Quantifiers take maximal scope; parenthesize to delimit. Binder guards
// and bodies are conventionally parenthesized; the body of sum/avg/uniq
// must be a single (possibly parenthesized) primary term. A rational
// literal like 1/2 must be written without spaces; spaced '/' is division.

// Parses a stratified program. Symbols not declared in the file header are
// resolved against input_vocab; header declarations that never serve as a
// rule head are treated as additional extensional symbols.
Program parse_program(const std::string& text, const Vocabulary& input_vocab);

// Parses a standalone expression (formula or weight term); ifp terms with
// arbitrary nesting are allowed. A declaration header is permitted.
Expr parse_expression(const std::string& text, const Vocabulary& vocab);

// True if the text looks like a program (has a rule outside any ifp term)
// rather than a bare expression.
bool looks_like_program(const std::string& text);

}  // namespace wsum
