#ifndef LWLITE_TOKEN_HPP
#define LWLITE_TOKEN_HPP

#include <string>
#include <vector>

#include "lwlite/diag.hpp"

namespace lwlite {

enum class Tok {
  Ident,     // text = name
  TyVar,     // 'a   text = a
  Implicit,  // ?name  text = base name (possibly an operator in mangled mode)
  Int,
  String,    // text = decoded contents
  Op,        // + - * ^ = < <= || && ::   text = symbol
  KwLet,
  KwRec,
  KwOver,
  KwOverload,
  KwIn,
  KwFun,
  KwMatch,
  KwWith,
  KwInject,
  KwEject,
  KwTrue,
  KwFalse,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Arrow,     // ->
  FatArrow,  // =>
  Dot,
  Semi,
  Colon,
  Pipe,
  PercentSuffix,  // %123, mangled mode only, glued to previous token; text = digits
  DollarSuffix,   // $123, mangled mode only
  AtSuffix,       // @2, mangled mode only (selection occurrence index)
  Eof,
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  long long int_value = 0;
  Span span;
};

// mangled: accept %n / $n / @n suffix tokens and treat ?name as a plain
// identifier-shaped token (used when re-parsing emitted core).
std::vector<Token> lex(const std::string& source, bool mangled);

}  // namespace lwlite

#endif
