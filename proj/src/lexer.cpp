#include <cctype>
#include <map>

#include "lwlite/token.hpp"

namespace lwlite {

std::pair<int, int> line_col(const std::string& source, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < source.size(); ++i) {
    if (source[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::string render_diagnostic(const std::string& source, const Diagnostic& d) {
  auto [line, col] = line_col(source, d.span.begin);
  std::string sev = d.severity == Severity::Error ? "error" : "warning";
  return std::to_string(line) + ":" + std::to_string(col) + ": " + sev + ": " + d.message;
}

namespace {

const std::map<std::string, Tok> keywords = {
    {"let", Tok::KwLet},         {"rec", Tok::KwRec},     {"over", Tok::KwOver},
    {"overload", Tok::KwOverload}, {"in", Tok::KwIn},     {"fun", Tok::KwFun},
    {"match", Tok::KwMatch},     {"with", Tok::KwWith},   {"inject", Tok::KwInject},
    {"eject", Tok::KwEject},     {"true", Tok::KwTrue},   {"false", Tok::KwFalse},
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

struct Lexer {
  const std::string& src;
  bool mangled;
  std::size_t pos = 0;
  std::vector<Token> out;

  char peek(std::size_t ahead = 0) const {
    return pos + ahead < src.size() ? src[pos + ahead] : '\0';
  }

  void push(Tok kind, std::size_t begin, std::string text = "", long long value = 0) {
    out.push_back({kind, std::move(text), value, {begin, pos}});
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t at) {
    throw lex_error(msg, {at, at + 1});
  }

  void lex_string(std::size_t begin) {
    std::string value;
    ++pos;  // opening quote
    while (true) {
      if (pos >= src.size()) fail("unterminated string literal", begin);
      char c = src[pos];
      if (c == '"') {
        ++pos;
        break;
      }
      if (c == '\\') {
        char e = peek(1);
        if (e == '"') value += '"';
        else if (e == '\\') value += '\\';
        else if (e == 'n') value += '\n';
        else if (e == 't') value += '\t';
        else fail("unknown escape sequence in string literal", pos);
        pos += 2;
        continue;
      }
      value += c;
      ++pos;
    }
    push(Tok::String, begin, value);
  }

  // %123 / $123 / @2 glued after an identifier or ')'
  bool lex_mangled_suffix() {
    if (!mangled) return false;
    char c = peek();
    if (c != '%' && c != '$' && c != '@') return false;
    if (out.empty()) return false;
    const Token& prev = out.back();
    bool glued = prev.span.end == pos &&
                 (prev.kind == Tok::Ident || prev.kind == Tok::RParen ||
                  prev.kind == Tok::Implicit);
    if (!glued || !std::isdigit(static_cast<unsigned char>(peek(1)))) return false;
    std::size_t begin = pos;
    ++pos;
    std::string digits;
    while (std::isdigit(static_cast<unsigned char>(peek()))) digits += src[pos++];
    Tok kind = c == '%' ? Tok::PercentSuffix : c == '$' ? Tok::DollarSuffix : Tok::AtSuffix;
    push(kind, begin, digits);
    return true;
  }

  void run() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos;
        continue;
      }
      if (c == '/' && peek(1) == '/') {
        while (pos < src.size() && src[pos] != '\n') ++pos;
        continue;
      }
      std::size_t begin = pos;
      if (std::isdigit(static_cast<unsigned char>(c))) {
        long long v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
          v = v * 10 + (src[pos] - '0');
          ++pos;
        }
        push(Tok::Int, begin, src.substr(begin, pos - begin), v);
        continue;
      }
      if (ident_start(c)) {
        ++pos;
        while (ident_char(peek())) ++pos;
        std::string word = src.substr(begin, pos - begin);
        auto kw = keywords.find(word);
        if (kw != keywords.end()) push(kw->second, begin, word);
        else push(Tok::Ident, begin, word);
        continue;
      }
      if (c == '"') {
        lex_string(begin);
        continue;
      }
      if (c == '\'') {
        ++pos;
        if (!ident_start(peek())) fail("expected type variable name after '", begin);
        std::size_t nb = pos;
        ++pos;
        while (ident_char(peek())) ++pos;
        push(Tok::TyVar, begin, src.substr(nb, pos - nb));
        continue;
      }
      if (c == '?') {
        // implicit identifier: ?name, or ?(+) for operator bases
        if (ident_start(peek(1))) {
          ++pos;
          std::size_t nb = pos;
          ++pos;
          while (ident_char(peek())) ++pos;
          push(Tok::Implicit, begin, src.substr(nb, pos - nb));
          continue;
        }
        if (peek(1) == '(') {
          std::size_t save = pos;
          pos += 2;
          while (peek() == ' ') ++pos;
          std::string op;
          while (pos < src.size() && std::string("+-*^=<>|&:").find(src[pos]) != std::string::npos)
            op += src[pos++];
          while (peek() == ' ') ++pos;
          if (!op.empty() && peek() == ')') {
            ++pos;
            push(Tok::Implicit, begin, op);
            continue;
          }
          pos = save;
        }
        fail("stray '?'", begin);
      }
      if (lex_mangled_suffix()) continue;
      switch (c) {
        case '(': ++pos; push(Tok::LParen, begin); continue;
        case ')': ++pos; push(Tok::RParen, begin); continue;
        case '{': ++pos; push(Tok::LBrace, begin); continue;
        case '}': ++pos; push(Tok::RBrace, begin); continue;
        case '[': ++pos; push(Tok::LBracket, begin); continue;
        case ']': ++pos; push(Tok::RBracket, begin); continue;
        case '.': ++pos; push(Tok::Dot, begin); continue;
        case ';': ++pos; push(Tok::Semi, begin); continue;
        case ',': fail("unexpected ','", begin);
        default: break;
      }
      if (c == '-' && peek(1) == '>') {
        pos += 2;
        push(Tok::Arrow, begin);
        continue;
      }
      if (c == '=' && peek(1) == '>') {
        pos += 2;
        push(Tok::FatArrow, begin);
        continue;
      }
      if (c == ':' && peek(1) == ':') {
        pos += 2;
        push(Tok::Op, begin, "::");
        continue;
      }
      if (c == ':') {
        ++pos;
        push(Tok::Colon, begin);
        continue;
      }
      if (c == '<' && peek(1) == '=') {
        pos += 2;
        push(Tok::Op, begin, "<=");
        continue;
      }
      if (c == '|' && peek(1) == '|') {
        pos += 2;
        push(Tok::Op, begin, "||");
        continue;
      }
      if (c == '&' && peek(1) == '&') {
        pos += 2;
        push(Tok::Op, begin, "&&");
        continue;
      }
      if (c == '|') {
        ++pos;
        push(Tok::Pipe, begin);
        continue;
      }
      if (c == '+' || c == '-' || c == '*' || c == '^' || c == '=' || c == '<') {
        ++pos;
        push(Tok::Op, begin, std::string(1, c));
        continue;
      }
      if (c == '%' || c == '$' || c == '@')
        fail(std::string("character '") + c + "' is reserved for mangled names", begin);
      fail(std::string("unexpected character '") + c + "'", begin);
    }
    push(Tok::Eof, pos);
  }
};

}  // namespace

std::vector<Token> lex(const std::string& source, bool mangled) {
  Lexer lx{source, mangled, 0, {}};
  lx.run();
  return lx.out;
}

}  // namespace lwlite
