#include "qtori/qexpr.hpp"

#include <cctype>
#include <charconv>
#include <numbers>
#include <utility>

#include "qtori/errors.hpp"

namespace qtori::qexpr {
namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t offset;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t pos = 0;
  while (pos < src.size()) {
    const unsigned char c = static_cast<unsigned char>(src[pos]);
    if (std::isspace(c)) {
      ++pos;
      continue;
    }
    const std::size_t start = pos;
    if (std::isdigit(c) || c == '.') {
      bool seen_dot = false;
      bool seen_digit = false;
      while (pos < src.size()) {
        const unsigned char d = static_cast<unsigned char>(src[pos]);
        if (std::isdigit(d)) {
          seen_digit = true;
        } else if (d == '.' && !seen_dot) {
          seen_dot = true;
        } else {
          break;
        }
        ++pos;
      }
      if (!seen_digit) throw SyntaxError(start, "malformed number");
      out.push_back({Tok::Number, src.substr(start, pos - start), start});
      continue;
    }
    if (std::isalpha(c)) {
      while (pos < src.size() && std::isalpha(static_cast<unsigned char>(src[pos]))) ++pos;
      const auto word = src.substr(start, pos - start);
      if (word != "pi" && word != "e" && word != "i" && word != "j" && word != "k" && word != "exp") {
        throw SyntaxError(start, "unknown identifier '" + std::string(word) + "'");
      }
      out.push_back({Tok::Ident, word, start});
      continue;
    }
    Tok kind;
    switch (c) {
      case '+': kind = Tok::Plus; break;
      case '-': kind = Tok::Minus; break;
      case '*': kind = Tok::Star; break;
      case '/': kind = Tok::Slash; break;
      case '^': kind = Tok::Caret; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      default:
        throw SyntaxError(start, std::string("unexpected character '") + src[pos] + "'");
    }
    out.push_back({kind, src.substr(start, 1), start});
    ++pos;
  }
  out.push_back({Tok::End, {}, src.size()});
  return out;
}

Expr leaf(Expr::Kind kind, std::size_t offset) {
  Expr e;
  e.kind = kind;
  e.offset = offset;
  return e;
}

Expr node(Expr::Kind kind, std::size_t offset, std::vector<Expr> args) {
  Expr e = leaf(kind, offset);
  e.args = std::move(args);
  return e;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  Expr run() {
    Expr e = expr();
    if (peek().kind != Tok::End) throw SyntaxError(peek().offset, "unexpected '" + std::string(peek().text) + "'");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }

  const Token& take() {
    last_ = toks_[pos_].kind;
    return toks_[pos_++];
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      throw SyntaxError(peek().offset, std::string("expected ") + what);
    }
    take();
  }

  bool implicit_product_follows() const {
    if (last_ != Tok::Number && last_ != Tok::RParen) return false;
    const Token& t = peek();
    if (t.kind == Tok::LParen) return true;
    return t.kind == Tok::Ident && (t.text == "i" || t.text == "j" || t.text == "k");
  }

  Expr expr() {
    Expr lhs = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Token& op = take();
      Expr rhs = term();
      lhs = node(op.kind == Tok::Plus ? Expr::Kind::Add : Expr::Kind::Sub, op.offset,
                 {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      Expr::Kind kind;
      std::size_t offset = peek().offset;
      if (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
        kind = take().kind == Tok::Star ? Expr::Kind::Mul : Expr::Kind::Div;
      } else if (implicit_product_follows()) {
        kind = Expr::Kind::Mul;
      } else {
        break;
      }
      Expr rhs = factor();
      lhs = node(kind, offset, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  Expr factor() {
    if (peek().kind == Tok::Minus) {
      const std::size_t offset = take().offset;
      return node(Expr::Kind::Neg, offset, {factor()});
    }
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (peek().kind == Tok::Caret) {
      const std::size_t offset = take().offset;
      Expr exponent = factor();
      return node(Expr::Kind::Pow, offset, {std::move(base), std::move(exponent)});
    }
    return base;
  }

  Expr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        take();
        Expr e = leaf(Expr::Kind::Number, t.offset);
        e.literal = std::string(t.text);
        const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), e.value);
        if (res.ec != std::errc()) throw SyntaxError(t.offset, "malformed number");
        return e;
      }
      case Tok::Ident: {
        take();
        if (t.text == "exp") {
          expect(Tok::LParen, "'(' after exp");
          Expr arg = expr();
          expect(Tok::RParen, "')'");
          return node(Expr::Kind::Exp, t.offset, {std::move(arg)});
        }
        if (peek().kind == Tok::LParen) {
          throw SyntaxError(peek().offset, "'" + std::string(t.text) + "' cannot be applied like a function");
        }
        if (t.text == "pi") return leaf(Expr::Kind::Pi, t.offset);
        if (t.text == "e") return leaf(Expr::Kind::Euler, t.offset);
        if (t.text == "i") return leaf(Expr::Kind::UnitI, t.offset);
        if (t.text == "j") return leaf(Expr::Kind::UnitJ, t.offset);
        return leaf(Expr::Kind::UnitK, t.offset);
      }
      case Tok::LParen: {
        take();
        Expr inner = expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::End:
        throw SyntaxError(t.offset, "unexpected end of input");
      default:
        throw SyntaxError(t.offset, "unexpected '" + std::string(t.text) + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Tok last_ = Tok::End;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

Quaternion eval(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Number: return Quaternion(e.value);
    case K::Pi: return Quaternion(std::numbers::pi);
    case K::Euler: return Quaternion(std::numbers::e);
    case K::UnitI: return Quaternion::i();
    case K::UnitJ: return Quaternion::j();
    case K::UnitK: return Quaternion::k();
    case K::Neg: return -eval(e.args[0]);
    case K::Add: return eval(e.args[0]) + eval(e.args[1]);
    case K::Sub: return eval(e.args[0]) - eval(e.args[1]);
    case K::Mul: return eval(e.args[0]) * eval(e.args[1]);
    case K::Div: return eval(e.args[0]) / eval(e.args[1]);
    case K::Exp: return quat_exp(eval(e.args[0]));
    case K::Pow:
      if (e.args[0].kind != K::Euler) throw ExponentBaseUnsupported();
      return quat_exp(eval(e.args[1]));
  }
  return {};
}

std::string to_string(const Expr& e) {
  using K = Expr::Kind;
  auto bin = [&](const char* op) {
    return "(" + to_string(e.args[0]) + op + to_string(e.args[1]) + ")";
  };
  switch (e.kind) {
    case K::Number: return e.literal;
    case K::Pi: return "pi";
    case K::Euler: return "e";
    case K::UnitI: return "i";
    case K::UnitJ: return "j";
    case K::UnitK: return "k";
    case K::Neg: return "(-" + to_string(e.args[0]) + ")";
    case K::Add: return bin("+");
    case K::Sub: return bin("-");
    case K::Mul: return bin("*");
    case K::Div: return bin("/");
    case K::Exp: return "exp(" + to_string(e.args[0]) + ")";
    case K::Pow: return "(" + to_string(e.args[0]) + "^" + to_string(e.args[1]) + ")";
  }
  return {};
}

}  // namespace qtori::qexpr
