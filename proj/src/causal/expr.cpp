#include "caver/causal/model.hpp"

#include <cctype>

namespace caver::causal {

Expr Expr::var(std::string name) {
  return Expr(std::make_shared<Node>(Node{Op::VarRef, std::move(name), {}}));
}
Expr Expr::lit(std::string value) {
  return Expr(std::make_shared<Node>(Node{Op::Lit, std::move(value), {}}));
}
Expr Expr::eq(Expr a, Expr b) {
  return Expr(std::make_shared<Node>(Node{Op::Eq, {}, {std::move(a), std::move(b)}}));
}
Expr Expr::negation(Expr a) {
  return Expr(std::make_shared<Node>(Node{Op::Not, {}, {std::move(a)}}));
}
Expr Expr::conj(Expr a, Expr b) {
  return Expr(std::make_shared<Node>(Node{Op::And, {}, {std::move(a), std::move(b)}}));
}
Expr Expr::disj(Expr a, Expr b) {
  return Expr(std::make_shared<Node>(Node{Op::Or, {}, {std::move(a), std::move(b)}}));
}
Expr Expr::ite(Expr c, Expr a, Expr b) {
  return Expr(std::make_shared<Node>(Node{Op::Ite, {}, {std::move(c), std::move(a), std::move(b)}}));
}

void Expr::collect_vars(std::vector<std::string>& out) const {
  if (op() == Op::VarRef) {
    out.push_back(text());
    return;
  }
  for (int i = 0; i < arity(); ++i) child(i).collect_vars(out);
}

namespace {

int precedence(Expr::Op op) {
  switch (op) {
    case Expr::Op::Or: return 1;
    case Expr::Op::And: return 2;
    case Expr::Op::Not: return 3;
    case Expr::Op::Eq: return 4;
    default: return 5;
  }
}

bool plain_token(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return s != "ite";
}

void print(const Expr& e, int parent_prec, std::string& out) {
  int prec = precedence(e.op());
  switch (e.op()) {
    case Expr::Op::VarRef:
      out += e.text();
      return;
    case Expr::Op::Lit:
      if (plain_token(e.text())) {
        out += '\'';
        out += e.text();
        out += '\'';
      } else {
        out += '\'';
        for (char c : e.text()) {
          if (c == '\'' || c == '\\') out += '\\';
          out += c;
        }
        out += '\'';
      }
      return;
    case Expr::Op::Ite:
      out += "ite(";
      print(e.child(0), 0, out);
      out += ", ";
      print(e.child(1), 0, out);
      out += ", ";
      print(e.child(2), 0, out);
      out += ')';
      return;
    case Expr::Op::Not:
      out += '!';
      print(e.child(0), prec, out);
      return;
    case Expr::Op::Eq:
      if (parent_prec >= prec) out += '(';
      print(e.child(0), prec, out);
      out += " = ";
      print(e.child(1), prec, out);
      if (parent_prec >= prec) out += ')';
      return;
    case Expr::Op::And:
    case Expr::Op::Or: {
      bool paren = parent_prec > prec;
      if (paren) out += '(';
      print(e.child(0), prec - 1, out);
      out += e.op() == Expr::Op::And ? " & " : " | ";
      print(e.child(1), prec - 1, out);
      if (paren) out += ')';
      return;
    }
  }
}

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  explicit Parser(const std::string& t) : text(t) {}

  [[noreturn]] void err(const std::string& what) {
    fail(ErrorKind::SyntaxError,
         "expression \"" + text + "\": " + what + " at offset " + std::to_string(pos));
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (pos == start) err("expected identifier");
    return text.substr(start, pos - start);
  }

  std::string quoted() {
    ++pos;  // opening quote
    std::string out;
    while (pos < text.size() && text[pos] != '\'') {
      if (text[pos] == '\\' && pos + 1 < text.size()) ++pos;
      out += text[pos++];
    }
    if (pos >= text.size()) err("unterminated quote");
    ++pos;
    return out;
  }

  Expr parse_or() {
    Expr e = parse_and();
    while (peek() == '|') {
      ++pos;
      if (pos < text.size() && text[pos] == '|') ++pos;
      e = Expr::disj(std::move(e), parse_and());
    }
    return e;
  }

  Expr parse_and() {
    Expr e = parse_unary();
    while (peek() == '&') {
      ++pos;
      if (pos < text.size() && text[pos] == '&') ++pos;
      e = Expr::conj(std::move(e), parse_unary());
    }
    return e;
  }

  Expr parse_unary() {
    if (peek() == '!') {
      ++pos;
      return Expr::negation(parse_unary());
    }
    return parse_primary();
  }

  Expr parse_primary() {
    char c = peek();
    if (c == '(') {
      ++pos;
      Expr e = parse_or();
      if (!eat(')')) err("expected ')'");
      return maybe_eq(std::move(e));
    }
    Expr t = parse_term();
    return maybe_eq(std::move(t));
  }

  Expr maybe_eq(Expr lhs) {
    if (peek() == '=') {
      ++pos;
      Expr rhs = parse_term();
      return Expr::eq(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr parse_term() {
    char c = peek();
    if (c == '\'') return Expr::lit(quoted());
    if (c == '(') {
      ++pos;
      Expr e = parse_or();
      if (!eat(')')) err("expected ')'");
      return e;
    }
    std::string name = ident();
    if (name == "ite") {
      if (!eat('(')) err("expected '(' after ite");
      Expr cond = parse_or();
      if (!eat(',')) err("expected ',' in ite");
      Expr then_e = parse_or();
      if (!eat(',')) err("expected ',' in ite");
      Expr else_e = parse_or();
      if (!eat(')')) err("expected ')' closing ite");
      return Expr::ite(std::move(cond), std::move(then_e), std::move(else_e));
    }
    return Expr::var(std::move(name));
  }
};

}  // namespace

std::string Expr::str() const {
  std::string out;
  print(*this, 0, out);
  return out;
}

Expr parse_expr(const std::string& text) {
  Parser p(text);
  Expr e = p.parse_or();
  p.skip_ws();
  if (p.pos != text.size()) p.err("trailing input");
  return e;
}

}  // namespace caver::causal
