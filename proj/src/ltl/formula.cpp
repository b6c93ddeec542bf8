#include "caver/ltl/formula.hpp"

#include <algorithm>

#include "caver/errors.hpp"

namespace caver::ltl {

namespace {
using Op = LtlFormula::Op;
}

LtlFormula LtlFormula::lit(bool value) {
  return LtlFormula(std::make_shared<Node>(value ? Op::True : Op::False, ""));
}

LtlFormula LtlFormula::atom(std::string name) {
  return LtlFormula(std::make_shared<Node>(Op::Atom, std::move(name)));
}

LtlFormula LtlFormula::negation(LtlFormula a) {
  auto n = std::make_shared<Node>(Op::Not, "");
  n->a = std::move(a.node_);
  return LtlFormula(std::move(n));
}

LtlFormula LtlFormula::next(LtlFormula a) {
  auto n = std::make_shared<Node>(Op::Next, "");
  n->a = std::move(a.node_);
  return LtlFormula(std::move(n));
}

LtlFormula LtlFormula::eventually(LtlFormula a) {
  auto n = std::make_shared<Node>(Op::Eventually, "");
  n->a = std::move(a.node_);
  return LtlFormula(std::move(n));
}

LtlFormula LtlFormula::globally(LtlFormula a) {
  auto n = std::make_shared<Node>(Op::Globally, "");
  n->a = std::move(a.node_);
  return LtlFormula(std::move(n));
}

LtlFormula LtlFormula::conj(LtlFormula a, LtlFormula b) {
  auto n = std::make_shared<Node>(Op::And, "");
  n->a = std::move(a.node_);
  n->b = std::move(b.node_);
  return LtlFormula(std::move(n));
}

LtlFormula LtlFormula::disj(LtlFormula a, LtlFormula b) {
  auto n = std::make_shared<Node>(Op::Or, "");
  n->a = std::move(a.node_);
  n->b = std::move(b.node_);
  return LtlFormula(std::move(n));
}

LtlFormula LtlFormula::implies(LtlFormula a, LtlFormula b) {
  auto n = std::make_shared<Node>(Op::Implies, "");
  n->a = std::move(a.node_);
  n->b = std::move(b.node_);
  return LtlFormula(std::move(n));
}

LtlFormula LtlFormula::until(LtlFormula a, LtlFormula b) {
  auto n = std::make_shared<Node>(Op::Until, "");
  n->a = std::move(a.node_);
  n->b = std::move(b.node_);
  return LtlFormula(std::move(n));
}

int LtlFormula::arity() const {
  switch (node_->op) {
    case Op::True:
    case Op::False:
    case Op::Atom: return 0;
    case Op::Not:
    case Op::Next:
    case Op::Eventually:
    case Op::Globally: return 1;
    default: return 2;
  }
}

LtlFormula LtlFormula::child(int i) const { return LtlFormula(i == 0 ? node_->a : node_->b); }

bool LtlFormula::operator==(const LtlFormula& other) const {
  if (node_ == other.node_) return true;
  if (op() != other.op()) return false;
  switch (arity()) {
    case 0: return op() != Op::Atom || atom_name() == other.atom_name();
    case 1: return child(0) == other.child(0);
    default: return child(0) == other.child(0) && child(1) == other.child(1);
  }
}

namespace {

// precedence for printing: higher binds tighter
int level(Op op) {
  switch (op) {
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Until: return 4;
    case Op::Not:
    case Op::Next:
    case Op::Eventually:
    case Op::Globally: return 5;
    default: return 6;
  }
}

void print(const LtlFormula& f, int min_level, std::string& out) {
  int lv = level(f.op());
  bool parens = lv < min_level;
  if (parens) out += '(';
  switch (f.op()) {
    case Op::True: out += "true"; break;
    case Op::False: out += "false"; break;
    case Op::Atom: out += f.atom_name(); break;
    case Op::Not:
      out += '!';
      print(f.child(0), 5, out);
      break;
    case Op::Next:
    case Op::Eventually:
    case Op::Globally:
      out += f.op() == Op::Next ? 'X' : f.op() == Op::Eventually ? 'F' : 'G';
      out += ' ';
      print(f.child(0), 5, out);
      break;
    case Op::Until:  // right associative
      print(f.child(0), 5, out);
      out += " U ";
      print(f.child(1), 4, out);
      break;
    case Op::And:
      print(f.child(0), 3, out);
      out += " & ";
      print(f.child(1), 4, out);
      break;
    case Op::Or:
      print(f.child(0), 2, out);
      out += " | ";
      print(f.child(1), 3, out);
      break;
    case Op::Implies:  // right associative
      print(f.child(0), 2, out);
      out += " -> ";
      print(f.child(1), 1, out);
      break;
  }
  if (parens) out += ')';
}

void collect_atoms(const LtlFormula& f, std::vector<std::string>& out) {
  if (f.op() == Op::Atom) out.push_back(f.atom_name());
  for (int i = 0; i < f.arity(); ++i) collect_atoms(f.child(i), out);
}

}  // namespace

std::string LtlFormula::str() const {
  std::string out;
  print(*this, 0, out);
  return out;
}

std::vector<std::string> LtlFormula::atoms() const {
  std::vector<std::string> out;
  collect_atoms(*this, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

struct LtlParser {
  const std::string& text;
  std::size_t pos = 0;
  const std::vector<std::string>* alphabet = nullptr;

  [[noreturn]] void die(std::size_t at, const std::string& msg) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(ErrorKind::SyntaxError, std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
                                 text[pos] == '\r'))
      ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  static bool ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool ident_char(char c) {
    return ident_start(c) || (c >= '0' && c <= '9') || c == '.';
  }

  std::string peek_word() {
    skip_ws();
    if (pos >= text.size() || !ident_start(text[pos])) return "";
    std::size_t e = pos;
    while (e < text.size() && ident_char(text[e])) ++e;
    return text.substr(pos, e - pos);
  }

  bool eat_word(const char* w) {
    std::string got = peek_word();
    if (got != w) return false;
    pos += got.size();
    return true;
  }

  // consumes c after whitespace; doubled forms (&&, ||) count as one token
  bool eat_connective(char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c) return false;
    pos += (pos + 1 < text.size() && text[pos + 1] == c) ? 2 : 1;
    return true;
  }

  bool eat_arrow() {
    skip_ws();
    if (text.compare(pos, 2, "->") != 0) return false;
    pos += 2;
    return true;
  }

  LtlFormula parse_implies() {
    LtlFormula a = parse_or();
    if (eat_arrow()) return LtlFormula::implies(std::move(a), parse_implies());
    return a;
  }

  LtlFormula parse_or() {
    LtlFormula a = parse_and();
    while (eat_connective('|')) a = LtlFormula::disj(std::move(a), parse_and());
    return a;
  }

  LtlFormula parse_and() {
    LtlFormula a = parse_until();
    while (eat_connective('&')) a = LtlFormula::conj(std::move(a), parse_until());
    return a;
  }

  LtlFormula parse_until() {
    LtlFormula a = parse_unary();
    if (eat_word("U")) return LtlFormula::until(std::move(a), parse_until());
    return a;
  }

  LtlFormula parse_unary() {
    skip_ws();
    if (pos < text.size() && text[pos] == '!') {
      ++pos;
      return LtlFormula::negation(parse_unary());
    }
    if (eat_word("X")) return LtlFormula::next(parse_unary());
    if (eat_word("F")) return LtlFormula::eventually(parse_unary());
    if (eat_word("G")) return LtlFormula::globally(parse_unary());
    return parse_primary();
  }

  LtlFormula parse_primary() {
    skip_ws();
    if (pos >= text.size()) die(pos, "expected a formula, found end of input");
    if (text[pos] == '(') {
      ++pos;
      LtlFormula a = parse_implies();
      skip_ws();
      if (pos >= text.size() || text[pos] != ')') die(pos, "expected ')'");
      ++pos;
      return a;
    }
    std::size_t start = pos;
    std::string word = peek_word();
    if (word.empty())
      die(pos, std::string("expected an atom, 'true', 'false', '!' or '(', found '") +
                   text[pos] + "'");
    pos += word.size();
    if (word == "true") return LtlFormula::lit(true);
    if (word == "false") return LtlFormula::lit(false);
    if (word == "U") die(start, "'U' needs a left operand");
    if (alphabet && std::find(alphabet->begin(), alphabet->end(), word) == alphabet->end())
      fail(ErrorKind::UnknownAtom, "atom '" + word + "' is not in the alphabet");
    return LtlFormula::atom(std::move(word));
  }

  LtlFormula run() {
    LtlFormula f = parse_implies();
    if (!at_end()) die(pos, "unexpected trailing input '" + text.substr(pos) + "'");
    return f;
  }
};

}  // namespace

LtlFormula parse_ltl(const std::string& text) {
  LtlParser p{text};
  return p.run();
}

LtlFormula parse_ltl(const std::string& text, const std::vector<std::string>& alphabet) {
  LtlParser p{text};
  p.alphabet = &alphabet;
  return p.run();
}

}  // namespace caver::ltl
