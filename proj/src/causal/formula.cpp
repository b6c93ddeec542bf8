#include "caver/causal/model.hpp"

#include <algorithm>
#include <cctype>

namespace caver::causal {

CausalFormula CausalFormula::event(std::string var, std::string value) {
  return CausalFormula(
      std::make_shared<Node>(Node{Op::Event, std::move(var), std::move(value), {}}));
}
CausalFormula CausalFormula::negation(CausalFormula a) {
  return CausalFormula(std::make_shared<Node>(Node{Op::Not, {}, {}, {std::move(a)}}));
}
CausalFormula CausalFormula::conj(CausalFormula a, CausalFormula b) {
  return CausalFormula(
      std::make_shared<Node>(Node{Op::And, {}, {}, {std::move(a), std::move(b)}}));
}
CausalFormula CausalFormula::disj(CausalFormula a, CausalFormula b) {
  return CausalFormula(
      std::make_shared<Node>(Node{Op::Or, {}, {}, {std::move(a), std::move(b)}}));
}

CausalFormula CausalFormula::with_prefix(Intervention prefix) const {
  CausalFormula out = *this;
  out.prefix_ = std::move(prefix);
  return out;
}

namespace {

struct FParser {
  const std::string& text;
  std::size_t pos = 0;

  [[noreturn]] void err(const std::string& what) {
    fail(ErrorKind::SyntaxError,
         "formula \"" + text + "\": " + what + " at offset " + std::to_string(pos));
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool eat(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  std::string token() {
    skip_ws();
    if (pos < text.size() && text[pos] == '\'') {
      ++pos;
      std::string out;
      while (pos < text.size() && text[pos] != '\'') {
        if (text[pos] == '\\' && pos + 1 < text.size()) ++pos;
        out += text[pos++];
      }
      if (pos >= text.size()) err("unterminated quote");
      ++pos;
      return out;
    }
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (pos == start) err("expected name or value");
    return text.substr(start, pos - start);
  }

  Intervention parse_prefix() {
    Intervention iv;
    if (!eat('[')) return iv;
    while (true) {
      std::string var = token();
      skip_ws();
      if (pos + 1 >= text.size() || text[pos] != '<' || text[pos + 1] != '-')
        err("expected '<-' in intervention");
      pos += 2;
      iv.emplace_back(std::move(var), token());
      if (eat(']')) break;
      if (!eat(',')) err("expected ',' or ']' in intervention");
    }
    return iv;
  }

  CausalFormula parse_or() {
    CausalFormula f = parse_and();
    while (peek() == '|') {
      ++pos;
      if (pos < text.size() && text[pos] == '|') ++pos;
      f = CausalFormula::disj(std::move(f), parse_and());
    }
    return f;
  }

  CausalFormula parse_and() {
    CausalFormula f = parse_unary();
    while (peek() == '&') {
      ++pos;
      if (pos < text.size() && text[pos] == '&') ++pos;
      f = CausalFormula::conj(std::move(f), parse_unary());
    }
    return f;
  }

  CausalFormula parse_unary() {
    if (eat('!')) return CausalFormula::negation(parse_unary());
    if (eat('(')) {
      CausalFormula f = parse_or();
      if (!eat(')')) err("expected ')'");
      return f;
    }
    std::string var = token();
    if (peek() == '=') {
      ++pos;
      return CausalFormula::event(std::move(var), token());
    }
    // Bare name: boolean shorthand, resolved against the domain when checked.
    return CausalFormula::event(std::move(var), "");
  }
};

bool plain(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

std::string quote_value(const std::string& v) {
  if (plain(v)) return v;
  std::string out = "'";
  for (char c : v) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += '\'';
  return out;
}

void print(const CausalFormula& f, int parent_prec, std::string& out) {
  switch (f.op()) {
    case CausalFormula::Op::Event:
      out += f.var();
      if (!f.value().empty()) {
        out += '=';
        out += quote_value(f.value());
      }
      return;
    case CausalFormula::Op::Not:
      out += '!';
      print(f.child(0), 3, out);
      return;
    case CausalFormula::Op::And:
    case CausalFormula::Op::Or: {
      int prec = f.op() == CausalFormula::Op::And ? 2 : 1;
      bool paren = parent_prec > prec;
      if (paren) out += '(';
      print(f.child(0), prec - 1, out);
      out += f.op() == CausalFormula::Op::And ? " & " : " | ";
      print(f.child(1), prec - 1, out);
      if (paren) out += ')';
      return;
    }
  }
}

void collect_events(const CausalFormula& f, std::vector<std::string>& out) {
  if (f.op() == CausalFormula::Op::Event) {
    if (std::find(out.begin(), out.end(), f.var()) == out.end()) out.push_back(f.var());
    return;
  }
  int n = f.op() == CausalFormula::Op::Not ? 1 : 2;
  for (int i = 0; i < n; ++i) collect_events(f.child(i), out);
}

}  // namespace

CausalFormula CausalFormula::parse(const std::string& text) {
  FParser p{text};
  Intervention prefix = p.parse_prefix();
  CausalFormula f = p.parse_or();
  p.skip_ws();
  if (p.pos != text.size()) p.err("trailing input");
  if (!prefix.empty()) f.prefix_ = std::move(prefix);
  return f;
}

std::string CausalFormula::str() const {
  std::string out;
  if (!prefix_.empty()) {
    out += '[';
    for (std::size_t i = 0; i < prefix_.size(); ++i) {
      if (i) out += ", ";
      out += prefix_[i].first + " <- " + quote_value(prefix_[i].second);
    }
    out += "] ";
  }
  print(*this, 0, out);
  return out;
}

std::vector<std::string> CausalFormula::event_vars() const {
  std::vector<std::string> out;
  collect_events(*this, out);
  return out;
}

CompiledFormula::CompiledFormula(const CausalModel& model, const CausalFormula& formula) {
  root_ = compile(model, formula);
}

int CompiledFormula::compile(const CausalModel& model, const CausalFormula& f) {
  const Signature& sig = model.signature();
  CNode n{};
  n.op = f.op();
  switch (f.op()) {
    case CausalFormula::Op::Event: {
      n.var = sig.id_of(f.var());
      if (f.value().empty()) {
        if (!sig.is_boolean_var(n.var))
          fail(ErrorKind::InvalidInput, "event " + f.var() +
               " needs an explicit value: domain is not {0,1}");
        n.idx = sig.true_index(n.var);
      } else {
        n.idx = sig.value_index(n.var, f.value());
      }
      if (std::find(vars_.begin(), vars_.end(), n.var) == vars_.end()) vars_.push_back(n.var);
      break;
    }
    case CausalFormula::Op::Not:
      n.a = compile(model, f.child(0));
      break;
    case CausalFormula::Op::And:
    case CausalFormula::Op::Or:
      n.a = compile(model, f.child(0));
      n.b = compile(model, f.child(1));
      break;
  }
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size() - 1);
}

bool CompiledFormula::eval(std::span<const ValueIndex> vals) const {
  // Nodes are in post-order, so children evaluate before parents.
  std::vector<char> memo(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const CNode& n = nodes_[i];
    switch (n.op) {
      case CausalFormula::Op::Event:
        memo[i] = vals[static_cast<std::size_t>(n.var)] == n.idx;
        break;
      case CausalFormula::Op::Not:
        memo[i] = !memo[static_cast<std::size_t>(n.a)];
        break;
      case CausalFormula::Op::And:
        memo[i] = memo[static_cast<std::size_t>(n.a)] && memo[static_cast<std::size_t>(n.b)];
        break;
      case CausalFormula::Op::Or:
        memo[i] = memo[static_cast<std::size_t>(n.a)] || memo[static_cast<std::size_t>(n.b)];
        break;
    }
  }
  return memo[static_cast<std::size_t>(root_)] != 0;
}

bool holds(const CausalModel& model, const Context& context, const CausalFormula& formula) {
  auto ctx = model.resolve_context(context);
  auto forced = model.resolve_intervention(formula.prefix());
  std::vector<ValueIndex> vals(static_cast<std::size_t>(model.signature().num_vars()),
                               ValueIndex{-1});
  std::copy(ctx.begin(), ctx.end(), vals.begin());
  model.eval_raw(vals, forced);
  CompiledFormula cf(model, formula);
  return cf.eval(vals);
}

}  // namespace caver::causal
