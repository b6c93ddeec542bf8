#include "caver/ltl/trace.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "caver/errors.hpp"

namespace caver::ltl {

void Trace::validate() const {
  if (alphabet.empty()) fail(ErrorKind::InvalidInput, "trace has no signals");
  std::set<std::string> seen;
  for (const auto& s : alphabet) {
    if (s.empty()) fail(ErrorKind::InvalidInput, "trace has an empty signal name");
    if (!seen.insert(s).second)
      fail(ErrorKind::InvalidInput, "duplicate signal '" + s + "' in trace");
  }
  if (cycles.empty()) fail(ErrorKind::InvalidInput, "trace has no cycles");
  for (std::size_t c = 0; c < cycles.size(); ++c)
    if (cycles[c].size() != alphabet.size())
      fail(ErrorKind::InvalidInput,
           "cycle " + std::to_string(c) + " has " + std::to_string(cycles[c].size()) +
               " values for " + std::to_string(alphabet.size()) + " signals");
  if (loop_start && (*loop_start < 0 || *loop_start >= cycle_count()))
    fail(ErrorKind::InvalidInput,
         "loop start " + std::to_string(*loop_start) + " is outside the trace");
}

int Trace::find_signal(std::string_view name) const {
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == name) return static_cast<int>(i);
  return -1;
}

std::string Trace::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (i) out += ',';
    out += alphabet[i];
  }
  out += '\n';
  for (const auto& row : cycles) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i] ? '1' : '0';
    }
    out += '\n';
  }
  if (loop_start) out += "#loop " + std::to_string(*loop_start) + "\n";
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cell);
      cell.clear();
    } else {
      cell += ch;
    }
  }
  out.push_back(cell);
  for (auto& c : out) {
    std::size_t b = c.find_first_not_of(" \t");
    std::size_t e = c.find_last_not_of(" \t");
    c = b == std::string::npos ? "" : c.substr(b, e - b + 1);
  }
  return out;
}

}  // namespace

Trace Trace::from_csv(const std::string& text) {
  Trace t;
  bool have_header = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    if (line[b] == '#') {
      std::istringstream pragma(line.substr(b + 1));
      std::string key;
      pragma >> key;
      if (key != "loop")
        fail(ErrorKind::SyntaxError,
             "line " + std::to_string(lineno) + ": unknown pragma '#" + key + "'");
      if (t.loop_start)
        fail(ErrorKind::SyntaxError,
             "line " + std::to_string(lineno) + ": repeated #loop pragma");
      int idx = 0;
      if (!(pragma >> idx) || idx < 0)
        fail(ErrorKind::SyntaxError,
             "line " + std::to_string(lineno) + ": #loop needs a nonnegative index");
      std::string rest;
      if (pragma >> rest)
        fail(ErrorKind::SyntaxError,
             "line " + std::to_string(lineno) + ": trailing text after #loop index");
      t.loop_start = idx;
      continue;
    }
    auto cells = split_csv_line(line);
    if (!have_header) {
      t.alphabet = cells;
      have_header = true;
      continue;
    }
    if (cells.size() != t.alphabet.size())
      fail(ErrorKind::SyntaxError,
           "line " + std::to_string(lineno) + ": row has " + std::to_string(cells.size()) +
               " cells, the header has " + std::to_string(t.alphabet.size()));
    std::vector<bool> row;
    for (const auto& c : cells) {
      if (c != "0" && c != "1")
        fail(ErrorKind::SyntaxError,
             "line " + std::to_string(lineno) + ": cell '" + c + "' is not 0 or 1");
      row.push_back(c == "1");
    }
    t.cycles.push_back(std::move(row));
  }
  if (!have_header) fail(ErrorKind::SyntaxError, "trace CSV is empty");
  t.validate();
  return t;
}

Trace load_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return Trace::from_csv(buf.str());
}

void save_trace(const Trace& t, const std::string& path) {
  t.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  out << t.to_csv();
  if (!out) fail(ErrorKind::IoError, "failed writing '" + path + "'");
}

namespace {

using Op = LtlFormula::Op;

struct TraceEval {
  const Trace& t;
  int n;
  int loop;  // -1 when finite

  int succ(int i) const { return i + 1 < n ? i + 1 : loop; }  // loop == -1 ends the trace

  // one truth table over positions per visited subformula node
  std::vector<char> eval(const LtlFormula& f) {
    std::vector<char> v(static_cast<std::size_t>(n));
    switch (f.op()) {
      case Op::True: std::fill(v.begin(), v.end(), 1); break;
      case Op::False: break;
      case Op::Atom: {
        int sig = t.find_signal(f.atom_name());
        if (sig < 0)
          fail(ErrorKind::AlphabetMismatch,
               "atom '" + f.atom_name() + "' is not a trace signal");
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = t.value(i, sig);
        break;
      }
      case Op::Not: {
        auto a = eval(f.child(0));
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = !a[static_cast<std::size_t>(i)];
        break;
      }
      case Op::And:
      case Op::Or:
      case Op::Implies: {
        auto a = eval(f.child(0));
        auto b = eval(f.child(1));
        for (int i = 0; i < n; ++i) {
          std::size_t k = static_cast<std::size_t>(i);
          v[k] = f.op() == Op::And  ? (a[k] && b[k])
                 : f.op() == Op::Or ? (a[k] || b[k])
                                    : (!a[k] || b[k]);
        }
        break;
      }
      case Op::Next: {
        auto a = eval(f.child(0));
        for (int i = 0; i < n; ++i) {
          int s = succ(i);
          v[static_cast<std::size_t>(i)] = s >= 0 && a[static_cast<std::size_t>(s)];
        }
        break;
      }
      case Op::Eventually:
      case Op::Globally: {
        auto a = eval(f.child(0));
        bool is_f = f.op() == Op::Eventually;
        if (loop < 0) {
          v[static_cast<std::size_t>(n - 1)] = a[static_cast<std::size_t>(n - 1)];
          for (int i = n - 2; i >= 0; --i) {
            std::size_t k = static_cast<std::size_t>(i);
            v[k] = is_f ? (a[k] || v[k + 1]) : (a[k] && v[k + 1]);
          }
        } else {
          fixpoint(v, [&](int i, const std::vector<char>& cur) {
            std::size_t k = static_cast<std::size_t>(i);
            std::size_t s = static_cast<std::size_t>(succ(i));
            return is_f ? (a[k] || cur[s]) : (a[k] && cur[s]);
          }, !is_f);
        }
        break;
      }
      case Op::Until: {
        auto a = eval(f.child(0));
        auto b = eval(f.child(1));
        if (loop < 0) {
          v[static_cast<std::size_t>(n - 1)] = b[static_cast<std::size_t>(n - 1)];
          for (int i = n - 2; i >= 0; --i) {
            std::size_t k = static_cast<std::size_t>(i);
            v[k] = b[k] || (a[k] && v[k + 1]);
          }
        } else {
          fixpoint(v, [&](int i, const std::vector<char>& cur) {
            std::size_t k = static_cast<std::size_t>(i);
            std::size_t s = static_cast<std::size_t>(succ(i));
            return b[k] || (a[k] && cur[s]);
          }, false);
        }
        break;
      }
    }
    return v;
  }

  // Lasso evaluation: solve positions inside the loop as a fixpoint (least
  // for F/U from false, greatest for G from true), then sweep the stem
  // backwards, which only reads already-final values.
  template <typename Step>
  void fixpoint(std::vector<char>& v, Step step, bool init) {
    for (int i = loop; i < n; ++i) v[static_cast<std::size_t>(i)] = init;
    bool changed = true;
    while (changed) {
      changed = false;
      for (int i = n - 1; i >= loop; --i) {
        char nv = step(i, v);
        if (nv != v[static_cast<std::size_t>(i)]) {
          v[static_cast<std::size_t>(i)] = nv;
          changed = true;
        }
      }
    }
    for (int i = loop - 1; i >= 0; --i) v[static_cast<std::size_t>(i)] = step(i, v);
  }
};

}  // namespace

bool check_trace(const Trace& t, const LtlFormula& f) {
  t.validate();
  TraceEval ev{t, t.cycle_count(), t.loop_start ? *t.loop_start : -1};
  return ev.eval(f)[0];
}

std::vector<bool> eval_positions(const Trace& t, const LtlFormula& f) {
  t.validate();
  TraceEval ev{t, t.cycle_count(), t.loop_start ? *t.loop_start : -1};
  auto v = ev.eval(f);
  return std::vector<bool>(v.begin(), v.end());
}

}  // namespace caver::ltl
