#include <cctype>
#include <cstring>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "icc/builtins.hpp"
#include "icc/icurry.hpp"

// Parser for the pretty_icurry text format. Test aid: lets golden files be read
// back and compared structurally instead of byte-by-byte.

namespace icc {
namespace {

struct Line {
  int indent = 0;
  std::string text;  // trimmed
  int number = 0;
};

std::vector<Line> split_lines(const std::string& in) {
  std::vector<Line> out;
  std::istringstream is(in);
  std::string raw;
  int n = 0;
  while (std::getline(is, raw)) {
    ++n;
    size_t i = 0;
    while (i < raw.size() && raw[i] == ' ') ++i;
    size_t e = raw.size();
    while (e > i && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
    if (i >= e) continue;
    out.push_back({static_cast<int>(i), raw.substr(i, e - i), n});
  }
  return out;
}

[[noreturn]] void die(const Line& ln, const std::string& msg) {
  throw CompileError({{ln.number, ln.indent + 1}, msg + " (in: '" + ln.text + "')"});
}

struct Parser {
  const TypeTable& types;
  std::map<std::string, std::pair<SymId, int>> functions;  // name -> (sym, arity)
  std::vector<Line> lines;
  size_t pos = 0;

  std::map<std::string, VarId> vars;
  VarId next_var = 1;

  const Line& peek() const { return lines[pos]; }
  bool done() const { return pos >= lines.size(); }

  VarId var_of(const Line& ln, const std::string& name, bool may_create) {
    auto it = vars.find(name);
    if (it != vars.end()) return it->second;
    if (!may_create) die(ln, "unknown variable '" + name + "'");
    VarId v = next_var++;
    vars[name] = v;
    return v;
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  ILabel resolve_label(const Line& ln, const std::string& name) {
    if (auto c = types.resolve_ctor_name(name, kModuleMain)) return {LabelKind::Constructor, *c};
    auto it = functions.find(name);
    if (it != functions.end()) return {LabelKind::Function, it->second.first};
    for (Builtin b : {Builtin::Add, Builtin::Sub, Builtin::Eq, Builtin::Lt, Builtin::Ge})
      if (sym_name(builtin_sym(b)) == name) return {LabelKind::Function, builtin_sym(b)};
    die(ln, "unknown label '" + name + "'");
  }

  // --- expression parsing over a single line ---------------------------------

  struct Cursor {
    const std::string& s;
    size_t i = 0;
    void skip_ws() {
      while (i < s.size() && s[i] == ' ') ++i;
    }
    bool at(const char* tok) const { return s.compare(i, std::strlen(tok), tok) == 0; }
    bool eof() {
      skip_ws();
      return i >= s.size();
    }
  };

  VarRef parse_ref(const Line& ln, Cursor& c, const std::string& head) {
    VarRef r;
    if (head == "ROOT") {
      r.base = RefBase::Root;
    } else {
      r.base = RefBase::Local;
      r.var = var_of(ln, head, false);
    }
    while (c.i < c.s.size() && c.s[c.i] == '[') {
      ++c.i;
      size_t start = c.i;
      while (c.i < c.s.size() && c.s[c.i] != ']') ++c.i;
      if (c.i >= c.s.size()) die(ln, "unterminated select index");
      r.path.push_back(std::stoi(c.s.substr(start, c.i - start)));
      ++c.i;  // ']'
    }
    return r;
  }

  std::string parse_word(const Line& ln, Cursor& c) {
    c.skip_ws();
    size_t start = c.i;
    while (c.i < c.s.size() && ident_char(c.s[c.i])) ++c.i;
    if (c.i == start) die(ln, "expected identifier");
    return c.s.substr(start, c.i - start);
  }

  IExpr parse_atom(const Line& ln, Cursor& c) {
    c.skip_ws();
    if (c.at("(")) {
      ++c.i;
      IExpr e = parse_expr(ln, c);
      c.skip_ws();
      if (!c.at(")")) die(ln, "expected ')'");
      ++c.i;
      return e;
    }
    if (c.at("NODE(")) {
      c.i += 5;
      // label: raw text up to ',' or ')'
      size_t start = c.i;
      while (c.i < c.s.size() && c.s[c.i] != ',' && c.s[c.i] != ')') ++c.i;
      if (c.i >= c.s.size()) die(ln, "unterminated NODE");
      std::string label = c.s.substr(start, c.i - start);
      while (!label.empty() && label.back() == ' ') label.pop_back();
      std::vector<IExpr> args;
      while (c.s[c.i] == ',') {
        ++c.i;
        args.push_back(parse_expr(ln, c));
        c.skip_ws();
        if (c.i >= c.s.size()) die(ln, "unterminated NODE");
      }
      if (c.s[c.i] != ')') die(ln, "expected ')' in NODE");
      ++c.i;
      bool literal = !label.empty() &&
                     (std::isdigit(static_cast<unsigned char>(label[0])) ||
                      (label[0] == '-' && label.size() > 1 &&
                       std::isdigit(static_cast<unsigned char>(label[1]))));
      if (literal) {
        if (!args.empty()) die(ln, "literal node takes no arguments");
        return IExpr::mk_int(std::stoll(label));
      }
      return IExpr::mk_node(resolve_label(ln, label), std::move(args));
    }
    std::string word = parse_word(ln, c);
    return IExpr::mk_var(parse_ref(ln, c, word));
  }

  IExpr parse_expr(const Line& ln, Cursor& c) {
    IExpr left = parse_atom(ln, c);
    c.skip_ws();
    if (c.at("or ") || (c.at("or") && c.i + 2 == c.s.size())) {
      c.i += 2;
      IExpr right = parse_expr(ln, c);  // right-associative
      return IExpr::mk_or(std::move(left), std::move(right));
    }
    return left;
  }

  IExpr parse_expr_all(const Line& ln, const std::string& text) {
    Cursor c{text};
    IExpr e = parse_expr(ln, c);
    if (!c.eof()) die(ln, "trailing text after expression");
    return e;
  }

  // --- statements and blocks --------------------------------------------------

  IStatement parse_inline_stmt(const Line& ln, const std::string& text) {
    IStatement s;
    if (text == "exempt") {
      s.kind = IStmtKind::Exempt;
      return s;
    }
    if (text.rfind("return ", 0) == 0) {
      s.kind = IStmtKind::Return;
      s.expr = parse_expr_all(ln, text.substr(7));
      return s;
    }
    die(ln, "expected 'return' or 'exempt'");
  }

  IBlock parse_block(int indent) {
    IBlock b;
    bool have_stmt = false;
    while (!done() && peek().indent >= indent) {
      const Line ln = peek();
      if (ln.indent != indent) die(ln, "unexpected indentation");
      const std::string& t = ln.text;
      if (t.rfind("declare ", 0) == 0) {
        ++pos;
        Cursor c{t};
        c.i = 8;
        b.decls.push_back({false, var_of(ln, parse_word(ln, c), true)});
        continue;
      }
      if (t.rfind("free ", 0) == 0) {
        ++pos;
        Cursor c{t};
        c.i = 5;
        b.decls.push_back({true, var_of(ln, parse_word(ln, c), true)});
        continue;
      }
      if (t == "exempt" || t.rfind("return ", 0) == 0) {
        ++pos;
        b.stm = parse_inline_stmt(ln, t);
        have_stmt = true;
        break;
      }
      if (t.rfind("case ", 0) == 0) {
        ++pos;
        b.stm = parse_case(ln, indent);
        have_stmt = true;
        break;
      }
      // assignment: REF = EXPR
      size_t eq = t.find(" = ");
      if (eq == std::string::npos) die(ln, "expected assignment or statement");
      ++pos;
      Cursor c{t};
      std::string head = parse_word(ln, c);
      IAssign a;
      a.lhs = parse_ref(ln, c, head);
      c.skip_ws();
      if (!c.at("=")) die(ln, "expected '='");
      ++c.i;
      a.rhs = parse_expr(ln, c);
      if (!c.eof()) die(ln, "trailing text after assignment");
      b.assigns.push_back(std::move(a));
    }
    if (!have_stmt) {
      if (pos > 0 && !lines.empty())
        die(lines[pos < lines.size() ? pos : lines.size() - 1], "block lacks a statement");
      throw CompileError({{}, "block lacks a statement"});
    }
    return b;
  }

  IStatement parse_case(const Line& case_line, int indent) {
    IStatement s;
    const std::string& t = case_line.text;  // "case LABEL(x) of" / "case VALUE(x) of"
    bool lit;
    size_t open;
    if (t.rfind("case LABEL(", 0) == 0) {
      lit = false;
      open = 11;
    } else if (t.rfind("case VALUE(", 0) == 0) {
      lit = true;
      open = 11;
    } else {
      die(case_line, "expected LABEL(...) or VALUE(...)");
    }
    size_t close = t.find(')', open);
    if (close == std::string::npos) die(case_line, "expected ')'");
    std::string inner = t.substr(open, close - open);
    Cursor c{inner};
    std::string head = parse_word(case_line, c);
    s.scrut = parse_ref(case_line, c, head);
    s.kind = lit ? IStmtKind::CaseLit : IStmtKind::Case;
    if (t.substr(close) != ") of") die(case_line, "expected ') of'");

    int branch_indent = -1;
    while (!done() && peek().indent > indent) {
      const Line ln = peek();
      if (branch_indent < 0) branch_indent = ln.indent;
      if (ln.indent != branch_indent) die(ln, "inconsistent branch indentation");
      size_t arrow = ln.text.find(" ->");
      if (arrow == std::string::npos) die(ln, "expected '->' in branch");
      std::string head_tok = ln.text.substr(0, arrow);
      std::string rest = ln.text.substr(arrow + 3);
      if (!rest.empty() && rest[0] == ' ') rest = rest.substr(1);
      ++pos;
      IBlock blk;
      if (!rest.empty()) {
        blk.stm = parse_inline_stmt(ln, rest);
      } else {
        blk = parse_block(branch_indent + 2);
      }
      if (lit) {
        if (head_tok == "default") {
          s.blocks.push_back(std::move(blk));
          continue;  // default must be last; enforced below
        }
        s.lits.push_back(std::stoll(head_tok));
        s.blocks.push_back(std::move(blk));
      } else {
        ILabel lbl = resolve_label(ln, head_tok);
        if (lbl.kind != LabelKind::Constructor) die(ln, "branch label must be a constructor");
        s.ctors.push_back(lbl.sym);
        s.blocks.push_back(std::move(blk));
      }
    }
    if (lit && s.blocks.size() != s.lits.size() + 1)
      die(case_line, "literal case needs a trailing default branch");
    if (!lit && s.blocks.empty()) die(case_line, "case with no branches");
    return s;
  }

  IProgram parse() {
    IProgram prog;
    prog.types = types;
    // pre-scan headers so calls between functions resolve
    for (const auto& ln : lines) {
      if (ln.text.rfind("function ", 0) != 0) continue;
      size_t slash = ln.text.rfind('/');
      if (slash == std::string::npos) die(ln, "expected 'function name/arity'");
      std::string name = ln.text.substr(9, slash - 9);
      int arity = std::stoi(ln.text.substr(slash + 1));
      functions[name] = {intern(kModuleMain, name), arity};
    }
    while (!done()) {
      const Line ln = peek();
      if (ln.text.rfind("function ", 0) != 0 || ln.indent != 0) die(ln, "expected function header");
      ++pos;
      size_t slash = ln.text.rfind('/');
      std::string name = ln.text.substr(9, slash - 9);
      IFunction fn;
      fn.name = functions[name].first;
      fn.arity = functions[name].second;
      vars.clear();
      next_var = 1;
      fn.body = parse_block(2);
      for (const auto& [nm, v] : vars) fn.var_names[v] = nm;
      prog.functions.push_back(std::move(fn));
    }
    return prog;
  }
};

}  // namespace

IProgram parse_icurry_text(const std::string& text, const TypeTable& types,
                           const std::vector<std::pair<std::string, int>>& extra_functions) {
  Parser p{types, {}, {}, 0, {}, 1};
  p.lines = split_lines(text);
  for (const auto& [name, arity] : extra_functions)
    p.functions[name] = {intern(kModuleMain, name), arity};
  return p.parse();
}

}  // namespace icc
