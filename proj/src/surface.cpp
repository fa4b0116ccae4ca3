#include "icc/surface.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <map>

namespace icc {
namespace {

// --- lexer -------------------------------------------------------------------

enum class Tok {
  LIdent, UIdent, Int, LParen, RParen, LBracket, RBracket, LBrace, RBrace,
  Comma, Semi, Equals, Pipe, Underscore, Op, Arrow, DoubleColon,
  KwData, KwLet, KwIn, KwWhere, KwFree, End
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long long num = 0;
  SourceLoc loc;
};

[[noreturn]] void err(SourceLoc loc, const std::string& msg) {
  throw CompileError({loc, msg});
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](Tok k, std::string text, long long num = 0) {
    out.push_back({k, std::move(text), num, {line, col}});
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    SourceLoc loc{line, col};
    auto two = [&](const char* s) { return src.compare(i, 2, s) == 0; };
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Int, src.substr(i, j - i), std::stoll(src.substr(i, j - i)), loc});
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      std::string word = src.substr(i, j - i);
      col += static_cast<int>(j - i);
      i = j;
      Tok k;
      if (word == "data") k = Tok::KwData;
      else if (word == "let") k = Tok::KwLet;
      else if (word == "in") k = Tok::KwIn;
      else if (word == "where") k = Tok::KwWhere;
      else if (word == "free") k = Tok::KwFree;
      else if (word == "_") k = Tok::Underscore;
      else if (std::isupper(static_cast<unsigned char>(word[0]))) k = Tok::UIdent;
      else k = Tok::LIdent;
      out.push_back({k, std::move(word), 0, loc});
      continue;
    }
    auto sym = [&](Tok k, const char* text, int len) {
      push(k, text);
      col += len;
      i += len;
    };
    if (two("++")) { sym(Tok::Op, "++", 2); continue; }
    if (two("==")) { sym(Tok::Op, "==", 2); continue; }
    if (two(">=")) { sym(Tok::Op, ">=", 2); continue; }
    if (two("->")) { sym(Tok::Arrow, "->", 2); continue; }
    if (two("::")) { sym(Tok::DoubleColon, "::", 2); continue; }
    switch (c) {
      case '(': sym(Tok::LParen, "(", 1); continue;
      case ')': sym(Tok::RParen, ")", 1); continue;
      case '[': sym(Tok::LBracket, "[", 1); continue;
      case ']': sym(Tok::RBracket, "]", 1); continue;
      case '{': sym(Tok::LBrace, "{", 1); continue;
      case '}': sym(Tok::RBrace, "}", 1); continue;
      case ',': sym(Tok::Comma, ",", 1); continue;
      case ';': sym(Tok::Semi, ";", 1); continue;
      case '=': sym(Tok::Equals, "=", 1); continue;
      case '|': sym(Tok::Pipe, "|", 1); continue;
      case '?': sym(Tok::Op, "?", 1); continue;
      case '+': sym(Tok::Op, "+", 1); continue;
      case '-': sym(Tok::Op, "-", 1); continue;
      case ':': sym(Tok::Op, ":", 1); continue;
      case '<': sym(Tok::Op, "<", 1); continue;
    }
    err(loc, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", 0, {line, col}});
  return out;
}

// --- operator table ------------------------------------------------------------

enum class Assoc { Left, Right, None };

struct OpInfo {
  int prec;
  Assoc assoc;
};

const OpInfo* op_info(const std::string& name) {
  static const std::map<std::string, OpInfo> table = {
      {"?", {0, Assoc::Right}}, {"==", {4, Assoc::None}}, {"<", {4, Assoc::None}},
      {">=", {4, Assoc::None}}, {"++", {5, Assoc::Right}}, {":", {5, Assoc::Right}},
      {"+", {6, Assoc::Left}},  {"-", {6, Assoc::Left}},
  };
  auto it = table.find(name);
  return it == table.end() ? nullptr : &it->second;
}

// --- parser -------------------------------------------------------------------

struct ItemParser {
  const std::vector<Token>& toks;
  size_t pos = 0;

  const Token& peek(int ahead = 0) const {
    size_t p = pos + ahead;
    return p < toks.size() ? toks[p] : toks.back();
  }
  const Token& next() { return toks[pos < toks.size() - 1 ? pos++ : pos]; }
  bool at(Tok k) const { return peek().kind == k; }
  const Token& expect(Tok k, const char* what) {
    if (!at(k)) err(peek().loc, std::string("expected ") + what);
    return next();
  }

  // --- patterns ---------------------------------------------------------------

  SPattern pattern_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::LIdent: {
        next();
        SPattern p;
        p.kind = SPattern::Kind::Var;
        p.name = t.text;
        p.loc = t.loc;
        return p;
      }
      case Tok::Underscore: {
        next();
        SPattern p;
        p.kind = SPattern::Kind::Anon;
        p.loc = t.loc;
        return p;
      }
      case Tok::Int: {
        next();
        SPattern p;
        p.kind = SPattern::Kind::Lit;
        p.lit = t.num;
        p.loc = t.loc;
        return p;
      }
      case Tok::UIdent: {
        next();
        SPattern p;
        p.kind = SPattern::Kind::Ctor;
        p.name = t.text;
        p.loc = t.loc;
        return p;
      }
      case Tok::LBracket: {
        next();
        SPattern p;
        p.loc = t.loc;
        p.kind = SPattern::Kind::Ctor;
        if (at(Tok::RBracket)) {
          next();
          p.name = "[]";
          return p;
        }
        // [p1, p2, ...] desugars to (p1 : p2 : ... : [])
        std::vector<SPattern> elems;
        elems.push_back(pattern_full());
        while (at(Tok::Comma)) {
          next();
          elems.push_back(pattern_full());
        }
        expect(Tok::RBracket, "']'");
        SPattern nil;
        nil.kind = SPattern::Kind::Ctor;
        nil.name = "[]";
        nil.loc = t.loc;
        SPattern acc = nil;
        for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
          SPattern cons;
          cons.kind = SPattern::Kind::Ctor;
          cons.name = ":";
          cons.loc = it->loc;
          cons.args.push_back(*it);
          cons.args.push_back(acc);
          acc = std::move(cons);
        }
        return acc;
      }
      case Tok::LParen: {
        next();
        SPattern p = pattern_full();
        if (at(Tok::Comma)) {
          next();
          SPattern rhs = pattern_full();
          if (at(Tok::Comma)) err(peek().loc, "only pairs are supported");
          SPattern pair;
          pair.kind = SPattern::Kind::Ctor;
          pair.name = "Pair";
          pair.loc = t.loc;
          pair.args.push_back(std::move(p));
          pair.args.push_back(std::move(rhs));
          p = std::move(pair);
        }
        expect(Tok::RParen, "')'");
        return p;
      }
      default:
        err(t.loc, "expected a pattern");
    }
  }

  bool starts_pattern_atom() const {
    switch (peek().kind) {
      case Tok::LIdent:
      case Tok::UIdent:
      case Tok::Int:
      case Tok::Underscore:
      case Tok::LBracket:
      case Tok::LParen:
        return true;
      default:
        return false;
    }
  }

  // Full pattern (only inside parens/brackets): constructor applications and
  // infix ':' chains.
  SPattern pattern_full() {
    SPattern left;
    if (at(Tok::UIdent)) {
      Token head = next();
      left.kind = SPattern::Kind::Ctor;
      left.name = head.text;
      left.loc = head.loc;
      while (starts_pattern_atom()) left.args.push_back(pattern_atom());
    } else {
      left = pattern_atom();
    }
    if (at(Tok::Op) && peek().text == ":") {
      next();
      SPattern rhs = pattern_full();  // right-associative
      SPattern cons;
      cons.kind = SPattern::Kind::Ctor;
      cons.name = ":";
      cons.loc = left.loc;
      cons.args.push_back(std::move(left));
      cons.args.push_back(std::move(rhs));
      return cons;
    }
    if (at(Tok::Op)) err(peek().loc, "operator '" + peek().text + "' not allowed in patterns");
    return left;
  }

  // --- expressions -------------------------------------------------------------

  SExpr expr_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int: {
        next();
        SExpr e;
        e.kind = SExpr::Kind::Lit;
        e.lit = t.num;
        e.loc = t.loc;
        return e;
      }
      case Tok::LIdent:
      case Tok::UIdent: {
        next();
        SExpr e;
        e.kind = SExpr::Kind::Ident;
        e.name = t.text;
        e.loc = t.loc;
        return e;
      }
      case Tok::Underscore: {
        next();
        SExpr e;
        e.kind = SExpr::Kind::Anon;
        e.loc = t.loc;
        return e;
      }
      case Tok::LBracket: {
        next();
        SExpr e;
        e.loc = t.loc;
        std::vector<SExpr> elems;
        if (!at(Tok::RBracket)) {
          elems.push_back(expr(0));
          while (at(Tok::Comma)) {
            next();
            elems.push_back(expr(0));
          }
        }
        expect(Tok::RBracket, "']'");
        SExpr nil;
        nil.kind = SExpr::Kind::Ident;
        nil.name = "[]";
        nil.loc = t.loc;
        SExpr acc = nil;
        for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
          SExpr cons;
          cons.kind = SExpr::Kind::Apply;
          cons.name = ":";
          cons.loc = it->loc;
          cons.args.push_back(std::move(*it));
          cons.args.push_back(std::move(acc));
          acc = std::move(cons);
        }
        return acc;
      }
      case Tok::LParen: {
        next();
        if (at(Tok::Op) && peek(1).kind == Tok::RParen)
          err(peek().loc, "operator sections are not supported");
        SExpr e = expr(0);
        if (at(Tok::Comma)) {
          next();
          SExpr rhs = expr(0);
          if (at(Tok::Comma)) err(peek().loc, "only pairs are supported");
          SExpr pair;
          pair.kind = SExpr::Kind::Apply;
          pair.name = "Pair";
          pair.loc = t.loc;
          pair.args.push_back(std::move(e));
          pair.args.push_back(std::move(rhs));
          e = std::move(pair);
        }
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::KwLet:
        return let_expr();
      default:
        err(t.loc, "expected an expression");
    }
  }

  bool starts_expr_atom() const {
    switch (peek().kind) {
      case Tok::Int:
      case Tok::LIdent:
      case Tok::UIdent:
      case Tok::Underscore:
      case Tok::LBracket:
      case Tok::LParen:
      case Tok::KwLet:
        return true;
      default:
        return false;
    }
  }

  SExpr let_expr() {
    Token kw = expect(Tok::KwLet, "'let'");
    SExpr e;
    e.loc = kw.loc;
    if (at(Tok::LIdent) && (peek(1).kind == Tok::KwFree || peek(1).kind == Tok::Comma)) {
      // let x, y free in e
      e.kind = SExpr::Kind::FreeIn;
      e.names.push_back(next().text);
      while (at(Tok::Comma)) {
        next();
        e.names.push_back(expect(Tok::LIdent, "variable name").text);
      }
      expect(Tok::KwFree, "'free'");
      expect(Tok::KwIn, "'in'");
      e.args.push_back(expr(0));
      return e;
    }
    e.kind = SExpr::Kind::Let;
    expect(Tok::LBrace, "'{'");
    while (true) {
      e.names.push_back(expect(Tok::LIdent, "binding name").text);
      expect(Tok::Equals, "'='");
      e.args.push_back(expr(0));
      if (at(Tok::Semi)) {
        next();
        continue;
      }
      break;
    }
    expect(Tok::RBrace, "'}'");
    expect(Tok::KwIn, "'in'");
    e.args.push_back(expr(0));
    return e;
  }

  SExpr application() {
    const Token& t = peek();
    if (t.kind == Tok::Op && t.text == "-") {
      // unary minus: -e desugars to 0 - e
      next();
      SExpr zero;
      zero.kind = SExpr::Kind::Lit;
      zero.lit = 0;
      zero.loc = t.loc;
      SExpr operand = application();
      SExpr e;
      e.kind = SExpr::Kind::Apply;
      e.name = "-";
      e.loc = t.loc;
      e.args.push_back(std::move(zero));
      e.args.push_back(std::move(operand));
      return e;
    }
    SExpr head = expr_atom();
    if (!starts_expr_atom()) return head;
    if (head.kind != SExpr::Kind::Ident)
      err(peek().loc, "application head must be a name");
    SExpr app;
    app.kind = SExpr::Kind::Apply;
    app.name = head.name;
    app.loc = head.loc;
    while (starts_expr_atom()) app.args.push_back(expr_atom());
    return app;
  }

  SExpr expr(int min_prec) {
    SExpr left = application();
    while (at(Tok::Op)) {
      const Token& op = peek();
      const OpInfo* info = op_info(op.text);
      if (!info || info->prec < min_prec) break;
      next();
      int sub = info->assoc == Assoc::Right ? info->prec : info->prec + 1;
      SExpr right = expr(sub);
      if (info->assoc == Assoc::None && at(Tok::Op)) {
        const OpInfo* follow = op_info(peek().text);
        if (follow && follow->prec == info->prec)
          err(peek().loc, "operator '" + op.text + "' is non-associative");
      }
      SExpr combined;
      combined.kind = SExpr::Kind::Apply;
      combined.name = op.text;
      combined.loc = op.loc;
      combined.args.push_back(std::move(left));
      combined.args.push_back(std::move(right));
      left = std::move(combined);
    }
    return left;
  }

  // --- declarations -------------------------------------------------------------

  int type_atom() {  // returns 1; here only to consume
    const Token& t = peek();
    switch (t.kind) {
      case Tok::LIdent:
      case Tok::UIdent:
        next();
        return 1;
      case Tok::LParen: {
        next();
        type_expr();
        expect(Tok::RParen, "')'");
        return 1;
      }
      case Tok::LBracket: {
        next();
        type_expr();
        expect(Tok::RBracket, "']'");
        return 1;
      }
      default:
        err(t.loc, "expected a type");
    }
  }

  bool starts_type_atom() const {
    switch (peek().kind) {
      case Tok::LIdent:
      case Tok::UIdent:
      case Tok::LParen:
      case Tok::LBracket:
        return true;
      default:
        return false;
    }
  }

  void type_expr() {
    type_atom();
    while (starts_type_atom() || at(Tok::Comma) || (at(Tok::Op) && peek().text == ":")) {
      if (at(Tok::Comma) || at(Tok::Op)) next();
      else type_atom();
    }
  }

  SData data_decl() {
    Token kw = expect(Tok::KwData, "'data'");
    SData d;
    d.loc = kw.loc;
    d.type_name = expect(Tok::UIdent, "type name").text;
    while (at(Tok::LIdent)) d.type_params.push_back(next().text);
    expect(Tok::Equals, "'='");
    while (true) {
      d.constructors.push_back(data_alt());
      if (at(Tok::Pipe)) {
        next();
        continue;
      }
      break;
    }
    expect(Tok::End, "end of declaration");
    return d;
  }

  std::pair<std::string, int> data_alt() {
    // '[]' | '(' op ')' atoms | Ctor atoms | atom op atoms
    if (at(Tok::LBracket) && peek(1).kind == Tok::RBracket) {
      next();
      next();
      return {"[]", 0};
    }
    if (at(Tok::LParen) && peek(1).kind == Tok::Op && peek(2).kind == Tok::RParen) {
      std::string name = peek(1).text;
      next();
      next();
      next();
      int arity = 0;
      while (starts_type_atom()) arity += type_atom();
      return {name, arity};
    }
    if (at(Tok::UIdent)) {
      std::string name = next().text;
      int arity = 0;
      while (starts_type_atom()) arity += type_atom();
      if (at(Tok::Op)) {
        // infix form with an applied lhs is not supported
        err(peek().loc, "unexpected operator in constructor declaration");
      }
      return {name, arity};
    }
    // infix constructor: atom OP atomseq
    SourceLoc loc = peek().loc;
    type_atom();
    if (!at(Tok::Op)) err(loc, "expected constructor declaration");
    std::string name = next().text;
    if (!starts_type_atom()) err(peek().loc, "infix constructor needs a right operand");
    while (starts_type_atom()) type_atom();
    return {name, 2};
  }

  SRule rule() {
    SRule r;
    r.loc = peek().loc;
    if (at(Tok::LIdent) &&
        (peek(1).kind == Tok::Equals || peek(1).kind == Tok::Pipe || starts_pattern_after(1))) {
      r.fname = next().text;
      while (starts_pattern_atom()) r.params.push_back(pattern_atom());
      if (at(Tok::Op)) err(peek().loc, "unexpected operator in left-hand side");
    } else {
      // infix rule: pat OP pat
      SPattern lhs = pattern_atom();
      if (!at(Tok::Op)) err(peek().loc, "expected '=' or an operator in rule");
      r.fname = next().text;
      r.params.push_back(std::move(lhs));
      r.params.push_back(pattern_atom());
    }
    rule_rhs(r);
    return r;
  }

  bool starts_pattern_after(int ahead) const {
    switch (peek(ahead).kind) {
      case Tok::LIdent:
      case Tok::UIdent:
      case Tok::Int:
      case Tok::Underscore:
      case Tok::LBracket:
      case Tok::LParen:
        return true;
      default:
        return false;
    }
  }

  void rule_rhs(SRule& r) {
    if (at(Tok::Equals)) {
      next();
      SGuarded g;
      g.body = expr(0);
      r.alts.push_back(std::move(g));
    } else if (at(Tok::Pipe)) {
      while (at(Tok::Pipe)) {
        next();
        SGuarded g;
        g.has_guard = true;
        g.guard = expr(0);
        expect(Tok::Equals, "'=' after guard");
        g.body = expr(0);
        r.alts.push_back(std::move(g));
      }
    } else {
      err(peek().loc, "expected '=' or '|' in rule");
    }
    if (at(Tok::KwWhere)) {
      next();
      r.where_free.push_back(expect(Tok::LIdent, "variable name").text);
      while (at(Tok::Comma)) {
        next();
        r.where_free.push_back(expect(Tok::LIdent, "variable name").text);
      }
      expect(Tok::KwFree, "'free'");
    }
    if (at(Tok::DoubleColon)) err(peek().loc, "type signatures are not supported");
    expect(Tok::End, "end of rule");
  }
};

std::vector<std::vector<Token>> split_items(std::vector<Token> toks) {
  std::vector<std::vector<Token>> items;
  std::vector<Token> cur;
  for (auto& t : toks) {
    if (t.kind == Tok::End) break;
    if (t.loc.col == 1 && !cur.empty()) {
      cur.push_back({Tok::End, "", 0, t.loc});
      items.push_back(std::move(cur));
      cur.clear();
    }
    cur.push_back(std::move(t));
  }
  if (!cur.empty()) {
    SourceLoc endloc = cur.back().loc;
    cur.push_back({Tok::End, "", 0, endloc});
    items.push_back(std::move(cur));
  }
  return items;
}

}  // namespace

SurfaceProgram parse_surface(const std::string& text) {
  SurfaceProgram prog;
  for (auto& item : split_items(lex(text))) {
    ItemParser p{item};
    if (p.at(Tok::DoubleColon) ||
        (item.size() > 1 &&
         std::any_of(item.begin(), item.end(),
                     [](const Token& t) { return t.kind == Tok::DoubleColon; }))) {
      err(item[0].loc, "type signatures are not supported");
    }
    if (p.at(Tok::KwData))
      prog.datas.push_back(p.data_decl());
    else
      prog.rules.push_back(p.rule());
  }
  return prog;
}

SRule parse_goal(const std::string& text) {
  std::vector<Token> toks = lex(text);
  // goals ignore layout: strip nothing, parse as a single rhs
  ItemParser p{toks};
  SRule r;
  r.fname = "main_goal";
  r.loc = p.peek().loc;
  SGuarded g;
  g.body = p.expr(0);
  r.alts.push_back(std::move(g));
  if (p.at(Tok::KwWhere)) {
    p.next();
    r.where_free.push_back(p.expect(Tok::LIdent, "variable name").text);
    while (p.at(Tok::Comma)) {
      p.next();
      r.where_free.push_back(p.expect(Tok::LIdent, "variable name").text);
    }
    p.expect(Tok::KwFree, "'free'");
  }
  p.expect(Tok::End, "end of goal");
  return r;
}

}  // namespace icc
