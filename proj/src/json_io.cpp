#include "icc/json_io.hpp"

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace icc {
namespace {

using json = nlohmann::ordered_json;

std::string qualify(SymId sym) { return sym_qualified(sym); }

SymId unqualify(const std::string& qualified, const char* what) {
  auto dot = qualified.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == qualified.size()) {
    throw CompileError({{}, "json: " + std::string(what) + " '" + qualified +
                                "' is not module-qualified"});
  }
  return intern(qualified.substr(0, dot), qualified.substr(dot + 1));
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

json ref_to_json(const VarRef& ref) {
  json j;
  j["base"] = ref.base == RefBase::Root ? "root" : "local";
  if (ref.base == RefBase::Local) j["var"] = ref.var;
  if (!ref.path.empty()) j["path"] = ref.path;
  return j;
}

json expr_to_json(const IExpr& e) {
  json j;
  switch (e.kind) {
    case IExprKind::Var:
      j["kind"] = "var";
      j["ref"] = ref_to_json(e.ref);
      break;
    case IExprKind::Int:
      j["kind"] = "int";
      j["value"] = e.lit;
      break;
    case IExprKind::Node:
      j["kind"] = "node";
      j["label"] = {
          {"kind", e.label.kind == LabelKind::Constructor ? "constructor"
                                                             : "function"},
          {"name", qualify(e.label.sym)},
      };
      {
        json args = json::array();
        for (const auto& a : e.args) args.push_back(expr_to_json(a));
        j["args"] = std::move(args);
      }
      break;
    case IExprKind::Or:
      j["kind"] = "or";
      j["left"] = expr_to_json(e.args[0]);
      j["right"] = expr_to_json(e.args[1]);
      break;
  }
  return j;
}

json block_to_json(const IBlock& b);

json stmt_to_json(const IStatement& s) {
  json j;
  switch (s.kind) {
    case IStmtKind::Return:
      j["kind"] = "return";
      j["expr"] = expr_to_json(s.expr);
      break;
    case IStmtKind::Exempt:
      j["kind"] = "exempt";
      break;
    case IStmtKind::Case: {
      j["kind"] = "case";
      j["scrutinee"] = ref_to_json(s.scrut);
      json branches = json::array();
      for (size_t i = 0; i < s.ctors.size(); ++i) {
        branches.push_back({{"constructor", qualify(s.ctors[i])},
                            {"block", block_to_json(s.blocks[i])}});
      }
      j["branches"] = std::move(branches);
      break;
    }
    case IStmtKind::CaseLit: {
      j["kind"] = "caselit";
      j["scrutinee"] = ref_to_json(s.scrut);
      json branches = json::array();
      for (size_t i = 0; i < s.lits.size(); ++i) {
        branches.push_back(
            {{"value", s.lits[i]}, {"block", block_to_json(s.blocks[i])}});
      }
      j["branches"] = std::move(branches);
      j["default"] = block_to_json(s.blocks.back());
      break;
    }
  }
  return j;
}

json block_to_json(const IBlock& b) {
  json j;
  json decls = json::array();
  for (const auto& d : b.decls) {
    decls.push_back({{"var", d.var}, {"free", d.is_free}});
  }
  j["declare"] = std::move(decls);
  json assigns = json::array();
  for (const auto& a : b.assigns) {
    assigns.push_back(
        {{"lhs", ref_to_json(a.lhs)}, {"rhs", expr_to_json(a.rhs)}});
  }
  j["assign"] = std::move(assigns);
  j["stmt"] = stmt_to_json(b.stm);
  return j;
}

json function_to_json(const IFunction& f) {
  json j;
  j["name"] = qualify(f.name);
  j["arity"] = f.arity;
  if (!f.var_names.empty()) {
    json names = json::object();
    for (const auto& [var, name] : f.var_names) {
      names[std::to_string(var)] = name;
    }
    j["names"] = std::move(names);
  }
  j["body"] = block_to_json(f.body);
  return j;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

[[noreturn]] void fail(const std::string& msg) {
  throw CompileError({{}, "json: " + msg});
}

const json& field(const json& j, const char* key, const char* ctx) {
  if (!j.is_object()) fail(std::string(ctx) + " must be an object");
  auto it = j.find(key);
  if (it == j.end()) {
    fail(std::string(ctx) + " is missing field '" + key + "'");
  }
  return *it;
}

std::string str_field(const json& j, const char* key, const char* ctx) {
  const json& v = field(j, key, ctx);
  if (!v.is_string()) {
    fail(std::string(ctx) + " field '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

std::int64_t int_field(const json& j, const char* key, const char* ctx) {
  const json& v = field(j, key, ctx);
  if (!v.is_number_integer()) {
    fail(std::string(ctx) + " field '" + key + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

const json& array_field(const json& j, const char* key, const char* ctx) {
  const json& v = field(j, key, ctx);
  if (!v.is_array()) {
    fail(std::string(ctx) + " field '" + key + "' must be an array");
  }
  return v;
}

VarRef json_to_ref(const json& j) {
  std::string base = str_field(j, "base", "reference");
  VarRef ref;
  if (base == "root") {
    ref.base = RefBase::Root;
  } else if (base == "local") {
    ref.base = RefBase::Local;
    ref.var = static_cast<VarId>(int_field(j, "var", "reference"));
  } else {
    fail("reference base must be 'root' or 'local', got '" + base + "'");
  }
  if (j.contains("path")) {
    const json& path = j.at("path");
    if (!path.is_array()) fail("reference path must be an array");
    for (const auto& step : path) {
      if (!step.is_number_integer() || step.get<std::int64_t>() < 1) {
        fail("reference path entries must be positive integers");
      }
      ref.path.push_back(step.get<int>());
    }
  }
  return ref;
}

IExpr json_to_expr(const json& j) {
  std::string kind = str_field(j, "kind", "expression");
  if (kind == "var") {
    return IExpr::mk_var(json_to_ref(field(j, "ref", "var expression")));
  }
  if (kind == "int") {
    return IExpr::mk_int(int_field(j, "value", "int expression"));
  }
  if (kind == "node") {
    const json& label = field(j, "label", "node expression");
    std::string lk = str_field(label, "kind", "node label");
    LabelKind k;
    if (lk == "constructor") {
      k = LabelKind::Constructor;
    } else if (lk == "function") {
      k = LabelKind::Function;
    } else {
      fail("node label kind must be 'constructor' or 'function', got '" + lk +
           "'");
    }
    SymId sym = unqualify(str_field(label, "name", "node label"), "label");
    std::vector<IExpr> args;
    for (const auto& a : array_field(j, "args", "node expression")) {
      args.push_back(json_to_expr(a));
    }
    return IExpr::mk_node(ILabel{k, sym}, std::move(args));
  }
  if (kind == "or") {
    return IExpr::mk_or(json_to_expr(field(j, "left", "or expression")),
                        json_to_expr(field(j, "right", "or expression")));
  }
  fail("unknown expression kind '" + kind + "'");
}

IBlock json_to_block(const json& j);

IStatement json_to_stmt(const json& j) {
  std::string kind = str_field(j, "kind", "statement");
  if (kind == "return") {
    IStatement s;
    s.kind = IStmtKind::Return;
    s.expr = json_to_expr(field(j, "expr", "return"));
    return s;
  }
  if (kind == "exempt") {
    IStatement s;
    s.kind = IStmtKind::Exempt;
    return s;
  }
  if (kind == "case") {
    IStatement s;
    s.kind = IStmtKind::Case;
    s.scrut = json_to_ref(field(j, "scrutinee", "case"));
    for (const auto& br : array_field(j, "branches", "case")) {
      s.ctors.push_back(unqualify(str_field(br, "constructor", "case branch"),
                                  "constructor"));
      s.blocks.push_back(json_to_block(field(br, "block", "case branch")));
    }
    if (s.ctors.empty()) fail("case must have at least one branch");
    return s;
  }
  if (kind == "caselit") {
    IStatement s;
    s.kind = IStmtKind::CaseLit;
    s.scrut = json_to_ref(field(j, "scrutinee", "caselit"));
    for (const auto& br : array_field(j, "branches", "caselit")) {
      s.lits.push_back(int_field(br, "value", "caselit branch"));
      s.blocks.push_back(json_to_block(field(br, "block", "caselit branch")));
    }
    s.blocks.push_back(json_to_block(field(j, "default", "caselit")));
    return s;
  }
  fail("unknown statement kind '" + kind + "'");
}

IBlock json_to_block(const json& j) {
  IBlock b;
  for (const auto& d : array_field(j, "declare", "block")) {
    IDecl decl;
    decl.var = static_cast<VarId>(int_field(d, "var", "declaration"));
    const json& fr = field(d, "free", "declaration");
    if (!fr.is_boolean()) fail("declaration field 'free' must be a boolean");
    decl.is_free = fr.get<bool>();
    b.decls.push_back(decl);
  }
  for (const auto& a : array_field(j, "assign", "block")) {
    IAssign assign;
    assign.lhs = json_to_ref(field(a, "lhs", "assignment"));
    assign.rhs = json_to_expr(field(a, "rhs", "assignment"));
    b.assigns.push_back(std::move(assign));
  }
  b.stm = json_to_stmt(field(j, "stmt", "block"));
  return b;
}

}  // namespace

std::string emit_json(const IProgram& program) {
  json doc;
  doc["format"] = kJsonFormat;
  json types = json::array();
  for (const auto& decl : program.types.types()) {
    json ctors = json::array();
    for (const auto& c : decl.constructors) {
      ctors.push_back({{"name", qualify(c.name)}, {"arity", c.arity}});
    }
    types.push_back(
        {{"name", qualify(decl.name)}, {"constructors", std::move(ctors)}});
  }
  doc["types"] = std::move(types);
  json functions = json::array();
  for (const auto& f : program.functions) {
    functions.push_back(function_to_json(f));
  }
  doc["functions"] = std::move(functions);
  return doc.dump(2) + "\n";
}

IProgram parse_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("parse error: ") + e.what());
  }
  if (str_field(doc, "format", "document") != kJsonFormat) {
    fail("unsupported format tag (expected '" + std::string(kJsonFormat) +
         "')");
  }
  IProgram program;
  for (const auto& t : array_field(doc, "types", "document")) {
    SymId type_name = unqualify(str_field(t, "name", "type"), "type");
    std::vector<std::pair<SymId, int>> ctors;
    for (const auto& c : array_field(t, "constructors", "type")) {
      SymId ctor_name =
          unqualify(str_field(c, "name", "constructor"), "constructor");
      auto arity = int_field(c, "arity", "constructor");
      if (arity < 0) fail("constructor arity must be non-negative");
      ctors.emplace_back(ctor_name, static_cast<int>(arity));
    }
    program.types.add_type(type_name, ctors);
  }
  for (const auto& f : array_field(doc, "functions", "document")) {
    IFunction fn;
    fn.name = unqualify(str_field(f, "name", "function"), "function");
    auto arity = int_field(f, "arity", "function");
    if (arity < 0) fail("function arity must be non-negative");
    fn.arity = static_cast<int>(arity);
    if (f.contains("names")) {
      const json& names = f.at("names");
      if (!names.is_object()) fail("function 'names' must be an object");
      for (auto it = names.begin(); it != names.end(); ++it) {
        VarId var = 0;
        try {
          var = static_cast<VarId>(std::stoi(it.key()));
        } catch (const std::exception&) {
          fail("names keys must be decimal variable ids");
        }
        if (!it.value().is_string()) fail("names values must be strings");
        fn.var_names[var] = it.value().get<std::string>();
      }
    }
    fn.body = json_to_block(field(f, "body", "function"));
    program.functions.push_back(std::move(fn));
  }
  return program;
}

}  // namespace icc
