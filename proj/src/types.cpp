#include "icc/types.hpp"

namespace icc {

const TypeDecl& TypeTable::add_type(SymId type_name, const std::vector<std::pair<SymId, int>>& ctors,
                                    SourceLoc loc) {
  if (type_index_.count(type_name))
    throw CompileError({loc, "duplicate data declaration: " + sym_name(type_name)});
  if (ctors.empty())
    throw CompileError({loc, "data type needs at least one constructor: " + sym_name(type_name)});
  TypeDecl decl;
  decl.name = type_name;
  int tag = 0;
  for (const auto& [cname, arity] : ctors) {
    if (ctor_index_.count(cname))
      throw CompileError({loc, "duplicate constructor: " + sym_qualified(cname)});
    decl.constructors.push_back({cname, arity, tag});
    ++tag;
  }
  types_.push_back(std::move(decl));
  int idx = static_cast<int>(types_.size()) - 1;
  type_index_[type_name] = idx;
  for (const auto& c : types_[idx].constructors)
    ctor_index_[c.name] = CtorInfo{type_name, c.arity, c.tag};
  return types_[idx];
}

const TypeDecl* TypeTable::find_type(SymId name) const {
  auto it = type_index_.find(name);
  return it == type_index_.end() ? nullptr : &types_[it->second];
}

const std::vector<ConstructorDecl>& TypeTable::constructors_of(SymId type_name) const {
  const TypeDecl* t = find_type(type_name);
  if (!t) throw LookupError("unknown type: " + sym_qualified(type_name));
  return t->constructors;
}

std::optional<TypeTable::CtorInfo> TypeTable::lookup_ctor(SymId ctor) const {
  auto it = ctor_index_.find(ctor);
  if (it == ctor_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<SymId> TypeTable::resolve_ctor_name(const std::string& name,
                                                  const std::string& first_module) const {
  for (const char* module : {first_module.c_str(), kModuleMain, kModulePrelude}) {
    SymId s = intern(module, name);
    if (ctor_index_.count(s)) return s;
  }
  // Fall back to a deterministic scan (lowest symbol id wins).
  SymId best = 0;
  for (const auto& [sym, info] : ctor_index_) {
    (void)info;
    if (sym_name(sym) == name && (best == 0 || sym < best)) best = sym;
  }
  if (best) return best;
  return std::nullopt;
}

}  // namespace icc
