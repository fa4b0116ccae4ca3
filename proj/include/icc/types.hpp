#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "icc/symbols.hpp"

namespace icc {

struct ConstructorDecl {
  SymId name = 0;
  int arity = 0;
  int tag = 0;  // position within the owning type, 0-based
  bool operator==(const ConstructorDecl&) const = default;
};

struct TypeDecl {
  SymId name = 0;
  std::vector<ConstructorDecl> constructors;  // tag order
  bool operator==(const TypeDecl&) const = default;
};

// Immutable-after-construction table of data declarations. Constructor names
// are unique table-wide within a module; tags are assigned by declaration order.
class TypeTable {
 public:
  // Adds a type; throws CompileError on duplicate type or constructor names
  // (duplicates are checked per module of the *type* symbol).
  const TypeDecl& add_type(SymId type_name, const std::vector<std::pair<SymId, int>>& ctors,
                           SourceLoc loc = {});

  const TypeDecl* find_type(SymId name) const;
  // All constructors of a type in tag order; throws LookupError if unknown.
  const std::vector<ConstructorDecl>& constructors_of(SymId type_name) const;

  struct CtorInfo {
    SymId type_name = 0;
    int arity = 0;
    int tag = 0;
  };
  std::optional<CtorInfo> lookup_ctor(SymId ctor) const;

  // Unqualified lookups used by name resolution: searches `first_module`,
  // then any other module defining the name.
  std::optional<SymId> resolve_ctor_name(const std::string& name, const std::string& first_module) const;

  const std::vector<TypeDecl>& types() const { return types_; }

 private:
  std::vector<TypeDecl> types_;
  std::unordered_map<SymId, int> type_index_;
  std::unordered_map<SymId, CtorInfo> ctor_index_;
};

}  // namespace icc
