#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace icc {

// Interned qualified symbol: (module, name). Id 0 is invalid.
using SymId = std::uint32_t;

constexpr const char* kModuleMain = "Main";
constexpr const char* kModulePrelude = "Prelude";
constexpr const char* kModuleVm = "$vm";  // synthetic runtime symbols, never user-visible

SymId intern(const std::string& module, const std::string& name);
const std::string& sym_module(SymId id);
const std::string& sym_name(SymId id);
std::string sym_qualified(SymId id);  // "Module.name"

struct SourceLoc {
  int line = 0;
  int col = 0;
  bool operator==(const SourceLoc&) const = default;
};

struct Diagnostic {
  SourceLoc loc;
  std::string message;
  std::string to_string() const;
};

// Thrown for unrecoverable user-facing errors (parse, resolution, semantic).
class CompileError : public std::runtime_error {
 public:
  CompileError(Diagnostic d) : std::runtime_error(d.to_string()), diag(std::move(d)) {}
  Diagnostic diag;
};

class LookupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace icc
