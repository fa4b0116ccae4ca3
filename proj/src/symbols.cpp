#include "icc/symbols.hpp"

#include <deque>
#include <map>
#include <mutex>
#include <utility>

namespace icc {
namespace {

struct Pool {
  std::mutex mu;
  std::deque<std::pair<std::string, std::string>> entries;  // index = id - 1; deque: stable refs
  std::map<std::pair<std::string, std::string>, SymId> index;
};

Pool& pool() {
  static Pool p;
  return p;
}

}  // namespace

SymId intern(const std::string& module, const std::string& name) {
  Pool& p = pool();
  std::lock_guard<std::mutex> lock(p.mu);
  auto key = std::make_pair(module, name);
  auto it = p.index.find(key);
  if (it != p.index.end()) return it->second;
  p.entries.emplace_back(module, name);
  SymId id = static_cast<SymId>(p.entries.size());
  p.index.emplace(std::move(key), id);
  return id;
}

static const std::pair<std::string, std::string>& entry(SymId id) {
  Pool& p = pool();
  std::lock_guard<std::mutex> lock(p.mu);
  if (id == 0 || id > p.entries.size()) throw LookupError("invalid symbol id");
  return p.entries[id - 1];
}

const std::string& sym_module(SymId id) { return entry(id).first; }
const std::string& sym_name(SymId id) { return entry(id).second; }

std::string sym_qualified(SymId id) {
  const auto& e = entry(id);
  return e.first + "." + e.second;
}

std::string Diagnostic::to_string() const {
  std::string s;
  if (loc.line > 0) {
    s += std::to_string(loc.line);
    s += ":";
    s += std::to_string(loc.col);
    s += ": ";
  }
  s += message;
  return s;
}

}  // namespace icc
