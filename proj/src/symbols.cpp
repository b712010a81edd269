#include "odelin/symbols.hpp"

#include <deque>
#include <mutex>
#include <optional>
#include <unordered_map>

#include "odelin/expr.hpp"

namespace odelin {
namespace {

struct Entry {
  std::string name;
  std::optional<Func> func;
  Expr arg;
};

class SymbolTable {
 public:
  SymbolTable() {
    // Higher derivatives first so they lead within a degree.
    for (const char* dep : {"u", "y"}) {
      for (int k = 4; k >= 0; --k) {
        intern_locked(std::string(dep) + std::string(static_cast<std::size_t>(k), '\''));
      }
    }
    intern_locked("x");
  }

  SymbolId intern(std::string_view name) {
    std::lock_guard lock(mu_);
    return intern_locked(std::string(name));
  }

  SymbolId intern_atom(Func f, const Expr& arg) {
    std::string key = std::string(func_name(f)) + "(" + arg.str() + ")";
    std::lock_guard lock(mu_);
    if (auto it = atoms_.find(key); it != atoms_.end()) return it->second;
    auto id = static_cast<SymbolId>(entries_.size());
    entries_.push_back(Entry{key, f, arg});
    atoms_.emplace(std::move(key), id);
    return id;
  }

  const Entry& at(SymbolId id) const {
    std::lock_guard lock(mu_);
    return entries_.at(id);
  }

 private:
  SymbolId intern_locked(std::string name) {
    if (auto it = variables_.find(name); it != variables_.end()) return it->second;
    auto id = static_cast<SymbolId>(entries_.size());
    entries_.push_back(Entry{name, std::nullopt, Expr()});
    variables_.emplace(std::move(name), id);
    return id;
  }

  mutable std::mutex mu_;
  std::deque<Entry> entries_;  // deque: references stay valid on growth
  std::unordered_map<std::string, SymbolId> variables_;
  std::unordered_map<std::string, SymbolId> atoms_;
};

SymbolTable& table() {
  static SymbolTable t;
  return t;
}

}  // namespace

std::string_view func_name(Func f) {
  switch (f) {
    case Func::Exp: return "exp";
    case Func::Ln: return "ln";
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Sqrt: return "sqrt";
  }
  return "?";
}

SymbolId intern_variable(std::string_view name) { return table().intern(name); }

const std::string& symbol_name(SymbolId id) { return table().at(id).name; }

bool is_atom(SymbolId id) { return table().at(id).func.has_value(); }

SymbolId intern_atom(Func f, const Expr& canonical_arg) {
  return table().intern_atom(f, canonical_arg);
}

Func atom_func(SymbolId id) { return *table().at(id).func; }

const Expr& atom_arg(SymbolId id) { return table().at(id).arg; }

Expr symbol_expr(SymbolId id) {
  const Entry& e = table().at(id);
  if (e.func) return Expr::make(ExprNode{ExprKind::Function, {}, 0, 0, *e.func, {e.arg}});
  return Expr::variable(id);
}

}  // namespace odelin
