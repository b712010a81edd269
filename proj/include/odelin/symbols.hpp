#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace odelin {

/// Index into the process-wide symbol table. Variables and function atoms
/// share one index space; lower indices sort first in monomial orderings.
using SymbolId = std::uint32_t;

enum class Func : std::uint8_t { Exp, Ln, Sin, Cos, Sqrt };

std::string_view func_name(Func f);

/// Interns a variable name. Jet names for x, y and u up to fourth order are
/// pre-interned so that indices (and hence printed term order) do not depend
/// on the order in which inputs are processed.
SymbolId intern_variable(std::string_view name);

const std::string& symbol_name(SymbolId id);

bool is_atom(SymbolId id);

}  // namespace odelin
