#ifndef MPS_FRONTEND_HPP
#define MPS_FRONTEND_HPP

#include <optional>
#include <string>
#include <string_view>

#include "mps/ast.hpp"

namespace mps {

struct ParseOptions {
    /// Main node name; when empty the last defined node is used.
    std::string main;
};

/// Parses and structurally validates a program. Throws CompileError.
///
/// Structural checks performed here: unique node names, unique equation
/// targets, every output and local defined exactly once, no assignment to
/// inputs, defined nodes have at least one equation, imported nodes carry a
/// wcet, `due` only on outputs and not beyond a declared period, `~>` shifts
/// non-negative, and the main node exists and is defined.
Program parse(std::string_view source, const ParseOptions& options = {});

/// Canonical concrete syntax. `parse(print(p))` prints back identically.
std::string print(const Program& program);
std::string print(const NodeDecl& node);
std::string print(const Expr& e);

}  // namespace mps

#endif
