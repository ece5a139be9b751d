#ifndef MPS_FLAT_HPP
#define MPS_FLAT_HPP

#include <optional>
#include <string>
#include <vector>

#include "mps/ast.hpp"

namespace mps {

using VarId = int;

enum class VarRole { Input, Output, Local, Temp };

struct FlatVar {
    std::string name;
    VarRole role = VarRole::Local;
    Span span;
    std::optional<ClockDecl> clock;
    std::optional<std::int64_t> due;
};

enum class FlatOp { Const, Copy, Under, Over, Offset, Fby, Call };
enum class CalleeKind { Imported, Operator };

/// One normalized equation. Every operand is a variable; only `Call` may
/// define more than one variable.
struct FlatEq {
    FlatOp op = FlatOp::Copy;
    std::vector<VarId> lhs;
    std::vector<VarId> args;
    Literal lit{std::int64_t{0}};  // Const value, Fby initializer
    std::int64_t factor = 1;       // Under / Over
    Rational shift{0};             // Offset
    std::string callee;            // Call: imported node name or operator mnemonic
    CalleeKind callee_kind = CalleeKind::Imported;
    Span span;
};

/// The main node after inlining every defined-node call and normalizing
/// nested expressions into single-operator equations.
///
/// Main-node variables keep their names. Variables of an inlined instance are
/// prefixed with the instance path (`navigation.pos_o`, `navigation#2.pos_o`
/// for the second call); compiler temporaries are named `$n`.
struct FlatNode {
    std::string name;
    std::vector<FlatVar> vars;
    std::vector<VarId> inputs;
    std::vector<VarId> outputs;
    std::vector<FlatEq> eqs;
    std::vector<int> def;  // var -> defining equation, -1 for inputs

    std::optional<VarId> find(const std::string& var) const;
    const FlatVar& var(VarId v) const { return vars.at(static_cast<std::size_t>(v)); }
    std::size_t count(FlatOp op) const;
    std::size_t count_calls(const std::string& callee) const;
};

/// Inlines the program's main node. Throws CompileError on recursive node
/// instantiation.
FlatNode inline_program(const Program& program);

std::string describe(const FlatEq& eq, const FlatNode& node);

}  // namespace mps

#endif
