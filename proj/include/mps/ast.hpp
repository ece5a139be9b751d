#ifndef MPS_AST_HPP
#define MPS_AST_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mps/diagnostics.hpp"
#include "mps/rational.hpp"

namespace mps {

/// Constant flow value: an integer or a boolean.
struct Literal {
    std::variant<std::int64_t, bool> value;

    bool is_bool() const { return std::holds_alternative<bool>(value); }
    friend bool operator==(const Literal&, const Literal&) = default;
};

std::string to_string(const Literal& lit);

enum class BinaryOp { Add, Sub, Mul, Lt, Le, Gt, Ge, And, Or };
enum class UnaryOp { Neg, Not };

const char* symbol(BinaryOp op);
const char* symbol(UnaryOp op);
/// Stable mnemonic ("add", "lt", ...) used to name operator tasks.
const char* mnemonic(BinaryOp op);
const char* mnemonic(UnaryOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

namespace expr {

struct Const { Literal value; };
struct Var { std::string name; };
/// `(e1, e2, ...)` with at least two items.
struct Tuple { std::vector<ExprPtr> items; };
/// `cst fby e`.
struct Fby { Literal init; ExprPtr body; };
/// `N(e1, ..., en)`.
struct App { std::string node; std::vector<ExprPtr> args; Span name_span; };
/// `e /^ k`.
struct Under { ExprPtr body; std::int64_t factor; };
/// `e *^ k`.
struct Over { ExprPtr body; std::int64_t factor; };
/// `e ~> q`.
struct Offset { ExprPtr body; Rational shift; };
struct Binary { BinaryOp op; ExprPtr lhs; ExprPtr rhs; };
struct Unary { UnaryOp op; ExprPtr body; };

}  // namespace expr

struct Expr {
    using Node = std::variant<expr::Const, expr::Var, expr::Tuple, expr::Fby, expr::App,
                              expr::Under, expr::Over, expr::Offset, expr::Binary, expr::Unary>;
    Node node;
    Span span;
};

template <typename T, typename... Args>
ExprPtr make_expr(Span span, Args&&... args)
{
    return std::make_shared<const Expr>(Expr{T{std::forward<Args>(args)...}, span});
}

enum class GroundType { Int, Bool };

/// `rate (n, p)`: period n, phase n*p.
struct ClockDecl {
    std::int64_t period = 1;
    Rational phase_ratio{0};
    Span span;
};

struct Param {
    std::string name;
    std::optional<GroundType> type;
    std::optional<ClockDecl> clock;
    std::optional<std::int64_t> due;
    Span span;
};

struct Equation {
    std::vector<std::string> lhs;
    std::vector<Span> lhs_spans;
    ExprPtr rhs;
    Span span;
};

enum class NodeKind { Defined, Imported };

struct NodeDecl {
    NodeKind kind = NodeKind::Defined;
    std::string name;
    Span span;
    std::vector<Param> inputs;
    std::vector<Param> outputs;
    std::vector<Param> locals;
    std::vector<Equation> equations;
    std::optional<std::int64_t> wcet;

    const Param* find_var(const std::string& var) const;
};

struct Program {
    std::vector<NodeDecl> nodes;
    std::string main;

    const NodeDecl* find(const std::string& name) const;
    const NodeDecl& main_node() const;
};

}  // namespace mps

#endif
