#include <sstream>

#include "mps/ast.hpp"
#include "mps/frontend.hpp"

namespace mps {

std::string to_string(const Literal& lit)
{
    if (lit.is_bool()) return std::get<bool>(lit.value) ? "true" : "false";
    return std::to_string(std::get<std::int64_t>(lit.value));
}

const char* symbol(BinaryOp op)
{
    switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
    }
    return "?";
}

const char* symbol(UnaryOp op) { return op == UnaryOp::Neg ? "-" : "not"; }

const char* mnemonic(BinaryOp op)
{
    switch (op) {
    case BinaryOp::Add: return "add";
    case BinaryOp::Sub: return "sub";
    case BinaryOp::Mul: return "mul";
    case BinaryOp::Lt: return "lt";
    case BinaryOp::Le: return "le";
    case BinaryOp::Gt: return "gt";
    case BinaryOp::Ge: return "ge";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
    }
    return "?";
}

const char* mnemonic(UnaryOp op) { return op == UnaryOp::Neg ? "neg" : "not"; }

const Param* NodeDecl::find_var(const std::string& var) const
{
    for (const auto* list : {&inputs, &outputs, &locals})
        for (const auto& p : *list)
            if (p.name == var) return &p;
    return nullptr;
}

const NodeDecl* Program::find(const std::string& name) const
{
    for (const auto& nd : nodes)
        if (nd.name == name) return &nd;
    return nullptr;
}

const NodeDecl& Program::main_node() const
{
    const NodeDecl* m = find(main);
    if (!m) throw CompileError(ErrorKind::Structure, Span{}, "main node not found");
    return *m;
}

// ---------------------------------------------------------------------------
// Printer

namespace {

int precedence(BinaryOp op)
{
    switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 4;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 5;
    case BinaryOp::Mul: return 6;
    }
    return 0;
}

constexpr int kPostfix = 8;

int precedence(const Expr& e)
{
    return std::visit(
        [](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, expr::Fby>) return 0;
            else if constexpr (std::is_same_v<T, expr::Binary>) return precedence(n.op);
            else if constexpr (std::is_same_v<T, expr::Unary>) return n.op == UnaryOp::Not ? 3 : 7;
            else if constexpr (std::is_same_v<T, expr::Under> || std::is_same_v<T, expr::Over> ||
                               std::is_same_v<T, expr::Offset>)
                return kPostfix;
            else return 9;
        },
        e.node);
}

void emit(std::ostream& os, const Expr& e, int ctx);

void emit_list(std::ostream& os, const std::vector<ExprPtr>& items)
{
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) os << ", ";
        emit(os, *items[i], 0);
    }
}

void emit(std::ostream& os, const Expr& e, int ctx)
{
    bool paren = precedence(e) < ctx;
    if (paren) os << '(';
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, expr::Const>) {
                os << to_string(n.value);
            } else if constexpr (std::is_same_v<T, expr::Var>) {
                os << n.name;
            } else if constexpr (std::is_same_v<T, expr::Tuple>) {
                os << '(';
                emit_list(os, n.items);
                os << ')';
            } else if constexpr (std::is_same_v<T, expr::Fby>) {
                os << to_string(n.init) << " fby ";
                emit(os, *n.body, 0);
            } else if constexpr (std::is_same_v<T, expr::App>) {
                os << n.node << '(';
                emit_list(os, n.args);
                os << ')';
            } else if constexpr (std::is_same_v<T, expr::Under>) {
                emit(os, *n.body, kPostfix);
                os << " /^ " << n.factor;
            } else if constexpr (std::is_same_v<T, expr::Over>) {
                emit(os, *n.body, kPostfix);
                os << " *^ " << n.factor;
            } else if constexpr (std::is_same_v<T, expr::Offset>) {
                emit(os, *n.body, kPostfix);
                os << " ~> " << to_string(n.shift);
            } else if constexpr (std::is_same_v<T, expr::Binary>) {
                int p = precedence(n.op);
                bool cmp = p == 4;
                emit(os, *n.lhs, cmp ? p + 1 : p);
                os << ' ' << symbol(n.op) << ' ';
                emit(os, *n.rhs, p + 1);
            } else if constexpr (std::is_same_v<T, expr::Unary>) {
                if (n.op == UnaryOp::Not) {
                    os << "not ";
                    emit(os, *n.body, 3);
                } else {
                    bool simple = std::holds_alternative<expr::Var>(n.body->node) ||
                                  std::holds_alternative<expr::App>(n.body->node);
                    os << '-';
                    if (simple) {
                        emit(os, *n.body, 9);
                    } else {
                        os << '(';
                        emit(os, *n.body, 0);
                        os << ')';
                    }
                }
            }
        },
        e.node);
    if (paren) os << ')';
}

void emit_param(std::ostream& os, const Param& p)
{
    os << p.name;
    if (!p.type && !p.clock && !p.due) return;
    os << ':';
    if (p.type) os << ' ' << (*p.type == GroundType::Int ? "int" : "bool");
    if (p.clock) os << " rate (" << p.clock->period << ", " << to_string(p.clock->phase_ratio) << ')';
    if (p.due) os << " due " << *p.due;
}

void emit_params(std::ostream& os, const std::vector<Param>& ps)
{
    os << '(';
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (i) os << "; ";
        emit_param(os, ps[i]);
    }
    os << ')';
}

}  // namespace

std::string print(const Expr& e)
{
    std::ostringstream os;
    emit(os, e, 0);
    return os.str();
}

std::string print(const NodeDecl& nd)
{
    std::ostringstream os;
    if (nd.kind == NodeKind::Imported) os << "imported ";
    os << "node " << nd.name;
    emit_params(os, nd.inputs);
    os << " returns ";
    emit_params(os, nd.outputs);
    if (nd.kind == NodeKind::Imported) {
        os << " wcet " << nd.wcet.value_or(0) << ";\n";
        return os.str();
    }
    os << '\n';
    if (!nd.locals.empty()) {
        os << "var ";
        for (std::size_t i = 0; i < nd.locals.size(); ++i) {
            if (i) os << ' ';
            emit_param(os, nd.locals[i]);
            os << ';';
        }
        os << '\n';
    }
    os << "let\n";
    for (const auto& eq : nd.equations) {
        os << "  ";
        if (eq.lhs.size() > 1) os << '(';
        for (std::size_t i = 0; i < eq.lhs.size(); ++i) {
            if (i) os << ", ";
            os << eq.lhs[i];
        }
        if (eq.lhs.size() > 1) os << ')';
        os << " = " << print(*eq.rhs) << ";\n";
    }
    os << "tel\n";
    return os.str();
}

std::string print(const Program& p)
{
    std::string out;
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
        if (i) out += '\n';
        out += print(p.nodes[i]);
    }
    return out;
}

}  // namespace mps
