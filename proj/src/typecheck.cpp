#include <functional>
#include <numeric>
#include <optional>
#include <set>

#include "mps/types.hpp"

namespace mps {

std::string to_string(const ScalarType& t)
{
    switch (t.kind) {
    case ScalarType::Kind::Int: return "int";
    case ScalarType::Kind::Bool: return "bool";
    case ScalarType::Kind::Var: {
        std::string out = "'";
        int v = t.var;
        do {
            out += static_cast<char>('a' + v % 26);
            v /= 26;
        } while (v > 0);
        return out;
    }
    }
    return "?";
}

namespace {

std::string product(const std::vector<ScalarType>& ts)
{
    if (ts.size() == 1) return to_string(ts.front());
    std::string out = "(";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i) out += '*';
        out += to_string(ts[i]);
    }
    return out + ")";
}

/// Union-find over type variables. Terms reuse ScalarType with `var` as slot.
class Unifier {
public:
    ScalarType fresh()
    {
        parent_.push_back(static_cast<int>(parent_.size()));
        bound_.emplace_back();
        return ScalarType{ScalarType::Kind::Var, static_cast<int>(parent_.size()) - 1};
    }

    ScalarType resolve(ScalarType t)
    {
        if (t.kind != ScalarType::Kind::Var) return t;
        int r = find(t.var);
        if (bound_[r]) return *bound_[r];
        return ScalarType{ScalarType::Kind::Var, r};
    }

    void unify(ScalarType expected, ScalarType got, const Span& span)
    {
        expected = resolve(expected);
        got = resolve(got);
        if (expected == got) return;
        if (got.kind == ScalarType::Kind::Var) {
            bind(got.var, expected);
        } else if (expected.kind == ScalarType::Kind::Var) {
            bind(expected.var, got);
        } else {
            throw CompileError(ErrorKind::Type, span,
                               "type mismatch: expected " + to_string(expected) + ", got " + to_string(got));
        }
    }

private:
    int find(int v)
    {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }

    void bind(int var, ScalarType to)
    {
        int r = find(var);
        if (to.kind == ScalarType::Kind::Var) {
            parent_[r] = find(to.var);
        } else {
            bound_[r] = to;
        }
    }

    std::vector<int> parent_;
    std::vector<std::optional<ScalarType>> bound_;
};

ScalarType ground(GroundType g)
{
    return ScalarType{g == GroundType::Int ? ScalarType::Kind::Int : ScalarType::Kind::Bool, 0};
}

const ScalarType kInt{ScalarType::Kind::Int, 0};
const ScalarType kBool{ScalarType::Kind::Bool, 0};

class NodeChecker {
public:
    NodeChecker(const NodeDecl& node, const std::map<std::string, Signature>& done)
        : node_(node), done_(done) {}

    Signature run()
    {
        auto declare = [&](const Param& p) { env_[p.name] = p.type ? ground(*p.type) : u_.fresh(); };
        for (const auto& p : node_.inputs) declare(p);
        for (const auto& p : node_.outputs) declare(p);
        for (const auto& p : node_.locals) declare(p);

        for (const auto& eq : node_.equations) {
            auto rhs = infer(*eq.rhs);
            if (rhs.size() != eq.lhs.size())
                throw CompileError(ErrorKind::Type, eq.span,
                                   "equation defines " + std::to_string(eq.lhs.size()) +
                                       " variable(s) but its expression has " + std::to_string(rhs.size()) +
                                       " value(s)");
            for (std::size_t i = 0; i < rhs.size(); ++i) u_.unify(env_.at(eq.lhs[i]), rhs[i], eq.rhs->span);
        }
        return generalize();
    }

private:
    Signature generalize()
    {
        Signature sig;
        std::map<int, int> rename;
        auto out = [&](const Param& p) {
            ScalarType t = u_.resolve(env_.at(p.name));
            if (t.kind == ScalarType::Kind::Var) {
                auto [it, _] = rename.emplace(t.var, static_cast<int>(rename.size()));
                t.var = it->second;
            }
            return t;
        };
        for (const auto& p : node_.inputs) sig.inputs.push_back(out(p));
        for (const auto& p : node_.outputs) sig.outputs.push_back(out(p));
        return sig;
    }

    ScalarType single(const Expr& e, const char* what)
    {
        auto ts = infer(e);
        if (ts.size() != 1)
            throw CompileError(ErrorKind::Type, e.span,
                               std::string(what) + " expects a single value, got a tuple of " +
                                   std::to_string(ts.size()));
        return ts.front();
    }

    std::vector<ScalarType> infer(const Expr& e)
    {
        return std::visit(
            [&](const auto& n) -> std::vector<ScalarType> {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, expr::Const>) {
                    return {n.value.is_bool() ? kBool : kInt};
                } else if constexpr (std::is_same_v<T, expr::Var>) {
                    return {env_.at(n.name)};
                } else if constexpr (std::is_same_v<T, expr::Tuple>) {
                    std::vector<ScalarType> out;
                    for (const auto& item : n.items) {
                        auto ts = infer(*item);
                        out.insert(out.end(), ts.begin(), ts.end());
                    }
                    return out;
                } else if constexpr (std::is_same_v<T, expr::Fby>) {
                    auto ts = infer(*n.body);
                    ScalarType init = n.init.is_bool() ? kBool : kInt;
                    for (auto t : ts) u_.unify(t, init, e.span);
                    return ts;
                } else if constexpr (std::is_same_v<T, expr::App>) {
                    return apply(n, e.span);
                } else if constexpr (std::is_same_v<T, expr::Binary>) {
                    ScalarType l = single(*n.lhs, symbol(n.op));
                    ScalarType r = single(*n.rhs, symbol(n.op));
                    switch (n.op) {
                    case BinaryOp::And:
                    case BinaryOp::Or:
                        u_.unify(kBool, l, n.lhs->span);
                        u_.unify(kBool, r, n.rhs->span);
                        return {kBool};
                    case BinaryOp::Lt:
                    case BinaryOp::Le:
                    case BinaryOp::Gt:
                    case BinaryOp::Ge:
                        u_.unify(kInt, l, n.lhs->span);
                        u_.unify(kInt, r, n.rhs->span);
                        return {kBool};
                    default:
                        u_.unify(kInt, l, n.lhs->span);
                        u_.unify(kInt, r, n.rhs->span);
                        return {kInt};
                    }
                } else if constexpr (std::is_same_v<T, expr::Unary>) {
                    ScalarType t = single(*n.body, symbol(n.op));
                    ScalarType want = n.op == UnaryOp::Not ? kBool : kInt;
                    u_.unify(want, t, n.body->span);
                    return {want};
                } else {
                    return infer(*n.body);
                }
            },
            e.node);
    }

    std::vector<ScalarType> apply(const expr::App& app, const Span& span)
    {
        const Signature& sig = done_.at(app.node);
        std::map<int, ScalarType> inst;
        auto instantiate = [&](ScalarType t) {
            if (t.kind != ScalarType::Kind::Var) return t;
            auto it = inst.find(t.var);
            if (it == inst.end()) it = inst.emplace(t.var, u_.fresh()).first;
            return it->second;
        };
        std::vector<ScalarType> args;
        std::vector<Span> spans;
        for (const auto& a : app.args) {
            auto ts = infer(*a);
            args.insert(args.end(), ts.begin(), ts.end());
            spans.insert(spans.end(), ts.size(), a->span);
        }
        if (args.size() != sig.inputs.size())
            throw CompileError(ErrorKind::Type, span,
                               "node " + app.node + " expects " + std::to_string(sig.inputs.size()) +
                                   " input(s), got " + std::to_string(args.size()));
        for (std::size_t i = 0; i < args.size(); ++i) u_.unify(instantiate(sig.inputs[i]), args[i], spans[i]);
        std::vector<ScalarType> out;
        for (auto t : sig.outputs) out.push_back(instantiate(t));
        return out;
    }

    const NodeDecl& node_;
    const std::map<std::string, Signature>& done_;
    Unifier u_;
    std::map<std::string, ScalarType> env_;
};

Signature imported_signature(const NodeDecl& nd)
{
    Signature sig;
    int next = 0;
    auto scalar = [&](const Param& p) {
        return p.type ? ground(*p.type) : ScalarType{ScalarType::Kind::Var, next++};
    };
    for (const auto& p : nd.inputs) sig.inputs.push_back(scalar(p));
    for (const auto& p : nd.outputs) sig.outputs.push_back(scalar(p));
    return sig;
}

void collect_calls(const Expr& e, std::vector<std::pair<std::string, Span>>& out)
{
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, expr::App>) {
                out.emplace_back(n.node, n.name_span);
                for (const auto& a : n.args) collect_calls(*a, out);
            } else if constexpr (std::is_same_v<T, expr::Tuple>) {
                for (const auto& a : n.items) collect_calls(*a, out);
            } else if constexpr (std::is_same_v<T, expr::Binary>) {
                collect_calls(*n.lhs, out);
                collect_calls(*n.rhs, out);
            } else if constexpr (std::is_same_v<T, expr::Const> || std::is_same_v<T, expr::Var>) {
            } else {
                collect_calls(*n.body, out);
            }
        },
        e.node);
}

}  // namespace

std::string to_string(const Signature& sig)
{
    return product(sig.inputs) + "->" + product(sig.outputs);
}

std::map<std::string, Signature> type_check(const Program& program)
{
    std::map<std::string, Signature> done;
    std::set<std::string> active;

    std::function<void(const NodeDecl&)> visit = [&](const NodeDecl& nd) {
        if (done.count(nd.name)) return;
        if (nd.kind == NodeKind::Imported) {
            done.emplace(nd.name, imported_signature(nd));
            return;
        }
        active.insert(nd.name);
        for (const auto& eq : nd.equations) {
            std::vector<std::pair<std::string, Span>> calls;
            collect_calls(*eq.rhs, calls);
            for (const auto& [callee, span] : calls) {
                if (active.count(callee))
                    throw CompileError(ErrorKind::Structure, span, "recursive instantiation of node '" + callee + "'");
                visit(*program.find(callee));
            }
        }
        active.erase(nd.name);
        done.emplace(nd.name, NodeChecker(nd, done).run());
    };
    for (const auto& nd : program.nodes) visit(nd);
    return done;
}

}  // namespace mps
