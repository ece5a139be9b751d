#include <map>
#include <set>
#include <sstream>

#include "mps/flat.hpp"

namespace mps {

std::optional<VarId> FlatNode::find(const std::string& name) const
{
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i].name == name) return static_cast<VarId>(i);
    return std::nullopt;
}

std::size_t FlatNode::count(FlatOp op) const
{
    std::size_t n = 0;
    for (const auto& eq : eqs) n += eq.op == op;
    return n;
}

std::size_t FlatNode::count_calls(const std::string& callee) const
{
    std::size_t n = 0;
    for (const auto& eq : eqs) n += eq.op == FlatOp::Call && eq.callee == callee;
    return n;
}

std::string describe(const FlatEq& eq, const FlatNode& node)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < eq.lhs.size(); ++i) os << (i ? ", " : "") << node.var(eq.lhs[i]).name;
    os << " = ";
    auto arg = [&](std::size_t i) { return node.var(eq.args.at(i)).name; };
    switch (eq.op) {
    case FlatOp::Const: os << to_string(eq.lit); break;
    case FlatOp::Copy: os << arg(0); break;
    case FlatOp::Under: os << arg(0) << " /^ " << eq.factor; break;
    case FlatOp::Over: os << arg(0) << " *^ " << eq.factor; break;
    case FlatOp::Offset: os << arg(0) << " ~> " << to_string(eq.shift); break;
    case FlatOp::Fby: os << to_string(eq.lit) << " fby " << arg(0); break;
    case FlatOp::Call:
        os << eq.callee << '(';
        for (std::size_t i = 0; i < eq.args.size(); ++i) os << (i ? ", " : "") << arg(i);
        os << ')';
        break;
    }
    return os.str();
}

namespace {

class Inliner {
public:
    explicit Inliner(const Program& p) : program_(p) {}

    FlatNode run()
    {
        const NodeDecl& main = program_.main_node();
        out_.name = main.name;
        Scope scope;
        for (const auto& p : main.inputs) {
            VarId v = add_var(p.name, VarRole::Input, p);
            scope[p.name] = v;
            out_.inputs.push_back(v);
        }
        for (const auto& p : main.outputs) {
            VarId v = add_var(p.name, VarRole::Output, p);
            scope[p.name] = v;
            out_.outputs.push_back(v);
        }
        for (const auto& p : main.locals) scope[p.name] = add_var(p.name, VarRole::Local, p);
        active_.insert(main.name);
        body(main, scope);

        out_.def.assign(out_.vars.size(), -1);
        for (std::size_t i = 0; i < out_.eqs.size(); ++i)
            for (VarId v : out_.eqs[i].lhs) out_.def[static_cast<std::size_t>(v)] = static_cast<int>(i);
        return std::move(out_);
    }

private:
    using Scope = std::map<std::string, VarId>;

    VarId add_var(std::string name, VarRole role, const Param& p)
    {
        out_.vars.push_back(FlatVar{std::move(name), role, p.span, p.clock, p.due});
        return static_cast<VarId>(out_.vars.size() - 1);
    }

    VarId temp(const Span& span)
    {
        out_.vars.push_back(FlatVar{"$" + std::to_string(++temps_), VarRole::Temp, span, std::nullopt, std::nullopt});
        return static_cast<VarId>(out_.vars.size() - 1);
    }

    void body(const NodeDecl& nd, const Scope& scope)
    {
        for (const auto& eq : nd.equations) {
            std::vector<VarId> dests;
            for (const auto& x : eq.lhs) dests.push_back(scope.at(x));
            normalize(*eq.rhs, scope, &dests);
        }
    }

    void emit(FlatEq eq) { out_.eqs.push_back(std::move(eq)); }

    /// Result variable for position `i`: the caller's destination if any, else a temporary.
    VarId target(const std::vector<VarId>* dests, std::size_t i, const Span& span)
    {
        return dests ? dests->at(i) : temp(span);
    }

    std::vector<VarId> normalize(const Expr& e, const Scope& scope, const std::vector<VarId>* dests)
    {
        return std::visit(
            [&](const auto& n) -> std::vector<VarId> {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, expr::Const>) {
                    VarId t = target(dests, 0, e.span);
                    FlatEq eq;
                    eq.op = FlatOp::Const;
                    eq.lhs = {t};
                    eq.lit = n.value;
                    eq.span = e.span;
                    emit(eq);
                    return {t};
                } else if constexpr (std::is_same_v<T, expr::Var>) {
                    return copy_into({scope.at(n.name)}, dests, e.span);
                } else if constexpr (std::is_same_v<T, expr::Tuple>) {
                    std::vector<VarId> atoms;
                    for (const auto& item : n.items) {
                        auto a = normalize(*item, scope, nullptr);
                        atoms.insert(atoms.end(), a.begin(), a.end());
                    }
                    return copy_into(atoms, dests, e.span);
                } else if constexpr (std::is_same_v<T, expr::Fby>) {
                    return unary_each(normalize(*n.body, scope, nullptr), dests, e.span, [&](FlatEq& eq) {
                        eq.op = FlatOp::Fby;
                        eq.lit = n.init;
                    });
                } else if constexpr (std::is_same_v<T, expr::Under>) {
                    return unary_each(normalize(*n.body, scope, nullptr), dests, e.span, [&](FlatEq& eq) {
                        eq.op = FlatOp::Under;
                        eq.factor = n.factor;
                    });
                } else if constexpr (std::is_same_v<T, expr::Over>) {
                    return unary_each(normalize(*n.body, scope, nullptr), dests, e.span, [&](FlatEq& eq) {
                        eq.op = FlatOp::Over;
                        eq.factor = n.factor;
                    });
                } else if constexpr (std::is_same_v<T, expr::Offset>) {
                    return unary_each(normalize(*n.body, scope, nullptr), dests, e.span, [&](FlatEq& eq) {
                        eq.op = FlatOp::Offset;
                        eq.shift = n.shift;
                    });
                } else if constexpr (std::is_same_v<T, expr::Binary>) {
                    VarId l = normalize(*n.lhs, scope, nullptr).front();
                    VarId r = normalize(*n.rhs, scope, nullptr).front();
                    return operator_call(mnemonic(n.op), {l, r}, dests, e.span);
                } else if constexpr (std::is_same_v<T, expr::Unary>) {
                    VarId a = normalize(*n.body, scope, nullptr).front();
                    return operator_call(mnemonic(n.op), {a}, dests, e.span);
                } else {
                    return apply(n, scope, dests, e.span);
                }
            },
            e.node);
    }

    std::vector<VarId> copy_into(const std::vector<VarId>& atoms, const std::vector<VarId>* dests, const Span& span)
    {
        if (!dests) return atoms;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            FlatEq eq;
            eq.op = FlatOp::Copy;
            eq.lhs = {dests->at(i)};
            eq.args = {atoms[i]};
            eq.span = span;
            emit(eq);
        }
        return *dests;
    }

    template <typename Fill>
    std::vector<VarId> unary_each(const std::vector<VarId>& atoms, const std::vector<VarId>* dests,
                                  const Span& span, Fill fill)
    {
        std::vector<VarId> out;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            FlatEq eq;
            fill(eq);
            eq.args = {atoms[i]};
            eq.lhs = {target(dests, i, span)};
            eq.span = span;
            out.push_back(eq.lhs.front());
            emit(eq);
        }
        return out;
    }

    std::vector<VarId> operator_call(const char* name, std::vector<VarId> args, const std::vector<VarId>* dests,
                                     const Span& span)
    {
        FlatEq eq;
        eq.op = FlatOp::Call;
        eq.callee = name;
        eq.callee_kind = CalleeKind::Operator;
        eq.args = std::move(args);
        eq.lhs = {target(dests, 0, span)};
        eq.span = span;
        emit(eq);
        return eq.lhs;
    }

    std::vector<VarId> apply(const expr::App& app, const Scope& scope, const std::vector<VarId>* dests,
                             const Span& span)
    {
        std::vector<VarId> args;
        for (const auto& a : app.args) {
            auto atoms = normalize(*a, scope, nullptr);
            args.insert(args.end(), atoms.begin(), atoms.end());
        }
        const NodeDecl& callee = *program_.find(app.node);
        if (callee.kind == NodeKind::Imported) {
            FlatEq eq;
            eq.op = FlatOp::Call;
            eq.callee = callee.name;
            eq.callee_kind = CalleeKind::Imported;
            eq.args = std::move(args);
            for (std::size_t i = 0; i < callee.outputs.size(); ++i) eq.lhs.push_back(target(dests, i, span));
            eq.span = span;
            emit(eq);
            return eq.lhs;
        }

        if (active_.count(callee.name))
            throw CompileError(ErrorKind::Structure, app.name_span,
                               "recursive instantiation of node '" + callee.name + "'");
        int k = ++instances_[prefix_ + callee.name];
        std::string saved = prefix_;
        prefix_ += callee.name + (k > 1 ? "#" + std::to_string(k) : "") + ".";

        Scope inner;
        for (std::size_t i = 0; i < callee.inputs.size(); ++i) {
            const Param& p = callee.inputs[i];
            VarId v = add_var(prefix_ + p.name, VarRole::Local, p);
            inner[p.name] = v;
            FlatEq eq;
            eq.op = FlatOp::Copy;
            eq.lhs = {v};
            eq.args = {args.at(i)};
            eq.span = span;
            emit(eq);
        }
        std::vector<VarId> outs;
        for (const auto& p : callee.outputs) {
            VarId v = add_var(prefix_ + p.name, VarRole::Local, p);
            // `due` is a main-node output constraint only
            out_.vars.back().due.reset();
            inner[p.name] = v;
            outs.push_back(v);
        }
        for (const auto& p : callee.locals) inner[p.name] = add_var(prefix_ + p.name, VarRole::Local, p);

        active_.insert(callee.name);
        body(callee, inner);
        active_.erase(callee.name);
        prefix_ = saved;
        return copy_into(outs, dests, span);
    }

    const Program& program_;
    FlatNode out_;
    std::string prefix_;
    std::map<std::string, int> instances_;
    std::set<std::string> active_;
    int temps_ = 0;
};

}  // namespace

FlatNode inline_program(const Program& program) { return Inliner(program).run(); }

}  // namespace mps
