#include <numeric>

#include "mps/analysis.hpp"

namespace mps {

std::string to_string(const PClock& c)
{
    return "(" + to_string(c.period) + "," + to_string(c.phase / c.period) + ")";
}

PClock apply_transform(const PClock& c, const ClockOp& op)
{
    switch (op.kind) {
    case ClockOp::Kind::Each: return {c.period * op.k, c.phase};
    case ClockOp::Kind::Times: return {c.period / op.k, c.phase};
    case ClockOp::Kind::Phase: return {c.period, c.phase + op.q * c.period};
    }
    return c;
}

PClock invert_transform(const PClock& c, const ClockOp& op)
{
    switch (op.kind) {
    case ClockOp::Kind::Each: return {c.period / op.k, c.phase};
    case ClockOp::Kind::Times: return {c.period * op.k, c.phase};
    case ClockOp::Kind::Phase: return {c.period, c.phase - op.q * c.period};
    }
    return c;
}

namespace {

std::string product(const std::vector<PClock>& cs)
{
    if (cs.size() == 1) return to_string(cs.front());
    std::string out = "(";
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (i) out += '*';
        out += to_string(cs[i]);
    }
    return out + ")";
}

class ClockSolver {
public:
    explicit ClockSolver(const FlatNode& node)
        : node_(node), parent_(node.vars.size()), value_(node.vars.size())
    {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    ClockAssignment run()
    {
        for (std::size_t v = 0; v < node_.vars.size(); ++v) {
            const auto& decl = node_.vars[v].clock;
            if (!decl) continue;
            Rational period(decl->period);
            assign(static_cast<VarId>(v), PClock{period, period * decl->phase_ratio}, decl->span);
        }

        struct Relation {
            VarId result;
            VarId operand;
            ClockOp op;
            Span span;
        };
        std::vector<Relation> relations;
        for (const auto& eq : node_.eqs) {
            switch (eq.op) {
            case FlatOp::Const: break;
            case FlatOp::Copy:
            case FlatOp::Fby: unite(eq.lhs[0], eq.args[0], eq.span); break;
            case FlatOp::Call: {
                VarId first = eq.lhs.empty() ? eq.args.front() : eq.lhs.front();
                for (VarId v : eq.args) unite(first, v, eq.span);
                for (VarId v : eq.lhs) unite(first, v, eq.span);
                break;
            }
            case FlatOp::Under: relations.push_back({eq.lhs[0], eq.args[0], ClockOp::each(eq.factor), eq.span}); break;
            case FlatOp::Over: relations.push_back({eq.lhs[0], eq.args[0], ClockOp::times(eq.factor), eq.span}); break;
            case FlatOp::Offset: relations.push_back({eq.lhs[0], eq.args[0], ClockOp::phase(eq.shift), eq.span}); break;
            }
        }

        for (bool progress = true; progress;) {
            progress = false;
            for (const auto& r : relations) {
                auto& res = value_[find(r.result)];
                auto& opd = value_[find(r.operand)];
                if (opd && res) {
                    PClock want = apply_transform(*opd, r.op);
                    if (!(want == *res))
                        throw CompileError(ErrorKind::Clock, r.span,
                                           "clock mismatch: expression has clock " + to_string(want) +
                                               " but is used on clock " + to_string(*res));
                } else if (opd) {
                    res = apply_transform(*opd, r.op);
                    progress = true;
                } else if (res) {
                    PClock back = invert_transform(*res, r.op);
                    if (back.phase < 0)
                        throw CompileError(ErrorKind::Clock, r.span,
                                           "clock mismatch: operand would need a negative phase");
                    opd = back;
                    progress = true;
                }
            }
        }

        ClockAssignment out;
        std::optional<VarId> missing;
        for (std::size_t v = 0; v < node_.vars.size(); ++v) {
            const auto& c = value_[find(static_cast<VarId>(v))];
            if (c) {
                out.clocks.push_back(*c);
                continue;
            }
            if (!missing || (node_.vars[static_cast<std::size_t>(*missing)].role == VarRole::Temp &&
                             node_.vars[v].role != VarRole::Temp))
                missing = static_cast<VarId>(v);
        }
        if (missing) {
            const FlatVar& fv = node_.var(*missing);
            std::string name = fv.role == VarRole::Temp ? "an expression" : "'" + fv.name + "'";
            throw CompileError(ErrorKind::Clock, fv.span,
                               "underconstrained program: no clock can be inferred for " + name);
        }
        return out;
    }

private:
    VarId find(VarId v)
    {
        while (parent_[static_cast<std::size_t>(v)] != v) {
            auto& p = parent_[static_cast<std::size_t>(v)];
            p = parent_[static_cast<std::size_t>(p)];
            v = p;
        }
        return v;
    }

    void assign(VarId v, const PClock& c, const Span& span)
    {
        auto& slot = value_[find(v)];
        if (slot && !(*slot == c))
            throw CompileError(ErrorKind::Clock, span,
                               "clock mismatch: " + to_string(*slot) + " versus " + to_string(c));
        slot = c;
    }

    void unite(VarId a, VarId b, const Span& span)
    {
        VarId ra = find(a);
        VarId rb = find(b);
        if (ra == rb) return;
        auto& va = value_[ra];
        auto& vb = value_[rb];
        if (va && vb && !(*va == *vb))
            throw CompileError(ErrorKind::Clock, span,
                               "clock mismatch: combining flows on clocks " + to_string(*va) + " and " +
                                   to_string(*vb));
        if (!va) va = vb;
        parent_[rb] = ra;
    }

    const FlatNode& node_;
    std::vector<VarId> parent_;
    std::vector<std::optional<PClock>> value_;
};

}  // namespace

ClockAssignment clock_calculus(const FlatNode& node) { return ClockSolver(node).run(); }

ClockSignature clock_signature(const FlatNode& node, const ClockAssignment& clocks)
{
    ClockSignature sig;
    for (VarId v : node.inputs) sig.inputs.push_back(clocks.of(v));
    for (VarId v : node.outputs) sig.outputs.push_back(clocks.of(v));
    return sig;
}

std::string to_string(const ClockSignature& sig) { return product(sig.inputs) + "->" + product(sig.outputs); }

}  // namespace mps
