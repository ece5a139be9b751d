#include <algorithm>
#include <stdexcept>

#include "mps/interp.hpp"

namespace mps {

SymPool::SymPool() { values_.push_back(SymValue{}); }

SymId SymPool::intern(SymValue v, std::string key)
{
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    auto id = static_cast<SymId>(values_.size());
    values_.push_back(std::move(v));
    index_.emplace(std::move(key), id);
    return id;
}

SymId SymPool::lit(const Literal& value)
{
    SymValue v;
    v.lit = value;
    return intern(std::move(v), "L" + std::string(value.is_bool() ? "b" : "i") + to_string(value));
}

SymId SymPool::node(const std::string& name, int port, std::int64_t index, std::vector<SymId> args)
{
    std::string key = "N" + name + '\0' + std::to_string(port) + ':' + std::to_string(index);
    for (SymId a : args) key += ',' + std::to_string(a);
    SymValue v;
    v.kind = SymValue::Kind::Node;
    v.name = name;
    v.port = port;
    v.index = index;
    v.args = std::move(args);
    return intern(std::move(v), std::move(key));
}

std::string SymPool::render(SymId id, int depth) const
{
    if (id == undefined_sym) return "undef";
    const SymValue& v = get(id);
    if (v.kind == SymValue::Kind::Lit) return to_string(v.lit);
    if (depth <= 0) return "...";
    std::string out = v.name;
    if (v.port >= 0) out += ".o" + std::to_string(v.port + 1);
    out += '<' + std::to_string(v.index) + '>';
    if (!v.args.empty()) {
        out += '(';
        for (std::size_t i = 0; i < v.args.size(); ++i) out += (i ? ", " : "") + render(v.args[i], depth - 1);
        out += ')';
    }
    return out;
}

Evaluator::Evaluator(const FlatNode& node, SymPool& pool) : node_(node), pool_(pool), memo_(node.vars.size()) {}

SymId Evaluator::value(VarId v, std::int64_t i)
{
    if (i < 0) return undefined_sym;
    auto& memo = memo_[static_cast<std::size_t>(v)];
    if (auto it = memo.find(i); it != memo.end()) return it->second;
    SymId s = compute(v, i);
    memo.emplace(i, s);
    return s;
}

SymId Evaluator::compute(VarId v, std::int64_t i)
{
    int e = node_.def[static_cast<std::size_t>(v)];
    if (e < 0) return pool_.node(node_.var(v).name, -1, i, {});
    const FlatEq& eq = node_.eqs[static_cast<std::size_t>(e)];
    switch (eq.op) {
    case FlatOp::Const: return pool_.lit(eq.lit);
    case FlatOp::Copy:
    case FlatOp::Offset: return value(eq.args[0], i);
    case FlatOp::Under: return value(eq.args[0], i * eq.factor);
    case FlatOp::Over: return value(eq.args[0], i / eq.factor);
    case FlatOp::Fby: return i == 0 ? pool_.lit(eq.lit) : value(eq.args[0], i - 1);
    case FlatOp::Call: {
        std::vector<SymId> args;
        args.reserve(eq.args.size());
        for (VarId a : eq.args) args.push_back(value(a, i));
        int port = -1;
        if (eq.lhs.size() > 1)
            port = static_cast<int>(std::find(eq.lhs.begin(), eq.lhs.end(), v) - eq.lhs.begin());
        return pool_.node(eq.callee, port, i, std::move(args));
    }
    }
    return undefined_sym;
}

std::map<std::string, std::vector<FlowSample>> eval(const FlatNode& node, const ClockAssignment& clocks,
                                                    const Rational& tick, std::int64_t hyperperiod,
                                                    std::int64_t horizon, SymPool& pool)
{
    if (horizon <= 0 || hyperperiod <= 0 || horizon % hyperperiod != 0)
        throw std::invalid_argument("evaluation horizon " + std::to_string(horizon) +
                                    " is not a multiple of the hyperperiod " + std::to_string(hyperperiod));
    Evaluator ev(node, pool);
    std::map<std::string, std::vector<FlowSample>> out;
    // Increasing tag order keeps the memoized recursion shallow.
    std::vector<std::int64_t> next(node.vars.size(), 0);
    for (std::size_t v = 0; v < node.vars.size(); ++v) out[node.vars[v].name];
    for (;;) {
        Rational best(horizon);
        VarId pick = -1;
        for (std::size_t v = 0; v < node.vars.size(); ++v) {
            const PClock& c = clocks.of(static_cast<VarId>(v));
            Rational tag = (c.phase + c.period * next[v]) / tick;
            if (tag < best) {
                best = tag;
                pick = static_cast<VarId>(v);
            }
        }
        if (pick < 0) break;
        auto& n = next[static_cast<std::size_t>(pick)];
        out[node.var(pick).name].push_back({best, ev.value(pick, n)});
        ++n;
    }
    return out;
}

}  // namespace mps
