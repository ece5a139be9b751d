#include <algorithm>

#include "mps/analysis.hpp"

namespace mps {

std::optional<std::vector<std::string>> find_causality_cycle(const FlatNode& node)
{
    const std::size_t n = node.vars.size();
    auto deps = [&](std::size_t v) -> std::vector<VarId> {
        int e = node.def[v];
        if (e < 0) return {};
        const FlatEq& eq = node.eqs[static_cast<std::size_t>(e)];
        if (eq.op == FlatOp::Fby || eq.op == FlatOp::Const) return {};
        return eq.args;
    };

    enum class Mark { White, Gray, Black };
    std::vector<Mark> mark(n, Mark::White);
    std::vector<VarId> stack;

    // Iterative DFS keeping the gray path in `stack`.
    for (std::size_t root = 0; root < n; ++root) {
        if (mark[root] != Mark::White) continue;
        std::vector<std::pair<VarId, std::size_t>> frames{{static_cast<VarId>(root), 0}};
        mark[root] = Mark::Gray;
        stack.push_back(static_cast<VarId>(root));
        while (!frames.empty()) {
            auto& [v, next] = frames.back();
            auto ds = deps(static_cast<std::size_t>(v));
            if (next < ds.size()) {
                VarId d = ds[next++];
                auto& m = mark[static_cast<std::size_t>(d)];
                if (m == Mark::Gray) {
                    auto it = std::find(stack.begin(), stack.end(), d);
                    std::vector<std::string> cycle;
                    for (; it != stack.end(); ++it) {
                        const FlatVar& fv = node.var(*it);
                        if (fv.role != VarRole::Temp) cycle.push_back(fv.name);
                    }
                    return cycle;
                }
                if (m == Mark::White) {
                    m = Mark::Gray;
                    stack.push_back(d);
                    frames.emplace_back(d, 0);
                }
            } else {
                mark[static_cast<std::size_t>(v)] = Mark::Black;
                stack.pop_back();
                frames.pop_back();
            }
        }
    }
    return std::nullopt;
}

void causality_check(const FlatNode& node)
{
    auto cycle = find_causality_cycle(node);
    if (!cycle) return;
    std::string msg = "causality cycle: ";
    for (std::size_t i = 0; i < cycle->size(); ++i) msg += (i ? ", " : "") + (*cycle)[i];
    Span span;
    if (!cycle->empty()) {
        VarId v = *node.find(cycle->front());
        int e = node.def[static_cast<std::size_t>(v)];
        span = e >= 0 ? node.eqs[static_cast<std::size_t>(e)].span : node.var(v).span;
    }
    throw CompileError(ErrorKind::Causality, span, msg);
}

}  // namespace mps
