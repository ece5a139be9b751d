#include <algorithm>
#include <deque>
#include <unordered_map>

#include "mps/deadlines.hpp"

namespace mps {

DeadlineResult compute_deadline_words(const TaskGraph& g, bool record_steps)
{
    const std::size_t n = g.tasks.size();
    DeadlineResult res;
    res.words.reserve(n);
    for (const auto& t : g.tasks) res.words.push_back(DWord::constant(t.due ? *t.due : t.T));

    std::vector<std::vector<int>> preds(n);
    std::vector<int> successors(n, 0);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const Edge& edge = g.edges[e];
        if (has_delay(edge.ops)) continue;
        preds[static_cast<std::size_t>(edge.dst)].push_back(static_cast<int>(e));
        ++successors[static_cast<std::size_t>(edge.src)];
    }

    std::deque<int> pending;
    for (std::size_t t = 0; t < n; ++t)
        if (successors[t] == 0) pending.push_back(static_cast<int>(t));

    while (!pending.empty()) {
        std::vector<int> snapshot;
        if (record_steps) snapshot.assign(pending.begin(), pending.end());
        int j = pending.front();
        pending.pop_front();
        const Task& tj = g.tasks[static_cast<std::size_t>(j)];
        for (int e : preds[static_cast<std::size_t>(j)]) {
            const Edge& edge = g.edges[static_cast<std::size_t>(e)];
            const Task& ti = g.tasks[static_cast<std::size_t>(edge.src)];
            DWord cstr = constraint_word({edge.ops, res.words[static_cast<std::size_t>(j)], ti.T, tj.T, tj.C, ti.r, tj.r});
            auto& wi = res.words[static_cast<std::size_t>(edge.src)];
            wi = dword_min(wi, cstr);
            if (record_steps) {
                res.steps.push_back({snapshot, j, edge.src, cstr});
            }
            if (--successors[static_cast<std::size_t>(edge.src)] == 0) pending.push_front(edge.src);
        }
    }

    for (std::size_t t = 0; t < n; ++t) {
        const DWord& w = res.words[t];
        for (std::size_t k = 0; k < w.size(); ++k) {
            if (w.pattern[k] < g.tasks[t].C)
                throw CompileError(ErrorKind::Deadline, {},
                                   "infeasible deadline: task " + g.tasks[t].name + " instance " + std::to_string(k) +
                                       " gets relative deadline " + std::to_string(w.pattern[k]) +
                                       " below its execution time " + std::to_string(g.tasks[t].C));
        }
    }
    return res;
}

namespace {

// Instance map written directly from its recursive definition.
std::int64_t successor_instance(const OpsList& ops, std::size_t from, std::int64_t n)
{
    if (from == ops.size()) return n;
    const PrecOp& op = ops[from];
    switch (op.kind) {
    case PrecOp::Kind::Over: return successor_instance(ops, from + 1, op.k * n);
    case PrecOp::Kind::Under: return successor_instance(ops, from + 1, (n + op.k - 1) / op.k);
    case PrecOp::Kind::Delay: return successor_instance(ops, from + 1, n + 1);
    case PrecOp::Kind::Offset: break;
    }
    return successor_instance(ops, from + 1, n);
}

class InstanceOracle {
public:
    explicit InstanceOracle(const TaskGraph& g) : g_(g), memo_(g.tasks.size()), out_(g.tasks.size())
    {
        for (std::size_t e = 0; e < g.edges.size(); ++e)
            if (!has_delay(g.edges[e].ops)) out_[static_cast<std::size_t>(g.edges[e].src)].push_back(e);
    }

    std::int64_t adjusted(int task, std::int64_t n)
    {
        auto& memo = memo_[static_cast<std::size_t>(task)];
        if (auto it = memo.find(n); it != memo.end()) return it->second;
        const Task& t = g_.tasks[static_cast<std::size_t>(task)];
        std::int64_t d = t.r + n * t.T + (t.due ? *t.due : t.T);
        for (std::size_t e : out_[static_cast<std::size_t>(task)]) {
            const Edge& edge = g_.edges[e];
            std::int64_t m = successor_instance(edge.ops, 0, n);
            d = std::min(d, adjusted(edge.dst, m) - g_.tasks[static_cast<std::size_t>(edge.dst)].C);
        }
        memo.emplace(n, d);
        return d;
    }

private:
    const TaskGraph& g_;
    std::vector<std::unordered_map<std::int64_t, std::int64_t>> memo_;
    std::vector<std::vector<std::size_t>> out_;
};

}  // namespace

std::vector<std::vector<std::int64_t>> instance_graph_oracle(const TaskGraph& g, std::int64_t horizon)
{
    InstanceOracle oracle(g);
    std::vector<std::vector<std::int64_t>> out(g.tasks.size());
    // Successors first keeps the memoized recursion shallow.
    for (std::size_t t = g.tasks.size(); t-- > 0;) {
        const Task& task = g.tasks[t];
        for (std::int64_t n = 0; task.release(n) < horizon; ++n)
            out[t].push_back(oracle.adjusted(static_cast<int>(t), n));
    }
    return out;
}

}  // namespace mps
