#include <algorithm>
#include <random>
#include <tuple>

#include "mps/properties.hpp"

namespace mps {

std::size_t oracle_discrepancies(const TaskSet& ts)
{
    const auto oracle = instance_graph_oracle(ts.graph, default_horizon(ts));
    std::size_t bad = 0;
    for (std::size_t t = 0; t < ts.graph.tasks.size(); ++t)
        for (std::size_t n = 0; n < oracle[t].size(); ++n)
            bad += oracle[t][n] != dynamic_deadline(ts.graph.tasks[t], ts.words[t], static_cast<std::int64_t>(n));
    return bad;
}

std::size_t soundness_violations(const TaskSet& ts)
{
    const std::int64_t limit = 3 * ts.hyperperiod();
    std::size_t bad = 0;
    for (const Edge& e : ts.graph.edges) {
        if (has_delay(e.ops)) continue;
        const Task& src = ts.task(e.src);
        const Task& dst = ts.task(e.dst);
        for (std::int64_t n = 0; src.release(n) < limit; ++n) {
            std::int64_t di = dynamic_deadline(src, ts.word(e.src), n);
            std::int64_t dj = dynamic_deadline(dst, ts.word(e.dst), g_ops(e.ops, n));
            bad += di > dj - dst.C;
        }
    }
    return bad;
}

std::vector<std::string> word_length_violations(const TaskSet& ts)
{
    std::vector<std::string> out;
    const std::int64_t H = ts.hyperperiod();
    for (std::size_t t = 0; t < ts.graph.tasks.size(); ++t)
        if (H % static_cast<std::int64_t>(ts.words[t].size()) != 0)
            out.push_back(ts.graph.tasks[t].name);
    return out;
}

SemanticRun semantic_run(const Compilation& c) { return semantic_run(c, c.taskset); }

SemanticRun semantic_run(const Compilation& c, const TaskSet& ts)
{
    SymPool pool;
    SimTrace trace = simulate(ts, {default_horizon(ts), Policy::EdfDword}, &pool);
    SemanticRun r;
    r.misses = trace.miss_count();
    r.mismatches = check_semantics(ts, trace, c.flat, pool);
    return r;
}

std::optional<FaultTrial> inject_write_mask_fault(const Compilation& c, std::uint64_t seed)
{
    const TaskSet& ts = c.taskset;
    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    for (std::size_t b = 0; b < ts.buffers.size(); ++b) {
        const BufferPlan& plan = ts.buffers[b];
        if (ts.task(plan.producer).kind == TaskKind::Constant) continue;
        for (std::size_t bit = 0; bit < plan.write_mask.size(); ++bit)
            if (plan.write_mask[bit]) candidates.emplace_back(b, bit);
    }
    if (candidates.empty()) return std::nullopt;
    std::mt19937_64 rng(seed);
    auto [b, bit] = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];

    TaskSet corrupted = ts;
    corrupted.buffers[b].write_mask[bit] = false;
    FaultTrial trial;
    trial.buffer = ts.buffers[b].name;
    trial.bit = bit;
    trial.run = semantic_run(c, corrupted);
    return trial;
}

std::size_t precedence_violations(const TaskSet& ts, const SimTrace& trace)
{
    std::size_t bad = 0;
    for (const Edge& e : ts.graph.edges) {
        if (has_delay(e.ops)) continue;
        for (std::int64_t n = 0;; ++n) {
            const Job* consumer = trace.job(e.dst, g_ops(e.ops, n));
            if (!consumer) break;
            if (consumer->start < 0) continue;
            const Job* producer = trace.job(e.src, n);
            if (!producer || producer->completion < 0 || producer->completion > consumer->start) ++bad;
        }
    }
    return bad;
}

std::size_t edf_violations(const TaskSet& ts, const SimTrace& trace)
{
    using Key = std::tuple<std::int64_t, int, std::int64_t>;
    std::vector<int> running(static_cast<std::size_t>(trace.horizon), -1);
    std::size_t bad = 0;
    for (std::size_t id = 0; id < trace.jobs.size(); ++id)
        for (const auto& [a, b] : trace.jobs[id].slices)
            for (std::int64_t x = a; x < b; ++x) {
                auto& slot = running[static_cast<std::size_t>(x)];
                bad += slot >= 0;
                slot = static_cast<int>(id);
            }
    for (std::int64_t x = 0; x < trace.horizon; ++x) {
        std::optional<Key> best;
        for (const Job& j : trace.jobs) {
            bool pending = j.release <= x && (j.completion < 0 || j.completion > x) && ts.task(j.task).C > 0;
            if (pending) best = std::min(best.value_or(Key{j.deadline, j.task, j.n}), Key{j.deadline, j.task, j.n});
        }
        int r = running[static_cast<std::size_t>(x)];
        if (!best) {
            bad += r >= 0;
            continue;
        }
        if (r < 0) {
            ++bad;
            continue;
        }
        const Job& j = trace.jobs[static_cast<std::size_t>(r)];
        bad += Key{j.deadline, j.task, j.n} != *best;
    }
    return bad;
}

std::vector<PropertyResult> check_properties(const Compilation& c, std::uint64_t seed)
{
    const TaskSet& ts = c.taskset;
    std::vector<PropertyResult> out;
    auto add = [&](std::string name, bool ok, std::string detail) {
        out.push_back({std::move(name), ok, std::move(detail)});
    };

    std::size_t od = oracle_discrepancies(ts);
    add("oracle-equivalence", od == 0, std::to_string(od) + " discrepancies");
    std::size_t sv = soundness_violations(ts);
    add("encoding-soundness", sv == 0, std::to_string(sv) + " violations");
    auto wl = word_length_violations(ts);
    std::string names;
    for (const auto& n : wl) names += (names.empty() ? "" : ", ") + n;
    add("word-length-divides-hyperperiod", wl.empty(), wl.empty() ? "ok" : names);

    SymPool pool;
    SimTrace trace = simulate(ts, {default_horizon(ts), Policy::EdfDword}, &pool);
    std::size_t misses = trace.miss_count();
    add("schedulable", misses == 0, std::to_string(misses) + " deadline misses");
    std::size_t ev = edf_violations(ts, trace);
    add("edf-priority", ev == 0, std::to_string(ev) + " offending ticks");
    if (misses == 0) {
        std::size_t pv = precedence_violations(ts, trace);
        add("precedence-respect", pv == 0, std::to_string(pv) + " violations");
        auto mm = check_semantics(ts, trace, c.flat, pool);
        add("functional-equivalence", mm.empty(), std::to_string(mm.size()) + " mismatches");
        if (auto fault = inject_write_mask_fault(c, seed))
            add("fault-detection", !fault->run.mismatches.empty(),
                "cleared " + fault->buffer + " bit " + std::to_string(fault->bit) + ": " +
                    std::to_string(fault->run.mismatches.size()) + " mismatches");
    }
    SimTrace again = simulate(ts, {default_horizon(ts), Policy::EdfDword});
    bool same = again.jobs.size() == trace.jobs.size();
    for (std::size_t i = 0; same && i < again.jobs.size(); ++i)
        same = again.jobs[i].slices == trace.jobs[i].slices && again.jobs[i].completion == trace.jobs[i].completion;
    add("determinism", same, same ? "identical schedules" : "schedules differ");
    return out;
}

}  // namespace mps
