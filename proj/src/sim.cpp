#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "mps/sim.hpp"

namespace mps {

const char* to_string(Policy p) { return p == Policy::EdfDword ? "edf-dword" : "edf-uniform"; }

const char* to_string(EventKind k)
{
    switch (k) {
    case EventKind::Release: return "release";
    case EventKind::Start: return "start";
    case EventKind::Preempt: return "preempt";
    case EventKind::Resume: return "resume";
    case EventKind::Complete: return "complete";
    case EventKind::BufferWrite: return "write";
    case EventKind::BufferRead: return "read";
    case EventKind::DeadlineMiss: return "miss";
    case EventKind::Truncated: return "truncated";
    }
    return "?";
}

std::size_t SimTrace::miss_count() const
{
    return static_cast<std::size_t>(std::count_if(jobs.begin(), jobs.end(), [](const Job& j) { return j.missed; }));
}

const Job* SimTrace::job(int task, std::int64_t n) const
{
    for (const auto& j : jobs)
        if (j.task == task && j.n == n) return &j;
    return nullptr;
}

std::int64_t default_horizon(const TaskSet& ts) { return ts.max_release() + 2 * ts.hyperperiod(); }

namespace {

class Simulator {
public:
    Simulator(const TaskSet& ts, const SimConfig& cfg, SymPool* pool)
        : ts_(ts), cfg_(cfg), pool_(pool), next_(ts.graph.tasks.size(), 0),
          in_(ts.graph.tasks.size()), out_(ts.graph.tasks.size())
    {
        for (std::size_t b = 0; b < ts.buffers.size(); ++b) {
            const BufferPlan& plan = ts.buffers[b];
            in_[static_cast<std::size_t>(plan.consumer)].push_back(static_cast<int>(b));
            out_[static_cast<std::size_t>(plan.producer)].push_back(static_cast<int>(b));
            std::vector<SymId> cells(static_cast<std::size_t>(plan.size), undefined_sym);
            if (plan.init && pool_) cells.back() = pool_->lit(*plan.init);
            cells_.push_back(std::move(cells));
        }
        for (auto& ins : in_)
            std::sort(ins.begin(), ins.end(), [&](int a, int b) { return port_of(a) < port_of(b); });
    }

    SimTrace run()
    {
        trace_.horizon = cfg_.horizon;
        trace_.policy = cfg_.policy;
        std::int64_t t = 0;
        while (t < cfg_.horizon) {
            release_jobs(t);
            dispatch(t);
            flag_misses(t);

            std::int64_t next = cfg_.horizon;
            for (std::size_t k = 0; k < next_.size(); ++k)
                next = std::min(next, ts_.graph.tasks[k].release(next_[k]));
            if (running_ >= 0) next = std::min(next, t + jobs()[static_cast<std::size_t>(running_)].remaining);
            for (const auto& key : ready_) {
                std::int64_t d = std::get<0>(key);
                if (d > t) next = std::min(next, d);
            }
            if (next <= t) next = t + 1;

            if (running_ >= 0) {
                Job& j = jobs()[static_cast<std::size_t>(running_)];
                auto& slices = j.slices;
                if (!slices.empty() && slices.back().second == t)
                    slices.back().second = next;
                else
                    slices.emplace_back(t, next);
                j.remaining -= next - t;
            }
            t = next;
            if (running_ >= 0 && jobs()[static_cast<std::size_t>(running_)].remaining == 0) {
                complete(running_, t);
                running_ = -1;
            }
        }
        for (const auto& key : ready_) {
            const Job& j = jobs()[static_cast<std::size_t>(std::get<3>(key))];
            emit({cfg_.horizon, EventKind::Truncated, j.task, j.n});
        }
        return std::move(trace_);
    }

private:
    using Key = std::tuple<std::int64_t, int, std::int64_t, int>;  // deadline, task, instance, job

    std::vector<Job>& jobs() { return trace_.jobs; }

    int port_of(int buffer) const
    {
        return ts_.graph.edges[static_cast<std::size_t>(ts_.buffers[static_cast<std::size_t>(buffer)].edge)].dst_port;
    }

    void emit(SimEvent e) { trace_.events.push_back(e); }

    std::int64_t deadline(int task, std::int64_t n) const
    {
        const Task& t = ts_.task(task);
        const DWord& w = ts_.word(task);
        if (cfg_.policy == Policy::EdfUniform) return t.release(n) + w.min();
        return dynamic_deadline(t, w, n);
    }

    void release_jobs(std::int64_t t)
    {
        for (std::size_t k = 0; k < next_.size(); ++k) {
            const Task& task = ts_.graph.tasks[k];
            while (task.release(next_[k]) == t) {
                Job j;
                j.task = static_cast<int>(k);
                j.n = next_[k]++;
                j.release = t;
                j.deadline = deadline(j.task, j.n);
                j.remaining = task.C;
                jobs().push_back(j);
                int id = static_cast<int>(jobs().size() - 1);
                ready_.insert({j.deadline, j.task, j.n, id});
                emit({t, EventKind::Release, j.task, j.n, j.deadline});
            }
        }
    }

    void dispatch(std::int64_t t)
    {
        while (!ready_.empty()) {
            int id = std::get<3>(*ready_.begin());
            Job& j = jobs()[static_cast<std::size_t>(id)];
            if (j.remaining == 0) {
                start(id, t);
                complete(id, t);
                continue;
            }
            if (running_ != id) {
                if (running_ >= 0) {
                    const Job& prev = jobs()[static_cast<std::size_t>(running_)];
                    emit({t, EventKind::Preempt, prev.task, prev.n});
                }
                if (j.start >= 0)
                    emit({t, EventKind::Resume, j.task, j.n});
                else
                    start(id, t);
                running_ = id;
            }
            return;
        }
    }

    void flag_misses(std::int64_t t)
    {
        for (const auto& key : ready_) {
            if (std::get<0>(key) > t) break;
            Job& j = jobs()[static_cast<std::size_t>(std::get<3>(key))];
            if (!j.missed) {
                j.missed = true;
                emit({t, EventKind::DeadlineMiss, j.task, j.n, j.deadline});
            }
        }
    }

    void start(int id, std::int64_t t)
    {
        Job& j = jobs()[static_cast<std::size_t>(id)];
        j.start = t;
        emit({t, EventKind::Start, j.task, j.n});
        const Task& task = ts_.task(j.task);
        std::vector<SymId> args;
        for (int b : in_[static_cast<std::size_t>(j.task)]) {
            const BufferPlan& plan = ts_.buffers[static_cast<std::size_t>(b)];
            const Edge& e = ts_.graph.edges[static_cast<std::size_t>(plan.edge)];
            int cell = plan.consumer_cell(e.ops, j.n);
            SymId v = cells_[static_cast<std::size_t>(b)][static_cast<std::size_t>(cell)];
            args.push_back(v);
            emit({t, EventKind::BufferRead, j.task, j.n, -1, b, cell, v});
        }
        auto& outs = outputs_[id];
        outs.assign(task.outputs.size(), undefined_sym);
        if (!pool_) return;
        switch (task.kind) {
        case TaskKind::Sensor: outs.assign(1, pool_->node(task.node, -1, j.n, {})); break;
        case TaskKind::Constant: outs.assign(1, pool_->lit(*task.value)); break;
        case TaskKind::Computation:
            for (std::size_t p = 0; p < outs.size(); ++p)
                outs[p] = pool_->node(task.node, outs.size() > 1 ? static_cast<int>(p) : -1, j.n, args);
            break;
        case TaskKind::Actuator: break;
        }
    }

    void complete(int id, std::int64_t t)
    {
        Job& j = jobs()[static_cast<std::size_t>(id)];
        j.completion = t;
        ready_.erase({j.deadline, j.task, j.n, id});
        if (t > j.deadline && !j.missed) {
            j.missed = true;
            emit({t, EventKind::DeadlineMiss, j.task, j.n, j.deadline});
        }
        emit({t, EventKind::Complete, j.task, j.n});
        const auto& outs = outputs_[id];
        for (int b : out_[static_cast<std::size_t>(j.task)]) {
            const BufferPlan& plan = ts_.buffers[static_cast<std::size_t>(b)];
            if (!plan.writes(j.n)) continue;
            const Edge& e = ts_.graph.edges[static_cast<std::size_t>(plan.edge)];
            int cell = plan.producer_cell(j.n);
            SymId v = outs.at(static_cast<std::size_t>(e.src_port));
            cells_[static_cast<std::size_t>(b)][static_cast<std::size_t>(cell)] = v;
            emit({t, EventKind::BufferWrite, j.task, j.n, -1, b, cell, v});
        }
    }

    const TaskSet& ts_;
    SimConfig cfg_;
    SymPool* pool_;
    SimTrace trace_;
    std::vector<std::int64_t> next_;
    std::map<int, std::vector<SymId>> outputs_;  // by job, between start and completion
    std::vector<std::vector<int>> in_, out_;
    std::vector<std::vector<SymId>> cells_;
    std::set<Key> ready_;
    int running_ = -1;
};

}  // namespace

SimTrace simulate(const TaskSet& ts, const SimConfig& cfg, SymPool* pool)
{
    return Simulator(ts, cfg, pool).run();
}

std::vector<Mismatch> check_semantics(const TaskSet& ts, const SimTrace& trace, const FlatNode& node, SymPool& pool)
{
    Evaluator ev(node, pool);
    std::vector<Mismatch> out;
    for (const auto& e : trace.events) {
        if (e.kind != EventKind::BufferRead) continue;
        const BufferPlan& plan = ts.buffers[static_cast<std::size_t>(e.buffer)];
        const Edge& edge = ts.graph.edges[static_cast<std::size_t>(plan.edge)];
        SymId expected = ev.value(edge.consumer_var, e.n);
        if (expected != e.value)
            out.push_back({e.task, e.n, edge.dst_port, pool.render(expected), pool.render(e.value)});
    }
    return out;
}

Rational utilization(const TaskSet& ts)
{
    Rational u(0);
    for (const auto& t : ts.graph.tasks) u += Rational(t.C, t.T);
    return u;
}

bool feasibility_scan(const TaskSet& ts)
{
    return simulate(ts, {default_horizon(ts), Policy::EdfDword}).miss_count() == 0;
}

std::string gantt(const TaskSet& ts, const SimTrace& trace)
{
    const std::size_t width = static_cast<std::size_t>(trace.horizon);
    std::vector<std::string> rows(ts.graph.tasks.size(), std::string(width, ' '));
    auto paint = [&](std::string& row, std::int64_t from, std::int64_t to, char c) {
        for (std::int64_t x = std::max<std::int64_t>(from, 0); x < std::min<std::int64_t>(to, trace.horizon); ++x)
            row[static_cast<std::size_t>(x)] = c;
    };
    for (const auto& j : trace.jobs) {
        std::string& row = rows[static_cast<std::size_t>(j.task)];
        std::int64_t end = j.completion >= 0 ? j.completion : trace.horizon;
        paint(row, j.release, std::min(end, j.deadline), '.');
        paint(row, j.deadline, end, '!');
        for (const auto& [a, b] : j.slices) paint(row, a, b, '#');
    }
    std::size_t name_width = 0;
    for (const auto& t : ts.graph.tasks) name_width = std::max(name_width, t.name.size());
    std::ostringstream os;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string& name = ts.graph.tasks[i].name;
        os << name << std::string(name_width - name.size(), ' ') << " |" << rows[i] << "|\n";
    }
    return os.str();
}

std::string to_jsonl(const TaskSet& ts, const SimTrace& trace, const SymPool* pool)
{
    std::ostringstream os;
    for (const auto& e : trace.events) {
        nlohmann::ordered_json j;
        j["t"] = e.t;
        j["ev"] = to_string(e.kind);
        j["task"] = ts.task(e.task).name;
        j["n"] = e.n;
        if (e.kind == EventKind::Release || e.kind == EventKind::DeadlineMiss) j["deadline"] = e.deadline;
        if (e.kind == EventKind::BufferRead || e.kind == EventKind::BufferWrite) {
            j["buffer"] = ts.buffers[static_cast<std::size_t>(e.buffer)].name;
            j["cell"] = e.cell;
            if (pool) j["value"] = pool->render(e.value);
        }
        os << j.dump() << '\n';
    }
    return os.str();
}

}  // namespace mps
