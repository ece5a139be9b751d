#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mps/taskgraph.hpp"

namespace mps {

std::string to_string(const PrecOp& op)
{
    switch (op.kind) {
    case PrecOp::Kind::Under: return "/^" + std::to_string(op.k);
    case PrecOp::Kind::Over: return "*^" + std::to_string(op.k);
    case PrecOp::Kind::Offset: return "~>" + to_string(op.q);
    case PrecOp::Kind::Delay: return "fby";
    }
    return "?";
}

std::string to_string(const OpsList& ops)
{
    if (ops.empty()) return "id";
    std::string out;
    for (std::size_t i = 0; i < ops.size(); ++i) out += (i ? "." : "") + to_string(ops[i]);
    return out;
}

PrecOp parse_prec_op(std::string_view text)
{
    auto factor = [&](std::string_view digits) {
        auto r = parse_rational(digits);
        if (!r || !is_integer(*r) || r->numerator() <= 0)
            throw std::invalid_argument("bad operator factor: " + std::string(text));
        return r->numerator();
    };
    if (text == "fby") return PrecOp::delay();
    if (text.starts_with("/^")) return PrecOp::under(factor(text.substr(2)));
    if (text.starts_with("*^")) return PrecOp::over(factor(text.substr(2)));
    if (text.starts_with("~>")) {
        auto q = parse_rational(text.substr(2));
        if (!q || *q < 0) throw std::invalid_argument("bad offset: " + std::string(text));
        return PrecOp::offset(*q);
    }
    throw std::invalid_argument("unknown operator: " + std::string(text));
}

bool has_delay(const OpsList& ops)
{
    return std::any_of(ops.begin(), ops.end(), [](const PrecOp& o) { return o.kind == PrecOp::Kind::Delay; });
}

bool has_offset(const OpsList& ops)
{
    return std::any_of(ops.begin(), ops.end(), [](const PrecOp& o) { return o.kind == PrecOp::Kind::Offset; });
}

OpsList strip_delays(const OpsList& ops)
{
    OpsList out;
    for (const auto& o : ops)
        if (o.kind != PrecOp::Kind::Delay) out.push_back(o);
    return out;
}

const char* to_string(TaskKind k)
{
    switch (k) {
    case TaskKind::Sensor: return "sensor";
    case TaskKind::Actuator: return "actuator";
    case TaskKind::Computation: return "computation";
    case TaskKind::Constant: return "constant";
    }
    return "?";
}

std::optional<TaskKind> parse_task_kind(std::string_view s)
{
    for (TaskKind k : {TaskKind::Sensor, TaskKind::Actuator, TaskKind::Computation, TaskKind::Constant})
        if (s == to_string(k)) return k;
    return std::nullopt;
}

std::optional<int> TaskGraph::find(std::string_view task) const
{
    for (std::size_t i = 0; i < tasks.size(); ++i)
        if (tasks[i].name == task) return static_cast<int>(i);
    return std::nullopt;
}

std::vector<int> TaskGraph::in_edges(int task) const
{
    std::vector<int> out;
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (edges[e].dst == task) out.push_back(static_cast<int>(e));
    std::stable_sort(out.begin(), out.end(),
                     [&](int a, int b) { return edges[static_cast<std::size_t>(a)].dst_port < edges[static_cast<std::size_t>(b)].dst_port; });
    return out;
}

std::vector<int> TaskGraph::out_edges(int task) const
{
    std::vector<int> out;
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (edges[e].src == task) out.push_back(static_cast<int>(e));
    return out;
}

std::int64_t TaskGraph::hyperperiod() const
{
    std::int64_t h = 1;
    for (const auto& t : tasks) h = lcm64(h, t.T);
    return h;
}

namespace {

const char* const operator_inputs[] = {"a", "b"};

class Extractor {
public:
    explicit Extractor(const FlatNode& node) : node_(node) {}

    TaskGraph run()
    {
        g_.name = node_.name;
        for (VarId v : node_.inputs) {
            int t = add_task(node_.var(v).name, TaskKind::Sensor);
            g_.tasks[static_cast<std::size_t>(t)].node = node_.var(v).name;
            g_.tasks[static_cast<std::size_t>(t)].var = v;
            g_.tasks[static_cast<std::size_t>(t)].outputs = {"o"};
            sensor_of_[v] = t;
        }
        for (std::size_t e = 0; e < node_.eqs.size(); ++e) {
            const FlatEq& eq = node_.eqs[e];
            if (eq.op == FlatOp::Call) {
                int t = add_task(eq.callee, TaskKind::Computation);
                Task& task = g_.tasks[static_cast<std::size_t>(t)];
                task.node = eq.callee;
                task.eq = static_cast<int>(e);
                task_of_eq_[static_cast<int>(e)] = t;
            } else if (eq.op == FlatOp::Const) {
                int t = add_task("cst", TaskKind::Constant);
                Task& task = g_.tasks[static_cast<std::size_t>(t)];
                task.node = to_string(eq.lit);
                task.value = eq.lit;
                task.eq = static_cast<int>(e);
                task.outputs = {"o"};
                task_of_eq_[static_cast<int>(e)] = t;
            }
        }
        for (VarId v : node_.outputs) {
            int t = add_task(node_.var(v).name, TaskKind::Actuator);
            Task& task = g_.tasks[static_cast<std::size_t>(t)];
            task.node = node_.var(v).name;
            task.var = v;
            task.inputs = {"i"};
        }

        for (std::size_t t = 0; t < g_.tasks.size(); ++t) {
            Task& task = g_.tasks[t];
            if (task.kind == TaskKind::Actuator) {
                connect(task.var, static_cast<int>(t), 0, node_.var(task.var).span);
            } else if (task.kind == TaskKind::Computation) {
                const FlatEq& eq = node_.eqs[static_cast<std::size_t>(task.eq)];
                for (std::size_t p = 0; p < eq.args.size(); ++p)
                    connect(eq.args[p], static_cast<int>(t), static_cast<int>(p), eq.span);
            }
        }
        topological_reorder();
        return std::move(g_);
    }

private:
    int add_task(const std::string& base, TaskKind kind)
    {
        int k = ++name_count_[base];
        std::string name = k == 1 ? base : base + "#" + std::to_string(k);
        while (used_.count(name)) name = base + "#" + std::to_string(++name_count_[base]);
        used_.insert(name);
        Task t;
        t.name = name;
        t.kind = kind;
        g_.tasks.push_back(std::move(t));
        return static_cast<int>(g_.tasks.size() - 1);
    }

    void connect(VarId consumed, int dst, int dst_port, const Span& span)
    {
        Edge edge;
        edge.dst = dst;
        edge.dst_port = dst_port;
        edge.consumer_var = consumed;

        OpsList backwards;
        std::set<VarId> seen;
        VarId v = consumed;
        for (;;) {
            if (!seen.insert(v).second)
                throw CompileError(ErrorKind::Graph, span,
                                   "delay loop on '" + node_.var(consumed).name + "' has no producing task");
            if (auto s = sensor_of_.find(v); s != sensor_of_.end()) {
                edge.src = s->second;
                break;
            }
            const FlatEq& eq = node_.eqs.at(static_cast<std::size_t>(node_.def.at(static_cast<std::size_t>(v))));
            int e = node_.def[static_cast<std::size_t>(v)];
            if (eq.op == FlatOp::Call || eq.op == FlatOp::Const) {
                edge.src = task_of_eq_.at(e);
                edge.src_port = static_cast<int>(std::find(eq.lhs.begin(), eq.lhs.end(), v) - eq.lhs.begin());
                break;
            }
            switch (eq.op) {
            case FlatOp::Under: backwards.push_back(PrecOp::under(eq.factor)); break;
            case FlatOp::Over: backwards.push_back(PrecOp::over(eq.factor)); break;
            case FlatOp::Offset: backwards.push_back(PrecOp::offset(eq.shift)); break;
            case FlatOp::Fby:
                backwards.push_back(PrecOp::delay());
                edge.init = eq.lit;
                break;
            default: break;
            }
            v = eq.args.at(0);
        }
        edge.ops.assign(backwards.rbegin(), backwards.rend());

        auto first_delay = std::find_if(edge.ops.begin(), edge.ops.end(),
                                        [](const PrecOp& o) { return o.kind == PrecOp::Kind::Delay; });
        bool over_first = std::any_of(edge.ops.begin(), first_delay,
                                      [](const PrecOp& o) { return o.kind == PrecOp::Kind::Over; });
        if (first_delay != edge.ops.end() && over_first)
            throw CompileError(ErrorKind::Graph, span,
                               "unsupported precedence " + g_.tasks[static_cast<std::size_t>(edge.src)].name + " -" +
                                   to_string(edge.ops) + "-> " + g_.tasks[static_cast<std::size_t>(dst)].name +
                                   ": '*^' applied before 'fby'");
        g_.edges.push_back(std::move(edge));
    }

    void topological_reorder()
    {
        const std::size_t n = g_.tasks.size();
        std::vector<int> indegree(n, 0);
        std::vector<std::vector<int>> succ(n);
        for (const auto& e : g_.edges) {
            if (has_delay(e.ops)) continue;
            succ[static_cast<std::size_t>(e.src)].push_back(e.dst);
            ++indegree[static_cast<std::size_t>(e.dst)];
        }
        std::priority_queue<int, std::vector<int>, std::greater<>> ready;
        for (std::size_t t = 0; t < n; ++t)
            if (indegree[t] == 0) ready.push(static_cast<int>(t));
        std::vector<int> order;
        while (!ready.empty()) {
            int t = ready.top();
            ready.pop();
            order.push_back(t);
            for (int s : succ[static_cast<std::size_t>(t)])
                if (--indegree[static_cast<std::size_t>(s)] == 0) ready.push(s);
        }
        if (order.size() != n)
            throw CompileError(ErrorKind::Graph, {}, "internal error: delay-free task graph is cyclic");

        std::vector<int> position(n);
        std::vector<Task> tasks;
        for (std::size_t i = 0; i < n; ++i) {
            position[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
            tasks.push_back(std::move(g_.tasks[static_cast<std::size_t>(order[i])]));
        }
        g_.tasks = std::move(tasks);
        for (auto& e : g_.edges) {
            e.src = position[static_cast<std::size_t>(e.src)];
            e.dst = position[static_cast<std::size_t>(e.dst)];
        }
        std::stable_sort(g_.edges.begin(), g_.edges.end(), [](const Edge& a, const Edge& b) {
            return std::tie(a.dst, a.dst_port) < std::tie(b.dst, b.dst_port);
        });
    }

    const FlatNode& node_;
    TaskGraph g_;
    std::map<VarId, int> sensor_of_;
    std::map<int, int> task_of_eq_;
    std::map<std::string, int> name_count_;
    std::set<std::string> used_;
};

}  // namespace

TaskGraph extract_reduce(const FlatNode& node) { return Extractor(node).run(); }

void extract_attributes(TaskGraph& g, const Program& program, const FlatNode& node, const ClockAssignment& clocks,
                        const ExtractOptions& options)
{
    std::int64_t scale = 1;
    for (auto& task : g.tasks) {
        switch (task.kind) {
        case TaskKind::Sensor:
        case TaskKind::Actuator: task.clock = clocks.of(task.var); break;
        case TaskKind::Computation:
        case TaskKind::Constant: {
            const FlatEq& eq = node.eqs.at(static_cast<std::size_t>(task.eq));
            task.clock = clocks.of(eq.lhs.empty() ? eq.args.at(0) : eq.lhs.front());
            break;
        }
        }
        try {
            scale = lcm64(scale, task.clock.period.denominator());
            scale = lcm64(scale, task.clock.phase.denominator());
        } catch (const std::overflow_error&) {
            scale = options.tick_limit + 1;
        }
        if (scale > options.tick_limit)
            throw CompileError(ErrorKind::Graph, {},
                               "no common tick within the tick limit of " + std::to_string(options.tick_limit) +
                                   " ticks per time unit");
    }
    g.tick = Rational(1, scale);

    // Port names come from the imported declarations.
    for (auto& task : g.tasks) {
        if (task.kind != TaskKind::Computation) continue;
        const FlatEq& eq = node.eqs[static_cast<std::size_t>(task.eq)];
        task.inputs.clear();
        task.outputs.clear();
        if (eq.callee_kind == CalleeKind::Operator) {
            for (std::size_t i = 0; i < eq.args.size(); ++i) task.inputs.push_back(operator_inputs[i]);
            task.outputs = {"o"};
        } else {
            const NodeDecl* decl = program.find(eq.callee);
            for (const auto& p : decl->inputs) task.inputs.push_back(p.name);
            for (const auto& p : decl->outputs) task.outputs.push_back(p.name);
        }
    }

    try {
        for (auto& task : g.tasks) {
            Rational period = task.clock.period * scale;
            Rational phase = task.clock.phase * scale;
            task.T = period.numerator();
            task.r = phase.numerator();
            std::int64_t wcet = 0;
            if (task.kind == TaskKind::Sensor) wcet = options.sensor_wcet;
            if (task.kind == TaskKind::Actuator) wcet = options.actuator_wcet;
            if (task.kind == TaskKind::Computation) {
                const FlatEq& eq = node.eqs[static_cast<std::size_t>(task.eq)];
                if (eq.callee_kind == CalleeKind::Imported) wcet = program.find(eq.callee)->wcet.value_or(0);
            }
            task.C = mul64(wcet, scale);
            task.due.reset();
            if (task.kind == TaskKind::Actuator && node.var(task.var).due)
                task.due = mul64(*node.var(task.var).due, scale);
        }
        (void)g.hyperperiod();
    } catch (const std::overflow_error&) {
        throw CompileError(ErrorKind::Graph, {}, "task attributes overflow 64-bit ticks");
    }
    check_edge_periods(g);
}

void check_edge_periods(const TaskGraph& g)
{
    for (const auto& e : g.edges) {
        const Task& src = g.tasks[static_cast<std::size_t>(e.src)];
        const Task& dst = g.tasks[static_cast<std::size_t>(e.dst)];
        Rational period(src.T);
        for (const auto& op : e.ops) {
            if (op.kind == PrecOp::Kind::Under) period *= op.k;
            if (op.kind == PrecOp::Kind::Over) period /= op.k;
        }
        if (period != Rational(dst.T))
            throw CompileError(ErrorKind::Graph, {},
                               "internal error: period mismatch on edge " + src.name + " -> " + dst.name);
    }
}

std::string to_dot(const TaskGraph& g)
{
    std::ostringstream os;
    os << "digraph \"" << g.name << "\" {\n";
    for (const auto& t : g.tasks) {
        os << "  \"" << t.name << "\" [label=\"" << t.name << " [" << t.T << ',' << t.C << ',' << t.r << "]\"";
        if (t.kind == TaskKind::Sensor || t.kind == TaskKind::Actuator) os << ", shape=box";
        os << "];\n";
    }
    for (const auto& e : g.edges) {
        os << "  \"" << g.tasks[static_cast<std::size_t>(e.src)].name << "\" -> \""
           << g.tasks[static_cast<std::size_t>(e.dst)].name << '"';
        std::vector<std::string> attrs;
        if (!e.ops.empty()) attrs.push_back("label=\"" + to_string(e.ops) + "\"");
        if (has_delay(e.ops)) attrs.push_back("style=dashed");
        if (!attrs.empty()) {
            os << " [";
            for (std::size_t i = 0; i < attrs.size(); ++i) os << (i ? ", " : "") << attrs[i];
            os << ']';
        }
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace mps
