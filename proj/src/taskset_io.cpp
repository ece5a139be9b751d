#include <algorithm>

#include <json.hpp>

#include "mps/taskset.hpp"

namespace mps {

using json = nlohmann::ordered_json;

std::int64_t TaskSet::max_release() const
{
    std::int64_t r = 0;
    for (const auto& t : graph.tasks) r = std::max(r, t.r);
    return r;
}

namespace {

json literal_json(const std::optional<Literal>& lit)
{
    if (!lit) return nullptr;
    if (lit->is_bool()) return std::get<bool>(lit->value);
    return std::get<std::int64_t>(lit->value);
}

std::optional<Literal> literal_from(const json& j)
{
    if (j.is_null()) return std::nullopt;
    if (j.is_boolean()) return Literal{j.get<bool>()};
    if (j.is_number_integer()) return Literal{j.get<std::int64_t>()};
    throw FormatError("literal must be null, a boolean or an integer");
}

std::optional<Literal> parse_literal_text(const std::string& s)
{
    if (s == "true") return Literal{true};
    if (s == "false") return Literal{false};
    auto r = parse_rational(s);
    if (r && is_integer(*r)) return Literal{r->numerator()};
    return std::nullopt;
}

const json& field(const json& obj, const char* key)
{
    if (!obj.is_object() || !obj.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
    return obj.at(key);
}

template <typename T>
T get(const json& obj, const char* key)
{
    try {
        return field(obj, key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw FormatError(std::string("field '") + key + "' has the wrong type");
    }
}

int index_of(const TaskGraph& g, const std::string& name)
{
    auto t = g.find(name);
    if (!t) throw FormatError("unknown task '" + name + "'");
    return *t;
}

}  // namespace

std::string to_json(const TaskSet& ts)
{
    const TaskGraph& g = ts.graph;
    json root;
    root["version"] = taskset_format_version;
    root["name"] = g.name;
    root["tick"] = std::to_string(g.tick.numerator()) + "/" + std::to_string(g.tick.denominator());
    root["hyperperiod"] = g.hyperperiod();

    json tasks = json::array();
    for (std::size_t i = 0; i < g.tasks.size(); ++i) {
        const Task& t = g.tasks[i];
        json jt;
        jt["name"] = t.name;
        jt["kind"] = to_string(t.kind);
        jt["node"] = t.node;
        jt["T"] = t.T;
        jt["C"] = t.C;
        jt["r"] = t.r;
        jt["due"] = t.due ? json(*t.due) : json(nullptr);
        jt["dword"] = ts.words.at(i).pattern;
        jt["inputs"] = t.inputs;
        jt["outputs"] = t.outputs;
        tasks.push_back(std::move(jt));
    }
    root["tasks"] = std::move(tasks);

    json edges = json::array();
    for (const auto& e : g.edges) {
        json je;
        je["src"] = g.tasks[static_cast<std::size_t>(e.src)].name;
        je["src_port"] = e.src_port;
        je["dst"] = g.tasks[static_cast<std::size_t>(e.dst)].name;
        je["dst_port"] = e.dst_port;
        json ops = json::array();
        for (const auto& op : e.ops) ops.push_back(to_string(op));
        je["ops"] = std::move(ops);
        je["init"] = literal_json(e.init);
        edges.push_back(std::move(je));
    }
    root["edges"] = std::move(edges);

    json buffers = json::array();
    for (const auto& b : ts.buffers) {
        json jb;
        jb["name"] = b.name;
        jb["edge"] = b.edge;
        jb["producer"] = g.tasks[static_cast<std::size_t>(b.producer)].name;
        jb["consumer"] = g.tasks[static_cast<std::size_t>(b.consumer)].name;
        jb["size"] = b.size;
        jb["init"] = literal_json(b.init);
        json mask = json::array();
        for (bool bit : b.write_mask) mask.push_back(bit ? 1 : 0);
        jb["write_mask"] = std::move(mask);
        jb["read_rule"] = to_string(b.read_rule);
        buffers.push_back(std::move(jb));
    }
    root["buffers"] = std::move(buffers);
    return root.dump(2) + "\n";
}

TaskSet taskset_from_json(std::string_view text)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
    if (get<int>(root, "version") != taskset_format_version) throw FormatError("unsupported task-set version");

    TaskSet ts;
    TaskGraph& g = ts.graph;
    g.name = get<std::string>(root, "name");
    auto tick = parse_rational(get<std::string>(root, "tick"));
    if (!tick || *tick <= 0) throw FormatError("invalid tick");
    g.tick = *tick;

    for (const auto& jt : field(root, "tasks")) {
        Task t;
        t.name = get<std::string>(jt, "name");
        auto kind = parse_task_kind(get<std::string>(jt, "kind"));
        if (!kind) throw FormatError("unknown task kind for '" + t.name + "'");
        t.kind = *kind;
        t.node = get<std::string>(jt, "node");
        t.T = get<std::int64_t>(jt, "T");
        t.C = get<std::int64_t>(jt, "C");
        t.r = get<std::int64_t>(jt, "r");
        if (t.T <= 0 || t.C < 0 || t.r < 0) throw FormatError("invalid attributes for task '" + t.name + "'");
        if (!field(jt, "due").is_null()) t.due = get<std::int64_t>(jt, "due");
        t.inputs = get<std::vector<std::string>>(jt, "inputs");
        t.outputs = get<std::vector<std::string>>(jt, "outputs");
        if (t.kind == TaskKind::Constant) {
            t.value = parse_literal_text(t.node);
            if (!t.value) throw FormatError("constant task '" + t.name + "' has no literal value");
        }
        t.clock = PClock{Rational(t.T) * g.tick, Rational(t.r) * g.tick};
        auto dword = get<std::vector<std::int64_t>>(jt, "dword");
        if (dword.empty()) throw FormatError("empty deadline word for '" + t.name + "'");
        if (g.find(t.name)) throw FormatError("duplicate task '" + t.name + "'");
        g.tasks.push_back(std::move(t));
        ts.words.emplace_back(std::move(dword));
    }
    std::int64_t hyperperiod = 0;
    try {
        hyperperiod = g.hyperperiod();
    } catch (const std::overflow_error&) {
        throw FormatError("task periods overflow 64-bit ticks");
    }
    if (get<std::int64_t>(root, "hyperperiod") != hyperperiod) throw FormatError("hyperperiod does not match tasks");

    for (const auto& je : field(root, "edges")) {
        Edge e;
        e.src = index_of(g, get<std::string>(je, "src"));
        e.dst = index_of(g, get<std::string>(je, "dst"));
        e.src_port = get<int>(je, "src_port");
        e.dst_port = get<int>(je, "dst_port");
        if (e.src_port < 0 || static_cast<std::size_t>(e.src_port) >= g.tasks[static_cast<std::size_t>(e.src)].outputs.size() ||
            e.dst_port < 0 || static_cast<std::size_t>(e.dst_port) >= g.tasks[static_cast<std::size_t>(e.dst)].inputs.size())
            throw FormatError("edge port out of range");
        for (const auto& op : get<std::vector<std::string>>(je, "ops")) {
            try {
                e.ops.push_back(parse_prec_op(op));
            } catch (const std::invalid_argument& ex) {
                throw FormatError(ex.what());
            }
        }
        e.init = literal_from(field(je, "init"));
        g.edges.push_back(std::move(e));
    }

    for (const auto& jb : field(root, "buffers")) {
        BufferPlan b;
        b.name = get<std::string>(jb, "name");
        b.edge = get<int>(jb, "edge");
        if (b.edge < 0 || static_cast<std::size_t>(b.edge) >= g.edges.size()) throw FormatError("buffer edge out of range");
        b.producer = index_of(g, get<std::string>(jb, "producer"));
        b.consumer = index_of(g, get<std::string>(jb, "consumer"));
        const Edge& e = g.edges[static_cast<std::size_t>(b.edge)];
        if (b.producer != e.src || b.consumer != e.dst) throw FormatError("buffer '" + b.name + "' disagrees with its edge");
        b.size = get<int>(jb, "size");
        if (b.size != 1 && b.size != 2) throw FormatError("buffer size must be 1 or 2");
        b.init = literal_from(field(jb, "init"));
        for (int bit : get<std::vector<int>>(jb, "write_mask")) b.write_mask.push_back(bit != 0);
        if (b.write_mask.empty() || std::none_of(b.write_mask.begin(), b.write_mask.end(), [](bool x) { return x; }))
            throw FormatError("buffer '" + b.name + "' never writes");
        auto rule = parse_read_rule(get<std::string>(jb, "read_rule"));
        if (!rule) throw FormatError("unknown read rule");
        b.read_rule = *rule;
        ts.buffers.push_back(std::move(b));
    }
    return ts;
}

}  // namespace mps
