#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <CLI11.hpp>

#include "mps/cli.hpp"
#include "mps/pipeline.hpp"
#include "mps/properties.hpp"

namespace fs = std::filesystem;

namespace mps::cli {

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw IoError("cannot write '" + path + "'");
}

struct CompileFlags {
    std::string main;
    std::int64_t sensor_wcet = 0;
    std::int64_t actuator_wcet = 0;
    std::int64_t tick_limit = 1'000'000;

    CompileOptions options() const
    {
        CompileOptions o;
        o.main = main;
        o.extract.sensor_wcet = sensor_wcet;
        o.extract.actuator_wcet = actuator_wcet;
        o.extract.tick_limit = tick_limit;
        return o;
    }

    void add_to(CLI::App& cmd)
    {
        cmd.add_option("--main", main, "Main node (default: the last defined node)");
        cmd.add_option("--sensor-wcet", sensor_wcet, "Execution time of sensor tasks")->check(CLI::NonNegativeNumber);
        cmd.add_option("--actuator-wcet", actuator_wcet, "Execution time of actuator tasks")
            ->check(CLI::NonNegativeNumber);
        cmd.add_option("--tick-limit", tick_limit, "Largest accepted number of ticks per time unit")
            ->check(CLI::PositiveNumber);
    }
};

struct CompileArgs {
    std::string input;
    std::string output;
    std::string all;
    bool dump_types = false;
    bool dump_clocks = false;
    bool dump_graph = false;
    bool dump_dwords = false;
    CompileFlags flags;
};

std::string default_output(const std::string& input) { return fs::path(input).stem().string() + ".taskset.json"; }

void dump(const Compilation& c, const CompileArgs& a, std::ostream& out)
{
    const std::string& main = c.program.main;
    if (a.dump_types) out << main << " : " << to_string(c.main_type()) << '\n';
    if (a.dump_clocks) out << main << " : " << to_string(c.main_clock()) << '\n';
    if (a.dump_graph) out << to_dot(c.taskset.graph);
    if (a.dump_dwords)
        for (std::size_t i = 0; i < c.taskset.graph.tasks.size(); ++i)
            out << c.taskset.graph.tasks[i].name << ": " << to_string(c.taskset.words[i]) << '\n';
}

/// Compiles one file; diagnostics go to `err`.
int compile_one(const std::string& input, const std::string& output, const CompileArgs& a, std::ostream& out,
                std::ostream& err)
{
    try {
        Compilation c = compile(read_file(input), a.flags.options());
        dump(c, a, out);
        write_file(output, to_json(c.taskset));
        out << output << ": " << c.taskset.graph.tasks.size() << " tasks, " << c.taskset.buffers.size()
            << " buffers\n";
        return exit_ok;
    } catch (const CompileError& e) {
        err << e.format(input) << '\n';
        return exit_rejected;
    } catch (const IoError& e) {
        err << "mpsc: " << e.what() << '\n';
        return exit_io;
    }
}

int cmd_compile(const CompileArgs& a, std::ostream& out, std::ostream& err)
{
    if (a.all.empty()) {
        if (a.input.empty()) {
            err << "mpsc: compile needs a source file or --all DIR\n";
            return exit_io;
        }
        return compile_one(a.input, a.output.empty() ? default_output(a.input) : a.output, a, out, err);
    }

    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(a.all, ec))
        if (entry.is_regular_file() && entry.path().extension() == ".mps") files.push_back(entry.path());
    if (ec) {
        err << "mpsc: cannot list '" << a.all << "'\n";
        return exit_io;
    }
    std::sort(files.begin(), files.end());
    fs::path dir = a.output.empty() ? fs::path(".") : fs::path(a.output);

    struct Result {
        int code;
        std::string out, err;
    };
    std::vector<std::future<Result>> jobs;
    for (const auto& f : files)
        jobs.push_back(std::async(std::launch::async, [&, f] {
            std::ostringstream o, e;
            int code = compile_one(f.string(), (dir / default_output(f.string())).string(), a, o, e);
            return Result{code, o.str(), e.str()};
        }));
    int worst = exit_ok;
    for (auto& j : jobs) {
        Result r = j.get();
        out << r.out;
        err << r.err;
        worst = std::max(worst, r.code);
    }
    return worst;
}

struct SimulateArgs {
    std::string input;
    std::int64_t horizon = 0;
    Policy policy = Policy::EdfDword;
    std::string trace;
    std::string gantt;
    std::vector<std::string> flows;
    CompileFlags flags;
};

void print_flows(const Compilation& c, const SimulateArgs& a, std::ostream& out)
{
    const TaskGraph& g = c.taskset.graph;
    std::int64_t horizon = a.horizon > 0 ? a.horizon : 2 * g.hyperperiod();
    SymPool pool;
    auto flows = eval(c.flat, c.clocks, g.tick, g.hyperperiod(), horizon, pool);
    for (const auto& name : a.flows) {
        auto it = flows.find(name);
        if (it == flows.end()) throw std::invalid_argument("no flow named '" + name + "'");
        out << name << ":\n";
        for (const auto& s : it->second) out << "  (" << to_string(s.tag) << ", " << pool.render(s.value, 8) << ")\n";
    }
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err)
{
    std::optional<Compilation> c;
    TaskSet loaded;
    try {
        std::string text = read_file(a.input);
        if (fs::path(a.input).extension() == ".json")
            loaded = taskset_from_json(text);
        else
            c = compile(text, a.flags.options());
    } catch (const CompileError& e) {
        err << e.format(a.input) << '\n';
        return exit_rejected;
    } catch (const IoError& e) {
        err << "mpsc: " << e.what() << '\n';
        return exit_io;
    } catch (const FormatError& e) {
        err << a.input << ": malformed task set: " << e.what() << '\n';
        return exit_io;
    }
    const TaskSet& ts = c ? c->taskset : loaded;

    if (!a.flows.empty()) {
        if (!c) {
            err << "mpsc: --trace-flows needs a source program\n";
            return exit_io;
        }
        try {
            print_flows(*c, a, out);
        } catch (const std::invalid_argument& e) {
            err << "mpsc: " << e.what() << '\n';
            return exit_io;
        }
    }

    SimConfig cfg{a.horizon > 0 ? a.horizon : default_horizon(ts), a.policy};
    SymPool pool;
    SimTrace trace = simulate(ts, cfg, c ? &pool : nullptr);
    try {
        if (!a.trace.empty()) write_file(a.trace, to_jsonl(ts, trace, c ? &pool : nullptr));
        if (!a.gantt.empty()) write_file(a.gantt, gantt(ts, trace));
    } catch (const IoError& e) {
        err << "mpsc: " << e.what() << '\n';
        return exit_io;
    }

    for (const Job& j : trace.jobs)
        if (j.missed)
            err << "deadline miss: " << ts.task(j.task).name << "[" << j.n << "] (deadline " << j.deadline << ")\n";
    const std::size_t misses = trace.miss_count();
    const std::string window = " over [0," + std::to_string(cfg.horizon) + ")";
    if (misses > 0) {
        out << misses << " deadline misses" << window << '\n';
        return exit_sim_failure;
    }
    if (!c) {
        out << "0 misses" << window << " (no source, semantics not checked)\n";
        return exit_ok;
    }
    auto mismatches = check_semantics(ts, trace, c->flat, pool);
    for (const auto& m : mismatches)
        err << "mismatch: " << ts.task(m.task).name << "[" << m.n << "] input " << m.port << ": expected "
            << m.expected << ", got " << m.got << '\n';
    out << "0 misses, " << mismatches.size() << " mismatches" << window << '\n';
    return mismatches.empty() ? exit_ok : exit_sim_failure;
}

struct CheckArgs {
    std::string input;
    std::uint64_t seed = 0;
    CompileFlags flags;
};

int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream& err)
{
    try {
        Compilation c = compile(read_file(a.input), a.flags.options());
        bool ok = true;
        for (const auto& r : check_properties(c, a.seed)) {
            out << (r.ok ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
            ok = ok && r.ok;
        }
        return ok ? exit_ok : exit_sim_failure;
    } catch (const CompileError& e) {
        err << e.format(a.input) << '\n';
        return exit_rejected;
    } catch (const IoError& e) {
        err << "mpsc: " << e.what() << '\n';
        return exit_io;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Compiler and EDF simulator for multi-periodic synchronous programs", "mpsc"};
    app.require_subcommand(1);

    CompileArgs ca;
    CLI::App* compile_cmd = app.add_subcommand("compile", "Compile a program into a task set");
    compile_cmd->add_option("file", ca.input, "Source program");
    compile_cmd->add_option("-o,--output", ca.output,
                            "Task-set file (default <stem>.taskset.json); output directory with --all");
    compile_cmd->add_option("--all", ca.all, "Compile every .mps file of a directory in parallel");
    compile_cmd->add_flag("--dump-types", ca.dump_types, "Print the main node's type");
    compile_cmd->add_flag("--dump-clocks", ca.dump_clocks, "Print the main node's clock");
    compile_cmd->add_flag("--dump-graph", ca.dump_graph, "Print the task graph in DOT");
    compile_cmd->add_flag("--dump-dwords", ca.dump_dwords, "Print each task's deadline word");
    ca.flags.add_to(*compile_cmd);

    SimulateArgs sa;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Simulate a program or task set under EDF");
    sim_cmd->add_option("input", sa.input, "Source program or .taskset.json")->required();
    sim_cmd->add_option("--horizon", sa.horizon, "Simulated ticks (default max r + 2H)")->check(CLI::PositiveNumber);
    std::map<std::string, Policy> policies{{"edf-dword", Policy::EdfDword}, {"edf-uniform", Policy::EdfUniform}};
    sim_cmd->add_option("--policy", sa.policy, "edf-dword or edf-uniform")
        ->transform(CLI::CheckedTransformer(policies, CLI::ignore_case));
    sim_cmd->add_option("--trace", sa.trace, "Write the event trace as JSON lines");
    sim_cmd->add_option("--gantt", sa.gantt, "Write an ASCII Gantt chart");
    sim_cmd->add_option("--trace-flows", sa.flows, "Print the reference values of these flows")->delimiter(',');
    sa.flags.add_to(*sim_cmd);

    CheckArgs ka;
    CLI::App* check_cmd = app.add_subcommand("check", "Compile a program and run every property check on it");
    check_cmd->add_option("file", ka.input, "Source program")->required();
    check_cmd->add_option("--seed", ka.seed, "Seed for randomized checks");
    ka.flags.add_to(*check_cmd);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_io;
    }

    if (compile_cmd->parsed()) return cmd_compile(ca, out, err);
    if (sim_cmd->parsed()) return cmd_simulate(sa, out, err);
    return cmd_check(ka, out, err);
}

}  // namespace mps::cli
