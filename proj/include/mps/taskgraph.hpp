#ifndef MPS_TASKGRAPH_HPP
#define MPS_TASKGRAPH_HPP

#include <optional>
#include <string>
#include <vector>

#include "mps/analysis.hpp"
#include "mps/flat.hpp"

namespace mps {

/// Rate-transition operator carried by an extended precedence.
struct PrecOp {
    enum class Kind { Under, Over, Offset, Delay } kind = Kind::Under;
    std::int64_t k = 1;  // Under / Over factor
    Rational q{0};       // Offset shift, as a fraction of the period

    static PrecOp under(std::int64_t k) { return {Kind::Under, k, Rational{0}}; }
    static PrecOp over(std::int64_t k) { return {Kind::Over, k, Rational{0}}; }
    static PrecOp offset(Rational q) { return {Kind::Offset, 1, q}; }
    static PrecOp delay() { return {Kind::Delay, 1, Rational{0}}; }

    friend bool operator==(const PrecOp&, const PrecOp&) = default;
};

/// Operators in application order along the data path, producer first.
using OpsList = std::vector<PrecOp>;

/// `/^12`, `*^3`, `~>1/2`, `fby`
std::string to_string(const PrecOp& op);
/// Operators joined with '.', e.g. `fby.*^3`; the empty list prints as `id`.
std::string to_string(const OpsList& ops);
/// Inverse of to_string(PrecOp). Throws std::invalid_argument.
PrecOp parse_prec_op(std::string_view text);

bool has_delay(const OpsList& ops);
bool has_offset(const OpsList& ops);
OpsList strip_delays(const OpsList& ops);

enum class TaskKind { Sensor, Actuator, Computation, Constant };
const char* to_string(TaskKind k);
std::optional<TaskKind> parse_task_kind(std::string_view s);

struct Task {
    std::string name;
    TaskKind kind = TaskKind::Computation;
    /// Imported node or operator mnemonic for computations, the main-node
    /// variable for sensors and actuators, the literal for constants.
    std::string node;
    std::vector<std::string> inputs;   // input port names
    std::vector<std::string> outputs;  // output port names

    std::int64_t T = 0;  // period, ticks
    std::int64_t C = 0;  // execution time, ticks
    std::int64_t r = 0;  // release offset, ticks
    std::optional<std::int64_t> due;

    // Link back to the flattened program, -1 when loaded from a task-set file.
    int eq = -1;
    VarId var = -1;
    std::optional<Literal> value;  // constant tasks
    PClock clock;                  // source time units

    std::int64_t release(std::int64_t n) const { return r + n * T; }
};

struct Edge {
    int src = 0;
    int dst = 0;
    int src_port = 0;
    int dst_port = 0;
    OpsList ops;
    std::optional<Literal> init;  // initializer of the (first) delay
    VarId consumer_var = -1;      // the variable read by the consumer at dst_port
};

/// Reduced task graph. Tasks are stored in topological order of the
/// delay-free subgraph, declaration order breaking ties; that order doubles
/// as the scheduler's tie-break.
struct TaskGraph {
    std::string name;
    Rational tick{1};  // source time units per tick
    std::vector<Task> tasks;
    std::vector<Edge> edges;

    std::optional<int> find(std::string_view task) const;
    std::vector<int> in_edges(int task) const;   // ordered by destination port
    std::vector<int> out_edges(int task) const;  // in edge order
    std::int64_t hyperperiod() const;
};

struct ExtractOptions {
    std::int64_t sensor_wcet = 0;
    std::int64_t actuator_wcet = 0;
    /// Upper bound on the number of ticks per source time unit.
    std::int64_t tick_limit = 1'000'000;
};

/// Folds variables and operator chains into extended precedences between
/// tasks (imported-node and operator calls, constants, sensors, actuators).
/// Task attributes are left zero. Throws CompileError for an `*^` preceding
/// the first `fby` on a path and for delay loops with no producing task.
TaskGraph extract_reduce(const FlatNode& node);

/// Fills T, C, r and due. The tick is the largest unit making every task
/// period and phase integral.
void extract_attributes(TaskGraph& g, const Program& program, const FlatNode& node,
                        const ClockAssignment& clocks, const ExtractOptions& options = {});

/// Checks that periods agree along every edge. Throws CompileError.
void check_edge_periods(const TaskGraph& g);

/// Graphviz rendering: nodes labeled `name [T,C,r]`, delayed edges dashed.
std::string to_dot(const TaskGraph& g);

}  // namespace mps

#endif
