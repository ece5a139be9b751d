#ifndef MPS_DEADLINES_HPP
#define MPS_DEADLINES_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mps/taskgraph.hpp"

namespace mps {

/// Infinite periodic word `pattern^w` of relative deadlines, in ticks.
struct DWord {
    std::vector<std::int64_t> pattern{0};

    DWord() = default;
    DWord(std::initializer_list<std::int64_t> p) : pattern(p) {}
    explicit DWord(std::vector<std::int64_t> p) : pattern(std::move(p)) {}
    static DWord constant(std::int64_t d) { return DWord{d}; }

    std::size_t size() const { return pattern.size(); }
    std::int64_t operator[](std::int64_t n) const;
    std::int64_t min() const;

    friend bool operator==(const DWord&, const DWord&) = default;
};

/// `(5.10.10.10)^w`
std::string to_string(const DWord& w);

std::int64_t dword_index(const DWord& w, std::int64_t n);
/// Shortest repeating block of the pattern.
DWord canonicalize(const DWord& w);
DWord dword_min(const DWord& a, const DWord& b);
DWord dword_add(const DWord& a, const DWord& b);
DWord dword_shift(const DWord& w, std::int64_t k);

/// Instance map of an extended precedence: producer instance n precedes
/// consumer instance g_ops(n).
std::int64_t g_ops(const OpsList& ops, std::int64_t n);

/// Period of diffops for delay-free operator lists.
std::int64_t pword(const OpsList& ops);
/// g_ops(pword) - g_ops(0): the consumer-instance advance per period.
std::int64_t qshift(const OpsList& ops);

/// diffops[n] = g_ops(n)*T_j - n*T_i for n in [0, pword).
DWord diffops_word(const OpsList& ops, std::int64_t Ti, std::int64_t Tj);

struct ConstraintInput {
    const OpsList& ops;
    const DWord& wj;
    std::int64_t Ti, Tj, Cj, ri, rj;
};

/// Upper bound imposed on w_i by a delay-free precedence i -> j:
/// cstr[n] = w_j[g(n)] + g(n)*T_j - n*T_i - C_j + r_j - r_i.
DWord constraint_word(const ConstraintInput& in);

/// One relaxation step of the backward traversal.
struct DeadlineStep {
    std::vector<int> pending;  // worklist when tau_j was taken, head first
    int successor = 0;         // tau_j
    int predecessor = 0;       // tau_i
    DWord constraint;
};

struct DeadlineResult {
    std::vector<DWord> words;  // indexed like TaskGraph::tasks
    std::vector<DeadlineStep> steps;
};

/// Computes one deadline word per task so that plain EDF on the
/// independent task set respects every delay-free precedence. Delayed
/// precedences impose no constraint. Throws CompileError when some
/// instance ends up with a relative deadline below its execution time.
DeadlineResult compute_deadline_words(const TaskGraph& g, bool record_steps = false);

/// Absolute deadline of instance n: r + n*T + w[n].
std::int64_t dynamic_deadline(const Task& t, const DWord& w, std::int64_t n);

/// Reference computation: unfolds every delay-free edge into instance
/// precedences and applies the backward recurrence
/// D*_i[n] = min(D_i[n], min over successors D*_j[g(n)] - C_j). Returns the
/// adjusted deadline of every instance released before `horizon`.
std::vector<std::vector<std::int64_t>> instance_graph_oracle(const TaskGraph& g, std::int64_t horizon);

}  // namespace mps

#endif
