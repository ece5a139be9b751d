#ifndef MPS_PROPERTIES_HPP
#define MPS_PROPERTIES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mps/pipeline.hpp"
#include "mps/sim.hpp"

namespace mps {

/// Instances in [0, max r + 2H) where dynamic_deadline and the brute-force
/// instance graph disagree.
std::size_t oracle_discrepancies(const TaskSet& ts);

/// Violations of D_i(n) <= D_j(g_ops(n)) - C_j over delay-free edges, for
/// every producer instance released before 3H.
std::size_t soundness_violations(const TaskSet& ts);

/// Tasks whose word length does not divide the hyperperiod (in ticks).
std::vector<std::string> word_length_violations(const TaskSet& ts);

struct SemanticRun {
    std::size_t misses = 0;
    std::vector<Mismatch> mismatches;
};

/// Simulates over [0, max r + 2H) under deadline words and compares every
/// buffer read with the reference interpreter.
SemanticRun semantic_run(const Compilation& c);
SemanticRun semantic_run(const Compilation& c, const TaskSet& ts);

struct FaultTrial {
    std::string buffer;
    std::size_t bit = 0;
    SemanticRun run;
};

/// Clears one set write-mask bit of a buffer fed by a non-constant producer,
/// both picked from `seed`, and reruns the semantic comparison. Empty when no
/// buffer qualifies.
std::optional<FaultTrial> inject_write_mask_fault(const Compilation& c, std::uint64_t seed);

/// Start(consumer, g_ops(n)) never precedes Complete(producer, n) on
/// delay-free edges. Returns the number of violations in the trace.
std::size_t precedence_violations(const TaskSet& ts, const SimTrace& trace);

/// At every tick some job runs, it has the smallest deadline key among the
/// pending jobs, and no job runs while another is idle-waiting with an
/// earlier key. Returns the number of offending ticks.
std::size_t edf_violations(const TaskSet& ts, const SimTrace& trace);

struct PropertyResult {
    std::string name;
    bool ok = false;
    std::string detail;
};

/// Every property above, on one compiled program.
std::vector<PropertyResult> check_properties(const Compilation& c, std::uint64_t seed);

}  // namespace mps

#endif
