#ifndef MPS_ANALYSIS_HPP
#define MPS_ANALYSIS_HPP

#include <optional>
#include <string>
#include <vector>

#include "mps/flat.hpp"
#include "mps/rational.hpp"

namespace mps {

/// A strictly periodic clock. `phase` is absolute (time units), i.e. the
/// first activation date; the source notation `(n, p)` has phase n*p.
struct PClock {
    Rational period{1};
    Rational phase{0};

    friend bool operator==(const PClock&, const PClock&) = default;
};

/// `(period,phase/period)`, e.g. `(120,0)` or `(10,1/2)`.
std::string to_string(const PClock& c);

struct ClockOp {
    enum class Kind { Each, Times, Phase } kind = Kind::Each;
    std::int64_t k = 1;
    Rational q{0};

    static ClockOp each(std::int64_t k) { return {Kind::Each, k, Rational{0}}; }
    static ClockOp times(std::int64_t k) { return {Kind::Times, k, Rational{0}}; }
    static ClockOp phase(Rational q) { return {Kind::Phase, 1, q}; }
};

/// Each k multiplies the period, Times k divides it, Phase q adds q*period
/// to the phase.
PClock apply_transform(const PClock& c, const ClockOp& op);
/// Inverse of apply_transform; the result may carry a negative phase.
PClock invert_transform(const PClock& c, const ClockOp& op);

/// Finds one instantaneous dependency cycle (dependencies through every
/// equation except the delayed operand of `fby`). Compiler temporaries are
/// omitted from the returned variable list.
std::optional<std::vector<std::string>> find_causality_cycle(const FlatNode& node);

/// Throws CompileError("causality cycle: a, b") on the first cycle found.
void causality_check(const FlatNode& node);

/// Resolved clock of every variable of a flattened node.
struct ClockAssignment {
    std::vector<PClock> clocks;

    const PClock& of(VarId v) const { return clocks.at(static_cast<std::size_t>(v)); }
};

/// Unification-based clock inference over the flattened main node.
///
/// Operator applications and copies share one clock; `/^`, `*^` and `~>`
/// relate their operand and result through the corresponding transform, and
/// are solved in whichever direction is known first. Declared `rate`
/// annotations are hard constraints. Throws CompileError on a mismatch, a
/// negative phase, or a variable left without a clock.
ClockAssignment clock_calculus(const FlatNode& node);

struct ClockSignature {
    std::vector<PClock> inputs;
    std::vector<PClock> outputs;
};

ClockSignature clock_signature(const FlatNode& node, const ClockAssignment& clocks);
/// `((120,0)*(10,0))->(40,0)`
std::string to_string(const ClockSignature& sig);

}  // namespace mps

#endif
