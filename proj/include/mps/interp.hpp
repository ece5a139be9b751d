#ifndef MPS_INTERP_HPP
#define MPS_INTERP_HPP

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "mps/analysis.hpp"
#include "mps/flat.hpp"

namespace mps {

/// Handle into a SymPool; 0 is the undefined value.
using SymId = std::uint32_t;
constexpr SymId undefined_sym = 0;

struct SymValue {
    enum class Kind { Lit, Node } kind = Kind::Lit;
    Literal lit{std::int64_t{0}};
    std::string name;
    int port = -1;  // output index of a multi-output node, -1 otherwise
    std::int64_t index = 0;
    std::vector<SymId> args;
};

/// Hash-consed symbolic values: structurally equal values share one id, so
/// comparing ids compares whole value trees.
class SymPool {
public:
    SymPool();

    SymId lit(const Literal& value);
    SymId node(const std::string& name, int port, std::int64_t index, std::vector<SymId> args);
    const SymValue& get(SymId id) const { return values_.at(id); }

    /// `NF<2>(PA<24>(pos<24>))`; a multi-output node shows its port as
    /// `F.o2<3>(...)`. Subterms deeper than `depth` print as `...`.
    std::string render(SymId id, int depth = 4) const;

private:
    SymId intern(SymValue v, std::string key);

    std::vector<SymValue> values_;
    std::unordered_map<std::string, SymId> index_;
};

/// Lazy, memoized evaluation of the flattened program's synchronous
/// semantics. value(v, i) is the i-th value of flow v; imported nodes,
/// operators and sensors produce opaque symbols.
class Evaluator {
public:
    Evaluator(const FlatNode& node, SymPool& pool);

    SymId value(VarId v, std::int64_t i);

private:
    SymId compute(VarId v, std::int64_t i);

    const FlatNode& node_;
    SymPool& pool_;
    std::vector<std::unordered_map<std::int64_t, SymId>> memo_;
};

struct FlowSample {
    Rational tag;  // ticks
    SymId value;
};

/// Finite prefix of every variable's flow over [0, horizon) ticks. `tick`
/// converts source time units to ticks. Throws std::invalid_argument unless
/// horizon is a positive multiple of `hyperperiod`.
std::map<std::string, std::vector<FlowSample>> eval(const FlatNode& node, const ClockAssignment& clocks,
                                                    const Rational& tick, std::int64_t hyperperiod,
                                                    std::int64_t horizon, SymPool& pool);

}  // namespace mps

#endif
