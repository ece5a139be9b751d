#ifndef MPS_COMMS_HPP
#define MPS_COMMS_HPP

#include <optional>
#include <string>
#include <vector>

#include "mps/deadlines.hpp"

namespace mps {

enum class ReadRule { Same, ConsumedInstanceMod2 };
const char* to_string(ReadRule r);
std::optional<ReadRule> parse_read_rule(std::string_view s);

/// Lock-free single-writer buffer implementing one extended precedence.
///
/// The producer writes only at instances where `write_mask` holds. Double
/// buffers alternate cells by write ordinal, so the k-th write goes to cell
/// k mod 2, and the initial value of a delay sits in cell 1.
struct BufferPlan {
    std::string name;
    int edge = 0;
    int producer = 0;
    int consumer = 0;
    int size = 1;
    std::optional<Literal> init;
    std::vector<bool> write_mask;
    ReadRule read_rule = ReadRule::Same;

    bool writes(std::int64_t n) const;
    /// Number of writes performed by producer instances 0..n-1.
    std::int64_t write_ordinal(std::int64_t n) const;
    /// Producer instance performing write number k.
    std::int64_t writer_of(std::int64_t k) const;
    int producer_cell(std::int64_t n) const;
    int consumer_cell(const OpsList& ops, std::int64_t m) const;
};

/// Latest producer instance whose value consumer instance m reads:
/// max{n : g_ops(n) <= m}, or -1 when m still reads the initial value.
std::int64_t consumed_instance(const OpsList& ops, std::int64_t m);

/// `producerPort_consumerPort`, e.g. `FL_o_PL_i1`; sensors and actuators
/// contribute their variable name alone.
std::string buffer_name(const TaskGraph& g, const Edge& e);

/// One buffer per edge. Rejects chained delays and any edge where a cell
/// could be overwritten before the consumer's deadline (dynamic deadlines
/// taken from `words`).
std::vector<BufferPlan> plan_buffers(const TaskGraph& g, const std::vector<DWord>& words);

/// The overwrite check of plan_buffers, usable on plans loaded from disk.
void validate_buffers(const TaskGraph& g, const std::vector<DWord>& words, const std::vector<BufferPlan>& plans);

}  // namespace mps

#endif
