#include <algorithm>

#include "mps/comms.hpp"

namespace mps {

const char* to_string(ReadRule r)
{
    return r == ReadRule::Same ? "same" : "consumed_instance_mod2";
}

std::optional<ReadRule> parse_read_rule(std::string_view s)
{
    if (s == "same") return ReadRule::Same;
    if (s == "consumed_instance_mod2") return ReadRule::ConsumedInstanceMod2;
    return std::nullopt;
}

bool BufferPlan::writes(std::int64_t n) const
{
    return write_mask[static_cast<std::size_t>(n % static_cast<std::int64_t>(write_mask.size()))];
}

std::int64_t BufferPlan::write_ordinal(std::int64_t n) const
{
    const auto period = static_cast<std::int64_t>(write_mask.size());
    const auto per_period = std::count(write_mask.begin(), write_mask.end(), true);
    std::int64_t k = (n / period) * per_period;
    for (std::int64_t i = 0; i < n % period; ++i) k += write_mask[static_cast<std::size_t>(i)];
    return k;
}

std::int64_t BufferPlan::writer_of(std::int64_t k) const
{
    const auto period = static_cast<std::int64_t>(write_mask.size());
    const auto per_period = std::count(write_mask.begin(), write_mask.end(), true);
    std::int64_t n = (k / per_period) * period;
    for (std::int64_t left = k % per_period;; ++n) {
        if (writes(n) && left-- == 0) return n;
    }
}

int BufferPlan::producer_cell(std::int64_t n) const
{
    return size == 1 ? 0 : static_cast<int>(write_ordinal(n) % 2);
}

int BufferPlan::consumer_cell(const OpsList& ops, std::int64_t m) const
{
    if (read_rule == ReadRule::Same) return 0;
    std::int64_t p = consumed_instance(ops, m);
    return p < 0 ? 1 : static_cast<int>(write_ordinal(p) % 2);
}

std::int64_t consumed_instance(const OpsList& ops, std::int64_t m)
{
    if (g_ops(ops, 0) > m) return -1;
    std::int64_t lo = 0;  // g(lo) <= m
    std::int64_t hi = 1;
    while (g_ops(ops, hi) <= m) {
        lo = hi;
        hi *= 2;
    }
    while (hi - lo > 1) {
        std::int64_t mid = lo + (hi - lo) / 2;
        (g_ops(ops, mid) <= m ? lo : hi) = mid;
    }
    return lo;
}

std::string buffer_name(const TaskGraph& g, const Edge& e)
{
    const Task& src = g.tasks[static_cast<std::size_t>(e.src)];
    const Task& dst = g.tasks[static_cast<std::size_t>(e.dst)];
    std::string from = src.kind == TaskKind::Sensor ? src.name : src.name + "_" + src.outputs.at(static_cast<std::size_t>(e.src_port));
    std::string to = dst.kind == TaskKind::Actuator ? dst.name : dst.name + "_" + dst.inputs.at(static_cast<std::size_t>(e.dst_port));
    return from + "_" + to;
}

std::vector<BufferPlan> plan_buffers(const TaskGraph& g, const std::vector<DWord>& words)
{
    std::vector<BufferPlan> plans;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        BufferPlan b;
        b.name = buffer_name(g, e);
        b.edge = static_cast<int>(i);
        b.producer = e.src;
        b.consumer = e.dst;

        auto delays = std::count_if(e.ops.begin(), e.ops.end(),
                                    [](const PrecOp& o) { return o.kind == PrecOp::Kind::Delay; });
        if (delays > 1)
            throw CompileError(ErrorKind::Buffer, {},
                               "buffer " + b.name + ": chained fby (" + to_string(e.ops) +
                                   ") needs more than two cells");
        b.size = (delays > 0 || has_offset(e.ops)) ? 2 : 1;
        b.read_rule = b.size == 2 ? ReadRule::ConsumedInstanceMod2 : ReadRule::Same;
        if (delays > 0) b.init = e.init;

        std::int64_t period = pword(strip_delays(e.ops));
        b.write_mask.resize(static_cast<std::size_t>(period));
        for (std::int64_t n = 0; n < period; ++n)
            b.write_mask[static_cast<std::size_t>(n)] = g_ops(e.ops, n) != g_ops(e.ops, n + 1);
        plans.push_back(std::move(b));
    }
    validate_buffers(g, words, plans);
    return plans;
}

void validate_buffers(const TaskGraph& g, const std::vector<DWord>& words, const std::vector<BufferPlan>& plans)
{
    std::int64_t max_r = 0;
    for (const auto& t : g.tasks) max_r = std::max(max_r, t.r);
    const std::int64_t window = max_r + 2 * g.hyperperiod();

    for (const auto& b : plans) {
        const Edge& e = g.edges[static_cast<std::size_t>(b.edge)];
        const Task& src = g.tasks[static_cast<std::size_t>(b.producer)];
        const Task& dst = g.tasks[static_cast<std::size_t>(b.consumer)];
        std::int64_t p = -1;
        for (std::int64_t m = 0; dst.release(m) < window; ++m) {
            while (g_ops(e.ops, p + 1) <= m) ++p;
            std::int64_t ordinal = p < 0 ? -1 : b.write_ordinal(p);
            std::int64_t overwriter = b.writer_of(ordinal + b.size);
            std::int64_t deadline = dynamic_deadline(dst, words[static_cast<std::size_t>(b.consumer)], m);
            if (src.release(overwriter) < deadline)
                throw CompileError(ErrorKind::Buffer, {},
                                   "buffer " + b.name + ": " + src.name + "[" + std::to_string(overwriter) +
                                       "] may overwrite the value read by " + dst.name + "[" + std::to_string(m) +
                                       "] (buffer depth exceeds double buffering)");
        }
    }
}

}  // namespace mps
