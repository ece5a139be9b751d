#ifndef MPS_TASKSET_HPP
#define MPS_TASKSET_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "mps/comms.hpp"

namespace mps {

/// A compiled, independent task set: attributes, deadline words and buffers.
struct TaskSet {
    TaskGraph graph;
    std::vector<DWord> words;
    std::vector<BufferPlan> buffers;

    const Task& task(int i) const { return graph.tasks.at(static_cast<std::size_t>(i)); }
    const DWord& word(int i) const { return words.at(static_cast<std::size_t>(i)); }
    std::int64_t hyperperiod() const { return graph.hyperperiod(); }
    std::int64_t max_release() const;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr int taskset_format_version = 1;

/// Canonical serialization: fixed key order, two-space indentation, and a
/// trailing newline.
std::string to_json(const TaskSet& ts);

/// Throws FormatError on malformed or inconsistent content.
TaskSet taskset_from_json(std::string_view text);

}  // namespace mps

#endif
