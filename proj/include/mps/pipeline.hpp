#ifndef MPS_PIPELINE_HPP
#define MPS_PIPELINE_HPP

#include <map>
#include <string>

#include "mps/analysis.hpp"
#include "mps/frontend.hpp"
#include "mps/taskset.hpp"
#include "mps/types.hpp"

namespace mps {

struct CompileOptions {
    std::string main;
    ExtractOptions extract;
};

/// Every intermediate product of a successful compilation.
struct Compilation {
    Program program;
    std::map<std::string, Signature> types;
    FlatNode flat;
    ClockAssignment clocks;
    TaskSet taskset;

    const Signature& main_type() const { return types.at(program.main); }
    ClockSignature main_clock() const { return clock_signature(flat, clocks); }
};

/// parse, type check, inline, causality, clocks, task graph, deadline words,
/// buffers. Throws CompileError at the first rejection.
Compilation compile(std::string_view source, const CompileOptions& options = {});

}  // namespace mps

#endif
