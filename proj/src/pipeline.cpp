#include "mps/pipeline.hpp"

namespace mps {

Compilation compile(std::string_view source, const CompileOptions& options)
{
    Compilation c;
    c.program = parse(source, ParseOptions{options.main});
    c.types = type_check(c.program);
    c.flat = inline_program(c.program);
    causality_check(c.flat);
    c.clocks = clock_calculus(c.flat);

    TaskGraph g = extract_reduce(c.flat);
    extract_attributes(g, c.program, c.flat, c.clocks, options.extract);
    DeadlineResult d = compute_deadline_words(g);
    c.taskset.buffers = plan_buffers(g, d.words);
    c.taskset.words = std::move(d.words);
    c.taskset.graph = std::move(g);
    return c;
}

}  // namespace mps
