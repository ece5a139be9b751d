#include "mps/diagnostics.hpp"

#include <algorithm>
#include <tuple>

namespace mps {

Span cover(const Span& a, const Span& b)
{
    if (!a.valid()) return b;
    if (!b.valid()) return a;
    Span out = a;
    if (std::tie(b.line, b.column) < std::tie(a.line, a.column)) {
        out.line = b.line;
        out.column = b.column;
    }
    if (std::tie(b.end_line, b.end_column) > std::tie(a.end_line, a.end_column)) {
        out.end_line = b.end_line;
        out.end_column = b.end_column;
    }
    return out;
}

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::Structure: return "structure";
    case ErrorKind::Type: return "type";
    case ErrorKind::Causality: return "causality";
    case ErrorKind::Clock: return "clock";
    case ErrorKind::Graph: return "graph";
    case ErrorKind::Deadline: return "deadline";
    case ErrorKind::Buffer: return "buffer";
    }
    return "unknown";
}

std::string CompileError::format(const std::string& file) const
{
    std::string out = file;
    if (span_.valid()) out += ":" + std::to_string(span_.line) + ":" + std::to_string(span_.column);
    out += ": error: ";
    out += what();
    return out;
}

}  // namespace mps
