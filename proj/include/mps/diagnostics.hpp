#ifndef MPS_DIAGNOSTICS_HPP
#define MPS_DIAGNOSTICS_HPP

#include <stdexcept>
#include <string>

namespace mps {

/// 1-based source position range. A default span (line 0) means "no location".
struct Span {
    int line = 0;
    int column = 0;
    int end_line = 0;
    int end_column = 0;

    bool valid() const { return line > 0; }
    friend bool operator==(const Span&, const Span&) = default;
};

/// Merge two spans into the smallest range covering both.
Span cover(const Span& a, const Span& b);

enum class ErrorKind {
    Syntax,
    Structure,   // duplicate names, missing equations, unknown identifiers
    Type,
    Causality,
    Clock,
    Graph,       // task graph extraction
    Deadline,
    Buffer,
};

const char* to_string(ErrorKind kind);

/// Every rejection raised by the compiler front to back.
class CompileError : public std::runtime_error {
public:
    CompileError(ErrorKind kind, Span span, std::string message)
        : std::runtime_error(message), kind_(kind), span_(span) {}

    ErrorKind kind() const { return kind_; }
    const Span& span() const { return span_; }

    /// `file:line:col: error: message`, or `file: error: message` when no span.
    std::string format(const std::string& file) const;

private:
    ErrorKind kind_;
    Span span_;
};

}  // namespace mps

#endif
