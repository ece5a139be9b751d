#ifndef MPS_TYPES_HPP
#define MPS_TYPES_HPP

#include <map>
#include <string>
#include <vector>

#include "mps/ast.hpp"

namespace mps {

/// A scalar flow type: a ground type or a generalized variable ('a, 'b, ...).
struct ScalarType {
    enum class Kind { Int, Bool, Var } kind = Kind::Int;
    int var = 0;

    friend bool operator==(const ScalarType&, const ScalarType&) = default;
};

/// Node signature over flattened tuples: `(t1*...*tn)->(u1*...*um)`.
struct Signature {
    std::vector<ScalarType> inputs;
    std::vector<ScalarType> outputs;
};

/// `int`, `bool`, `'a`; a product prints as `(int*bool)`.
std::string to_string(const ScalarType& t);
std::string to_string(const Signature& sig);

/// Infers a signature for every node; defined-node signatures are generalized
/// and instantiated freshly at each call site. Throws CompileError on
/// mismatches (spans point at the offending expression) and on recursive
/// node definitions.
std::map<std::string, Signature> type_check(const Program& program);

}  // namespace mps

#endif
