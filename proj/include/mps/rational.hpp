#ifndef MPS_RATIONAL_HPP
#define MPS_RATIONAL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace mps {

using Rational = boost::rational<std::int64_t>;

/// Renders `n` for integers and `n/d` otherwise.
std::string to_string(const Rational& r);

/// Parses `n` or `n/d` (optional leading '-'). Returns nullopt on malformed
/// text or a zero denominator.
std::optional<Rational> parse_rational(std::string_view text);

bool is_integer(const Rational& r);

/// gcd/lcm on non-negative integers; lcm throws std::overflow_error when the
/// result does not fit in int64.
std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);

/// Checked a*b for non-negative operands.
std::int64_t mul64(std::int64_t a, std::int64_t b);

/// Ceiling division for a >= 0, b > 0.
inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

/// Floor division for any a, b > 0.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && (a < 0)) --q;
    return q;
}

}  // namespace mps

#endif
