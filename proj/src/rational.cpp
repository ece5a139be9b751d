#include "mps/rational.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace mps {

std::string to_string(const Rational& r)
{
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::optional<std::int64_t> parse_int(std::string_view s)
{
    std::int64_t v = 0;
    if (s.empty()) return std::nullopt;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text)
{
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        auto n = parse_int(text);
        if (!n) return std::nullopt;
        return Rational(*n);
    }
    auto n = parse_int(text.substr(0, slash));
    auto d = parse_int(text.substr(slash + 1));
    if (!n || !d || *d == 0) return std::nullopt;
    return Rational(*n, *d);
}

bool is_integer(const Rational& r) { return r.denominator() == 1; }

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t mul64(std::int64_t a, std::int64_t b)
{
    std::int64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("integer overflow");
    return out;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b)
{
    if (a == 0 || b == 0) return 0;
    return mul64(a / std::gcd(a, b), b);
}

}  // namespace mps
