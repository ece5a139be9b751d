#include <algorithm>
#include <numeric>
#include <sstream>

#include "mps/deadlines.hpp"

namespace mps {

std::int64_t DWord::operator[](std::int64_t n) const { return dword_index(*this, n); }

std::int64_t DWord::min() const { return *std::min_element(pattern.begin(), pattern.end()); }

std::string to_string(const DWord& w)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < w.pattern.size(); ++i) os << (i ? "." : "") << w.pattern[i];
    os << ")^w";
    return os.str();
}

std::int64_t dword_index(const DWord& w, std::int64_t n)
{
    auto size = static_cast<std::int64_t>(w.pattern.size());
    std::int64_t i = n % size;
    if (i < 0) i += size;
    return w.pattern[static_cast<std::size_t>(i)];
}

DWord canonicalize(const DWord& w)
{
    const auto& p = w.pattern;
    const std::size_t n = p.size();
    // Knuth-Morris-Pratt failure function: n - fail[n-1] is the smallest period.
    std::vector<std::size_t> fail(n, 0);
    for (std::size_t i = 1, k = 0; i < n; ++i) {
        while (k > 0 && p[i] != p[k]) k = fail[k - 1];
        if (p[i] == p[k]) ++k;
        fail[i] = k;
    }
    std::size_t period = n - fail[n - 1];
    if (n % period != 0) return w;
    return DWord(std::vector<std::int64_t>(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(period)));
}

namespace {

template <typename Op>
DWord pointwise(const DWord& a, const DWord& b, Op op)
{
    std::int64_t len = lcm64(static_cast<std::int64_t>(a.size()), static_cast<std::int64_t>(b.size()));
    std::vector<std::int64_t> out(static_cast<std::size_t>(len));
    for (std::int64_t n = 0; n < len; ++n) out[static_cast<std::size_t>(n)] = op(a[n], b[n]);
    return canonicalize(DWord(std::move(out)));
}

}  // namespace

DWord dword_min(const DWord& a, const DWord& b)
{
    return pointwise(a, b, [](std::int64_t x, std::int64_t y) { return std::min(x, y); });
}

DWord dword_add(const DWord& a, const DWord& b)
{
    return pointwise(a, b, [](std::int64_t x, std::int64_t y) { return x + y; });
}

DWord dword_shift(const DWord& w, std::int64_t k)
{
    DWord out = w;
    for (auto& x : out.pattern) x += k;
    return out;
}

std::int64_t g_ops(const OpsList& ops, std::int64_t n)
{
    for (const auto& op : ops) {
        switch (op.kind) {
        case PrecOp::Kind::Over: n *= op.k; break;
        case PrecOp::Kind::Under: n = ceil_div(n, op.k); break;
        case PrecOp::Kind::Offset: break;
        case PrecOp::Kind::Delay: n += 1; break;
        }
    }
    return n;
}

std::int64_t pword(const OpsList& ops)
{
    std::int64_t p = 1;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        if (it->kind == PrecOp::Kind::Over) p /= gcd64(p, it->k);
        if (it->kind == PrecOp::Kind::Under) p = mul64(p, it->k);
    }
    return p;
}

std::int64_t qshift(const OpsList& ops) { return g_ops(ops, pword(ops)) - g_ops(ops, 0); }

DWord diffops_word(const OpsList& ops, std::int64_t Ti, std::int64_t Tj)
{
    std::int64_t p = pword(ops);
    std::vector<std::int64_t> w(static_cast<std::size_t>(p));
    for (std::int64_t n = 0; n < p; ++n) w[static_cast<std::size_t>(n)] = g_ops(ops, n) * Tj - n * Ti;
    return DWord(std::move(w));
}

DWord constraint_word(const ConstraintInput& in)
{
    const auto wlen = static_cast<std::int64_t>(in.wj.size());
    std::int64_t p = pword(in.ops);
    std::int64_t len = mul64(p, wlen / gcd64(qshift(in.ops), wlen));
    std::int64_t base = in.rj - in.ri - in.Cj;
    std::vector<std::int64_t> out(static_cast<std::size_t>(len));
    for (std::int64_t n = 0; n < len; ++n) {
        std::int64_t g = g_ops(in.ops, n);
        out[static_cast<std::size_t>(n)] = in.wj[g] + g * in.Tj - n * in.Ti + base;
    }
    return canonicalize(DWord(std::move(out)));
}

std::int64_t dynamic_deadline(const Task& t, const DWord& w, std::int64_t n) { return t.release(n) + w[n]; }

}  // namespace mps
