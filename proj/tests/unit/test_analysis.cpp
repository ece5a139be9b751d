#include <gtest/gtest.h>

#include <random>

#include "mps/analysis.hpp"
#include "mps/frontend.hpp"
#include "support/fixtures.hpp"

using namespace mps;

namespace {

FlatNode flatten(const std::string& src) { return inline_program(parse(src)); }

CompileError expect_reject(const std::string& src)
{
    try {
        FlatNode n = flatten(src);
        causality_check(n);
        clock_calculus(n);
    } catch (const CompileError& e) {
        return e;
    }
    ADD_FAILURE() << "accepted: " << src;
    return CompileError(ErrorKind::Syntax, {}, "");
}

}  // namespace

TEST(Inline, FlightControlFlattening)
{
    FlatNode n = flatten(fixtures::read_program("fcs.mps"));
    for (const char* t : {"PA", "AA", "FL", "PF", "PL", "NF", "NL"}) EXPECT_EQ(n.count_calls(t), 1u) << t;
    EXPECT_EQ(n.count(FlatOp::Over), 1u);
    EXPECT_EQ(n.count(FlatOp::Fby), 1u);
    EXPECT_EQ(n.count(FlatOp::Under), 3u);
    EXPECT_TRUE(n.find("navigation.pos_o").has_value());
}

TEST(Inline, RepeatedInstancesGetDistinctNames)
{
    FlatNode n = flatten("node inc(x) returns (y) let y = x + 1; tel\n"
                         "node M(a: rate(5,0)) returns (b) let b = inc(inc(a)); tel");
    EXPECT_TRUE(n.find("inc.y").has_value());
    EXPECT_TRUE(n.find("inc#2.y").has_value());
}

TEST(Causality, DirectCycle)
{
    CompileError e = expect_reject(fixtures::read_program("reject/causality.mps"));
    EXPECT_EQ(e.kind(), ErrorKind::Causality);
    EXPECT_STREQ(e.what(), "causality cycle: x");
}

TEST(Causality, CycleThroughRateTransition)
{
    auto cyc = find_causality_cycle(
        flatten("node M(i: rate(10,0)) returns (o) var a, b; let a = b; b = a /^ 2; o = a; tel"));
    ASSERT_TRUE(cyc.has_value());
    EXPECT_EQ(*cyc, (std::vector<std::string>{"a", "b"}));
}

TEST(Causality, DelayBreaksCycle)
{
    FlatNode n = flatten("node M(i: rate(10,0)) returns (o) var x; let x = 0 fby (x + i); o = x; tel");
    EXPECT_FALSE(find_causality_cycle(n).has_value());
}

TEST(Clocks, TransformAlgebra)
{
    PClock c{Rational(10), Rational(0)};
    EXPECT_EQ(to_string(apply_transform(c, ClockOp::each(3))), "(30,0)");
    EXPECT_EQ(to_string(apply_transform(c, ClockOp::times(2))), "(5,0)");
    EXPECT_EQ(to_string(apply_transform(c, ClockOp::phase(Rational(1, 2)))), "(10,1/2)");

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> k(1, 12), num(0, 5), den(1, 6);
    for (int trial = 0; trial < 500; ++trial) {
        PClock base{Rational(k(rng) * 12), Rational(num(rng), den(rng)) * 12};
        ClockOp ops[] = {ClockOp::each(k(rng)), ClockOp::times(k(rng)), ClockOp::phase(Rational(num(rng), den(rng)))};
        for (const auto& op : ops) {
            PClock fwd = apply_transform(base, op);
            EXPECT_EQ(invert_transform(fwd, op), base);
            EXPECT_GT(fwd.period, 0);
            EXPECT_GE(fwd.phase, 0);
        }
        // Each then Times by the same factor is the identity; Phase commutes with itself.
        int f = k(rng);
        EXPECT_EQ(apply_transform(apply_transform(base, ClockOp::each(f)), ClockOp::times(f)), base);
        Rational q1(num(rng), den(rng)), q2(num(rng), den(rng));
        EXPECT_EQ(apply_transform(apply_transform(base, ClockOp::phase(q1)), ClockOp::phase(q2)),
                  apply_transform(base, ClockOp::phase(q1 + q2)));
    }
}

TEST(Clocks, FlightControlSignature)
{
    FlatNode n = flatten(fixtures::read_program("fcs.mps"));
    ClockAssignment c = clock_calculus(n);
    EXPECT_EQ(to_string(clock_signature(n, c)), "((120,0)*(10,0)*(10,0)*(10,0))->(40,0)");
    EXPECT_EQ(to_string(c.of(*n.find("acc_r"))), "(120,0)");
}

TEST(Clocks, ClockMismatchIsReported)
{
    CompileError e = expect_reject(fixtures::read_program("reject/clock_mismatch.mps"));
    EXPECT_EQ(e.kind(), ErrorKind::Clock);
    EXPECT_EQ(e.span().line, 3);
}

TEST(Clocks, UnderconstrainedProgram)
{
    CompileError e = expect_reject("node M(i) returns (o) let o = i + 1; tel");
    EXPECT_EQ(e.kind(), ErrorKind::Clock);
    EXPECT_NE(std::string(e.what()).find("underconstrained"), std::string::npos);
}

TEST(Clocks, NegativePhaseRejected)
{
    CompileError e = expect_reject("node M(i: rate(10,0)) returns (o) var x; let x = i; o = x; tel\n"
                                   "node N(i) returns (o: rate(10,0)) let o = i ~> 1/2; tel\n"
                                   "node K(a: rate(10,0)) returns (b) let b = N(a); tel");
    EXPECT_EQ(e.kind(), ErrorKind::Clock);
}

TEST(Clocks, IndependentOfEquationOrder)
{
    const char* a = "node M(x: rate(12,0)) returns (y; z) var t; let t = x /^ 2; y = t *^ 3; z = t ~> 1/2; tel";
    const char* b = "node M(x: rate(12,0)) returns (y; z) var t; let z = t ~> 1/2; y = t *^ 3; t = x /^ 2; tel";
    FlatNode na = flatten(a), nb = flatten(b);
    auto ca = clock_calculus(na), cb = clock_calculus(nb);
    for (const char* v : {"x", "y", "z", "t"})
        EXPECT_EQ(ca.of(*na.find(v)), cb.of(*nb.find(v))) << v;
    EXPECT_EQ(to_string(ca.of(*na.find("z"))), "(24,1/2)");
    EXPECT_EQ(to_string(ca.of(*na.find("y"))), "(8,0)");
}
