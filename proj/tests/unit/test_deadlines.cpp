#include <gtest/gtest.h>

#include <random>

#include "mps/deadlines.hpp"
#include "mps/pipeline.hpp"
#include "support/fixtures.hpp"

using namespace mps;

namespace {

std::map<std::string, DWord> words_by_name(const TaskSet& ts)
{
    std::map<std::string, DWord> out;
    for (std::size_t i = 0; i < ts.graph.tasks.size(); ++i) out[ts.graph.tasks[i].name] = ts.words[i];
    return out;
}

Task make_task(std::string name, std::int64_t T, std::int64_t C, TaskKind kind = TaskKind::Computation)
{
    Task t;
    t.name = std::move(name);
    t.kind = kind;
    t.T = T;
    t.C = C;
    return t;
}

// Periods, execution times and precedences of the mode-switch unit example.
TaskGraph msu_graph()
{
    TaskGraph g;
    g.name = "MSU";
    for (auto [name, C] : std::vector<std::pair<const char*, int>>{{"fenv", 5}, {"bop", 40}, {"app", 20}, {"toEnv", 5},
                                                                  {"B", 10}, {"A", 30}, {"C", 20}, {"F", 30},
                                                                  {"E", 10}, {"D", 40}})
        g.tasks.push_back(make_task(name, 500, C));
    g.tasks[3].kind = TaskKind::Actuator;
    g.tasks[3].due = 100;
    auto link = [&](const char* a, const char* b) {
        Edge e;
        e.src = *g.find(a);
        e.dst = *g.find(b);
        g.edges.push_back(e);
    };
    link("fenv", "bop");
    link("bop", "app");
    link("app", "toEnv");
    link("bop", "B");
    link("B", "A");
    link("bop", "C");
    link("C", "F");
    link("F", "E");
    link("E", "D");
    return g;
}

OpsList random_ops(std::mt19937_64& rng, int depth)
{
    std::uniform_int_distribution<int> kind(0, 2), factor(1, 6), num(0, 3), den(1, 4);
    OpsList ops;
    for (int i = 0; i < depth; ++i) {
        switch (kind(rng)) {
        case 0: ops.push_back(PrecOp::under(factor(rng))); break;
        case 1: ops.push_back(PrecOp::over(factor(rng))); break;
        default: ops.push_back(PrecOp::offset(Rational(num(rng), den(rng)))); break;
        }
    }
    return ops;
}

}  // namespace

TEST(DWord, Indexing)
{
    EXPECT_EQ(dword_index(DWord{5, 10, 10, 10}, 4), 5);
    EXPECT_EQ(dword_index(DWord{6}, 1000), 6);
    EXPECT_EQ(dword_index(DWord{2, 4}, 3), 4);
}

TEST(DWord, Operations)
{
    EXPECT_EQ(dword_min(DWord{4}, DWord{2, 6}), (DWord{2, 4}));
    EXPECT_EQ(dword_add(DWord{0, 4}, DWord{6}), (DWord{6, 10}));
    EXPECT_EQ(dword_shift(DWord{3, 1}, 0), (DWord{3, 1}));
    EXPECT_EQ(dword_shift(DWord{3, 1}, -1), (DWord{2, 0}));
    EXPECT_EQ(canonicalize(DWord{1, 2, 1, 2, 1, 2}), (DWord{1, 2}));
    EXPECT_EQ(canonicalize(DWord{7, 7, 7}), (DWord{7}));
    EXPECT_EQ(canonicalize(DWord{1, 2, 1}), (DWord{1, 2, 1}));
    EXPECT_EQ(to_string(DWord{5, 10, 10, 10}), "(5.10.10.10)^w");
}

TEST(DWord, AlgebraLaws)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> len(1, 6), val(-5, 20);
    auto word = [&] {
        std::vector<std::int64_t> p(static_cast<std::size_t>(len(rng)));
        for (auto& x : p) x = val(rng);
        return canonicalize(DWord(p));
    };
    for (int i = 0; i < 300; ++i) {
        DWord a = word(), b = word(), c = word();
        EXPECT_EQ(dword_min(a, b), dword_min(b, a));
        EXPECT_EQ(dword_add(a, b), dword_add(b, a));
        EXPECT_EQ(dword_min(dword_min(a, b), c), dword_min(a, dword_min(b, c)));
        EXPECT_EQ(dword_add(dword_add(a, b), c), dword_add(a, dword_add(b, c)));
        EXPECT_EQ(dword_min(a, a), a);
        EXPECT_EQ(dword_shift(dword_shift(a, 3), -3), a);
        for (std::int64_t n = 0; n < 40; ++n) {
            EXPECT_EQ(dword_min(a, b)[n], std::min(a[n], b[n]));
            EXPECT_EQ(dword_add(a, b)[n], a[n] + b[n]);
        }
    }
}

TEST(InstanceMap, Examples)
{
    EXPECT_EQ(g_ops({}, 7), 7);
    EXPECT_EQ(g_ops({PrecOp::under(2)}, 1), 1);
    EXPECT_EQ(g_ops({PrecOp::delay(), PrecOp::over(3)}, 0), 3);
    EXPECT_EQ(pword({}), 1);
    EXPECT_EQ(pword({PrecOp::under(12)}), 12);
    EXPECT_EQ(pword({PrecOp::over(3)}), 1);
    EXPECT_EQ(qshift({PrecOp::over(3)}), 3);
}

TEST(Diffops, Examples)
{
    EXPECT_EQ(diffops_word({PrecOp::under(2)}, 4, 8), (DWord{0, 4}));
    EXPECT_EQ(diffops_word({}, 7, 7), (DWord{0}));
    EXPECT_EQ(diffops_word({PrecOp::under(4)}, 10, 40), (DWord{0, 30, 20, 10}));
}

TEST(Diffops, PeriodicAtPword)
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> depth(0, 3), base(1, 4);
    for (int trial = 0; trial < 1000; ++trial) {
        OpsList ops = random_ops(rng, depth(rng));
        // Choose T_i so that every intermediate period stays integral.
        std::int64_t Ti = base(rng);
        for (const auto& op : ops)
            if (op.kind == PrecOp::Kind::Over) Ti *= op.k;
        std::int64_t Tj = Ti;
        for (const auto& op : ops) {
            if (op.kind == PrecOp::Kind::Under) Tj *= op.k;
            if (op.kind == PrecOp::Kind::Over) Tj /= op.k;
        }
        std::int64_t p = pword(ops);
        for (std::int64_t n = 0; n < 3 * p; ++n) {
            std::int64_t a = g_ops(ops, n) * Tj - n * Ti;
            std::int64_t b = g_ops(ops, n + p) * Tj - (n + p) * Ti;
            ASSERT_EQ(a, b) << to_string(ops) << " n=" << n;
        }
        EXPECT_EQ(Tj % p, 0) << to_string(ops);
    }
}

TEST(ConstraintWord, Examples)
{
    OpsList u2{PrecOp::under(2)}, u4{PrecOp::under(4)}, none;
    DWord six{6}, nine{9}, d{11};
    EXPECT_EQ(constraint_word({u2, six, 4, 8, 4, 0, 0}), (DWord{2, 6}));
    EXPECT_EQ(constraint_word({u4, nine, 10, 40, 4, 0, 0}), (DWord{5, 35, 25, 15}));
    EXPECT_EQ(constraint_word({none, d, 10, 10, 3, 1, 2}), (DWord{11 - 3 + 2 - 1}));
}

TEST(ConstraintWord, MatchesBruteForceUnfolding)
{
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> depth(0, 3), wl(1, 5), val(0, 30);
    for (int trial = 0; trial < 300; ++trial) {
        OpsList ops = random_ops(rng, depth(rng));
        std::int64_t Ti = 12;
        for (const auto& op : ops)
            if (op.kind == PrecOp::Kind::Over) Ti *= op.k;
        std::int64_t Tj = Ti;
        for (const auto& op : ops) {
            if (op.kind == PrecOp::Kind::Under) Tj *= op.k;
            if (op.kind == PrecOp::Kind::Over) Tj /= op.k;
        }
        std::vector<std::int64_t> p(static_cast<std::size_t>(wl(rng)));
        for (auto& x : p) x = val(rng);
        DWord wj(p);
        DWord c = constraint_word({ops, wj, Ti, Tj, 2, 1, 3});
        for (std::int64_t n = 0; n < 200; ++n) {
            std::int64_t g = g_ops(ops, n);
            ASSERT_EQ(c[n], wj[g] + g * Tj - n * Ti - 2 + 3 - 1) << to_string(ops);
        }
    }
}

TEST(DeadlineCalculus, FlightControlWords)
{
    auto w = words_by_name(compile(fixtures::read_program("fcs.mps")).taskset);
    EXPECT_EQ(w["PA"], (DWord{10}));
    EXPECT_EQ(w["AA"], (DWord{5, 10, 10, 10}));
    EXPECT_EQ(w["FL"], (DWord{9, 10, 10, 10}));
    EXPECT_EQ(w["PF"], (DWord{9}));
    EXPECT_EQ(w["PL"], (DWord{15}));
    EXPECT_EQ(w["NL"], (DWord{120}));
    EXPECT_EQ(w["NF"], (DWord{100}));
}

TEST(DeadlineCalculus, TwoTaskExample)
{
    auto w = words_by_name(compile(fixtures::read_program("dw_usefull.mps")).taskset);
    EXPECT_EQ(w["A"], (DWord{2, 4}));
    EXPECT_EQ(w["B"], (DWord{6}));
}

TEST(DeadlineCalculus, SingleTaskWithDue)
{
    auto w = words_by_name(compile("node M(i: rate(10,0)) returns (o: due 7) let o = i; tel").taskset);
    EXPECT_EQ(w["o"], (DWord{7}));
    EXPECT_EQ(w["i"], (DWord{7}));
}

TEST(DeadlineCalculus, ModeSwitchStepTable)
{
    TaskGraph g = msu_graph();
    DeadlineResult r = compute_deadline_words(g, true);
    struct Row {
        std::vector<const char*> pending;
        const char* j;
        const char* i;
        std::int64_t cstr;
    };
    std::vector<Row> expected{
        {{"toEnv", "A", "D"}, "toEnv", "app", 95}, {{"app", "A", "D"}, "app", "bop", 75},
        {{"A", "D"}, "A", "B", 470},               {{"B", "D"}, "B", "bop", 460},
        {{"D"}, "D", "E", 460},                    {{"E"}, "E", "F", 450},
        {{"F"}, "F", "C", 420},                    {{"C"}, "C", "bop", 400},
        {{"bop"}, "bop", "fenv", 35},
    };
    ASSERT_EQ(r.steps.size(), expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) {
        const auto& s = r.steps[k];
        std::vector<std::string> pending;
        for (int t : s.pending) pending.push_back(g.tasks[static_cast<std::size_t>(t)].name);
        EXPECT_EQ(pending, std::vector<std::string>(expected[k].pending.begin(), expected[k].pending.end())) << k;
        EXPECT_EQ(g.tasks[static_cast<std::size_t>(s.successor)].name, expected[k].j) << k;
        EXPECT_EQ(g.tasks[static_cast<std::size_t>(s.predecessor)].name, expected[k].i) << k;
        EXPECT_EQ(s.constraint, DWord{expected[k].cstr}) << k;
    }
    EXPECT_EQ(r.words[static_cast<std::size_t>(*g.find("bop"))], DWord{75});
}

TEST(DeadlineCalculus, InfeasibleDeadlineNamesTask)
{
    try {
        compile("imported node F(i: int) returns (o: int) wcet 5;\n"
                "node M(i: rate(10,0)) returns (o: due 3) let o = F(i); tel");
        FAIL();
    } catch (const CompileError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Deadline);
        EXPECT_NE(std::string(e.what()).find("infeasible deadline: task "), std::string::npos);
    }
}

TEST(DynamicDeadline, Examples)
{
    Task aa = make_task("AA", 10, 1);
    EXPECT_EQ(dynamic_deadline(aa, DWord{5, 10, 10, 10}, 4), 45);
    Task t = make_task("T", 10, 1);
    EXPECT_EQ(dynamic_deadline(t, DWord{10}, 0), 10);
    Task b = make_task("B", 8, 4);
    EXPECT_EQ(dynamic_deadline(b, DWord{6}, 1), 14);
}

TEST(InstanceOracle, TwoTaskExample)
{
    TaskSet ts = compile(fixtures::read_program("dw_usefull.mps")).taskset;
    const TaskGraph& g = ts.graph;
    auto oracle = instance_graph_oracle(g, 2 * g.hyperperiod());
    int a = *g.find("A");
    const auto& da = oracle[static_cast<std::size_t>(a)];
    ASSERT_GE(da.size(), 4u);
    EXPECT_EQ(da[0], 2);
    EXPECT_EQ(da[1], 8);
    EXPECT_EQ(da[2], 10);
    EXPECT_EQ(da[3], 16);
}

TEST(InstanceOracle, NoEdges)
{
    TaskGraph g;
    g.tasks.push_back(make_task("X", 7, 1));
    g.tasks[0].r = 2;
    auto o = instance_graph_oracle(g, 30);
    EXPECT_EQ(o[0], (std::vector<std::int64_t>{9, 16, 23, 30}));
}

TEST(InstanceOracle, AgreesWithFlightControlWords)
{
    TaskSet ts = compile(fixtures::read_program("fcs.mps")).taskset;
    auto o = instance_graph_oracle(ts.graph, ts.hyperperiod());
    for (std::size_t t = 0; t < ts.graph.tasks.size(); ++t)
        for (std::size_t n = 0; n < o[t].size(); ++n)
            EXPECT_EQ(o[t][n], dynamic_deadline(ts.graph.tasks[t], ts.words[t], static_cast<std::int64_t>(n)))
                << ts.graph.tasks[t].name << "[" << n << "]";
}
