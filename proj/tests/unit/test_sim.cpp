#include <gtest/gtest.h>

#include "mps/pipeline.hpp"
#include "mps/properties.hpp"
#include "mps/sim.hpp"
#include "support/fixtures.hpp"
#include "support/random_program.hpp"

using namespace mps;

namespace {

int task_id(const TaskSet& ts, const std::string& name) { return *ts.graph.find(name); }

using Slices = std::vector<std::pair<std::int64_t, std::int64_t>>;

}  // namespace

TEST(Sim, TwoTaskScheduleUnderDeadlineWords)
{
    TaskSet ts = compile(fixtures::read_program("dw_usefull.mps")).taskset;
    SimTrace tr = simulate(ts, {16, Policy::EdfDword});
    EXPECT_EQ(tr.miss_count(), 0u);
    int a = task_id(ts, "A"), b = task_id(ts, "B");
    EXPECT_EQ(tr.job(a, 0)->slices, (Slices{{0, 2}}));
    EXPECT_EQ(tr.job(a, 1)->slices, (Slices{{6, 8}}));
    EXPECT_EQ(tr.job(b, 0)->slices, (Slices{{2, 6}}));
    EXPECT_EQ(tr.job(b, 0)->completion, 6);
    EXPECT_EQ(tr.job(a, 2)->slices, (Slices{{8, 10}}));
}

TEST(Sim, TwoTaskUniformDeadlineMisses)
{
    TaskSet ts = compile(fixtures::read_program("dw_usefull.mps")).taskset;
    SimTrace tr = simulate(ts, {16, Policy::EdfUniform});
    EXPECT_GE(tr.miss_count(), 1u);
    bool miss_at_six = false;
    for (const auto& e : tr.events)
        if (e.kind == EventKind::DeadlineMiss && e.deadline == 6) miss_at_six = true;
    EXPECT_TRUE(miss_at_six);
    EXPECT_TRUE(feasibility_scan(ts));
}

TEST(Sim, SingleTask)
{
    TaskSet ts = compile("imported node F(i: int) returns (o: int) wcet 1;\n"
                         "node M(i: rate(10,0)) returns (o) let o = F(i); tel")
                     .taskset;
    SimTrace tr = simulate(ts, {30, Policy::EdfDword});
    int f = task_id(ts, "F");
    for (int n = 0; n < 3; ++n) {
        ASSERT_NE(tr.job(f, n), nullptr);
        EXPECT_EQ(tr.job(f, n)->completion, 10 * n + 1);
    }
    EXPECT_EQ(tr.job(f, 3), nullptr);
    EXPECT_EQ(tr.miss_count(), 0u);
}

TEST(Sim, ReleasesAndExecutionTime)
{
    Compilation c = compile(fixtures::read_program("fcs.mps"));
    const TaskSet& ts = c.taskset;
    SimTrace tr = simulate(ts, {default_horizon(ts), Policy::EdfDword});
    EXPECT_EQ(tr.horizon, 240);
    for (const Job& j : tr.jobs) {
        const Task& t = ts.task(j.task);
        EXPECT_EQ(j.release, t.release(j.n));
        std::int64_t run = 0;
        for (auto [a, b] : j.slices) run += b - a;
        if (j.completion >= 0) EXPECT_EQ(run, t.C) << t.name << "[" << j.n << "]";
    }
    EXPECT_EQ(edf_violations(ts, tr), 0u);
    EXPECT_EQ(precedence_violations(ts, tr), 0u);
}

TEST(Sim, FlightControlPreservesSemantics)
{
    Compilation c = compile(fixtures::read_program("fcs.mps"));
    SemanticRun r = semantic_run(c);
    EXPECT_EQ(r.misses, 0u);
    EXPECT_TRUE(r.mismatches.empty()) << r.mismatches.front().expected << " vs " << r.mismatches.front().got;
}

TEST(Sim, FaultInjectionIsDetected)
{
    Compilation c = compile(fixtures::read_program("fcs.mps"));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto trial = inject_write_mask_fault(c, seed);
        ASSERT_TRUE(trial.has_value());
        EXPECT_EQ(trial->run.misses, 0u);
        EXPECT_FALSE(trial->run.mismatches.empty()) << trial->buffer << " bit " << trial->bit;
    }
}

TEST(Sim, PassThroughHasNoMismatches)
{
    Compilation c = compile("node M(i: rate(5,0)) returns (o) let o = i; tel");
    EXPECT_TRUE(semantic_run(c).mismatches.empty());
}

TEST(Sim, Utilization)
{
    // 1/10 + 1/10 + 3/10 + 4/40 + 6/40 + 20/120 + 5/120
    EXPECT_EQ(utilization(compile(fixtures::read_program("fcs.mps")).taskset), Rational(23, 24));
    EXPECT_EQ(utilization(TaskSet{}), Rational(0));
}

TEST(Sim, Deterministic)
{
    Compilation c = compile(fixtures::read_program("fcs.mps"));
    SymPool p1, p2;
    auto t1 = simulate(c.taskset, {240, Policy::EdfDword}, &p1);
    auto t2 = simulate(c.taskset, {240, Policy::EdfDword}, &p2);
    EXPECT_EQ(to_jsonl(c.taskset, t1, &p1), to_jsonl(c.taskset, t2, &p2));
}

TEST(Sim, OverloadTruncatesAndMisses)
{
    TaskSet ts = compile("imported node F(i: int) returns (o: int) wcet 3;\n"
                         "node M(i: rate(4,0)) returns (o) let o = F(i); tel")
                     .taskset;
    ts.graph.tasks[static_cast<std::size_t>(task_id(ts, "F"))].C = 5;
    SimTrace tr = simulate(ts, {12, Policy::EdfDword});
    EXPECT_GE(tr.miss_count(), 1u);
    EXPECT_EQ(tr.events.back().kind == EventKind::Truncated || tr.miss_count() > 0, true);
    bool truncated = false;
    for (const auto& e : tr.events) truncated |= e.kind == EventKind::Truncated;
    EXPECT_TRUE(truncated);
    EXPECT_FALSE(feasibility_scan(ts));
}

TEST(Sim, GanttAndTrace)
{
    TaskSet ts = compile(fixtures::read_program("dw_usefull.mps")).taskset;
    SimTrace tr = simulate(ts, {8, Policy::EdfDword});
    std::string g = gantt(ts, tr);
    EXPECT_NE(g.find("A |##  ..##|"), std::string::npos) << g;
    EXPECT_NE(g.find("B |..####  |"), std::string::npos) << g;
    std::string j = to_jsonl(ts, tr, nullptr);
    EXPECT_EQ(j.substr(0, j.find('\n')), R"({"t":0,"ev":"release","task":"i","n":0,"deadline":0})");
}

TEST(Sim, RandomProgramsKeepProperties)
{
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto p = fixtures::random_program(seed);
        Compilation c = compile(p.source);
        for (const auto& r : check_properties(c, seed)) {
            if (r.name == "schedulable") continue;
            EXPECT_TRUE(r.ok) << "seed " << seed << " " << r.name << ": " << r.detail << "\n" << p.source;
        }
    }
}

TEST(Sim, EmptyTaskSetIsSchedulable)
{
    TaskSet empty;
    EXPECT_EQ(utilization(empty), Rational(0));
    EXPECT_TRUE(feasibility_scan(empty));
}
