#ifndef MPS_SIM_HPP
#define MPS_SIM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mps/interp.hpp"
#include "mps/taskset.hpp"

namespace mps {

enum class Policy {
    EdfDword,    // absolute deadline r + nT + w[n]
    EdfUniform,  // every instance uses min(w) as its relative deadline
};
const char* to_string(Policy p);

struct SimConfig {
    std::int64_t horizon = 1;
    Policy policy = Policy::EdfDword;
};

enum class EventKind { Release, Start, Preempt, Resume, Complete, BufferWrite, BufferRead, DeadlineMiss, Truncated };
const char* to_string(EventKind k);

struct SimEvent {
    std::int64_t t = 0;
    EventKind kind = EventKind::Release;
    int task = 0;
    std::int64_t n = 0;
    std::int64_t deadline = -1;  // Release
    int buffer = -1;             // BufferWrite / BufferRead
    int cell = -1;
    SymId value = undefined_sym;
};

struct Job {
    int task = 0;
    std::int64_t n = 0;
    std::int64_t release = 0;
    std::int64_t deadline = 0;
    std::int64_t remaining = 0;
    std::int64_t start = -1;
    std::int64_t completion = -1;  // -1 while unfinished at the horizon
    bool missed = false;
    std::vector<std::pair<std::int64_t, std::int64_t>> slices;  // [from, to) execution intervals
};

struct SimTrace {
    std::int64_t horizon = 0;
    Policy policy = Policy::EdfDword;
    std::vector<SimEvent> events;
    std::vector<Job> jobs;

    std::size_t miss_count() const;
    /// Job of task `task`, instance n, if released within the horizon.
    const Job* job(int task, std::int64_t n) const;
};

/// Discrete-time preemptive EDF on one processor over [0, horizon). Ties on
/// the absolute deadline go to the task that comes first in the task set,
/// then to the older instance. Zero-length jobs start and finish when
/// dispatched. Inputs are read when a job starts and outputs are written
/// when it completes; with a pool, symbolic values flow through the buffers.
SimTrace simulate(const TaskSet& ts, const SimConfig& cfg, SymPool* pool = nullptr);

/// max r + 2H
std::int64_t default_horizon(const TaskSet& ts);

struct Mismatch {
    int task = 0;
    std::int64_t n = 0;
    int port = 0;
    std::string expected;
    std::string got;
};

/// Compares every value read in the trace against the reference
/// interpreter. The trace must come from simulate() with the same pool,
/// and the task set must have been compiled from `node`.
std::vector<Mismatch> check_semantics(const TaskSet& ts, const SimTrace& trace, const FlatNode& node, SymPool& pool);

Rational utilization(const TaskSet& ts);

/// Simulates [0, max r + 2H) under deadline words; true when no job misses.
bool feasibility_scan(const TaskSet& ts);

/// One row per task, one column per tick: '#' running, '.' ready,
/// '!' overdue, ' ' no pending job.
std::string gantt(const TaskSet& ts, const SimTrace& trace);

/// One JSON object per event.
std::string to_jsonl(const TaskSet& ts, const SimTrace& trace, const SymPool* pool);

}  // namespace mps

#endif
