#pragma once

#include <atomic>
#include <cstddef>
#include <functional>

#include "lambdap/machine.hpp"
#include "lambdap/syntax.hpp"
#include "lambdap/trace.hpp"

namespace lambdap {

enum class Mode {
    Parallel,    // iterations of a handler-free loop may run on concurrent workers
    Sequential,  // every iteration runs on the calling thread in index order
};

struct RunConfig {
    int workers = 1;  // >= 1; the budget is shared by all nested loops
    bool trace = false;
    Mode mode = Mode::Parallel;
};

struct RunResult {
    Value value;
    TraceLog trace;
};

// Drives evaluation to a value. Loop requests that reach the top (no handle
// frame left around them) run their iterations independently and resume
// with the table of results; an operation request that reaches the top is
// an "unhandled operation" error.
class Runtime {
public:
    explicit Runtime(RunConfig cfg);

    Value drive(Step step, TraceLog* trace);

    // Calls fn(i) for every i in [0, n), possibly concurrently; returns once
    // all calls have finished. fn must not throw.
    void parallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

    const RunConfig& config() const { return cfg_; }

private:
    RunConfig cfg_;
    std::atomic<int> idleWorkers_;
};

/// Evaluates a closed program. Trace events are appended to `trace` when
/// cfg.trace is set, including those recorded before a failure. Throws
/// EvalError; when several iterations of a loop fail, the error of the
/// lowest index is the one reported.
Value runProgram(const ExprPtr& program, const RunConfig& cfg, TraceLog& trace);

RunResult runProgram(const ExprPtr& program, const RunConfig& cfg);

// Runs fn on a thread with a large stack and waits for it, rethrowing any
// exception it raised. Deeply nested evaluation recurses on the C++ stack.
void runWithLargeStack(const std::function<void()>& fn);

} // namespace lambdap
