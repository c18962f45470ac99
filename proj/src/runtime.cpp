#include "lambdap/runtime.hpp"

#include <pthread.h>

#include <algorithm>
#include <exception>
#include <memory>
#include <vector>

#include "lambdap/error.hpp"

namespace lambdap {

namespace {

constexpr std::size_t kMainStackBytes = std::size_t{1} << 30;
constexpr std::size_t kWorkerStackBytes = std::size_t{256} << 20;

// A joinable pthread with a chosen stack size. std::thread cannot set one.
class StackThread {
public:
    StackThread(std::size_t stackBytes, std::function<void()> fn) : fn_(std::make_unique<std::function<void()>>(std::move(fn))) {
        pthread_attr_t attr;
        pthread_attr_init(&attr);
        pthread_attr_setstacksize(&attr, stackBytes);
        started_ = pthread_create(&thread_, &attr, &StackThread::trampoline, fn_.get()) == 0;
        pthread_attr_destroy(&attr);
    }

    StackThread(const StackThread&) = delete;
    StackThread& operator=(const StackThread&) = delete;

    ~StackThread() { join(); }

    bool started() const { return started_; }

    void join() {
        if (started_) {
            pthread_join(thread_, nullptr);
            started_ = false;
        }
    }

private:
    static void* trampoline(void* arg) {
        (*static_cast<std::function<void()>*>(arg))();
        return nullptr;
    }

    std::unique_ptr<std::function<void()>> fn_;
    pthread_t thread_{};
    bool started_ = false;
};

} // namespace

void runWithLargeStack(const std::function<void()>& fn) {
    std::exception_ptr error;
    StackThread t(kMainStackBytes, [&] {
        try {
            fn();
        } catch (...) {
            error = std::current_exception();
        }
    });
    if (!t.started()) {
        fn();
        return;
    }
    t.join();
    if (error) std::rethrow_exception(error);
}

Runtime::Runtime(RunConfig cfg) : cfg_(cfg), idleWorkers_(std::max(cfg.workers, 1) - 1) {}

void Runtime::parallelFor(std::size_t n, const std::function<void(std::size_t)>& fn) {
    int helpers = 0;
    if (cfg_.mode == Mode::Parallel && n > 1) {
        int want = static_cast<int>(std::min<std::size_t>(n - 1, static_cast<std::size_t>(cfg_.workers)));
        int idle = idleWorkers_.load();
        while (idle > 0) {
            int take = std::min(idle, want);
            if (idleWorkers_.compare_exchange_weak(idle, idle - take)) {
                helpers = take;
                break;
            }
        }
    }
    if (helpers == 0) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::size_t grain = std::clamp<std::size_t>(n / (static_cast<std::size_t>(helpers + 1) * 16), 1, 1024);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            std::size_t start = next.fetch_add(grain);
            if (start >= n) break;
            std::size_t end = std::min(n, start + grain);
            for (std::size_t i = start; i < end; ++i) fn(i);
        }
    };
    {
        std::vector<std::unique_ptr<StackThread>> threads;
        threads.reserve(static_cast<std::size_t>(helpers));
        for (int t = 0; t < helpers; ++t) {
            auto thread = std::make_unique<StackThread>(kWorkerStackBytes, work);
            if (thread->started()) threads.push_back(std::move(thread));
        }
        work();
        for (auto& t : threads) t->join();
    }
    idleWorkers_.fetch_add(helpers);
}

Value Runtime::drive(Step step, TraceLog* trace) {
    EvalContext ctx{trace, 0};
    for (;;) {
        if (step.isDone()) {
            return std::move(step.value());
        }
        Suspension& s = step.suspension();
        if (const auto* op = std::get_if<OpRequest>(&s.request)) {
            throw EvalError("unhandled operation " + op->opName);
        }
        // (parallel): no handle frame is left around this loop
        const LoopRequest& loop = std::get<LoopRequest>(s.request);
        traceEvent(ctx, Rule::Parallel, [&] { return "n=" + std::to_string(loop.size); });
        auto n = static_cast<std::size_t>(loop.size);
        std::vector<Value> results(n);
        std::vector<std::exception_ptr> errors(n);
        std::vector<TraceLog> logs(trace ? n : 0);
        parallelFor(n, [&](std::size_t i) {
            TraceLog* log = trace ? &logs[i] : nullptr;
            try {
                results[i] = drive(applyLoopBody(loop.body, static_cast<std::int64_t>(i), {log, 0}), log);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        });
        if (trace) {
            TraceLog merged = mergeTraces(std::move(logs));
            trace->insert(trace->end(), std::make_move_iterator(merged.begin()), std::make_move_iterator(merged.end()));
        }
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
        ResumeChain chain = std::move(s.chain);
        step = chain.resume(Value::table(std::move(results)), ctx);
    }
}

Value runProgram(const ExprPtr& program, const RunConfig& cfg, TraceLog& trace) {
    Runtime rt(cfg);
    Value result;
    runWithLargeStack([&] {
        TraceLog* log = cfg.trace ? &trace : nullptr;
        result = rt.drive(eval(Env{}, program, {log, 0}), log);
    });
    return result;
}

RunResult runProgram(const ExprPtr& program, const RunConfig& cfg) {
    RunResult out;
    out.value = runProgram(program, cfg, out.trace);
    return out;
}

} // namespace lambdap
