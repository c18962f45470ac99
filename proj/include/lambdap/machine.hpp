#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "lambdap/syntax.hpp"
#include "lambdap/trace.hpp"
#include "lambdap/value.hpp"

namespace lambdap {

// The machine image of E[perform op v].
struct OpRequest {
    std::string opName;
    Value arg;
};

// The machine image of F[for x:n. e]; body maps an index to the iteration.
struct LoopRequest {
    std::int64_t size = 0;
    Value body;
};

using Request = std::variant<OpRequest, LoopRequest>;

class Frame;
using FramePtr = std::shared_ptr<const Frame>;

class Step;
struct EvalContext;

// The evaluation context captured between a request and the point that
// currently holds it, innermost frame first. Immutable: resuming never
// consumes or changes it, so the same chain can be resumed many times and
// from several threads at once.
class ResumeChain {
public:
    ResumeChain() = default;

    bool empty() const { return !head_; }
    std::size_t size() const { return head_ ? head_->size : 0; }

    // The chain seen from one frame further out.
    ResumeChain wrap(FramePtr outer) const;

    // Plugs `v` into the hole and runs every frame, innermost first.
    Step resume(Value v, EvalContext ctx) const;

private:
    struct Node {
        FramePtr frame;  // outermost frame of this chain
        std::shared_ptr<const Node> inner;
        std::size_t size;
    };
    static Step resumeFrom(const Node* node, Value v, EvalContext ctx);

    std::shared_ptr<const Node> head_;
};

struct Suspension {
    Request request;
    ResumeChain chain;
};

// Result of evaluating a computation: a value, or a request paired with
// the chain that resumes the computation once the request is answered.
class Step {
public:
    static Step done(Value v) { return Step(std::move(v)); }
    static Step suspended(Request r, ResumeChain k) { return Step(Suspension{std::move(r), std::move(k)}); }

    bool isDone() const { return std::holds_alternative<Value>(state_); }
    const Value& value() const { return std::get<Value>(state_); }
    Value& value() { return std::get<Value>(state_); }
    const Suspension& suspension() const { return std::get<Suspension>(state_); }
    Suspension& suspension() { return std::get<Suspension>(state_); }

private:
    explicit Step(Value v) : state_(std::move(v)) {}
    explicit Step(Suspension s) : state_(std::move(s)) {}
    std::variant<Value, Suspension> state_;
};

// A frame of a resume chain. Pure frames continue evaluation with the value
// plugged into them; handler frames re-install a handle with its state.
class Frame : public std::enable_shared_from_this<Frame> {
public:
    virtual ~Frame() = default;
    virtual bool isHandler() const { return false; }

    // Runs this frame around the inner computation's step.
    virtual Step run(Step inner, EvalContext ctx) const;

protected:
    // Called by the default run() once the inner computation is a value.
    virtual Step resumeWith(Value v, EvalContext ctx) const = 0;
};

// Evaluated clauses of a handler expression.
struct HandlerValue {
    std::string opName;
    Value returnFn;
    Value opFn;
    Value traverseFn;
};

using HandlerPtr = std::shared_ptr<const HandlerValue>;

// Function values produced by handler dispatch.
struct Resumption {
    enum class Kind {
        OpResumption,     // k of rule (perform): state, then result
        LoopResumption,   // k of rule (traverse): state, then result table
        LoopBody,         // l of rule (traverse): takes the state table
        HandledIteration, // one iteration of l's loop: takes the index
    };

    Kind kind = Kind::OpResumption;
    HandlerPtr handler;
    ResumeChain chain;           // OpResumption, LoopResumption
    std::optional<Value> state;  // OpResumption/LoopResumption after their first argument
    std::int64_t size = 0;       // LoopBody
    Value body;                  // LoopBody, HandledIteration: the original loop body
    Value states;                // HandledIteration: the state table
};

struct EvalContext {
    TraceLog* trace = nullptr;  // null when tracing is off
    int depth = 0;              // handle frames around the current redex

    EvalContext inner() const { return {trace, depth + 1}; }
};

// Records an event when tracing is on; the detail is only built then.
template <typename Detail>
void traceEvent(EvalContext ctx, Rule rule, Detail&& detail) {
    if (ctx.trace) {
        ctx.trace->push_back(TraceEvent{rule, ctx.depth, {}, std::string(detail())});
    }
}

/// Big-step evaluation of `e` under `env` (call-by-value, function before
/// argument) to a value or to the first request that escapes it.
Step eval(const Env& env, const ExprPtr& e, EvalContext ctx);

/// Handles the step of a handle body: rule (return) for values, rule
/// (perform) for this handler's operation, forwarding for other operations
/// and rule (traverse) for every loop request.
Step dispatchHandle(const HandlerPtr& h, Value state, Step body, EvalContext ctx);

/// Applies a function value: closures, tables (indexing), builtins and
/// resumptions.
Step applyValue(const Value& f, const Value& arg, EvalContext ctx);

/// Curried application f a1 ... an.
Step applyAll(const Value& f, std::span<const Value> args, EvalContext ctx);

/// Instantiates a loop body at index i. Same as applyValue except a closure
/// body does not record an (app) event: substituting the index is part of
/// the loop rule.
Step applyLoopBody(const Value& body, std::int64_t i, EvalContext ctx);

/// Continues `step` with `frame` wrapped around it.
Step bindFrame(Step step, const FramePtr& frame, EvalContext ctx);

} // namespace lambdap
