#include "lambdap/machine.hpp"

#include <array>

#include "lambdap/builtins.hpp"
#include "lambdap/error.hpp"

namespace lambdap {

ResumeChain ResumeChain::wrap(FramePtr outer) const {
    ResumeChain out;
    out.head_ = std::make_shared<const Node>(Node{std::move(outer), head_, size() + 1});
    return out;
}

Step ResumeChain::resume(Value v, EvalContext ctx) const {
    return resumeFrom(head_.get(), std::move(v), ctx);
}

Step ResumeChain::resumeFrom(const Node* node, Value v, EvalContext ctx) {
    if (!node) {
        return Step::done(std::move(v));
    }
    EvalContext innerCtx = node->frame->isHandler() ? ctx.inner() : ctx;
    Step inner = resumeFrom(node->inner.get(), std::move(v), innerCtx);
    return node->frame->run(std::move(inner), ctx);
}

Step Frame::run(Step inner, EvalContext ctx) const {
    if (inner.isDone()) {
        return resumeWith(std::move(inner.value()), ctx);
    }
    Suspension& s = inner.suspension();
    s.chain = s.chain.wrap(shared_from_this());
    return inner;
}

Step bindFrame(Step step, const FramePtr& frame, EvalContext ctx) {
    return frame->run(std::move(step), ctx);
}

namespace {

Step suspendWith(Step step, FramePtr frame) {
    Suspension& s = step.suspension();
    s.chain = s.chain.wrap(std::move(frame));
    return step;
}

Step makeLoop(const Env& env, const ExprPtr& forExpr, const Value& size) {
    const auto& node = std::get<expr::For>(forExpr->node);
    if (!size.isInt() || size.asInt() < 0) {
        throw EvalError("for size not a non-negative integer (got " + printValue(size) + ")");
    }
    auto body = std::make_shared<const Closure>(Closure{forExpr, node.indexVar, node.body, env});
    return Step::suspended(LoopRequest{size.asInt(), Value::closure(std::move(body))}, {});
}

// f e: the function is a value, the argument is still to be evaluated.
class AppArgFrame final : public Frame {
public:
    AppArgFrame(Env env, ExprPtr arg) : env_(std::move(env)), arg_(std::move(arg)) {}

protected:
    Step resumeWith(Value fn, EvalContext ctx) const override;

private:
    Env env_;
    ExprPtr arg_;
};

// f v: waiting for the argument's value.
class ApplyFrame final : public Frame {
public:
    explicit ApplyFrame(Value fn) : fn_(std::move(fn)) {}

protected:
    Step resumeWith(Value arg, EvalContext ctx) const override { return applyValue(fn_, arg, ctx); }

private:
    Value fn_;
};

// f a1 ... an: waiting for f, the remaining arguments are already values.
class ApplyArgsFrame final : public Frame {
public:
    explicit ApplyArgsFrame(std::vector<Value> args) : args_(std::move(args)) {}

protected:
    Step resumeWith(Value fn, EvalContext ctx) const override { return applyAll(fn, args_, ctx); }

private:
    std::vector<Value> args_;
};

class ForSizeFrame final : public Frame {
public:
    ForSizeFrame(Env env, ExprPtr forExpr) : env_(std::move(env)), forExpr_(std::move(forExpr)) {}

protected:
    Step resumeWith(Value size, EvalContext) const override { return makeLoop(env_, forExpr_, size); }

private:
    Env env_;
    ExprPtr forExpr_;
};

class PerformFrame final : public Frame {
public:
    explicit PerformFrame(std::string op) : op_(std::move(op)) {}

protected:
    Step resumeWith(Value arg, EvalContext) const override {
        return Step::suspended(OpRequest{op_, std::move(arg)}, {});
    }

private:
    std::string op_;
};

Step continueList(const Env& env, const ExprPtr& e, std::vector<Value> values, EvalContext ctx);

// Tables, tuples and handle setup evaluate a list of subexpressions left to
// right; this frame holds the prefix that is already done.
class ListFrame final : public Frame {
public:
    ListFrame(Env env, ExprPtr e, std::vector<Value> done) : env_(std::move(env)), e_(std::move(e)), done_(std::move(done)) {}

protected:
    Step resumeWith(Value v, EvalContext ctx) const override {
        std::vector<Value> values = done_;
        values.push_back(std::move(v));
        return continueList(env_, e_, std::move(values), ctx);
    }

private:
    Env env_;
    ExprPtr e_;
    std::vector<Value> done_;
};

Step evalIf(const Env& env, const expr::If& node, const Value& cond, EvalContext ctx) {
    if (!cond.isBool()) {
        throw EvalError("if condition is not a boolean (got " + std::string(cond.kindName()) + ")");
    }
    return eval(env, cond.asBool() ? node.thenBranch : node.elseBranch, ctx);
}

Step evalCase(const Env& env, const expr::CaseEither& node, const Value& scrutinee, EvalContext ctx) {
    if (!scrutinee.isEither()) {
        throw EvalError("case scrutinee is not Left or Right (got " + std::string(scrutinee.kindName()) + ")");
    }
    const Either& e = scrutinee.asEither();
    return eval(env.extend(e.payload), e.isRight ? node.rightBody : node.leftBody, ctx);
}

class IfFrame final : public Frame {
public:
    IfFrame(Env env, ExprPtr e) : env_(std::move(env)), e_(std::move(e)) {}

protected:
    Step resumeWith(Value cond, EvalContext ctx) const override {
        return evalIf(env_, std::get<expr::If>(e_->node), cond, ctx);
    }

private:
    Env env_;
    ExprPtr e_;
};

class CaseFrame final : public Frame {
public:
    CaseFrame(Env env, ExprPtr e) : env_(std::move(env)), e_(std::move(e)) {}

protected:
    Step resumeWith(Value v, EvalContext ctx) const override {
        return evalCase(env_, std::get<expr::CaseEither>(e_->node), v, ctx);
    }

private:
    Env env_;
    ExprPtr e_;
};

// handle h s []: re-installed around a forwarded request.
class HandlerFrame final : public Frame {
public:
    HandlerFrame(HandlerPtr h, Value state) : h_(std::move(h)), state_(std::move(state)) {}

    bool isHandler() const override { return true; }
    Step run(Step inner, EvalContext ctx) const override { return dispatchHandle(h_, state_, std::move(inner), ctx); }

protected:
    Step resumeWith(Value v, EvalContext ctx) const override { return dispatchHandle(h_, state_, Step::done(std::move(v)), ctx); }

private:
    HandlerPtr h_;
    Value state_;
};

Step AppArgFrame::resumeWith(Value fn, EvalContext ctx) const {
    Step arg = eval(env_, arg_, ctx);
    if (!arg.isDone()) {
        return suspendWith(std::move(arg), std::make_shared<ApplyFrame>(std::move(fn)));
    }
    return applyValue(fn, arg.value(), ctx);
}

std::size_t listLength(const Expr& e) {
    if (const auto* t = std::get_if<expr::TableLit>(&e.node)) return t->elems.size();
    if (const auto* t = std::get_if<expr::TupleLit>(&e.node)) return t->elems.size();
    return 4;  // handle: return, op, traverse clauses, then the state
}

const ExprPtr& listItem(const Expr& e, std::size_t i) {
    if (const auto* t = std::get_if<expr::TableLit>(&e.node)) return t->elems[i];
    if (const auto* t = std::get_if<expr::TupleLit>(&e.node)) return t->elems[i];
    const auto& h = std::get<expr::Handle>(e.node);
    const std::array<const ExprPtr*, 4> items = {&h.handler.returnClause, &h.handler.opClause,
                                                 &h.handler.traverseClause, &h.state};
    return *items[i];
}

Step continueList(const Env& env, const ExprPtr& e, std::vector<Value> values, EvalContext ctx) {
    std::size_t n = listLength(*e);
    values.reserve(n);
    while (values.size() < n) {
        Step s = eval(env, listItem(*e, values.size()), ctx);
        if (!s.isDone()) {
            return suspendWith(std::move(s), std::make_shared<ListFrame>(env, e, std::move(values)));
        }
        values.push_back(std::move(s.value()));
    }
    if (std::holds_alternative<expr::TableLit>(e->node)) {
        return Step::done(Value::table(std::move(values)));
    }
    if (std::holds_alternative<expr::TupleLit>(e->node)) {
        return Step::done(Value::tuple(std::move(values)));
    }
    const auto& node = std::get<expr::Handle>(e->node);
    auto h = std::make_shared<const HandlerValue>(
        HandlerValue{node.handler.opName, std::move(values[0]), std::move(values[1]), std::move(values[2])});
    Step body = eval(env, node.body, ctx.inner());
    return dispatchHandle(h, std::move(values[3]), std::move(body), ctx);
}

std::shared_ptr<const Resumption> withState(const Resumption& r, Value state) {
    auto copy = std::make_shared<Resumption>(r);
    copy->state = std::move(state);
    return copy;
}

Step applyResumption(const Resumption& r, const Value& arg, EvalContext ctx) {
    switch (r.kind) {
    case Resumption::Kind::OpResumption:
    case Resumption::Kind::LoopResumption:
        if (!r.state) {
            return Step::done(Value::resumption(withState(r, arg)));
        }
        // k s x = handle h s E[x]
        return dispatchHandle(r.handler, *r.state, r.chain.resume(arg, ctx.inner()), ctx);
    case Resumption::Kind::LoopBody: {
        if (!arg.isTable() || static_cast<std::int64_t>(arg.asTable().elems.size()) != r.size) {
            std::string got = arg.isTable() ? "table of length " + std::to_string(arg.asTable().elems.size())
                                            : std::string(arg.kindName());
            throw EvalError("state table length mismatch: loop of size " + std::to_string(r.size) + " got " + got);
        }
        auto iteration = std::make_shared<Resumption>();
        iteration->kind = Resumption::Kind::HandledIteration;
        iteration->handler = r.handler;
        iteration->body = r.body;
        iteration->states = arg;
        return Step::suspended(LoopRequest{r.size, Value::resumption(std::move(iteration))}, {});
    }
    case Resumption::Kind::HandledIteration: {
        // handle h (ss x) e
        const auto& states = r.states.asTable().elems;
        if (!arg.isInt() || arg.asInt() < 0 || arg.asInt() >= static_cast<std::int64_t>(states.size())) {
            throw EvalError("index out of bounds");
        }
        std::int64_t i = arg.asInt();
        traceEvent(ctx, Rule::Index, [&] { return "i=" + std::to_string(i); });
        Step body = applyLoopBody(r.body, i, ctx.inner());
        return dispatchHandle(r.handler, states[static_cast<std::size_t>(i)], std::move(body), ctx);
    }
    }
    throw EvalError("internal: bad resumption");
}

} // namespace

Step eval(const Env& env, const ExprPtr& e, EvalContext ctx) {
    return std::visit(
        [&](const auto& n) -> Step {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, expr::Lit>) {
                return Step::done(n.value);
            } else if constexpr (std::is_same_v<T, expr::Var>) {
                return Step::done(env.lookup(n.index));
            } else if constexpr (std::is_same_v<T, expr::Builtin>) {
                const BuiltinSpec* spec = findBuiltin(n.name);
                if (!spec) throw EvalError("unknown builtin " + n.name);
                return Step::done(builtinValue(*spec));
            } else if constexpr (std::is_same_v<T, expr::Lam>) {
                return Step::done(Value::closure(std::make_shared<const Closure>(Closure{e, n.param, n.body, env})));
            } else if constexpr (std::is_same_v<T, expr::App>) {
                Step fn = eval(env, n.fn, ctx);
                if (!fn.isDone()) {
                    return suspendWith(std::move(fn), std::make_shared<AppArgFrame>(env, n.arg));
                }
                Step arg = eval(env, n.arg, ctx);
                if (!arg.isDone()) {
                    return suspendWith(std::move(arg), std::make_shared<ApplyFrame>(std::move(fn.value())));
                }
                return applyValue(fn.value(), arg.value(), ctx);
            } else if constexpr (std::is_same_v<T, expr::For>) {
                Step size = eval(env, n.size, ctx);
                if (!size.isDone()) {
                    return suspendWith(std::move(size), std::make_shared<ForSizeFrame>(env, e));
                }
                return makeLoop(env, e, size.value());
            } else if constexpr (std::is_same_v<T, expr::Perform>) {
                Step arg = eval(env, n.arg, ctx);
                if (!arg.isDone()) {
                    return suspendWith(std::move(arg), std::make_shared<PerformFrame>(n.opName));
                }
                return Step::suspended(OpRequest{n.opName, std::move(arg.value())}, {});
            } else if constexpr (std::is_same_v<T, expr::TableLit> || std::is_same_v<T, expr::TupleLit> ||
                                 std::is_same_v<T, expr::Handle>) {
                return continueList(env, e, {}, ctx);
            } else if constexpr (std::is_same_v<T, expr::If>) {
                Step cond = eval(env, n.cond, ctx);
                if (!cond.isDone()) {
                    return suspendWith(std::move(cond), std::make_shared<IfFrame>(env, e));
                }
                return evalIf(env, n, cond.value(), ctx);
            } else {
                Step scrutinee = eval(env, n.scrutinee, ctx);
                if (!scrutinee.isDone()) {
                    return suspendWith(std::move(scrutinee), std::make_shared<CaseFrame>(env, e));
                }
                return evalCase(env, n, scrutinee.value(), ctx);
            }
        },
        e->node);
}

Step dispatchHandle(const HandlerPtr& h, Value state, Step body, EvalContext ctx) {
    if (body.isDone()) {
        // (return)
        traceEvent(ctx, Rule::Return, [&] { return h->opName; });
        const std::array<Value, 2> args = {std::move(state), std::move(body.value())};
        return applyAll(h->returnFn, args, ctx);
    }
    Suspension& s = body.suspension();
    if (auto* op = std::get_if<OpRequest>(&s.request)) {
        if (op->opName != h->opName) {
            // forward, keeping this handler (and its current state) in the context
            s.chain = s.chain.wrap(std::make_shared<HandlerFrame>(h, std::move(state)));
            return body;
        }
        // (perform)
        traceEvent(ctx, Rule::Perform, [&] { return op->opName; });
        auto k = std::make_shared<Resumption>();
        k->kind = Resumption::Kind::OpResumption;
        k->handler = h;
        k->chain = std::move(s.chain);
        const std::array<Value, 3> args = {std::move(state), std::move(op->arg), Value::resumption(std::move(k))};
        return applyAll(h->opFn, args, ctx);
    }
    // (traverse)
    auto& loop = std::get<LoopRequest>(s.request);
    traceEvent(ctx, Rule::Traverse, [&] { return "n=" + std::to_string(loop.size); });
    auto l = std::make_shared<Resumption>();
    l->kind = Resumption::Kind::LoopBody;
    l->handler = h;
    l->size = loop.size;
    l->body = std::move(loop.body);
    auto k = std::make_shared<Resumption>();
    k->kind = Resumption::Kind::LoopResumption;
    k->handler = h;
    k->chain = std::move(s.chain);
    const std::array<Value, 4> args = {Value::integer(loop.size), std::move(state), Value::resumption(std::move(l)),
                                       Value::resumption(std::move(k))};
    return applyAll(h->traverseFn, args, ctx);
}

Step applyValue(const Value& f, const Value& arg, EvalContext ctx) {
    if (f.isClosure()) {
        const Closure& c = *f.asClosure();
        traceEvent(ctx, Rule::App, [&] { return c.param; });
        return eval(c.env.extend(arg), c.body, ctx);
    }
    if (f.isTable()) {
        const auto& elems = f.asTable().elems;
        if (!arg.isInt()) {
            throw EvalError("table index is not an integer (got " + std::string(arg.kindName()) + ")");
        }
        std::int64_t i = arg.asInt();
        if (i < 0 || i >= static_cast<std::int64_t>(elems.size())) {
            throw EvalError("index out of bounds: index " + std::to_string(i) + " for table of length " +
                            std::to_string(elems.size()));
        }
        traceEvent(ctx, Rule::Index, [&] { return "i=" + std::to_string(i); });
        return Step::done(elems[static_cast<std::size_t>(i)]);
    }
    if (f.isBuiltin()) {
        const BuiltinApp& b = *f.asBuiltin();
        std::vector<Value> args = b.args;
        args.push_back(arg);
        if (static_cast<int>(args.size()) == b.spec->arity) {
            return b.spec->run(args, ctx);
        }
        return Step::done(Value::builtin(std::make_shared<const BuiltinApp>(BuiltinApp{b.spec, std::move(args)})));
    }
    if (f.isResumption()) {
        return applyResumption(*f.asResumption(), arg, ctx);
    }
    throw EvalError("applied non-function (" + std::string(f.kindName()) + " " + printValue(f) + ")");
}

Step applyAll(const Value& f, std::span<const Value> args, EvalContext ctx) {
    Value fn = f;
    for (std::size_t i = 0; i < args.size(); ++i) {
        Step s = applyValue(fn, args[i], ctx);
        if (i + 1 == args.size()) {
            return s;
        }
        if (!s.isDone()) {
            std::vector<Value> rest(args.begin() + static_cast<std::ptrdiff_t>(i) + 1, args.end());
            return suspendWith(std::move(s), std::make_shared<ApplyArgsFrame>(std::move(rest)));
        }
        fn = std::move(s.value());
    }
    return Step::done(std::move(fn));
}

Step applyLoopBody(const Value& body, std::int64_t i, EvalContext ctx) {
    if (body.isClosure()) {
        const Closure& c = *body.asClosure();
        return eval(c.env.extend(Value::integer(i)), c.body, ctx);
    }
    return applyValue(body, Value::integer(i), ctx);
}

} // namespace lambdap
