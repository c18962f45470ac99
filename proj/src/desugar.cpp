#include "lambdap/builtins.hpp"
#include "lambdap/parser.hpp"

namespace lambdap {

namespace {

class Desugarer {
public:
    ExprPtr program(const SurfaceProgram& p) {
        SExprPtr mainExpr = p.main;
        std::size_t defCount = p.definitions.size();
        if (!mainExpr) {
            // no trailing expression: the last definition named `main` is the result
            for (std::size_t i = p.definitions.size(); i-- > 0;) {
                const Pattern& pat = *p.definitions[i].pattern;
                if (pat.kind == Pattern::Kind::Var && pat.name == "main") {
                    mainExpr = p.definitions[i].body;
                    defCount = i;
                    break;
                }
            }
            if (!mainExpr) {
                throw ParseError({1, 1}, "program has no result expression");
            }
        }
        ExprPtr result = expr(*mainExpr);
        for (std::size_t i = defCount; i-- > 0;) {
            const Definition& d = p.definitions[i];
            result = bind(*d.pattern, expr(*d.body), std::move(result), d.pattern->pos);
        }
        return result;
    }

    ExprPtr expr(const SurfaceExpr& e) {
        SourcePos pos = e.pos;
        return std::visit(
            [&](const auto& n) -> ExprPtr {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, surface::Lit>) {
                    return makeExpr(expr::Lit{constant(n.value)}, pos);
                } else if constexpr (std::is_same_v<T, surface::Var>) {
                    return makeExpr(expr::Var{n.name}, pos);
                } else if constexpr (std::is_same_v<T, surface::Lam>) {
                    std::string param = n.binder == "_" ? fresh() : n.binder;
                    return makeExpr(expr::Lam{std::move(param), expr(*n.body)}, pos);
                } else if constexpr (std::is_same_v<T, surface::App>) {
                    if (const auto* perf = std::get_if<surface::Perform>(&n.fn->node)) {
                        return makeExpr(expr::Perform{perf->opName, expr(*n.arg)}, pos);
                    }
                    return makeExpr(expr::App{expr(*n.fn), expr(*n.arg)}, pos);
                } else if constexpr (std::is_same_v<T, surface::Infix>) {
                    ExprPtr op = makeExpr(expr::Var{n.op}, pos);
                    return makeExpr(expr::App{makeExpr(expr::App{op, expr(*n.lhs)}, pos), expr(*n.rhs)}, pos);
                } else if constexpr (std::is_same_v<T, surface::For>) {
                    std::string var = n.indexVar == "_" ? fresh() : n.indexVar;
                    return makeExpr(expr::For{std::move(var), expr(*n.size), expr(*n.body)}, pos);
                } else if constexpr (std::is_same_v<T, surface::Handle>) {
                    return handle(n, pos);
                } else if constexpr (std::is_same_v<T, surface::Perform>) {
                    std::string x = fresh();
                    ExprPtr body = makeExpr(expr::Perform{n.opName, makeExpr(expr::Var{x}, pos)}, pos);
                    return makeExpr(expr::Lam{x, std::move(body)}, pos);
                } else if constexpr (std::is_same_v<T, surface::Table>) {
                    return makeExpr(expr::TableLit{list(n.elems)}, pos);
                } else if constexpr (std::is_same_v<T, surface::Tuple>) {
                    return makeExpr(expr::TupleLit{list(n.elems)}, pos);
                } else if constexpr (std::is_same_v<T, surface::If>) {
                    return makeExpr(expr::If{expr(*n.cond), expr(*n.thenBranch), expr(*n.elseBranch)}, pos);
                } else if constexpr (std::is_same_v<T, surface::Case>) {
                    std::string lv = n.leftVar == "_" ? fresh() : n.leftVar;
                    std::string rv = n.rightVar == "_" ? fresh() : n.rightVar;
                    return makeExpr(expr::CaseEither{expr(*n.scrutinee), std::move(lv), expr(*n.leftBody), std::move(rv),
                                                     expr(*n.rightBody)},
                                    pos);
                } else if constexpr (std::is_same_v<T, surface::Bind>) {
                    return bind(*n.pattern, expr(*n.rhs), expr(*n.body), pos);
                } else {
                    ExprPtr rest = makeExpr(expr::Lam{fresh(), expr(*n.rest)}, pos);
                    return makeExpr(expr::App{std::move(rest), expr(*n.first)}, pos);
                }
            },
            e.node);
    }

private:
    std::string fresh() { return "%" + std::to_string(counter_++); }

    static Value constant(const Constant& c) {
        return std::visit(
            [](const auto& x) -> Value {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Unit>) return Value::unit();
                else if constexpr (std::is_same_v<T, std::int64_t>) return Value::integer(x);
                else if constexpr (std::is_same_v<T, double>) return Value::floating(x);
                else if constexpr (std::is_same_v<T, std::string>) return Value::string(x);
                else return Value::boolean(x);
            },
            c);
    }

    std::vector<ExprPtr> list(const std::vector<SExprPtr>& xs) {
        std::vector<ExprPtr> out;
        out.reserve(xs.size());
        for (const auto& x : xs) out.push_back(expr(*x));
        return out;
    }

    // `pattern <- rhs; body`
    ExprPtr bind(const Pattern& p, ExprPtr rhs, ExprPtr body, SourcePos pos) {
        switch (p.kind) {
        case Pattern::Kind::Var:
            return makeExpr(expr::App{makeExpr(expr::Lam{p.name, std::move(body)}, pos), std::move(rhs)}, pos);
        case Pattern::Kind::Wildcard:
            return makeExpr(expr::App{makeExpr(expr::Lam{fresh(), std::move(body)}, pos), std::move(rhs)}, pos);
        case Pattern::Kind::Tuple:
        case Pattern::Kind::Table: {
            std::string whole = fresh();
            auto wholeVar = [&] { return makeExpr(expr::Var{whole}, pos); };
            std::size_t arity = p.elems.size();
            // innermost first, so elements bind left to right
            for (std::size_t i = arity; i-- > 0;) {
                ExprPtr proj;
                if (p.kind == Pattern::Kind::Tuple && arity == 2) {
                    proj = makeExpr(expr::App{makeExpr(expr::Builtin{i == 0 ? "fst" : "snd"}, pos), wholeVar()}, pos);
                } else {
                    ExprPtr f = makeExpr(expr::Builtin{"#proj"}, pos);
                    f = makeExpr(expr::App{f, makeExpr(expr::Lit{Value::integer(static_cast<std::int64_t>(arity))}, pos)},
                                 pos);
                    f = makeExpr(expr::App{f, makeExpr(expr::Lit{Value::integer(static_cast<std::int64_t>(i))}, pos)},
                                 pos);
                    proj = makeExpr(expr::App{f, wholeVar()}, pos);
                }
                body = bind(*p.elems[i], std::move(proj), std::move(body), p.elems[i]->pos);
            }
            return makeExpr(expr::App{makeExpr(expr::Lam{whole, std::move(body)}, pos), std::move(rhs)}, pos);
        }
        }
        throw ParseError(pos, "bad pattern");
    }

    ExprPtr handle(const surface::Handle& h, SourcePos pos) {
        expr::HandlerExpr out;
        const surface::Clause* opClause = nullptr;
        bool seenReturn = false, seenTraverse = false;
        for (const surface::Clause& c : h.clauses) {
            if (c.name == "return") {
                if (seenReturn) throw ParseError(c.pos, "duplicate return clause");
                seenReturn = true;
                out.returnClause = expr(*c.body);
            } else if (c.name == "traverse") {
                if (seenTraverse) throw ParseError(c.pos, "duplicate traverse clause");
                seenTraverse = true;
                out.traverseClause = expr(*c.body);
            } else {
                if (opClause) {
                    if (opClause->name == c.name) throw ParseError(c.pos, "duplicate clause for operation '" + c.name + "'");
                    throw ParseError(c.pos, "a handler handles exactly one operation (found '" + opClause->name +
                                                "' and '" + c.name + "')");
                }
                opClause = &c;
                out.opName = c.name;
                out.opClause = expr(*c.body);
            }
        }
        if (!opClause) {
            throw ParseError(pos, "handler has no operation clause");
        }
        if (!out.returnClause) {
            // \s.\x. x
            std::string s = "s", x = "x";
            out.returnClause =
                makeExpr(expr::Lam{s, makeExpr(expr::Lam{x, makeExpr(expr::Var{x}, pos)}, pos)}, pos);
        }
        if (!out.traverseClause) {
            out.traverseClause = defaultTraverse(pos);
        }
        ExprPtr state = expr(*h.state);
        ExprPtr body = expr(*h.body);
        if (!h.thunked) {
            return makeExpr(expr::Handle{std::move(out), std::move(state), std::move(body)}, pos);
        }
        // handler h s e = \_. handle h s (e ())
        ExprPtr called = makeExpr(expr::App{std::move(body), makeExpr(expr::Lit{Value::unit()}, pos)}, pos);
        ExprPtr inner = makeExpr(expr::Handle{std::move(out), std::move(state), std::move(called)}, pos);
        return makeExpr(expr::Lam{fresh(), std::move(inner)}, pos);
    }

    // \n.\s.\l.\k. k s (l (for x:n. s))
    ExprPtr defaultTraverse(SourcePos pos) {
        std::string n = "n", s = "s", l = "l", k = "k", x = "x";
        auto var = [&](const std::string& name) { return makeExpr(expr::Var{name}, pos); };
        auto app = [&](ExprPtr f, ExprPtr a) { return makeExpr(expr::App{std::move(f), std::move(a)}, pos); };
        auto lam = [&](const std::string& p, ExprPtr b) { return makeExpr(expr::Lam{p, std::move(b)}, pos); };
        ExprPtr states = makeExpr(expr::For{x, var(n), var(s)}, pos);
        ExprPtr body = app(app(var(k), var(s)), app(var(l), states));
        return lam(n, lam(s, lam(l, lam(k, body))));
    }

    std::size_t counter_ = 0;
};

// Computes binder distances for variables, turns free names of builtins
// into Builtin nodes and rejects everything else that is unbound.
class Resolver {
public:
    ExprPtr run(const ExprPtr& e) {
        return std::visit(
            [&](const auto& n) -> ExprPtr {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, expr::Lit> || std::is_same_v<T, expr::Builtin>) {
                    return e;
                } else if constexpr (std::is_same_v<T, expr::Var>) {
                    return variable(n.name, e->pos);
                } else if constexpr (std::is_same_v<T, expr::Lam>) {
                    return makeExpr(expr::Lam{n.param, scoped(n.param, n.body)}, e->pos);
                } else if constexpr (std::is_same_v<T, expr::App>) {
                    return makeExpr(expr::App{run(n.fn), run(n.arg)}, e->pos);
                } else if constexpr (std::is_same_v<T, expr::For>) {
                    return makeExpr(expr::For{n.indexVar, run(n.size), scoped(n.indexVar, n.body)}, e->pos);
                } else if constexpr (std::is_same_v<T, expr::Handle>) {
                    expr::HandlerExpr h{n.handler.opName, run(n.handler.returnClause), run(n.handler.opClause),
                                        run(n.handler.traverseClause)};
                    return makeExpr(expr::Handle{std::move(h), run(n.state), run(n.body)}, e->pos);
                } else if constexpr (std::is_same_v<T, expr::Perform>) {
                    return makeExpr(expr::Perform{n.opName, run(n.arg)}, e->pos);
                } else if constexpr (std::is_same_v<T, expr::TableLit>) {
                    return makeExpr(expr::TableLit{list(n.elems)}, e->pos);
                } else if constexpr (std::is_same_v<T, expr::TupleLit>) {
                    return makeExpr(expr::TupleLit{list(n.elems)}, e->pos);
                } else if constexpr (std::is_same_v<T, expr::If>) {
                    return makeExpr(expr::If{run(n.cond), run(n.thenBranch), run(n.elseBranch)}, e->pos);
                } else {
                    return makeExpr(expr::CaseEither{run(n.scrutinee), n.leftVar, scoped(n.leftVar, n.leftBody),
                                                     n.rightVar, scoped(n.rightVar, n.rightBody)},
                                    e->pos);
                }
            },
            e->node);
    }

private:
    ExprPtr variable(const std::string& name, SourcePos pos) {
        if (name != "Left" && name != "Right") {
            for (std::size_t i = scope_.size(); i-- > 0;) {
                if (scope_[i] == name) {
                    return makeExpr(expr::Var{name, scope_.size() - 1 - i}, pos);
                }
            }
        }
        if (findBuiltin(name)) {
            return makeExpr(expr::Builtin{name}, pos);
        }
        throw ParseError(pos, "unbound variable '" + name + "'");
    }

    ExprPtr scoped(const std::string& name, const ExprPtr& body) {
        scope_.push_back(name);
        ExprPtr out = run(body);
        scope_.pop_back();
        return out;
    }

    std::vector<ExprPtr> list(const std::vector<ExprPtr>& xs) {
        std::vector<ExprPtr> out;
        out.reserve(xs.size());
        for (const auto& x : xs) out.push_back(run(x));
        return out;
    }

    std::vector<std::string> scope_;
};

} // namespace

ExprPtr desugar(const SurfaceProgram& program) {
    Desugarer d;
    return Resolver().run(d.program(program));
}

ExprPtr desugarExpression(const SurfaceExpr& e) {
    Desugarer d;
    return Resolver().run(d.expr(e));
}

} // namespace lambdap
