#include "lambdap/builtins.hpp"

#include <array>
#include <limits>
#include <unordered_map>

#include "lambdap/error.hpp"
#include "lambdap/prng.hpp"

namespace lambdap {

namespace {

[[noreturn]] void typeError(std::string_view builtin, std::string_view expected, const Value& got) {
    throw EvalError(std::string(builtin) + ": expected " + std::string(expected) + ", got " +
                    std::string(got.kindName()) + " " + printValue(got));
}

const std::vector<Value>& tableArg(std::string_view builtin, const Value& v) {
    if (!v.isTable()) typeError(builtin, "a table", v);
    return v.asTable().elems;
}

template <typename IntOp, typename FloatOp>
Step arith(std::string_view name, std::span<const Value> a, IntOp intOp, FloatOp floatOp) {
    if (a[0].isInt() && a[1].isInt()) {
        std::int64_t out;
        if (intOp(a[0].asInt(), a[1].asInt(), &out)) {
            throw EvalError(std::string(name) + ": integer overflow");
        }
        return Step::done(Value::integer(out));
    }
    if (a[0].isFloat() && a[1].isFloat()) {
        return Step::done(Value::floating(floatOp(a[0].asFloat(), a[1].asFloat())));
    }
    throw EvalError(std::string(name) + ": operands must be two ints or two floats (got " +
                    std::string(a[0].kindName()) + " and " + std::string(a[1].kindName()) + ")");
}

template <typename Cmp>
Step compare(std::string_view name, std::span<const Value> a, Cmp cmp) {
    if (a[0].isInt() && a[1].isInt()) return Step::done(Value::boolean(cmp(a[0].asInt(), a[1].asInt())));
    if (a[0].isFloat() && a[1].isFloat()) return Step::done(Value::boolean(cmp(a[0].asFloat(), a[1].asFloat())));
    throw EvalError(std::string(name) + ": operands must be two ints or two floats (got " +
                    std::string(a[0].kindName()) + " and " + std::string(a[1].kindName()) + ")");
}

Step pairProjection(std::string_view name, const Value& v, std::size_t i) {
    if (!v.isTuple() || v.asTuple().elems.size() != 2) typeError(name, "a pair", v);
    return Step::done(v.asTuple().elems[i]);
}

Step patternProjection(std::span<const Value> a) {
    std::int64_t arity = a[0].asInt();
    std::size_t i = static_cast<std::size_t>(a[1].asInt());
    const Value& v = a[2];
    const std::vector<Value>* elems = nullptr;
    if (v.isTuple()) elems = &v.asTuple().elems;
    if (v.isTable()) elems = &v.asTable().elems;
    if (!elems || static_cast<std::int64_t>(elems->size()) != arity) {
        throw EvalError("pattern arity mismatch: expected " + std::to_string(arity) + " elements, got " +
                        printValue(v));
    }
    return Step::done((*elems)[i]);
}

const std::array kBuiltins = {
    BuiltinSpec{"+", 2,
                [](std::span<const Value> a, EvalContext) {
                    return arith("(+)", a, [](auto x, auto y, auto* r) { return __builtin_add_overflow(x, y, r); },
                                 [](double x, double y) { return x + y; });
                }},
    BuiltinSpec{"-", 2,
                [](std::span<const Value> a, EvalContext) {
                    return arith("(-)", a, [](auto x, auto y, auto* r) { return __builtin_sub_overflow(x, y, r); },
                                 [](double x, double y) { return x - y; });
                }},
    BuiltinSpec{"*", 2,
                [](std::span<const Value> a, EvalContext) {
                    return arith("(*)", a, [](auto x, auto y, auto* r) { return __builtin_mul_overflow(x, y, r); },
                                 [](double x, double y) { return x * y; });
                }},
    BuiltinSpec{"/", 2,
                [](std::span<const Value> a, EvalContext) {
                    if (!a[0].isFloat() || !a[1].isFloat()) {
                        throw EvalError("(/): float division needs two floats (got " + std::string(a[0].kindName()) +
                                        " and " + std::string(a[1].kindName()) + ")");
                    }
                    return Step::done(Value::floating(a[0].asFloat() / a[1].asFloat()));
                }},
    BuiltinSpec{"==", 2,
                [](std::span<const Value> a, EvalContext) { return Step::done(Value::boolean(valueEq(a[0], a[1]))); }},
    BuiltinSpec{"<", 2,
                [](std::span<const Value> a, EvalContext) {
                    return compare("(<)", a, [](auto x, auto y) { return x < y; });
                }},
    BuiltinSpec{"<=", 2,
                [](std::span<const Value> a, EvalContext) {
                    return compare("(<=)", a, [](auto x, auto y) { return x <= y; });
                }},
    BuiltinSpec{"++", 2,
                [](std::span<const Value> a, EvalContext) {
                    if (!a[0].isString()) typeError("(++)", "a string", a[0]);
                    if (!a[1].isString()) typeError("(++)", "a string", a[1]);
                    return Step::done(Value::string(a[0].asString() + a[1].asString()));
                }},
    BuiltinSpec{"length", 1,
                [](std::span<const Value> a, EvalContext) {
                    return Step::done(Value::integer(static_cast<std::int64_t>(tableArg("length", a[0]).size())));
                }},
    BuiltinSpec{"fst", 1, [](std::span<const Value> a, EvalContext) { return pairProjection("fst", a[0], 0); }},
    BuiltinSpec{"snd", 1, [](std::span<const Value> a, EvalContext) { return pairProjection("snd", a[0], 1); }},
    BuiltinSpec{"concat", 1, [](std::span<const Value> a, EvalContext) { return Step::done(concatTables(a[0])); }},
    BuiltinSpec{"toString", 1,
                [](std::span<const Value> a, EvalContext) {
                    if (!a[0].isInt()) typeError("toString", "an int", a[0]);
                    return Step::done(Value::string(std::to_string(a[0].asInt())));
                }},
    BuiltinSpec{"reduce", 2, [](std::span<const Value> a, EvalContext ctx) { return reduce(a[0], a[1], ctx); }},
    BuiltinSpec{"firstFailure", 1,
                [](std::span<const Value> a, EvalContext) { return Step::done(firstFailure(a[0])); }},
    BuiltinSpec{"cartesianProd", 1,
                [](std::span<const Value> a, EvalContext) { return Step::done(cartesianProd(a[0])); }},
    BuiltinSpec{"splitKey", 2,
                [](std::span<const Value> a, EvalContext) {
                    if (!a[0].isKey()) typeError("splitKey", "a key", a[0]);
                    if (!a[1].isInt() || a[1].asInt() < 0) typeError("splitKey", "a non-negative int", a[1]);
                    std::vector<Value> keys;
                    for (PrngKey k : prng::splitKey(a[0].asKey(), static_cast<std::size_t>(a[1].asInt()))) {
                        keys.push_back(Value::key(k));
                    }
                    return Step::done(Value::table(std::move(keys)));
                }},
    BuiltinSpec{"genUniform", 1,
                [](std::span<const Value> a, EvalContext) {
                    if (!a[0].isKey()) typeError("genUniform", "a key", a[0]);
                    return Step::done(Value::floating(prng::genUniform(a[0].asKey())));
                }},
    BuiltinSpec{"makeKey", 1,
                [](std::span<const Value> a, EvalContext) {
                    if (!a[0].isInt()) typeError("makeKey", "an int", a[0]);
                    return Step::done(Value::key(PrngKey{static_cast<std::uint64_t>(a[0].asInt())}));
                }},
    BuiltinSpec{"Left", 1, [](std::span<const Value> a, EvalContext) { return Step::done(Value::left(a[0])); }},
    BuiltinSpec{"Right", 1, [](std::span<const Value> a, EvalContext) { return Step::done(Value::right(a[0])); }},
    // (arity, index, tuple-or-table), inserted by pattern desugaring
    BuiltinSpec{"#proj", 3, [](std::span<const Value> a, EvalContext) { return patternProjection(a); }},
};

struct Registry {
    std::unordered_map<std::string_view, const BuiltinSpec*> byName;
    std::unordered_map<const BuiltinSpec*, Value> values;

    Registry() {
        for (const BuiltinSpec& b : kBuiltins) {
            byName.emplace(b.name, &b);
            values.emplace(&b, Value::builtin(std::make_shared<const BuiltinApp>(BuiltinApp{&b, {}})));
        }
    }
};

const Registry& registry() {
    static const Registry r;
    return r;
}

bool isFirstOrderBuiltin(const Value& f) {
    if (!f.isBuiltin()) return false;
    const BuiltinApp& b = *f.asBuiltin();
    return b.spec->name != "reduce" && static_cast<int>(b.args.size()) + 2 == b.spec->arity;
}

Value hostReduce(const Value& f, const std::vector<Value>& xs, std::size_t lo, std::size_t hi, EvalContext ctx) {
    if (hi - lo == 1) return xs[lo];
    std::size_t mid = lo + (hi - lo + 1) / 2;
    const std::array<Value, 2> args = {hostReduce(f, xs, lo, mid, ctx), hostReduce(f, xs, mid, hi, ctx)};
    Step s = applyAll(f, args, ctx);
    return std::move(s.value());  // first-order builtins never suspend
}

ExprPtr reductionTree(const ExprPtr& fn, const std::vector<Value>& xs, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return makeExpr(expr::Lit{xs[lo]});
    std::size_t mid = lo + (hi - lo + 1) / 2;
    ExprPtr partial = makeExpr(expr::App{fn, reductionTree(fn, xs, lo, mid)});
    return makeExpr(expr::App{std::move(partial), reductionTree(fn, xs, mid, hi)});
}

} // namespace

const BuiltinSpec* findBuiltin(std::string_view name) {
    const auto& m = registry().byName;
    auto it = m.find(name);
    return it == m.end() ? nullptr : it->second;
}

std::span<const BuiltinSpec> allBuiltins() { return kBuiltins; }

Value builtinValue(const BuiltinSpec& spec) { return registry().values.at(&spec); }

Step reduce(const Value& f, const Value& table, EvalContext ctx) {
    const std::vector<Value>& xs = tableArg("reduce", table);
    if (xs.empty()) {
        throw EvalError("reduce of empty table");
    }
    if (isFirstOrderBuiltin(f)) {
        return Step::done(hostReduce(f, xs, 0, xs.size(), ctx));
    }
    // run the same tree through the machine so a user combiner keeps full semantics
    ExprPtr tree = reductionTree(makeExpr(expr::Lit{f}), xs, 0, xs.size());
    return eval(Env{}, tree, ctx);
}

Value firstFailure(const Value& table) {
    const std::vector<Value>& xs = tableArg("firstFailure", table);
    std::vector<Value> payloads;
    payloads.reserve(xs.size());
    for (const Value& x : xs) {
        if (!x.isEither()) {
            throw EvalError("firstFailure: not an Either (got " + printValue(x) + ")");
        }
        if (!x.asEither().isRight) return x;
        payloads.push_back(x.asEither().payload);
    }
    return Value::right(Value::table(std::move(payloads)));
}

Value cartesianProd(const Value& tables) {
    const std::vector<Value>& factors = tableArg("cartesianProd", tables);
    std::size_t total = 1;
    for (const Value& f : factors) {
        std::size_t n = tableArg("cartesianProd", f).size();
        if (n != 0 && total > std::numeric_limits<std::size_t>::max() / n) {
            throw EvalError("cartesianProd: result too large");
        }
        total *= n;
    }
    if (total > (std::size_t{1} << 28)) {
        throw EvalError("cartesianProd: result too large");
    }
    std::vector<Value> out;
    out.reserve(total);
    std::vector<std::size_t> digits(factors.size(), 0);
    for (std::size_t r = 0; r < total; ++r) {
        std::vector<Value> combo;
        combo.reserve(factors.size());
        for (std::size_t j = 0; j < factors.size(); ++j) {
            combo.push_back(factors[j].asTable().elems[digits[j]]);
        }
        out.push_back(Value::table(std::move(combo)));
        // mixed-radix increment, last coordinate fastest
        for (std::size_t j = factors.size(); j-- > 0;) {
            if (++digits[j] < factors[j].asTable().elems.size()) break;
            digits[j] = 0;
        }
    }
    return Value::table(std::move(out));
}

Value concatTables(const Value& tables) {
    std::vector<Value> out;
    for (const Value& t : tableArg("concat", tables)) {
        const std::vector<Value>& xs = tableArg("concat", t);
        out.insert(out.end(), xs.begin(), xs.end());
    }
    return Value::table(std::move(out));
}

} // namespace lambdap
