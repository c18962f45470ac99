#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lambdap {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Unit {
    bool operator==(const Unit&) const = default;
};

// Splittable PRNG state. Opaque to programs; prints as Key(<hex>).
struct PrngKey {
    std::uint64_t bits = 0;
    bool operator==(const PrngKey&) const = default;
};

struct Tuple;
struct Table;
struct Either;
struct Closure;
struct BuiltinApp;
struct Resumption;

class Value {
public:
    using Storage = std::variant<Unit,
                                 std::int64_t,
                                 double,
                                 bool,
                                 std::shared_ptr<const std::string>,
                                 PrngKey,
                                 std::shared_ptr<const Tuple>,
                                 std::shared_ptr<const Table>,
                                 std::shared_ptr<const Either>,
                                 std::shared_ptr<const Closure>,
                                 std::shared_ptr<const BuiltinApp>,
                                 std::shared_ptr<const Resumption>>;

    Value() : storage_(Unit{}) {}

    static Value unit() { return Value(); }
    static Value integer(std::int64_t i);
    static Value floating(double d);
    static Value boolean(bool b);
    static Value string(std::string s);
    static Value key(PrngKey k);
    static Value tuple(std::vector<Value> elems);
    static Value table(std::vector<Value> elems);
    static Value left(Value payload);
    static Value right(Value payload);
    static Value closure(std::shared_ptr<const Closure> c);
    static Value builtin(std::shared_ptr<const BuiltinApp> b);
    static Value resumption(std::shared_ptr<const Resumption> r);

    bool isUnit() const { return std::holds_alternative<Unit>(storage_); }
    bool isInt() const { return std::holds_alternative<std::int64_t>(storage_); }
    bool isFloat() const { return std::holds_alternative<double>(storage_); }
    bool isBool() const { return std::holds_alternative<bool>(storage_); }
    bool isString() const { return std::holds_alternative<std::shared_ptr<const std::string>>(storage_); }
    bool isKey() const { return std::holds_alternative<PrngKey>(storage_); }
    bool isTuple() const { return std::holds_alternative<std::shared_ptr<const Tuple>>(storage_); }
    bool isTable() const { return std::holds_alternative<std::shared_ptr<const Table>>(storage_); }
    bool isEither() const { return std::holds_alternative<std::shared_ptr<const Either>>(storage_); }
    bool isClosure() const { return std::holds_alternative<std::shared_ptr<const Closure>>(storage_); }
    bool isBuiltin() const { return std::holds_alternative<std::shared_ptr<const BuiltinApp>>(storage_); }
    bool isResumption() const { return std::holds_alternative<std::shared_ptr<const Resumption>>(storage_); }
    bool isFunction() const { return isClosure() || isBuiltin() || isResumption(); }

    std::int64_t asInt() const { return std::get<std::int64_t>(storage_); }
    double asFloat() const { return std::get<double>(storage_); }
    bool asBool() const { return std::get<bool>(storage_); }
    const std::string& asString() const { return *std::get<std::shared_ptr<const std::string>>(storage_); }
    PrngKey asKey() const { return std::get<PrngKey>(storage_); }
    const Tuple& asTuple() const { return *std::get<std::shared_ptr<const Tuple>>(storage_); }
    const Table& asTable() const { return *std::get<std::shared_ptr<const Table>>(storage_); }
    const Either& asEither() const { return *std::get<std::shared_ptr<const Either>>(storage_); }
    const std::shared_ptr<const Closure>& asClosure() const { return std::get<std::shared_ptr<const Closure>>(storage_); }
    const std::shared_ptr<const BuiltinApp>& asBuiltin() const { return std::get<std::shared_ptr<const BuiltinApp>>(storage_); }
    const std::shared_ptr<const Resumption>& asResumption() const { return std::get<std::shared_ptr<const Resumption>>(storage_); }

    const Storage& storage() const { return storage_; }

    // Short kind name used in error messages ("int", "table", "function", ...).
    std::string_view kindName() const;

private:
    explicit Value(Storage s) : storage_(std::move(s)) {}
    Storage storage_;
};

struct Tuple {
    std::vector<Value> elems;
};

struct Table {
    std::vector<Value> elems;
};

struct Either {
    bool isRight = false;
    Value payload;
};

// Persistent environment. Variables are addressed by their binder distance,
// which the resolver computes once after desugaring; extending never mutates
// an environment that a closure or resumption already captured.
class Env {
public:
    Env() = default;

    Env extend(Value v) const;
    const Value& lookup(std::size_t index) const;
    std::size_t size() const { return head_ ? head_->size : 0; }

private:
    struct Node {
        Value value;
        std::shared_ptr<const Node> next;
        std::size_t size;
    };
    explicit Env(std::shared_ptr<const Node> head) : head_(std::move(head)) {}
    std::shared_ptr<const Node> head_;
};

struct Closure {
    ExprPtr owner;  // the Lam or For node the closure was made from
    std::string_view param;
    ExprPtr body;
    Env env;
};

// A builtin with the arguments it has been applied to so far.
struct BuiltinSpec;

struct BuiltinApp {
    const BuiltinSpec* spec = nullptr;
    std::vector<Value> args;
};

// Canonical rendering of a value.
std::string printValue(const Value& v);

// Structural equality on first-order values; throws EvalError
// ("cannot compare functions") when a function value is reached.
bool valueEq(const Value& a, const Value& b);

} // namespace lambdap
