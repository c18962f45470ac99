#include "lambdap/value.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "lambdap/error.hpp"
#include "lambdap/syntax.hpp"

namespace lambdap {

Value Value::integer(std::int64_t i) { return Value(Storage(i)); }
Value Value::floating(double d) { return Value(Storage(d)); }
Value Value::boolean(bool b) { return Value(Storage(b)); }
Value Value::string(std::string s) { return Value(Storage(std::make_shared<const std::string>(std::move(s)))); }
Value Value::key(PrngKey k) { return Value(Storage(k)); }

Value Value::tuple(std::vector<Value> elems) {
    return Value(Storage(std::make_shared<const Tuple>(Tuple{std::move(elems)})));
}

Value Value::table(std::vector<Value> elems) {
    return Value(Storage(std::make_shared<const Table>(Table{std::move(elems)})));
}

Value Value::left(Value payload) {
    return Value(Storage(std::make_shared<const Either>(Either{false, std::move(payload)})));
}

Value Value::right(Value payload) {
    return Value(Storage(std::make_shared<const Either>(Either{true, std::move(payload)})));
}

Value Value::closure(std::shared_ptr<const Closure> c) { return Value(Storage(std::move(c))); }
Value Value::builtin(std::shared_ptr<const BuiltinApp> b) { return Value(Storage(std::move(b))); }
Value Value::resumption(std::shared_ptr<const Resumption> r) { return Value(Storage(std::move(r))); }

std::string_view Value::kindName() const {
    switch (storage_.index()) {
    case 0: return "unit";
    case 1: return "int";
    case 2: return "float";
    case 3: return "bool";
    case 4: return "string";
    case 5: return "key";
    case 6: return "tuple";
    case 7: return "table";
    case 8: return "either";
    default: return "function";
    }
}

Env Env::extend(Value v) const {
    return Env(std::make_shared<const Node>(Node{std::move(v), head_, size() + 1}));
}

const Value& Env::lookup(std::size_t index) const {
    const Node* node = head_.get();
    for (std::size_t i = 0; i < index && node; ++i) {
        node = node->next.get();
    }
    if (!node) {
        throw EvalError("internal: variable index out of range");
    }
    return node->value;
}

namespace {

void printString(std::string& out, const std::string& s) {
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (c < 0x20 || c == 0x7f) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\x%02x", c);
                out += buf;
            } else {
                out += static_cast<char>(c);
            }
        }
    }
    out += '"';
}

void printFloat(std::string& out, double d) {
    if (std::isnan(d)) {
        out += "nan";
        return;
    }
    if (std::isinf(d)) {
        out += d < 0 ? "-inf" : "inf";
        return;
    }
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
    std::string text(buf, end);
    if (text.find_first_of(".e") == std::string::npos) {
        text += ".0";
    } else if (text.find('.') == std::string::npos) {
        // 1e+20 -> 1.0e+20 so every float carries a decimal point
        text.insert(text.find('e'), ".0");
    }
    out += text;
}

bool needsParensAsPayload(const Value& v) {
    if (v.isEither()) return true;
    if (v.isInt()) return v.asInt() < 0;
    if (v.isFloat()) return std::signbit(v.asFloat()) && !std::isnan(v.asFloat());
    return false;
}

void print(std::string& out, const Value& v) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Unit>) {
                out += "()";
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                out += std::to_string(x);
            } else if constexpr (std::is_same_v<T, double>) {
                printFloat(out, x);
            } else if constexpr (std::is_same_v<T, bool>) {
                out += x ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::shared_ptr<const std::string>>) {
                printString(out, *x);
            } else if constexpr (std::is_same_v<T, PrngKey>) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "Key(%016llx)", static_cast<unsigned long long>(x.bits));
                out += buf;
            } else if constexpr (std::is_same_v<T, std::shared_ptr<const Tuple>>) {
                out += '(';
                for (std::size_t i = 0; i < x->elems.size(); ++i) {
                    if (i) out += ", ";
                    print(out, x->elems[i]);
                }
                out += ')';
            } else if constexpr (std::is_same_v<T, std::shared_ptr<const Table>>) {
                out += '[';
                for (std::size_t i = 0; i < x->elems.size(); ++i) {
                    if (i) out += ", ";
                    print(out, x->elems[i]);
                }
                out += ']';
            } else if constexpr (std::is_same_v<T, std::shared_ptr<const Either>>) {
                out += x->isRight ? "Right " : "Left ";
                bool parens = needsParensAsPayload(x->payload);
                if (parens) out += '(';
                print(out, x->payload);
                if (parens) out += ')';
            } else {
                out += "<function>";
            }
        },
        v.storage());
}

} // namespace

std::string printValue(const Value& v) {
    std::string out;
    print(out, v);
    return out;
}

bool valueEq(const Value& a, const Value& b) {
    if (a.isFunction() || b.isFunction()) {
        throw EvalError("cannot compare functions");
    }
    if (a.storage().index() != b.storage().index()) {
        return false;
    }
    auto sameElems = [](const std::vector<Value>& xs, const std::vector<Value>& ys) {
        if (xs.size() != ys.size()) return false;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!valueEq(xs[i], ys[i])) return false;
        }
        return true;
    };
    if (a.isUnit()) return true;
    if (a.isInt()) return a.asInt() == b.asInt();
    if (a.isFloat()) return a.asFloat() == b.asFloat();
    if (a.isBool()) return a.asBool() == b.asBool();
    if (a.isString()) return a.asString() == b.asString();
    if (a.isKey()) return a.asKey() == b.asKey();
    if (a.isTuple()) return sameElems(a.asTuple().elems, b.asTuple().elems);
    if (a.isTable()) return sameElems(a.asTable().elems, b.asTable().elems);
    const Either& ea = a.asEither();
    const Either& eb = b.asEither();
    return ea.isRight == eb.isRight && valueEq(ea.payload, eb.payload);
}

} // namespace lambdap
