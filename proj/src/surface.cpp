#include "lambdap/surface.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace lambdap {

bool isOperatorChar(char c) {
    switch (c) {
    case '+': case '-': case '*': case '/': case '<': case '>': case '=':
    case '!': case '&': case '|': case '^': case '~': case '@': case '$': case '?':
        return true;
    default:
        return false;
    }
}

bool isOperatorName(const std::string& name) {
    if (name.empty()) return false;
    for (char c : name) {
        if (!isOperatorChar(c)) return false;
    }
    return true;
}

namespace {

bool sameOpt(const SExprPtr& a, const SExprPtr& b) {
    if (!a || !b) return !a && !b;
    return sameSurface(*a, *b);
}

bool sameList(const std::vector<SExprPtr>& a, const std::vector<SExprPtr>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!sameOpt(a[i], b[i])) return false;
    }
    return true;
}

bool sameConstant(const Constant& a, const Constant& b) {
    if (a.index() != b.index()) return false;
    if (std::holds_alternative<double>(a)) {
        // bitwise, so -0.0 and 0.0 stay distinct
        double x = std::get<double>(a), y = std::get<double>(b);
        return x == y && std::signbit(x) == std::signbit(y);
    }
    return a == b;
}

} // namespace

bool samePattern(const Pattern& a, const Pattern& b) {
    if (a.kind != b.kind || a.name != b.name || a.elems.size() != b.elems.size()) return false;
    for (std::size_t i = 0; i < a.elems.size(); ++i) {
        if (!samePattern(*a.elems[i], *b.elems[i])) return false;
    }
    return true;
}

bool sameSurface(const SurfaceExpr& a, const SurfaceExpr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const T& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, surface::Lit>) {
                return sameConstant(x.value, y.value);
            } else if constexpr (std::is_same_v<T, surface::Var>) {
                return x.name == y.name;
            } else if constexpr (std::is_same_v<T, surface::Lam>) {
                return x.binder == y.binder && sameOpt(x.body, y.body);
            } else if constexpr (std::is_same_v<T, surface::App>) {
                return sameOpt(x.fn, y.fn) && sameOpt(x.arg, y.arg);
            } else if constexpr (std::is_same_v<T, surface::Infix>) {
                return x.op == y.op && sameOpt(x.lhs, y.lhs) && sameOpt(x.rhs, y.rhs);
            } else if constexpr (std::is_same_v<T, surface::For>) {
                return x.indexVar == y.indexVar && sameOpt(x.size, y.size) && sameOpt(x.body, y.body);
            } else if constexpr (std::is_same_v<T, surface::Handle>) {
                if (x.thunked != y.thunked || x.clauses.size() != y.clauses.size()) return false;
                for (std::size_t i = 0; i < x.clauses.size(); ++i) {
                    if (x.clauses[i].name != y.clauses[i].name) return false;
                    if (!sameOpt(x.clauses[i].body, y.clauses[i].body)) return false;
                }
                return sameOpt(x.state, y.state) && sameOpt(x.body, y.body);
            } else if constexpr (std::is_same_v<T, surface::Perform>) {
                return x.opName == y.opName;
            } else if constexpr (std::is_same_v<T, surface::Table> || std::is_same_v<T, surface::Tuple>) {
                return sameList(x.elems, y.elems);
            } else if constexpr (std::is_same_v<T, surface::If>) {
                return sameOpt(x.cond, y.cond) && sameOpt(x.thenBranch, y.thenBranch) &&
                       sameOpt(x.elseBranch, y.elseBranch);
            } else if constexpr (std::is_same_v<T, surface::Case>) {
                return x.leftVar == y.leftVar && x.rightVar == y.rightVar && sameOpt(x.scrutinee, y.scrutinee) &&
                       sameOpt(x.leftBody, y.leftBody) && sameOpt(x.rightBody, y.rightBody);
            } else if constexpr (std::is_same_v<T, surface::Bind>) {
                return samePattern(*x.pattern, *y.pattern) && sameOpt(x.rhs, y.rhs) && sameOpt(x.body, y.body);
            } else {
                return sameOpt(x.first, y.first) && sameOpt(x.rest, y.rest);
            }
        },
        a.node);
}

bool sameProgram(const SurfaceProgram& a, const SurfaceProgram& b) {
    if (a.definitions.size() != b.definitions.size()) return false;
    for (std::size_t i = 0; i < a.definitions.size(); ++i) {
        if (!samePattern(*a.definitions[i].pattern, *b.definitions[i].pattern)) return false;
        if (!sameOpt(a.definitions[i].body, b.definitions[i].body)) return false;
    }
    return sameOpt(a.main, b.main);
}

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
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
    return out + "\"";
}

std::string constantText(const Constant& c) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Unit>) {
                return "()";
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(x);
            } else if constexpr (std::is_same_v<T, double>) {
                return printValue(Value::floating(x));
            } else if constexpr (std::is_same_v<T, std::string>) {
                return quote(x);
            } else {
                return x ? "true" : "false";
            }
        },
        c);
}

std::string binderText(const std::string& name) {
    return isOperatorName(name) ? "(" + name + ")" : name;
}

bool isAtomic(const SurfaceExpr& e) {
    if (const auto* lit = std::get_if<surface::Lit>(&e.node)) {
        if (const auto* i = std::get_if<std::int64_t>(&lit->value)) return *i >= 0;
        if (const auto* d = std::get_if<double>(&lit->value)) return !std::signbit(*d);
        return true;
    }
    return std::holds_alternative<surface::Var>(e.node) || std::holds_alternative<surface::Perform>(e.node) ||
           std::holds_alternative<surface::Table>(e.node) || std::holds_alternative<surface::Tuple>(e.node);
}

std::string sub(const SurfaceExpr& e) {
    std::string text = printSurface(e);
    return isAtomic(e) ? text : "(" + text + ")";
}

std::string joined(const std::vector<SExprPtr>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += printSurface(*xs[i]);
    }
    return out;
}

} // namespace

std::string printPattern(const Pattern& p) {
    switch (p.kind) {
    case Pattern::Kind::Var: return p.name;
    case Pattern::Kind::Wildcard: return "_";
    case Pattern::Kind::Tuple:
    case Pattern::Kind::Table: {
        std::string out = p.kind == Pattern::Kind::Tuple ? "(" : "[";
        for (std::size_t i = 0; i < p.elems.size(); ++i) {
            if (i) out += ", ";
            out += printPattern(*p.elems[i]);
        }
        return out + (p.kind == Pattern::Kind::Tuple ? ")" : "]");
    }
    }
    return "_";
}

std::string printSurface(const SurfaceExpr& e) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, surface::Lit>) {
                return constantText(x.value);
            } else if constexpr (std::is_same_v<T, surface::Var>) {
                return binderText(x.name);
            } else if constexpr (std::is_same_v<T, surface::Lam>) {
                return "\\" + binderText(x.binder) + ". " + sub(*x.body);
            } else if constexpr (std::is_same_v<T, surface::App>) {
                return sub(*x.fn) + " " + sub(*x.arg);
            } else if constexpr (std::is_same_v<T, surface::Infix>) {
                return sub(*x.lhs) + " " + x.op + " " + sub(*x.rhs);
            } else if constexpr (std::is_same_v<T, surface::For>) {
                return "for " + x.indexVar + ":" + sub(*x.size) + ". " + sub(*x.body);
            } else if constexpr (std::is_same_v<T, surface::Handle>) {
                std::string out = x.thunked ? "handler {" : "handle {";
                for (std::size_t i = 0; i < x.clauses.size(); ++i) {
                    if (i) out += ", ";
                    out += x.clauses[i].name + " |-> " + sub(*x.clauses[i].body);
                }
                return out + "} " + sub(*x.state) + " " + sub(*x.body);
            } else if constexpr (std::is_same_v<T, surface::Perform>) {
                return "perform " + x.opName;
            } else if constexpr (std::is_same_v<T, surface::Table>) {
                return "[" + joined(x.elems) + "]";
            } else if constexpr (std::is_same_v<T, surface::Tuple>) {
                return "(" + joined(x.elems) + ")";
            } else if constexpr (std::is_same_v<T, surface::If>) {
                return "if " + sub(*x.cond) + " then " + sub(*x.thenBranch) + " else " + sub(*x.elseBranch);
            } else if constexpr (std::is_same_v<T, surface::Case>) {
                return "case " + sub(*x.scrutinee) + " of Left " + x.leftVar + " -> " + sub(*x.leftBody) +
                       " | Right " + x.rightVar + " -> " + sub(*x.rightBody);
            } else if constexpr (std::is_same_v<T, surface::Bind>) {
                return printPattern(*x.pattern) + " <- " + sub(*x.rhs) + "; " + sub(*x.body);
            } else {
                return sub(*x.first) + "; " + sub(*x.rest);
            }
        },
        e.node);
}

std::string printProgram(const SurfaceProgram& p) {
    std::string out;
    for (const Definition& d : p.definitions) {
        std::string lhs = d.pattern->kind == Pattern::Kind::Var ? binderText(d.pattern->name) : printPattern(*d.pattern);
        out += lhs + " = " + printSurface(*d.body) + "\n";
    }
    if (p.main) {
        out += printSurface(*p.main) + "\n";
    }
    return out;
}

} // namespace lambdap
