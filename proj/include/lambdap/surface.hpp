#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "lambdap/error.hpp"
#include "lambdap/value.hpp"

namespace lambdap {

// Surface syntax as written by users, before sugar is removed.

struct SurfaceExpr;
using SExprPtr = std::shared_ptr<const SurfaceExpr>;

struct Pattern;
using PatternPtr = std::shared_ptr<const Pattern>;

struct Pattern {
    enum class Kind { Var, Wildcard, Tuple, Table };
    Kind kind = Kind::Wildcard;
    std::string name;  // Kind::Var
    std::vector<PatternPtr> elems;
    SourcePos pos;
};

using Constant = std::variant<Unit, std::int64_t, double, std::string, bool>;

namespace surface {

struct Lit { Constant value; };
struct Var { std::string name; };
struct Lam { std::string binder; SExprPtr body; };  // binder "_" ignores its argument
struct App { SExprPtr fn; SExprPtr arg; };
struct Infix { std::string op; SExprPtr lhs; SExprPtr rhs; };
struct For { std::string indexVar; SExprPtr size; SExprPtr body; };

struct Clause {
    std::string name;  // "return", "traverse" or an operation name
    SExprPtr body;
    SourcePos pos;
};

struct Handle {
    bool thunked = false;  // `handler` form
    std::vector<Clause> clauses;
    SExprPtr state;
    SExprPtr body;
};

struct Perform { std::string opName; };  // unapplied `perform op`
struct Table { std::vector<SExprPtr> elems; };
struct Tuple { std::vector<SExprPtr> elems; };
struct If { SExprPtr cond; SExprPtr thenBranch; SExprPtr elseBranch; };

struct Case {
    SExprPtr scrutinee;
    std::string leftVar;
    SExprPtr leftBody;
    std::string rightVar;
    SExprPtr rightBody;
};

struct Bind { PatternPtr pattern; SExprPtr rhs; SExprPtr body; };  // p <- rhs; body
struct Seq { SExprPtr first; SExprPtr rest; };                     // first; rest

} // namespace surface

struct SurfaceExpr {
    using Node = std::variant<surface::Lit,
                              surface::Var,
                              surface::Lam,
                              surface::App,
                              surface::Infix,
                              surface::For,
                              surface::Handle,
                              surface::Perform,
                              surface::Table,
                              surface::Tuple,
                              surface::If,
                              surface::Case,
                              surface::Bind,
                              surface::Seq>;
    Node node;
    SourcePos pos;
};

template <typename T>
SExprPtr makeSurface(T node, SourcePos pos = {}) {
    return std::make_shared<const SurfaceExpr>(SurfaceExpr{SurfaceExpr::Node(std::move(node)), pos});
}

struct Definition {
    PatternPtr pattern;  // usually a plain name
    SExprPtr body;
};

struct SurfaceProgram {
    std::vector<Definition> definitions;
    SExprPtr main;  // null when the file has no trailing expression
};

// Structural equality, ignoring source positions.
bool sameSurface(const SurfaceExpr& a, const SurfaceExpr& b);
bool samePattern(const Pattern& a, const Pattern& b);
bool sameProgram(const SurfaceProgram& a, const SurfaceProgram& b);

// Re-parseable source text for a surface AST.
std::string printSurface(const SurfaceExpr& e);
std::string printPattern(const Pattern& p);
std::string printProgram(const SurfaceProgram& p);

// Operator identifiers are made of these characters.
bool isOperatorChar(char c);
bool isOperatorName(const std::string& name);

} // namespace lambdap
