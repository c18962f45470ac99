#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "lambdap/error.hpp"
#include "lambdap/value.hpp"

namespace lambdap {

// Desugared core syntax. Every node is immutable once built and shared by
// pointer, so closures and resumptions can keep pieces alive cheaply.
namespace expr {

struct Lit {
    Value value;
};

struct Var {
    std::string name;
    std::size_t index = 0;  // distance to the binder, set by resolve()
};

struct Lam {
    std::string param;
    ExprPtr body;
};

struct App {
    ExprPtr fn;
    ExprPtr arg;
};

struct For {
    std::string indexVar;
    ExprPtr size;
    ExprPtr body;
};

struct HandlerExpr {
    std::string opName;
    ExprPtr returnClause;
    ExprPtr opClause;
    ExprPtr traverseClause;
};

struct Handle {
    HandlerExpr handler;
    ExprPtr state;
    ExprPtr body;
};

struct Perform {
    std::string opName;
    ExprPtr arg;
};

struct TableLit {
    std::vector<ExprPtr> elems;
};

struct TupleLit {
    std::vector<ExprPtr> elems;
};

struct If {
    ExprPtr cond;
    ExprPtr thenBranch;
    ExprPtr elseBranch;
};

struct CaseEither {
    ExprPtr scrutinee;
    std::string leftVar;
    ExprPtr leftBody;
    std::string rightVar;
    ExprPtr rightBody;
};

struct Builtin {
    std::string name;
};

} // namespace expr

struct Expr {
    using Node = std::variant<expr::Lit,
                              expr::Var,
                              expr::Lam,
                              expr::App,
                              expr::For,
                              expr::Handle,
                              expr::Perform,
                              expr::TableLit,
                              expr::TupleLit,
                              expr::If,
                              expr::CaseEither,
                              expr::Builtin>;
    Node node;
    SourcePos pos;
};

template <typename T>
ExprPtr makeExpr(T node, SourcePos pos = {}) {
    return std::make_shared<const Expr>(Expr{Expr::Node(std::move(node)), pos});
}

// Debug rendering of core syntax (one line, fully parenthesized).
std::string printExpr(const Expr& e);

} // namespace lambdap
