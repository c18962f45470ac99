#include "lambdap/syntax.hpp"

namespace lambdap {

namespace {

void print(std::string& out, const Expr& e);

void printList(std::string& out, const std::vector<ExprPtr>& xs, char open, char close) {
    out += open;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        print(out, *xs[i]);
    }
    out += close;
}

void print(std::string& out, const Expr& e) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, expr::Lit>) {
                out += printValue(n.value);
            } else if constexpr (std::is_same_v<T, expr::Var>) {
                out += n.name;
            } else if constexpr (std::is_same_v<T, expr::Builtin>) {
                out += "#" + n.name;
            } else if constexpr (std::is_same_v<T, expr::Lam>) {
                out += "(\\" + n.param + ". ";
                print(out, *n.body);
                out += ')';
            } else if constexpr (std::is_same_v<T, expr::App>) {
                out += '(';
                print(out, *n.fn);
                out += ' ';
                print(out, *n.arg);
                out += ')';
            } else if constexpr (std::is_same_v<T, expr::For>) {
                out += "(for " + n.indexVar + ":";
                print(out, *n.size);
                out += ". ";
                print(out, *n.body);
                out += ')';
            } else if constexpr (std::is_same_v<T, expr::Handle>) {
                out += "(handle {return |-> ";
                print(out, *n.handler.returnClause);
                out += ", " + n.handler.opName + " |-> ";
                print(out, *n.handler.opClause);
                out += ", traverse |-> ";
                print(out, *n.handler.traverseClause);
                out += "} ";
                print(out, *n.state);
                out += ' ';
                print(out, *n.body);
                out += ')';
            } else if constexpr (std::is_same_v<T, expr::Perform>) {
                out += "(perform " + n.opName + " ";
                print(out, *n.arg);
                out += ')';
            } else if constexpr (std::is_same_v<T, expr::TableLit>) {
                printList(out, n.elems, '[', ']');
            } else if constexpr (std::is_same_v<T, expr::TupleLit>) {
                printList(out, n.elems, '(', ')');
            } else if constexpr (std::is_same_v<T, expr::If>) {
                out += "(if ";
                print(out, *n.cond);
                out += " then ";
                print(out, *n.thenBranch);
                out += " else ";
                print(out, *n.elseBranch);
                out += ')';
            } else if constexpr (std::is_same_v<T, expr::CaseEither>) {
                out += "(case ";
                print(out, *n.scrutinee);
                out += " of Left " + n.leftVar + " -> ";
                print(out, *n.leftBody);
                out += " | Right " + n.rightVar + " -> ";
                print(out, *n.rightBody);
                out += ')';
            }
        },
        e.node);
}

} // namespace

std::string printExpr(const Expr& e) {
    std::string out;
    print(out, e);
    return out;
}

} // namespace lambdap
