#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "lambdap/parser.hpp"

using namespace lambdap;

namespace {

std::string core(const std::string& src) { return printExpr(*desugarExpression(*parseExpression(src))); }

class SurfaceGen {
public:
    explicit SurfaceGen(std::uint64_t seed) : rng_(seed) {}

    SurfaceProgram program() {
        SurfaceProgram p;
        int defs = pick(3);
        for (int i = 0; i < defs; ++i) {
            PatternPtr pat;
            if (pick(4) == 0) {
                pat = tuplePattern();
            } else {
                auto v = std::make_shared<Pattern>();
                v->kind = Pattern::Kind::Var;
                v->name = pick(5) == 0 ? "<+" + std::string(static_cast<std::size_t>(i) + 1, '>') : "def" + std::to_string(i);
                pat = v;
            }
            p.definitions.push_back({pat, expr(3)});
        }
        if (defs == 0 || pick(3) != 0) p.main = expr(4);
        return p;
    }

    SExprPtr expr(int depth) {
        if (depth <= 0) return leaf();
        switch (pick(16)) {
        case 0: return makeSurface(surface::Lam{binder(), expr(depth - 1)});
        case 1: case 2: return makeSurface(surface::App{expr(depth - 1), expr(depth - 1)});
        case 3: {
            static const char* ops[] = {"+", "-", "*", "/", "++", "==", "<", "<=", "<>", ">>="};
            return makeSurface(surface::Infix{ops[pick(10)], expr(depth - 1), expr(depth - 1)});
        }
        case 4: return makeSurface(surface::For{pick(4) == 0 ? "_" : name(), expr(depth - 1), expr(depth - 1)});
        case 5: {
            surface::Handle h;
            h.thunked = pick(2) == 0;
            if (pick(2)) h.clauses.push_back({"return", expr(depth - 1), {}});
            h.clauses.push_back({"op" + std::to_string(pick(3)), expr(depth - 1), {}});
            if (pick(2)) h.clauses.push_back({"traverse", expr(depth - 1), {}});
            h.state = expr(depth - 1);
            h.body = expr(depth - 1);
            return makeSurface(std::move(h));
        }
        case 6: return makeSurface(surface::App{makeSurface(surface::Perform{"op" + std::to_string(pick(3))}), expr(depth - 1)});
        case 7: {
            std::vector<SExprPtr> xs;
            for (int i = pick(4); i > 0; --i) xs.push_back(expr(depth - 1));
            return makeSurface(surface::Table{std::move(xs)});
        }
        case 8: {
            std::vector<SExprPtr> xs;
            for (int i = 2 + pick(2); i > 0; --i) xs.push_back(expr(depth - 1));
            return makeSurface(surface::Tuple{std::move(xs)});
        }
        case 9: return makeSurface(surface::If{expr(depth - 1), expr(depth - 1), expr(depth - 1)});
        case 10: return makeSurface(surface::Case{expr(depth - 1), name(), expr(depth - 1), name(), expr(depth - 1)});
        case 11: return makeSurface(surface::Bind{pattern(2), expr(depth - 1), expr(depth - 1)});
        case 12: return makeSurface(surface::Seq{expr(depth - 1), expr(depth - 1)});
        default: return leaf();
        }
    }

private:
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

    std::string name() {
        static const char* names[] = {"x", "y", "k", "xs", "foo_bar", "x'", "acc2", "Left", "Right"};
        std::string n = names[pick(9)];
        return n == "Left" || n == "Right" ? "z" : n;
    }

    std::string binder() {
        switch (pick(5)) {
        case 0: return "_";
        case 1: return "<>";
        default: return name();
        }
    }

    SExprPtr leaf() {
        switch (pick(10)) {
        case 0: return makeSurface(surface::Lit{Constant{std::int64_t{pick(100)} - 50}});
        case 1: return makeSurface(surface::Lit{Constant{std::uniform_real_distribution<double>(-100, 100)(rng_)}});
        case 2: return makeSurface(surface::Lit{Constant{std::string(pick(2) ? "a \"q\"\n" : "")}});
        case 3: return makeSurface(surface::Lit{Constant{pick(2) == 1}});
        case 4: return makeSurface(surface::Lit{Constant{Unit{}}});
        case 5: return makeSurface(surface::Perform{"op" + std::to_string(pick(3))});
        case 6: return makeSurface(surface::Var{pick(2) ? "Left" : "++"});
        case 7: return makeSurface(surface::Lit{Constant{std::numeric_limits<std::int64_t>::min()}});
        default: return makeSurface(surface::Var{name()});
        }
    }

    PatternPtr pattern(int depth) {
        int k = depth <= 0 ? pick(2) : pick(4);
        auto p = std::make_shared<Pattern>();
        if (k == 0) {
            p->kind = Pattern::Kind::Var;
            p->name = name();
        } else if (k == 1) {
            p->kind = Pattern::Kind::Wildcard;
        } else {
            p->kind = k == 2 ? Pattern::Kind::Tuple : Pattern::Kind::Table;
            for (int i = 2 + pick(2); i > 0; --i) p->elems.push_back(pattern(depth - 1));
        }
        return p;
    }

    PatternPtr tuplePattern() {
        auto p = std::make_shared<Pattern>();
        p->kind = Pattern::Kind::Tuple;
        for (int i = 0; i < 2; ++i) {
            auto v = std::make_shared<Pattern>();
            v->kind = Pattern::Kind::Var;
            v->name = "t" + std::to_string(counter_++);
            p->elems.push_back(v);
        }
        return p;
    }

    std::mt19937_64 rng_;
    int counter_ = 0;
};

} // namespace

TEST_CASE("parse: core forms") {
    CHECK(core("\\x. x") == "(\\x. x)");
    CHECK(printSurface(*parseExpression("\\x. x")) == "\\x. x");
    CHECK(sameSurface(*parseExpression("for i:5. perform ask ()"),
                      *makeSurface(surface::For{"i", makeSurface(surface::Lit{Constant{std::int64_t{5}}}),
                                                makeSurface(surface::App{makeSurface(surface::Perform{"ask"}),
                                                                         makeSurface(surface::Lit{Constant{Unit{}}})})})));
    CHECK(sameSurface(*parseExpression("x <- e1; e2"),
                      *makeSurface(surface::Bind{std::make_shared<Pattern>(Pattern{Pattern::Kind::Var, "x", {}, {}}),
                                                 makeSurface(surface::Var{"e1"}), makeSurface(surface::Var{"e2"})})));
}

TEST_CASE("parse: precedence and associativity") {
    CHECK(sameSurface(*parseExpression("1 + 2 * 3"), *parseExpression("1 + (2 * 3)")));
    CHECK(sameSurface(*parseExpression("1 - 2 - 3"), *parseExpression("(1 - 2) - 3")));
    CHECK(sameSurface(*parseExpression("a ++ b == c"), *parseExpression("(a ++ b) == c")));
    CHECK(sameSurface(*parseExpression("a == b <> c"), *parseExpression("(a == b) <> c")));
    CHECK(sameSurface(*parseExpression("f x y + g z"), *parseExpression("((f x) y) + (g z)")));
    CHECK(sameSurface(*parseExpression("\\x. x; y"), *parseExpression("\\x. (x; y)")));
    CHECK(testing::run("1 + 2 * 3") == "7");
    CHECK(testing::run("10 - 2 - 3") == "5");
    CHECK(testing::run("f = \\x. x - 1\nf 3 - 1") == "1");
}

TEST_CASE("parse: sequencing and loop bodies") {
    CHECK(sameSurface(*parseExpression("a; b; c"), *parseExpression("a; (b; c)")));
    CHECK(testing::run("xs <- for i:3. i * 2; length xs") == "3");
    CHECK(testing::run("for i:3. if i == 1 then 10 else i") == "[0, 10, 2]");
}

TEST_CASE("parse: operator identifiers") {
    CHECK(testing::run("(\\(<>). 2 <> 3) (+)") == "5");
    CHECK(testing::run("(<+>) = \\a.\\b. a * 10 + b\n1 <+> 2 <+> 3") == "123");
    CHECK(testing::run("(+) 1 2") == "3");
    CHECK(testing::run("reduce (++) [\"a\", \"b\"]") == "\"ab\"");
}

TEST_CASE("parse: literals") {
    CHECK(testing::run("-3") == "-3");
    CHECK(testing::run("4 -3") == "1");
    CHECK(testing::run("[-1, 2]") == "[-1, 2]");
    CHECK(testing::run("1.5e3") == "1500.0");
    CHECK(testing::run("\"tab\\tq\\\"\"") == "\"tab\\tq\\\"\"");
    CHECK(testing::run("\"\\x41\"") == "\"A\"");
    CHECK(testing::run("-9223372036854775808") == "-9223372036854775808");
    CHECK(testing::parseError("9223372036854775808").find("out of range") != std::string::npos);
}

TEST_CASE("parse: comments and definitions") {
    std::string src = "// leading comment\n"
                      "a = 1 // trailing\n"
                      "b = a +\n"
                      "  2\n"
                      "(c, d) = (b, 10)\n"
                      "c * d\n";
    CHECK(testing::run(src) == "30");
    CHECK(testing::run("main = 5") == "5");
    CHECK(testing::run("main = 5\nmain + 1") == "6");
}

TEST_CASE("parse errors carry line and column") {
    CHECK(testing::parseError("x = 1\ny = (2\n") .rfind("3:1:", 0) == 0);
    CHECK(testing::parseError("\\x. y", false) == "1:5: unbound variable 'y'");
    CHECK(testing::parseError("a = 1\na = 2\na").find("duplicate definition of 'a'") != std::string::npos);
    CHECK(testing::parseError("handle { return |-> 1 } () 2").find("handler has no operation clause") != std::string::npos);
    CHECK(testing::parseError("handle { a |-> 1, a |-> 2 } () 2").find("duplicate clause") != std::string::npos);
    CHECK(testing::parseError("handle { a |-> 1, b |-> 2 } () 2").find("exactly one operation") != std::string::npos);
    CHECK_FALSE(testing::parseError("a = 1").empty());
    CHECK_FALSE(testing::parseError("for i 3. i").empty());
    CHECK_FALSE(testing::parseError("\"unterminated").empty());
}

TEST_CASE("desugar: handle defaults and handler sugar") {
    // default return and traverse give the same answer as explicit ones
    CHECK(testing::run(testing::program("reader_default.lp")) == testing::run(testing::program("reader.lp")));
    // handler h s e applied to () is handle h s (e ())
    std::string h = "{ ask |-> \\s.\\x.\\k. k s (s + 1) }";
    CHECK(testing::run("(handler " + h + " 4 (\\_. perform ask () * 2)) ()") ==
          testing::run("handle " + h + " 4 ((\\_. perform ask () * 2) ())"));
    CHECK(testing::run("f = handler " + h + " 4 (\\_. 1)\nf") == "<function>");
}

TEST_CASE("desugar: patterns bind by projection") {
    CHECK(testing::run("(_, total) <- runAccum (+) 0 (\\_. perform accum 5); total") == "5");
    CHECK(testing::run("(a, (b, c)) <- (1, (2, 3)); [a, b, c]") == "[1, 2, 3]");
    CHECK(testing::run("(a, b, c) <- (1, 2, 3); c") == "3");
    CHECK(testing::run("[p, q] <- [4, 5]; p * q") == "20");
    CHECK(testing::runError("(a, b) <- (1, 2, 3); a").find("fst: expected a pair") == 0);
    CHECK(testing::runError("[p, q] <- [1]; p").find("pattern arity mismatch") != std::string::npos);
    CHECK(testing::runError("(a, b) <- 7; a").rfind("fst: expected a pair", 0) == 0);
}

TEST_CASE("desugar introduces no captures") {
    // user names that look like the binders a desugaring might pick
    CHECK(testing::run("x = 1\ns = 2\nk = 3\nhandle { ask |-> \\a.\\b.\\c. c a (x + s + k) } () (perform ask ())") == "6");
    CHECK(testing::run("n = 10\nl = 20\nhandle { ask |-> \\a.\\b.\\c. c a n } () (for i:2. perform ask () + l)") ==
          "[30, 30]");
    CHECK(testing::run("_a = 1\n(p, q) <- (_a, 2); p + q") == "3");
}

TEST_CASE("printProgram then parse is the identity on generated programs") {
    SurfaceGen g(2024);
    for (int i = 0; i < 400; ++i) {
        SurfaceProgram p = g.program();
        std::string text = printProgram(p);
        CAPTURE(text);
        SurfaceProgram back = parse(text);
        CHECK(sameProgram(p, back));
        CHECK(printProgram(back) == text);
    }
}
