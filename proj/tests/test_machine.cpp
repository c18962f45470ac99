#include <random>

#include "gen.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "lambdap/builtins.hpp"
#include "lambdap/machine.hpp"
#include "lambdap/parser.hpp"

using namespace lambdap;

namespace {

Step evalTop(const std::string& src) { return eval(Env{}, desugarExpression(*parseExpression(src)), EvalContext{}); }

std::string evalError(const std::string& src) {
    try {
        evalTop(src);
    } catch (const EvalError& e) {
        return e.what();
    }
    return "";
}

const std::string kReaderH = "{ return |-> \\s.\\x. x, ask |-> \\s.\\x.\\k. k s 42 }";

} // namespace

TEST_CASE("eval: app and index") {
    Step a = evalTop("(\\x. x) 7");
    REQUIRE(a.isDone());
    CHECK(a.value().asInt() == 7);
    Step b = evalTop("[10, 20, 30] 1");
    REQUIRE(b.isDone());
    CHECK(b.value().asInt() == 20);
}

TEST_CASE("eval: an unhandled perform suspends with an empty chain") {
    Step s = evalTop("perform ask ()");
    REQUIRE_FALSE(s.isDone());
    const auto* op = std::get_if<OpRequest>(&s.suspension().request);
    REQUIRE(op != nullptr);
    CHECK(op->opName == "ask");
    CHECK(op->arg.isUnit());
    CHECK(s.suspension().chain.empty());
}

TEST_CASE("eval: a loop outside any handler suspends with a loop request") {
    Step s = evalTop("1 + length (for i:3. i)");
    REQUIRE_FALSE(s.isDone());
    const auto* loop = std::get_if<LoopRequest>(&s.suspension().request);
    REQUIRE(loop != nullptr);
    CHECK(loop->size == 3);
    CHECK_FALSE(s.suspension().chain.empty());
    Step resumed = s.suspension().chain.resume(Value::table({Value::unit(), Value::unit()}), EvalContext{});
    REQUIRE(resumed.isDone());
    CHECK(resumed.value().asInt() == 3);
}

TEST_CASE("eval: runtime errors") {
    CHECK(evalError("3 1").rfind("applied non-function", 0) == 0);
    CHECK(evalError("\"s\" 1").rfind("applied non-function", 0) == 0);
    CHECK(evalError("(1, 2) 0").rfind("applied non-function", 0) == 0);
    CHECK(evalError("[1, 2] 2") == "index out of bounds: index 2 for table of length 2");
    CHECK(evalError("[1, 2] (-1)") == "index out of bounds: index -1 for table of length 2");
    CHECK(evalError("for i:(-1). i").rfind("for size not a non-negative integer", 0) == 0);
    CHECK(evalError("for i:\"3\". i").rfind("for size not a non-negative integer", 0) == 0);
    CHECK(evalError("if 1 then 2 else 3") == "if condition is not a boolean (got int)");
    CHECK(evalError("case 1 of Left x -> x | Right y -> y").rfind("case scrutinee is not Left or Right", 0) == 0);
    CHECK(testing::runError("1 + 2.0").find("operands must be two ints or two floats") != std::string::npos);
}

TEST_CASE("applyValue: tables, builtins and non-functions") {
    Value table = Value::table({Value::integer(1), Value::integer(2), Value::integer(3)});
    Step s = applyValue(table, Value::integer(0), EvalContext{});
    REQUIRE(s.isDone());
    CHECK(s.value().asInt() == 1);
    CHECK_THROWS_WITH_AS(applyValue(Value::integer(3), Value::integer(1), EvalContext{}),
                         doctest::Contains("applied non-function"), EvalError);
    Value plus = builtinValue(*findBuiltin("+"));
    Value args[] = {Value::integer(2), Value::integer(5)};
    Step sum = applyAll(plus, args, EvalContext{});
    REQUIRE(sum.isDone());
    CHECK(sum.value().asInt() == 7);
}

TEST_CASE("dispatch: return clause receives state and value") {
    CHECK(testing::run("handle { return |-> \\s.\\x. (x, s), accum |-> \\s.\\x.\\k. k s () } 0 \"v\"") == "(\"v\", 0)");
}

TEST_CASE("dispatch: reader example") {
    CHECK(testing::run("handle " + kReaderH + " () (for x:5. perform ask ())") == "[42, 42, 42, 42, 42]");
}

TEST_CASE("dispatch: innermost handler wins") {
    std::string inner = "{ ask |-> \\s.\\x.\\k. k s 1 }";
    std::string outer = "{ ask |-> \\s.\\x.\\k. k s 2 }";
    CHECK(testing::run("handle " + outer + " () (handle " + inner + " () (perform ask ()))") == "1");
    CHECK(testing::run("handle " + outer + " () (handle " + inner + " () (for i:2. perform ask ()))") == "[1, 1]");
}

TEST_CASE("dispatch: forwarding keeps the inner handler's state") {
    std::string reader = "{ ask |-> \\s.\\x.\\k. k s 10 }";
    std::string body = "runAccum (+) 0 (\\_. perform accum 1; x <- perform ask (); perform accum x; x)";
    CHECK(testing::run("handle " + reader + " () (" + body + ")") == "(10, 11)");
    // the same with the forwarded operation inside a loop
    std::string loopBody = "runAccum (+) 0 (\\_. perform accum 1; for i:3. perform accum (perform ask () + i))";
    CHECK(testing::run("handle " + reader + " () (" + loopBody + ")") == "([(), (), ()], 34)");
}

TEST_CASE("dispatch: state threads through sequential operations") {
    CHECK(testing::run("runAccum (++) \"\" (\\_. perform accum \"a\"; perform accum \"b\"; perform accum \"c\")") ==
          "((), \"abc\")");
    std::string counter = "{ tick |-> \\s.\\x.\\k. k (s + 1) s }";
    CHECK(testing::run("handle " + counter + " 0 (a <- perform tick (); b <- perform tick (); c <- perform tick (); [a, b, c])") ==
          "[0, 1, 2]");
}

TEST_CASE("dispatch: resumptions are multi-shot") {
    std::string choose = "{ choose |-> \\s.\\x.\\k. (k s true, k (s + 1) false) }";
    CHECK(testing::run("handle " + choose + " 0 (if perform choose () then 1 else 2)") == "(1, 2)");
    CHECK(testing::run("handle { return |-> \\s.\\x. (x, s), choose |-> \\s.\\x.\\k. [k s 1, k (s + 10) 2, k s 3] } 0 "
                       "(v <- perform choose (); v * 100)") == "[(100, 0), (200, 10), (300, 0)]");
    // the same resumption used from inside parallel iterations
    CHECK(testing::run("handle { pick |-> \\s.\\x.\\k. for i:4. k s i } () (perform pick () * 2)") == "[0, 2, 4, 6]");
}

TEST_CASE("dispatch: a clause may drop the resumption") {
    CHECK(testing::run("handle { abort |-> \\s.\\x.\\k. 99 } () (perform abort (); 1)") == "99");
}

TEST_CASE("dispatch: every handler intercepts loops") {
    CHECK(testing::run("handle { foo |-> \\s.\\x.\\k. k s x, traverse |-> \\n.\\s.\\l.\\k. n } () (for i:7. i)") == "7");
    CHECK(testing::run("handle { foo |-> \\s.\\x.\\k. k s x, traverse |-> \\n.\\s.\\l.\\k. k s [9] } () "
                       "(xs <- for i:7. i; xs 0)") == "9");
}

TEST_CASE("dispatch: the loop body checks its state table") {
    std::string h = "{ foo |-> \\s.\\x.\\k. k s x, traverse |-> \\n.\\s.\\l.\\k. k s (l [1]) }";
    CHECK(testing::runError("handle " + h + " () (for i:3. i)") ==
          "state table length mismatch: loop of size 3 got table of length 1");
    std::string h2 = "{ foo |-> \\s.\\x.\\k. k s x, traverse |-> \\n.\\s.\\l.\\k. k s (l 5) }";
    CHECK(testing::runError("handle " + h2 + " () (for i:3. i)").rfind("state table length mismatch", 0) == 0);
}

TEST_CASE("dispatch: each iteration gets its own state") {
    std::string h = "{ return |-> \\s.\\x. x + s, ask |-> \\s.\\x.\\k. k s s, "
                    "traverse |-> \\n.\\s.\\l.\\k. k s (l (for j:n. 100 * j)) }";
    // iterations return [0, 201, 402]; the outer return clause adds the state 1
    CHECK(testing::run("handle " + h + " 1 (xs <- for i:3. perform ask () + i; xs 0 + xs 1 + xs 2)") == "604");
}

TEST_CASE("handlers with no matching operation are transparent") {
    std::mt19937_64 rng(99);
    gen::Options opts;
    opts.effects = false;
    for (int i = 0; i < 150; ++i) {
        std::string body = gen::program(rng, opts);
        CAPTURE(body);
        std::string plain = testing::run(body);
        CHECK(testing::run("handle { noop |-> \\s.\\x.\\k. k s x } 0 (" + body + ")") == plain);
        CHECK(testing::run("handle { noop |-> \\s.\\x.\\k. k s x, traverse |-> \\n.\\s.\\l.\\k. k s (l (for j:n. s)) } () (" +
                           body + ")") == plain);
    }
}

TEST_CASE("handler depth is recorded in the trace") {
    lambdap::RunResult r = testing::runTraced(
        "handle { a |-> \\s.\\x.\\k. k s 1 } () (handle { b |-> \\s.\\x.\\k. k s 2 } () (perform a () + perform b ()))");
    CHECK(printValue(r.value) == "3");
    std::vector<std::string> performs;
    for (const auto& e : r.trace)
        if (e.rule == Rule::Perform) performs.push_back(e.detail + "@" + std::to_string(e.depth));
    // a's handler is the outermost frame; b's sits one frame deep
    CHECK(performs == std::vector<std::string>{"a@0", "b@1"});
}
