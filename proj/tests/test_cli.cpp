#include <algorithm>
#include <fstream>

#include "cli_runner.hpp"
#include "doctest.h"

using testing::programPath;
using testing::runCli;

namespace {

std::string writeTemp(const std::string& name, const std::string& text) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path.string();
}

} // namespace

TEST_CASE("cli: run prints the value") {
    auto r = runCli("run '" + programPath("reader.lp") + "'");
    CHECK(r.exitCode == 0);
    CHECK(r.out == "[42, 42, 42, 42, 42]\n");
    CHECK(r.err.empty());
    auto s = runCli("run '" + programPath("sum.lp") + "'");
    CHECK(s.exitCode == 0);
    CHECK(s.out == "6\n");
}

TEST_CASE("cli: runtime errors exit 1") {
    auto r = runCli("run '" + programPath("unhandled.lp") + "'");
    CHECK(r.exitCode == 1);
    CHECK(r.out.empty());
    CHECK(r.err == "runtime error: unhandled operation ask\n");
    auto oob = runCli("run '" + writeTemp("lambdap_oob.lp", "[1, 2] 5\n") + "'");
    CHECK(oob.exitCode == 1);
    CHECK(oob.err.rfind("runtime error: index out of bounds", 0) == 0);
}

TEST_CASE("cli: parse errors exit 2 with a position") {
    std::string bad = writeTemp("lambdap_bad.lp", "x = 1\ny = (\n");
    auto r = runCli("run '" + bad + "'");
    CHECK(r.exitCode == 2);
    CHECK(r.err.rfind("parse error: 3:1: ", 0) == 0);
    auto c = runCli("check '" + bad + "'");
    CHECK(c.exitCode == 2);
    auto unbound = runCli("check '" + writeTemp("lambdap_unbound.lp", "\\x. nope\n") + "'");
    CHECK(unbound.exitCode == 2);
    CHECK(unbound.err == "parse error: 1:5: unbound variable 'nope'\n");
}

TEST_CASE("cli: check only parses") {
    auto r = runCli("check '" + programPath("unhandled.lp") + "'");
    CHECK(r.exitCode == 0);
    CHECK(r.out.empty());
    CHECK(r.err.empty());
}

TEST_CASE("cli: --no-prelude hides the handlers") {
    auto r = runCli("run --no-prelude '" + programPath("sum.lp") + "'");
    CHECK(r.exitCode == 2);
    CHECK(r.err.find("unbound variable 'runAccum'") != std::string::npos);
    auto plain = runCli("run --no-prelude '" + programPath("reader.lp") + "'");
    CHECK(plain.exitCode == 0);
    CHECK(plain.out == "[42, 42, 42, 42, 42]\n");
}

TEST_CASE("cli: usage errors exit 3") {
    CHECK(runCli("").exitCode == 3);
    CHECK(runCli("run").exitCode == 3);
    CHECK(runCli("run /nonexistent/file.lp").exitCode == 3);
    CHECK(runCli("run --workers 0 '" + programPath("sum.lp") + "'").exitCode == 3);
    CHECK(runCli("run --workers many '" + programPath("sum.lp") + "'").exitCode == 3);
    CHECK(runCli("run --mode eager '" + programPath("sum.lp") + "'").exitCode == 3);
    CHECK(runCli("run --frobnicate '" + programPath("sum.lp") + "'").exitCode == 3);
    CHECK(runCli("eval '" + programPath("sum.lp") + "'").exitCode == 3);
    CHECK(runCli("--help").exitCode == 0);
}

TEST_CASE("cli: --trace writes tab-separated events to stderr") {
    auto r = runCli("run --trace '" + programPath("reader.lp") + "'");
    CHECK(r.exitCode == 0);
    CHECK(r.out == "[42, 42, 42, 42, 42]\n");
    int traverse = 0, topReturn = 0, lines = 0;
    std::istringstream in(r.err);
    for (std::string line; std::getline(in, line);) {
        ++lines;
        CHECK(std::count(line.begin(), line.end(), '\t') == 3);
        traverse += line.find("\ttraverse\t") != std::string::npos;
        topReturn += line.rfind("-\treturn\t", 0) == 0;
    }
    CHECK(lines > 0);
    CHECK(traverse == 1);
    CHECK(topReturn == 1);
}

TEST_CASE("cli: output is identical across workers, modes and runs") {
    for (const std::string& name : testing::examplePrograms()) {
        CAPTURE(name);
        std::string file = "'" + programPath(name) + "'";
        auto base = runCli("run --trace --workers 1 " + file);
        for (int workers : {1, 2, 8}) {
            for (int rep = 0; rep < 2; ++rep) {
                auto r = runCli("run --trace --workers " + std::to_string(workers) + " " + file);
                CHECK(r.exitCode == base.exitCode);
                CHECK(r.out == base.out);
                CHECK(r.err == base.err);
            }
        }
        auto seq = runCli("run --trace --mode sequential " + file);
        CHECK(seq.out == base.out);
        CHECK(seq.err == base.err);
    }
}
