// lambdap: run or check λᵖ programs.
//
//   lambdap run prog.lp [--trace] [--workers N] [--mode parallel|sequential] [--no-prelude]
//   lambdap check prog.lp [--no-prelude]
//
// Exit codes: 0 ok, 1 runtime error, 2 parse error, 3 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "lambdap/error.hpp"
#include "lambdap/pipeline.hpp"
#include "lambdap/runtime.hpp"
#include "lambdap/value.hpp"

namespace {

enum Exit { kOk = 0, kRuntime = 1, kParse = 2, kUsage = 3 };

bool readFile(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream buf;
    buf << in.rdbuf();
    out = buf.str();
    return true;
}

void writeTrace(const lambdap::TraceLog& trace) {
    std::string out;
    for (const auto& e : trace) {
        out += lambdap::formatTraceEvent(e);
        out += '\n';
        if (out.size() > (1u << 16)) {
            std::fwrite(out.data(), 1, out.size(), stderr);
            out.clear();
        }
    }
    std::fwrite(out.data(), 1, out.size(), stderr);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interpreter for the lambda calculus with parallel effect handlers", "lambdap"};
    app.require_subcommand(1);

    std::string file;
    bool trace = false;
    bool noPrelude = false;
    int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::string mode = "parallel";

    CLI::App* run = app.add_subcommand("run", "Evaluate a program and print its value");
    run->add_option("file", file, "Program source (.lp)")->required()->check(CLI::ExistingFile);
    run->add_flag("--trace", trace, "Print fired reduction rules to stderr");
    run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    run->add_option("--mode", mode, "Loop execution strategy")->check(CLI::IsMember({"parallel", "sequential"}));
    run->add_flag("--no-prelude", noPrelude, "Do not load the prelude handlers");

    CLI::App* check = app.add_subcommand("check", "Parse and desugar a program");
    check->add_option("file", file, "Program source (.lp)")->required()->check(CLI::ExistingFile);
    check->add_flag("--no-prelude", noPrelude, "Do not load the prelude handlers");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    std::string source;
    if (!readFile(file, source)) {
        std::cerr << "usage error: cannot read " << file << "\n";
        return kUsage;
    }

    lambdap::ExprPtr program;
    try {
        program = lambdap::compile(source, !noPrelude);
    } catch (const lambdap::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    }
    if (check->parsed()) return kOk;

    lambdap::RunConfig cfg;
    cfg.workers = workers;
    cfg.trace = trace;
    cfg.mode = mode == "sequential" ? lambdap::Mode::Sequential : lambdap::Mode::Parallel;

    lambdap::TraceLog log;
    try {
        lambdap::Value v = lambdap::runProgram(program, cfg, log);
        if (trace) writeTrace(log);
        std::cout << lambdap::printValue(v) << "\n";
    } catch (const lambdap::EvalError& e) {
        if (trace) writeTrace(log);
        std::cerr << "runtime error: " << e.what() << "\n";
        return kRuntime;
    }
    return kOk;
}
