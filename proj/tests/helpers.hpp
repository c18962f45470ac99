#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "lambdap/error.hpp"
#include "lambdap/pipeline.hpp"
#include "lambdap/runtime.hpp"
#include "lambdap/value.hpp"

namespace testing {

inline lambdap::RunConfig parallelConfig(int workers = 4, bool trace = false) {
    return {workers, trace, lambdap::Mode::Parallel};
}

inline std::string run(const std::string& src, lambdap::RunConfig cfg = parallelConfig(), bool prelude = true) {
    return lambdap::printValue(lambdap::runProgram(lambdap::compile(src, prelude), cfg).value);
}

inline lambdap::RunResult runTraced(const std::string& src, int workers = 4) {
    return lambdap::runProgram(lambdap::compile(src), parallelConfig(workers, true));
}

// Message of the EvalError raised by running src; empty if it succeeds.
inline std::string runError(const std::string& src, lambdap::RunConfig cfg = parallelConfig()) {
    try {
        run(src, cfg);
    } catch (const lambdap::EvalError& e) {
        return e.what();
    }
    return "";
}

inline std::string parseError(const std::string& src, bool prelude = true) {
    try {
        lambdap::compile(src, prelude);
    } catch (const lambdap::ParseError& e) {
        return e.what();
    }
    return "";
}

inline std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline std::string program(const std::string& name) { return readFile(std::string(LAMBDAP_PROGRAMS_DIR) + "/" + name); }

} // namespace testing
