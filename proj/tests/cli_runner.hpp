#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "helpers.hpp"

namespace testing {

struct CliResult {
    int exitCode = -1;
    std::string out;
    std::string err;
};

// Runs the lambdap binary with the given (shell-quoted) arguments.
inline CliResult runCli(const std::string& args) {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path() /
               ("lambdap_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(dir);
    std::string outPath = (dir / "out").string(), errPath = (dir / "err").string();
    std::string cmd = std::string("'") + LAMBDAP_BIN + "' " + args + " >'" + outPath + "' 2>'" + errPath + "'";
    int status = std::system(cmd.c_str());
    CliResult r;
    r.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = readFile(outPath);
    r.err = readFile(errPath);
    std::filesystem::remove_all(dir);
    return r;
}

inline std::string programPath(const std::string& name) { return std::string(LAMBDAP_PROGRAMS_DIR) + "/" + name; }

inline std::vector<std::string> examplePrograms() {
    std::vector<std::string> names;
    for (const auto& entry : std::filesystem::directory_iterator(LAMBDAP_PROGRAMS_DIR))
        if (entry.path().extension() == ".lp") names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

} // namespace testing
