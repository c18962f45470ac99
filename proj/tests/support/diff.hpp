#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lambdap/runtime.hpp"

namespace diff {

struct MachineOutcome {
    bool ok = false;
    std::string value;
    std::string error;
    lambdap::TraceLog trace;
};

// Compiles with the prelude and runs; parse errors are reported as failures.
MachineOutcome run(const std::string& source, const lambdap::RunConfig& cfg);

struct Discrepancy {
    std::string program;
    std::string what;
};

struct Report {
    int programs = 0;
    int evaluated = 0;  // programs that ran to a value
    std::vector<Discrepancy> issues;
};

// Random programs: parallel vs sequential (value, error and trace), and the
// environment machine vs the substitution oracle.
Report checkGeneratedCorpus(std::uint64_t seed, int count);

// runAccum (+) 0 over random int tables, loops nested up to three deep,
// against a host left fold.
Report checkAccumSums(std::uint64_t seed, int count);

} // namespace diff
