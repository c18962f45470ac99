#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lambdap {

enum class Rule { App, Index, Return, Perform, Traverse, Parallel };

std::string_view ruleName(Rule r);

// One fired reduction rule.
struct TraceEvent {
    Rule rule = Rule::App;
    int depth = 0;                      // handle frames enclosing the redex
    std::vector<std::int64_t> iterPath; // iteration indices of enclosing parallel regions
    std::string detail;

    bool operator==(const TraceEvent&) const = default;
};

using TraceLog = std::vector<TraceEvent>;

// Concatenates per-iteration logs in index order, prefixing each event's
// path with its iteration index.
TraceLog mergeTraces(std::vector<TraceLog> perIteration);

// `<iterPath>\t<rule>\t<depth>\t<detail>`, iterPath dot-joined or `-`.
std::string formatTraceEvent(const TraceEvent& e);

} // namespace lambdap
