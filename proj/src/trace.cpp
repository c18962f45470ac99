#include "lambdap/trace.hpp"

namespace lambdap {

std::string_view ruleName(Rule r) {
    switch (r) {
    case Rule::App: return "app";
    case Rule::Index: return "index";
    case Rule::Return: return "return";
    case Rule::Perform: return "perform";
    case Rule::Traverse: return "traverse";
    case Rule::Parallel: return "parallel";
    }
    return "?";
}

TraceLog mergeTraces(std::vector<TraceLog> perIteration) {
    TraceLog out;
    for (std::size_t i = 0; i < perIteration.size(); ++i) {
        for (TraceEvent& e : perIteration[i]) {
            e.iterPath.insert(e.iterPath.begin(), static_cast<std::int64_t>(i));
            out.push_back(std::move(e));
        }
    }
    return out;
}

std::string formatTraceEvent(const TraceEvent& e) {
    std::string path;
    for (std::size_t i = 0; i < e.iterPath.size(); ++i) {
        if (i) path += '.';
        path += std::to_string(e.iterPath[i]);
    }
    if (path.empty()) path = "-";
    return path + "\t" + std::string(ruleName(e.rule)) + "\t" + std::to_string(e.depth) + "\t" + e.detail;
}

} // namespace lambdap
