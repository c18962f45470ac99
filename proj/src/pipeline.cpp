#include "lambdap/pipeline.hpp"

#include "lambdap/parser.hpp"

namespace lambdap {

const SurfaceProgram& preludeProgram() {
    static const SurfaceProgram prelude = parse(preludeSource());
    return prelude;
}

ExprPtr compile(std::string_view source, bool withPrelude) {
    SurfaceProgram program = parse(source);
    if (withPrelude) program = link(preludeProgram(), program);
    return desugar(program);
}

} // namespace lambdap
