#pragma once

#include <string_view>

#include "lambdap/surface.hpp"
#include "lambdap/syntax.hpp"

namespace lambdap {

/// Parses a source file: `name = expr` definitions followed by one trailing
/// expression. A token in column 1 that cannot continue the previous item
/// starts a new definition or the trailing expression. Throws ParseError.
SurfaceProgram parse(std::string_view source);

/// Parses a single expression (no definitions). Throws ParseError.
SExprPtr parseExpression(std::string_view source);

/// Prepends `prelude`'s definitions to `program`'s. The result's main is
/// the program's trailing expression, or its `main` definition.
SurfaceProgram link(const SurfaceProgram& prelude, const SurfaceProgram& program);

/// Removes all surface sugar and resolves variables, producing a closed
/// core expression. Definitions become nested let-bindings around main.
/// Throws ParseError for unbound variables, a missing result expression
/// and malformed handlers.
ExprPtr desugar(const SurfaceProgram& program);

/// Desugars and resolves a single closed expression.
ExprPtr desugarExpression(const SurfaceExpr& e);

} // namespace lambdap
