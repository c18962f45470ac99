#pragma once

#include <string_view>

#include "lambdap/surface.hpp"
#include "lambdap/syntax.hpp"

namespace lambdap {

std::string_view preludeSource();

// Parsed once on first use.
const SurfaceProgram& preludeProgram();

/// Parses, links against the prelude when asked, desugars and resolves.
/// Throws ParseError.
ExprPtr compile(std::string_view source, bool withPrelude = true);

} // namespace lambdap
