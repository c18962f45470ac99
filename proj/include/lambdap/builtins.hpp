#pragma once

#include <span>
#include <string_view>

#include "lambdap/machine.hpp"
#include "lambdap/value.hpp"

namespace lambdap {

// A host primitive. It runs once `arity` arguments have been supplied.
struct BuiltinSpec {
    std::string_view name;
    int arity;
    Step (*run)(std::span<const Value> args, EvalContext ctx);
};

const BuiltinSpec* findBuiltin(std::string_view name);
std::span<const BuiltinSpec> allBuiltins();

// The unapplied function value for a builtin.
Value builtinValue(const BuiltinSpec& spec);

// Balanced-tree reduction; the left subtree holds the first ceil(n/2)
// elements. With an associative f this equals the left fold. A combining
// function that is not a first-order builtin is run by the machine, so it
// may perform operations or loops.
Step reduce(const Value& f, const Value& table, EvalContext ctx);

// Left payload of the lowest-index Left, or Right of all unwrapped payloads.
Value firstFailure(const Value& table);

// All combinations taking one element per inner table; the last coordinate
// varies fastest.
Value cartesianProd(const Value& tables);

// Flattens a table of tables, preserving order.
Value concatTables(const Value& tables);

} // namespace lambdap
