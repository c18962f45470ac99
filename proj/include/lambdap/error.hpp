#pragma once

#include <stdexcept>
#include <string>

namespace lambdap {

struct SourcePos {
    int line = 0;
    int column = 0;
};

// Runtime fault raised by the machine, builtins or the parallel runtime.
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Lexing, parsing or desugaring failure. what() is "<line>:<column>: <message>".
class ParseError : public std::runtime_error {
public:
    ParseError(SourcePos pos, const std::string& message)
        : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message),
          pos_(pos), message_(message) {}

    SourcePos pos() const { return pos_; }
    const std::string& message() const { return message_; }

private:
    SourcePos pos_;
    std::string message_;
};

} // namespace lambdap
