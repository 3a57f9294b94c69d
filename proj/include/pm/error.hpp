#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pm {

enum class ErrorKind {
    Parse,
    Arity,
    DuplicateLemma,
    NegativeSubgoals,
    InsufficientData,
    EmptyTrainingSet,
    DimensionMismatch,
    EmptyModel,
    UnknownSymbol,
    EmptyDataset,
    BadGranularity,
    BadK,
    DegenerateData,
    BadModel,
    Io,
    Version,
    CorruptModel,
    Invariant,
    BadArgument,
};

std::string_view to_string(ErrorKind kind);

// All recoverable failures in the toolkit are reported through this type; the
// kind is what callers (and the CLI exit-code mapping) switch on.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

    ErrorKind kind() const noexcept { return kind_; }
    // The message without the kind prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : Error(ErrorKind::Parse, std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          message_(msg), line_(line), column_(column) {}

    const std::string& message() const noexcept { return message_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string message_;
    std::size_t line_;
    std::size_t column_;
};

// Nested parse errors keep their position but gain a file prefix.
class FileParseError : public Error {
public:
    FileParseError(const std::string& file, const ParseError& inner)
        : Error(ErrorKind::Parse, file + ":" + std::to_string(inner.line()) + ":" +
                                      std::to_string(inner.column()) + ": " + inner.message()),
          file_(file) {}

    const std::string& file() const noexcept { return file_; }

private:
    std::string file_;
};

}  // namespace pm
