#pragma once

#include <stdexcept>
#include <string>

namespace dca {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates a documented precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Malformed CSV input. `line` is 1-based within the source; `column` may be
/// empty when the problem is not tied to a single field.
class ParseError : public InvalidArgument {
public:
    ParseError(std::size_t line, std::string column, const std::string& what)
        : InvalidArgument(format(line, column, what)), line_(line), column_(std::move(column)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& column() const noexcept { return column_; }

private:
    static std::string format(std::size_t line, const std::string& column, const std::string& what) {
        std::string msg = "line " + std::to_string(line);
        if (!column.empty()) msg += ", column '" + column + "'";
        return msg + ": " + what;
    }

    std::size_t line_;
    std::string column_;
};

} // namespace dca
