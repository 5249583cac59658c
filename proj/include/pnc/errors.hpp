#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pnc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An identifier that does not name a place or transition of the net.
class UnknownIdError : public Error {
public:
    using Error::Error;
};

/// Firing attempted at a marking that does not cover the precondition.
class NotEnabledError : public Error {
public:
    NotEnabledError(const std::string& transition, const std::string& place)
        : Error("transition '" + transition + "' is not enabled: place '" + place +
                "' lacks tokens"),
          transition_(transition), place_(place)
    {
    }
    const std::string& transition() const { return transition_; }
    const std::string& blocking_place() const { return place_; }

private:
    std::string transition_;
    std::string place_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column), message_(what)
    {
    }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    /// The description without the position prefix.
    const std::string& message() const { return message_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

/// Enumeration asked for a variable with no finite bound and no fallback bound.
class UnboundedError : public Error {
public:
    using Error::Error;
};

/// A reachability exploration stopped on a limit before closure.
class ExplorationLimitError : public Error {
public:
    using Error::Error;
};

/// A check could not be decided within the supplied limits.
class InconclusiveError : public Error {
public:
    using Error::Error;
};

}  // namespace pnc
