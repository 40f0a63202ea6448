#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gazeplan {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownTargetError : public Error {
public:
    explicit UnknownTargetError(const std::string& id)
        : Error("unknown target '" + id + "'"), id_(id) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class RangeError : public Error {
public:
    using Error::Error;
};

/// A target of the wrong kind was supplied (e.g. moving a user).
class KindError : public Error {
public:
    using Error::Error;
};

class DegeneratePositionError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error("parse error at line " + std::to_string(line) + ", column " +
                std::to_string(column) + ": " + what),
          line_(line), column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Scenario invariant violation. `event_index` is the timeline position, or
/// npos for errors in the target list / top level.
class ValidationError : public Error {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    ValidationError(const std::string& what, std::size_t event_index = npos)
        : Error(event_index == npos ? what
                                    : "event " + std::to_string(event_index) + ": " + what),
          event_index_(event_index) {}
    std::size_t event_index() const noexcept { return event_index_; }

private:
    std::size_t event_index_;
};

/// Gaze cannot be reached with the eyes from the commanded head direction.
class ReachabilityError : public Error {
public:
    explicit ReachabilityError(double residual_deg)
        : Error("gaze unreachable within eye limits (residual " +
                std::to_string(residual_deg) + " deg)"),
          residual_deg_(residual_deg) {}
    double residual_deg() const noexcept { return residual_deg_; }

private:
    double residual_deg_;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

/// Configuration value rejected; `field()` names the offending key.
class ConfigError : public Error {
public:
    ConfigError(const std::string& field, const std::string& what)
        : Error(field + ": " + what), field_(field) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace gazeplan
