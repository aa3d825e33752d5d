#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace monwalk {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration or precondition violation.
class ConfigError : public Error {
public:
    ConfigError(const std::string& field, const std::string& what)
        : Error(field + ": " + what), field_(field) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Eigensolver failure or a result that violates a numerical invariant.
class NumericalError : public Error {
public:
    using Error::Error;
};

// A horizon-limited search that did not reach its goal.
class HorizonError : public Error {
public:
    using Error::Error;
};

using WarningHandler = std::function<void(const std::string&)>;

// Replaces the sink for soft warnings (default: std::clog). Returns the previous one.
WarningHandler set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace monwalk
