#pragma once

#include <stdexcept>
#include <string>

namespace spinsc {

// Every error raised by the library carries the module it came from so the
// runner can report "module: message" and pick an exit code.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& what)
        : std::runtime_error(module + ": " + what), module_(std::move(module)) {}
    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

// Input outside the domain of a formula (e.g. overdrive i <= 1).
class DomainError : public Error {
public:
    using Error::Error;
};

// Bad configuration or malformed input file. Maps to exit code 1.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Numerical failure detected at run time (instability, cap exceeded, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace spinsc
