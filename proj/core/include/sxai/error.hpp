#pragma once

#include <stdexcept>
#include <string>

namespace sxai {

// Input and contract failures that a user can fix (bad file, bad flag, bad schema).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// CSV/schema problems. Line is 1-based; 0 means "not tied to a line".
class SchemaError : public InputError {
public:
    SchemaError(const std::string& what, std::size_t line = 0)
        : InputError(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Numerical failures inside the library (singular systems, overflow).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularSystemError : public NumericError {
public:
    using NumericError::NumericError;
};

// Non-finite activation in a forward or backward pass; step is the 0-based time index.
class OverflowError : public NumericError {
public:
    OverflowError(const std::string& what, std::size_t step)
        : NumericError(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace sxai
