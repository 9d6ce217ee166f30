#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace orbit {

/// Malformed or inconsistent input: dimension mismatch, dependent basis,
/// violated precondition. Maps to CLI exit code 1.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative method ran out of budget. Carries the best certified
/// bracket it reached. Maps to CLI exit code 3.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double lower, double upper)
        : std::runtime_error(what), lower_(lower), upper_(upper) {}

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }

private:
    double lower_;
    double upper_;
};

/// The computation is well posed but cannot be carried out constructively
/// with the data at hand (e.g. an inner radius indistinguishable from 0).
/// Maps to CLI exit code 2.
class RefusalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An epsilon-net would exceed the configured point cap.
class CapacityError : public std::runtime_error {
public:
    CapacityError(const std::string& what, std::size_t required)
        : std::runtime_error(what), required_(required) {}

    std::size_t required() const noexcept { return required_; }

private:
    std::size_t required_;
};

}  // namespace orbit
