#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace curvegan {

// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class UnboundInputError : public Error {
public:
    using Error::Error;
};

class GradientError : public Error {
public:
    using Error::Error;
};

// Raised when a rational Bezier denominator collapses below the degeneracy threshold.
class DegenerateCurveError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::string file, std::size_t line, const std::string& what)
        : Error(file + ":" + std::to_string(line) + ": " + what), file_(std::move(file)), line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

class CheckpointError : public Error {
public:
    using Error::Error;
};

class TrainingError : public Error {
public:
    TrainingError(std::size_t step, const std::string& what)
        : Error("step " + std::to_string(step) + ": " + what), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

} // namespace curvegan
