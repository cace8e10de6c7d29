#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cemax {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class SemanticError : public Error {
public:
    using Error::Error;
};

class PreconditionViolated : public Error {
public:
    using Error::Error;
};

class PositiveEcPresent : public PreconditionViolated {
public:
    using PreconditionViolated::PreconditionViolated;
};

class SchedulerIncomplete : public Error {
public:
    using Error::Error;
};

class Singular : public Error {
public:
    using Error::Error;
};

class NotAcyclic : public Error {
public:
    using Error::Error;
};

class SpaceTooLarge : public Error {
public:
    explicit SpaceTooLarge(double size);
    double size() const { return size_; }

private:
    double size_;
};

/// Broken internal invariant; never expected on valid input.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace cemax
