#include "cemax/errors.hpp"

namespace cemax {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message), line_(line), column_(column) {}

SpaceTooLarge::SpaceTooLarge(double size)
    : Error("scheduler space too large (" + std::to_string(size) + " candidates)"), size_(size) {}

}  // namespace cemax
