/**
 * @file error.hpp
 * @brief Exception hierarchy shared by every tunnelgate module
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace tunnelgate {

/// Base of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter violates its documented precondition (r <= 0, negative time, ...).
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// Input lies outside the function's domain (non-positive price, S outside the box).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The separation constant reaches or exceeds the barrier (lambda * K^2 >= 1):
/// there is no classically forbidden region to tunnel through.
class AboveBarrier : public Error {
public:
    using Error::Error;
};

class ToleranceNotMet : public Error {
public:
    using Error::Error;
};

class StepFailure : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

/// Malformed or invalid market data. `line()` is 1-based; 0 when not tied to a line.
class DataError : public Error {
public:
    DataError(std::string message, std::size_t line, std::string source = {})
        : Error(compose(message, line, source)), message_(std::move(message)), line_(line),
          source_(std::move(source)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& message() const noexcept { return message_; }
    const std::string& source() const noexcept { return source_; }

private:
    static std::string compose(const std::string& message, std::size_t line, const std::string& source) {
        std::string out = source.empty() ? "" : source + ": ";
        if (line) out += "line " + std::to_string(line) + ": ";
        return out + message;
    }

    std::string message_;
    std::size_t line_;
    std::string source_;
};

} // namespace tunnelgate
