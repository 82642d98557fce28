#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evcharge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A data row of a delimited input could not be accepted.
class MalformedRow : public Error {
public:
    MalformedRow(std::size_t line, std::string reason)
        : Error("line " + std::to_string(line) + ": " + reason),
          line_(line), reason_(std::move(reason)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t line_;
    std::string reason_;
};

class MissingColumn : public Error {
public:
    explicit MissingColumn(std::string name)
        : Error("missing column '" + name + "'"), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class DuplicateEntry : public Error {
public:
    DuplicateEntry(std::size_t line, std::string date, int hour)
        : Error("line " + std::to_string(line) + ": duplicate price for " + date +
                " hour " + std::to_string(hour)),
          date_(std::move(date)), hour_(hour) {}

    const std::string& date() const noexcept { return date_; }
    int hour() const noexcept { return hour_; }

private:
    std::string date_;
    int hour_;
};

/// Raised when the LP solver cannot certify its answer at the requested tolerance.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

}  // namespace evcharge
