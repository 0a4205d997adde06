#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pdvec {

/// Base class for every failure raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (diagram CSV, OFF, index, matrix, labels).
class parse_error : public error {
public:
    parse_error(const std::string& what, std::size_t line)
        : error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
    explicit parse_error(const std::string& what) : parse_error(what, 0) {}

    /// 1-based line number, 0 when unknown.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Geometry for which the mesh frame is undefined (zero spread, vanishing axis).
class geometry_error : public error {
public:
    using error::error;
};

/// A coefficient left the range of double precision.
class overflow_error : public error {
public:
    overflow_error(const std::string& what, std::size_t index) : error(what), index_(index) {}

    /// 1-based index of the first non-finite coefficient.
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

}  // namespace pdvec
