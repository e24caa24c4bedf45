#pragma once

#include <stdexcept>
#include <string>

namespace uavtrack {

/// Malformed input file. Carries the offending path and 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string file, int line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
          file_(std::move(file)),
          line_(line) {}

    const std::string& file() const noexcept { return file_; }
    int line() const noexcept { return line_; }

private:
    std::string file_;
    int line_;
};

/// Input admits no valid model fit (e.g. all RANSAC sample points collinear).
/// Callers typically fall back to an identity transform.
class DegenerateInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace uavtrack
