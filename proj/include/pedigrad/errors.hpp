#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pedigrad {

// A structural invariant was violated. `invariant()` names it so callers
// (and the command line tool) can report which rule failed.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string invariant, const std::string& detail)
        : std::runtime_error(invariant + ": " + detail), invariant_(std::move(invariant)) {}

    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

// Malformed textual input. `offset()` is a 0-based byte offset into the
// text that was being parsed, `line()` is 1-based (0 when not line oriented).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset, std::size_t line = 0)
        : std::runtime_error(format(what, offset, line)), message_(what), offset_(offset), line_(line) {}

    // The description without the location prefix.
    const std::string& message() const noexcept { return message_; }
    std::size_t offset() const noexcept { return offset_; }
    std::size_t line() const noexcept { return line_; }

private:
    static std::string format(const std::string& what, std::size_t offset, std::size_t line) {
        std::string out = "parse error";
        if (line != 0) out += " at line " + std::to_string(line);
        out += " (offset " + std::to_string(offset) + "): " + what;
        return out;
    }

    std::string message_;
    std::size_t offset_;
    std::size_t line_;
};

// An enumeration would exceed its configured bound.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const char* invariant, const std::string& detail) {
    if (!ok) throw ValidationError(invariant, detail);
}

} // namespace detail
} // namespace pedigrad
