#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace agec {

// Malformed input data (M2 files, parallel files, tag lines, JSON configs).
// Carries a 1-based line number when one is known (0 = not applicable).
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// A caller violated a documented precondition or invariant.
class contract_error : public std::logic_error {
public:
    explicit contract_error(const std::string& what) : std::logic_error(what) {}
};

// Transport or protocol failure talking to a correction provider. Keeps the
// raw response text so callers can inspect what the model actually said.
class provider_error : public std::runtime_error {
public:
    explicit provider_error(const std::string& what, std::string raw = {})
        : std::runtime_error(what), raw_(std::move(raw)) {}

    const std::string& raw_response() const { return raw_; }

private:
    std::string raw_;
};

}  // namespace agec
