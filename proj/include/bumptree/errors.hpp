#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bumptree {

/// Caller broke an operation's precondition (rotating without the required child, etc.).
class contract_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Bad argument value: n = 0, non-positive alpha, negative entropy, malformed config.
class argument_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Request exceeds a configured size cap.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed dump or profile text; the message carries the line number.
class parse_error : public std::runtime_error {
public:
    parse_error(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A WeightedTree invariant does not hold. node() names the offending node.
class validation_error : public std::runtime_error {
public:
    validation_error(std::uint32_t node, const std::string& what)
        : std::runtime_error("node " + std::to_string(node) + ": " + what), node_(node) {}

    std::uint32_t node() const noexcept { return node_; }

private:
    std::uint32_t node_;
};

} // namespace bumptree
